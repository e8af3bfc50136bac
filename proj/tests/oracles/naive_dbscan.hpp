#pragma once

// Reference DBSCAN: full distance matrix, union-find over core points, then
// border points attached to the adjacent component holding the smallest
// core index. Returns the partition as a set of sets; every noise point is
// its own singleton class.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

struct Pt {
    double x, y;
};

using Partition = std::set<std::set<std::size_t>>;

inline Partition naive_dbscan(const std::vector<Pt>& p, double eps, std::size_t min_samples) {
    const std::size_t n = p.size();
    std::vector<std::vector<bool>> near(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
            near[i][j] = dx * dx + dy * dy <= eps * eps;
        }
    std::vector<bool> core(n);
    for (std::size_t i = 0; i < n; ++i)
        core[i] = static_cast<std::size_t>(std::count(near[i].begin(), near[i].end(), true)) >= min_samples;

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (core[i] && core[j] && near[i][j]) {
                const auto a = find(i), b = find(j);
                parent[std::max(a, b)] = std::min(a, b);
            }

    // Component id = its smallest core index (root after min-linking).
    std::vector<long> label(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        if (core[i]) label[i] = static_cast<long>(find(i));
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) continue;
        long best = -1;
        for (std::size_t j = 0; j < n; ++j)
            if (core[j] && near[i][j] && (best < 0 || static_cast<long>(find(j)) < best)) best = static_cast<long>(find(j));
        label[i] = best;
    }

    std::vector<std::set<std::size_t>> groups(n);
    Partition out;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] < 0)
            out.insert({i});
        else
            groups[static_cast<std::size_t>(label[i])].insert(i);
    }
    for (auto& g : groups)
        if (!g.empty()) out.insert(g);
    return out;
}

} // namespace oracle
