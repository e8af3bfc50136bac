#pragma once

// Maximum bipartite matching size by exhaustive search over assignments of
// the smaller side. Intended for |D|, |G| <= 8.

#include <cstddef>
#include <vector>

namespace oracle {

inline std::size_t max_matching(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    const std::size_t m = n ? adj[0].size() : 0;
    std::vector<bool> used(m);
    std::size_t best = 0;
    auto go = [&](auto&& self, std::size_t i, std::size_t matched) -> void {
        if (matched + (n - i) <= best) return;
        if (i == n) {
            best = matched;
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (!adj[i][j] || used[j]) continue;
            used[j] = true;
            self(self, i + 1, matched + 1);
            used[j] = false;
        }
        self(self, i + 1, matched);
    };
    go(go, 0, 0);
    return best;
}

} // namespace oracle
