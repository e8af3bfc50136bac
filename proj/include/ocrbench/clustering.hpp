#pragma once

// Grouping word boxes to isolate the ingredient region. Four
// strategies: raw length filter, y-line grouping, DBSCAN keeping the largest
// cluster, and DBSCAN keeping the cluster with the best vocabulary overlap.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/ingest.hpp"
#include "ocrbench/metrics.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

struct ClusterConfig {
    double eps_multiplier = 1.5;
    std::size_t min_samples = 3;
    double line_y_tolerance_multiplier = 0.5;

    void validate() const {
        if (!(eps_multiplier > 0)) throw ConfigError("eps_multiplier must be positive");
        if (min_samples < 1) throw ConfigError("min_samples must be at least 1");
        if (!(line_y_tolerance_multiplier > 0)) throw ConfigError("line_y_tolerance_multiplier must be positive");
    }
};

inline constexpr int kNoise = -1;

struct Cluster {
    std::vector<std::size_t> member_indices; ///< ascending
    int label = kNoise;

    friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Canonical ingredient vocabulary for one language.
class VocabularySet {
public:
    VocabularySet() = default;

    VocabularySet(std::string language, const std::vector<std::string>& raw_entries) : language_(std::move(language)) {
        for (const auto& e : raw_entries) {
            if (unicode::trim(e).empty()) continue;
            auto name = canonicalize(e);
            if (entries_.insert(name).second) {
                auto u = unicode::to_u32(name.value());
                for (auto& t : unicode::split_whitespace(std::u32string_view(u)))
                    if (tokens_.insert(t).second) tokens_by_length_[t.size()].push_back(t);
                by_length_[u.size()].push_back(std::move(u));
            }
        }
    }

    /// One entry per line, '#' starts a comment line. The language tag is the
    /// file stem (e.g. vocab/en.txt -> "en").
    static VocabularySet load(const std::filesystem::path& path) {
        std::vector<std::string> lines;
        std::istringstream in(detail::read_file(path));
        for (std::string line; std::getline(in, line);) {
            const auto t = unicode::trim(line);
            if (t.empty() || t.front() == '#') continue;
            lines.push_back(t);
        }
        return VocabularySet(path.stem().string(), lines);
    }

    /// All *.txt files of a directory, sorted by language tag.
    static std::vector<VocabularySet> load_directory(const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) throw IoError("vocabulary directory not found: " + dir.string());
        std::vector<std::filesystem::path> files;
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        std::vector<VocabularySet> out;
        for (const auto& f : files) out.push_back(load(f));
        return out;
    }

    const std::string& language() const noexcept { return language_; }
    const std::set<CanonicalName>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    bool contains(const CanonicalName& name) const { return entries_.count(name) > 0; }

    /// True when some entry lies within max_dist edits of `name`.
    bool fuzzy_contains(std::u32string_view name, std::size_t max_dist) const {
        const std::size_t lo = name.size() > max_dist ? name.size() - max_dist : 0;
        for (auto it = by_length_.lower_bound(lo); it != by_length_.end() && it->first <= name.size() + max_dist;
             ++it)
            for (const auto& e : it->second)
                if (levenshtein(name, e) <= max_dist) return true;
        return false;
    }

    bool fuzzy_contains(const CanonicalName& name, std::size_t max_dist) const {
        return fuzzy_contains(std::u32string_view(unicode::to_u32(name.value())), max_dist);
    }

    /// True when `token` lies within min(max_dist, |token| / 3) edits of a
    /// whitespace token of some entry. The length cap keeps short words such
    /// as "per" from matching half the vocabulary.
    bool fuzzy_contains_token(std::u32string_view token, std::size_t max_dist) const {
        if (token.empty()) return false;
        const std::size_t bound = std::min(max_dist, token.size() / 3);
        if (bound == 0) return tokens_.count(std::u32string(token)) > 0;
        const std::size_t lo = token.size() > bound ? token.size() - bound : 0;
        for (auto it = tokens_by_length_.lower_bound(lo);
             it != tokens_by_length_.end() && it->first <= token.size() + bound; ++it)
            for (const auto& e : it->second)
                if (levenshtein(token, e) <= bound) return true;
        return false;
    }

private:
    std::string language_;
    std::set<CanonicalName> entries_;
    std::map<std::size_t, std::vector<std::u32string>> by_length_;
    std::set<std::u32string> tokens_;
    std::map<std::size_t, std::vector<std::u32string>> tokens_by_length_;
};

namespace detail {

/// Canonical word text without leading or trailing punctuation.
inline std::u32string vote_token(std::string_view word) {
    auto t = unicode::to_u32(canonicalize(word).value());
    auto is_punct = [](char32_t c) {
        return c == U',' || c == U';' || c == U'.' || c == U':' || c == U'、' || c == U'،' || c == U'·' ||
               c == U'(' || c == U')' || c == U'：';
    };
    std::size_t b = 0, e = t.size();
    while (b < e && is_punct(t[b])) ++b;
    while (e > b && is_punct(t[e - 1])) --e;
    return t.substr(b, e - b);
}

} // namespace detail

// ---------------------------------------------------------------------------
// DBSCAN

/// Per-point labels: cluster ids 0.. in discovery order, or kNoise.
/// Core points have >= min_samples points (self included) within eps
/// (Euclidean, inclusive). Points are visited in index order, so a border
/// point reachable from several clusters joins the one discovered first.
inline std::vector<int> dbscan_labels(std::span<const Point> points, double eps, std::size_t min_samples) {
    if (!(eps > 0)) throw ConfigError("dbscan eps must be positive");
    constexpr int kUnvisited = -2;
    const std::size_t n = points.size();
    const double eps2 = eps * eps;

    auto region = [&](std::size_t i) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = points[i].x - points[j].x;
            const double dy = points[i].y - points[j].y;
            if (dx * dx + dy * dy <= eps2) out.push_back(j);
        }
        return out;
    };

    std::vector<int> labels(n, kUnvisited);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        auto neighbors = region(i);
        if (neighbors.size() < min_samples) {
            labels[i] = kNoise;
            continue;
        }
        const int c = next_label++;
        labels[i] = c;
        std::deque<std::size_t> queue(neighbors.begin(), neighbors.end());
        while (!queue.empty()) {
            const std::size_t j = queue.front();
            queue.pop_front();
            if (labels[j] == kNoise) labels[j] = c;
            if (labels[j] != kUnvisited) continue;
            labels[j] = c;
            auto nj = region(j);
            if (nj.size() >= min_samples) queue.insert(queue.end(), nj.begin(), nj.end());
        }
    }
    return labels;
}

/// Clusters in discovery order, followed by one kNoise entry when any point
/// is noise.
inline std::vector<Cluster> dbscan(std::span<const Point> points, double eps, std::size_t min_samples) {
    const auto labels = dbscan_labels(points, eps, min_samples);
    const int n_clusters = labels.empty() ? 0 : std::max(-1, *std::max_element(labels.begin(), labels.end())) + 1;
    std::vector<Cluster> out(static_cast<std::size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) out[static_cast<std::size_t>(c)].label = c;
    Cluster noise;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise)
            noise.member_indices.push_back(i);
        else
            out[static_cast<std::size_t>(labels[i])].member_indices.push_back(i);
    }
    if (!noise.member_indices.empty()) out.push_back(std::move(noise));
    return out;
}

// ---------------------------------------------------------------------------
// Geometry helpers

/// Median word height; the mean of the two central values for even counts.
inline double median_height(std::span<const WordBox> words) {
    if (words.empty()) throw ValidationError("median height of an empty word list");
    std::vector<double> h;
    h.reserve(words.size());
    for (const auto& w : words) h.push_back(w.bbox().height);
    std::sort(h.begin(), h.end());
    const std::size_t m = h.size() / 2;
    return h.size() % 2 ? h[m] : (h[m - 1] + h[m]) / 2;
}

inline double median_height(const OcrDocument& doc) { return median_height(std::span<const WordBox>(doc.words)); }

/// Single-linkage grouping on centroid y: consecutive words (sorted by y)
/// closer than `tolerance` share a row. Rows come out in y order, words in a
/// row by centroid x then original index.
inline std::vector<std::vector<std::size_t>> group_rows(std::span<const WordBox> words, double tolerance) {
    std::vector<std::size_t> order(words.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return words[a].center().y < words[b].center().y; });

    std::vector<std::vector<std::size_t>> rows;
    double previous_y = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double y = words[order[k]].center().y;
        if (k == 0 || y - previous_y > tolerance) rows.emplace_back();
        rows.back().push_back(order[k]);
        previous_y = y;
    }
    for (auto& row : rows)
        std::stable_sort(row.begin(), row.end(), [&](std::size_t a, std::size_t b) {
            const double xa = words[a].center().x, xb = words[b].center().x;
            return xa != xb ? xa < xb : a < b;
        });
    return rows;
}

// ---------------------------------------------------------------------------
// Strategies

/// (a) Every word of at least two code points.
inline std::vector<WordBox> strategy_raw(const OcrDocument& doc) {
    std::vector<WordBox> out;
    for (const auto& w : doc.words)
        if (unicode::code_point_count(w.text()) >= 2) out.push_back(w);
    return out;
}

/// (b) Words grouped into lines by centroid y.
inline std::vector<std::vector<WordBox>> strategy_line_based(const OcrDocument& doc, const ClusterConfig& cfg = {}) {
    cfg.validate();
    std::vector<std::vector<WordBox>> lines;
    if (doc.words.empty()) return lines;
    const double tol = cfg.line_y_tolerance_multiplier * median_height(doc);
    for (const auto& row : group_rows(doc.words, tol)) {
        auto& line = lines.emplace_back();
        for (auto i : row) line.push_back(doc.words[i]);
    }
    return lines;
}

namespace detail {

inline std::vector<Cluster> cluster_words(const OcrDocument& doc, const ClusterConfig& cfg) {
    std::vector<Point> centers;
    centers.reserve(doc.words.size());
    for (const auto& w : doc.words) centers.push_back(w.center());
    auto clusters = dbscan(centers, cfg.eps_multiplier * median_height(doc), cfg.min_samples);
    std::erase_if(clusters, [](const Cluster& c) { return c.label == kNoise; });
    return clusters;
}

/// Position of the topmost-then-leftmost word, used as the final tie-break.
inline std::pair<double, double> top_left(const OcrDocument& doc, const Cluster& c) {
    std::pair<double, double> best{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (auto i : c.member_indices) best = std::min(best, {doc.words[i].bbox().y, doc.words[i].bbox().x});
    return best;
}

inline std::vector<WordBox> members(const OcrDocument& doc, const Cluster& c) {
    std::vector<WordBox> out;
    for (auto i : c.member_indices) out.push_back(doc.words[i]);
    return out;
}

} // namespace detail

/// (c) DBSCAN on centroids with eps = eps_multiplier * median height; the
/// largest cluster wins (ties: topmost-then-leftmost word). Returns every
/// word when all points are noise.
inline std::vector<WordBox> strategy_dbscan_flat(const OcrDocument& doc, const ClusterConfig& cfg = {}) {
    cfg.validate();
    if (doc.words.empty()) return {};
    const auto clusters = detail::cluster_words(doc, cfg);
    if (clusters.empty()) return doc.words;

    const Cluster* best = &clusters.front();
    for (const auto& c : clusters) {
        if (c.member_indices.size() > best->member_indices.size() ||
            (c.member_indices.size() == best->member_indices.size() &&
             detail::top_left(doc, c) < detail::top_left(doc, *best)))
            best = &c;
    }
    return detail::members(doc, *best);
}

/// Vocabulary score of a cluster as a fraction hits/size: the best, over all
/// vocabularies, count of member words whose punctuation-stripped canonical
/// text fuzzily matches a token of some entry.
struct VoteScore {
    std::size_t hits = 0;
    std::size_t size = 0;

    double value() const noexcept { return size ? static_cast<double>(hits) / static_cast<double>(size) : 0.0; }

    /// Exact rational comparison.
    friend bool operator<(const VoteScore& a, const VoteScore& b) noexcept { return a.hits * b.size < b.hits * a.size; }
    friend bool operator==(const VoteScore& a, const VoteScore& b) noexcept {
        return a.hits * b.size == b.hits * a.size;
    }
};

inline VoteScore vote_score(const OcrDocument& doc, const Cluster& c, std::span<const VocabularySet> vocabs,
                            std::size_t max_dist = 2) {
    std::vector<std::u32string> names;
    names.reserve(c.member_indices.size());
    for (auto i : c.member_indices) names.push_back(detail::vote_token(doc.words[i].text()));
    VoteScore best{0, c.member_indices.size()};
    for (const auto& v : vocabs) {
        std::size_t hits = 0;
        for (const auto& n : names)
            if (v.fuzzy_contains_token(n, max_dist)) ++hits;
        best.hits = std::max(best.hits, hits);
    }
    return best;
}

/// (d) DBSCAN as in (c), then the cluster with the highest vocabulary score
/// wins (ties: larger cluster, then topmost-then-leftmost word).
inline std::vector<WordBox> strategy_dbscan_voting(const OcrDocument& doc, const ClusterConfig& cfg,
                                                   std::span<const VocabularySet> vocabs, std::size_t max_dist = 2) {
    cfg.validate();
    if (vocabs.empty()) throw ConfigError("voting needs at least one vocabulary");
    if (doc.words.empty()) return {};
    const auto clusters = detail::cluster_words(doc, cfg);
    if (clusters.empty()) return doc.words;
    if (clusters.size() == 1) return detail::members(doc, clusters.front());

    std::size_t best = 0;
    VoteScore best_score = vote_score(doc, clusters[0], vocabs, max_dist);
    for (std::size_t k = 1; k < clusters.size(); ++k) {
        const auto score = vote_score(doc, clusters[k], vocabs, max_dist);
        const auto& c = clusters[k];
        const auto& b = clusters[best];
        bool better = best_score < score;
        if (!better && score == best_score) {
            better = c.member_indices.size() > b.member_indices.size() ||
                     (c.member_indices.size() == b.member_indices.size() &&
                      detail::top_left(doc, c) < detail::top_left(doc, b));
        }
        if (better) {
            best = k;
            best_score = score;
        }
    }
    return detail::members(doc, clusters[best]);
}

} // namespace ocrbench
