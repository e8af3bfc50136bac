#pragma once

// Matching detected ingredient names against ground truth, and the scores
// computed from the matches.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/random.hpp"
#include "ocrbench/unicode.hpp"

namespace ocrbench {

// ---------------------------------------------------------------------------
// Edit distance

/// Unit-cost Levenshtein distance over code points, two-row DP.
inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = a[i - 1] == b[j - 1] ? diagonal : 1 + std::min({diagonal, above, row[j - 1]});
            diagonal = above;
        }
    }
    return row[b.size()];
}

inline std::size_t levenshtein(const CanonicalName& a, const CanonicalName& b) {
    return levenshtein(unicode::to_u32(a.value()), unicode::to_u32(b.value()));
}

/// True when levenshtein(a, b) <= max_dist; skips the DP when the length
/// difference alone exceeds the bound.
inline bool within_distance(std::u32string_view a, std::u32string_view b, std::size_t max_dist) {
    const std::size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    if (diff > max_dist) return false;
    return levenshtein(a, b) <= max_dist;
}

// ---------------------------------------------------------------------------
// Matching

struct MatchPair {
    std::size_t detected = 0;
    std::size_t truth = 0;
    std::size_t distance = 0;

    friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// One-to-one assignment between detected names (D) and truth names (G).
/// TP = pairs.size(); unmatched_detected are the false positives and
/// unmatched_truth the false negatives.
struct MatchResult {
    std::vector<MatchPair> pairs;
    std::vector<std::size_t> unmatched_detected;
    std::vector<std::size_t> unmatched_truth;

    std::size_t true_positives() const noexcept { return pairs.size(); }
};

namespace detail {

inline MatchResult finish_match(std::vector<MatchPair> pairs, std::size_t n_detected, std::size_t n_truth) {
    MatchResult r;
    std::vector<bool> used_d(n_detected), used_g(n_truth);
    for (const auto& p : pairs) used_d[p.detected] = used_g[p.truth] = true;
    for (std::size_t i = 0; i < n_detected; ++i)
        if (!used_d[i]) r.unmatched_detected.push_back(i);
    for (std::size_t i = 0; i < n_truth; ++i)
        if (!used_g[i]) r.unmatched_truth.push_back(i);
    r.pairs = std::move(pairs);
    return r;
}

} // namespace detail

/// Each detected name, in order, takes the first unmatched equal truth name.
inline MatchResult match_exact(const std::vector<CanonicalName>& detected, const std::vector<CanonicalName>& truth) {
    std::vector<bool> taken(truth.size());
    std::vector<MatchPair> pairs;
    for (std::size_t d = 0; d < detected.size(); ++d) {
        for (std::size_t g = 0; g < truth.size(); ++g) {
            if (!taken[g] && detected[d] == truth[g]) {
                taken[g] = true;
                pairs.push_back({d, g, 0});
                break;
            }
        }
    }
    return detail::finish_match(std::move(pairs), detected.size(), truth.size());
}

/// Every (d, g) pair within max_dist is a candidate edge; edges are accepted
/// greedily in (distance, detected index, truth index) order.
inline MatchResult match_fuzzy(const std::vector<CanonicalName>& detected, const std::vector<CanonicalName>& truth,
                               std::size_t max_dist = 2) {
    std::vector<std::u32string> d32, g32;
    for (const auto& n : detected) d32.push_back(unicode::to_u32(n.value()));
    for (const auto& n : truth) g32.push_back(unicode::to_u32(n.value()));

    std::vector<MatchPair> edges;
    for (std::size_t d = 0; d < d32.size(); ++d) {
        for (std::size_t g = 0; g < g32.size(); ++g) {
            const std::size_t diff = d32[d].size() > g32[g].size() ? d32[d].size() - g32[g].size()
                                                                   : g32[g].size() - d32[d].size();
            if (diff > max_dist) continue;
            const auto dist = levenshtein(d32[d], g32[g]);
            if (dist <= max_dist) edges.push_back({d, g, dist});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const MatchPair& a, const MatchPair& b) {
        return std::tie(a.distance, a.detected, a.truth) < std::tie(b.distance, b.detected, b.truth);
    });

    std::vector<bool> used_d(detected.size()), used_g(truth.size());
    std::vector<MatchPair> pairs;
    for (const auto& e : edges) {
        if (used_d[e.detected] || used_g[e.truth]) continue;
        used_d[e.detected] = used_g[e.truth] = true;
        pairs.push_back(e);
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const MatchPair& a, const MatchPair& b) { return a.detected < b.detected; });
    return detail::finish_match(std::move(pairs), detected.size(), truth.size());
}

// ---------------------------------------------------------------------------
// Per-sample scores

inline constexpr double kCatastrophicF1 = 0.05;

struct Prf {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// P = TP/|D| (0 when |D| = 0), R = TP/|G|, F1 = 2PR/(P+R) (0 when P+R = 0).
inline Prf precision_recall_f1(std::size_t true_positives, std::size_t n_detected, std::size_t n_truth) {
    if (n_truth == 0) throw ExcludedSampleError("sample has no ground-truth names");
    if (true_positives > n_detected || true_positives > n_truth)
        throw ValidationError("true positives exceed detected or truth count");
    Prf s;
    s.precision = n_detected == 0 ? 0.0 : static_cast<double>(true_positives) / static_cast<double>(n_detected);
    s.recall = static_cast<double>(true_positives) / static_cast<double>(n_truth);
    s.f1 = s.precision + s.recall == 0 ? 0.0 : 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

struct SampleMetrics {
    std::string image_id;
    std::string language;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double fuzzy_f1 = 0;
    bool is_catastrophic = false;
    std::size_t true_positives = 0;
    std::size_t n_detected = 0;
    std::size_t n_truth = 0;
};

/// Exact-match scores for one sample; fuzzy_f1 mirrors f1 until a fuzzy match
/// is supplied through the four-argument overload.
inline SampleMetrics sample_metrics(const MatchResult& match, std::size_t n_detected, std::size_t n_truth) {
    const auto s = precision_recall_f1(match.true_positives(), n_detected, n_truth);
    SampleMetrics m;
    m.precision = s.precision;
    m.recall = s.recall;
    m.f1 = s.f1;
    m.fuzzy_f1 = s.f1;
    m.is_catastrophic = s.f1 < kCatastrophicF1;
    m.true_positives = match.true_positives();
    m.n_detected = n_detected;
    m.n_truth = n_truth;
    return m;
}

inline SampleMetrics sample_metrics(const MatchResult& exact, const MatchResult& fuzzy, std::size_t n_detected,
                                    std::size_t n_truth) {
    auto m = sample_metrics(exact, n_detected, n_truth);
    m.fuzzy_f1 = precision_recall_f1(fuzzy.true_positives(), n_detected, n_truth).f1;
    return m;
}

/// Runs both matchers and fills every field.
inline SampleMetrics score_sample(const std::vector<CanonicalName>& detected, const std::vector<CanonicalName>& truth,
                                  std::string image_id, std::string language, std::size_t max_dist = 2) {
    auto m = sample_metrics(match_exact(detected, truth), match_fuzzy(detected, truth, max_dist), detected.size(),
                            truth.size());
    m.image_id = std::move(image_id);
    m.language = std::move(language);
    return m;
}

// ---------------------------------------------------------------------------
// Aggregation

struct LanguageStats {
    std::size_t n = 0;
    double f1 = 0;
    double fuzzy_f1 = 0;
};

/// Unweighted (macro) means over samples.
struct AggregateStats {
    std::size_t n = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
    double fuzzy_f1 = 0;
    std::size_t catastrophic = 0;
    double catastrophic_rate = 0; ///< percent
    std::map<std::string, LanguageStats> per_language;
};

inline AggregateStats aggregate(const std::vector<SampleMetrics>& samples) {
    if (samples.empty()) throw ValidationError("cannot aggregate an empty sample list");
    AggregateStats a;
    a.n = samples.size();
    for (const auto& s : samples) {
        a.precision += s.precision;
        a.recall += s.recall;
        a.f1 += s.f1;
        a.fuzzy_f1 += s.fuzzy_f1;
        if (s.is_catastrophic) ++a.catastrophic;
        auto& l = a.per_language[s.language];
        ++l.n;
        l.f1 += s.f1;
        l.fuzzy_f1 += s.fuzzy_f1;
    }
    const auto n = static_cast<double>(a.n);
    a.precision /= n;
    a.recall /= n;
    a.f1 /= n;
    a.fuzzy_f1 /= n;
    a.catastrophic_rate = 100.0 * static_cast<double>(a.catastrophic) / n;
    for (auto& [lang, l] : a.per_language) {
        l.f1 /= static_cast<double>(l.n);
        l.fuzzy_f1 /= static_cast<double>(l.n);
    }
    return a;
}

/// Aggregates keyed by (engine, strategy).
struct AggregateReport {
    struct Row {
        std::string engine;
        std::string strategy;
        AggregateStats stats;
    };
    std::vector<Row> rows;

    const Row* find(std::string_view engine, std::string_view strategy) const {
        for (const auto& r : rows)
            if (r.engine == engine && r.strategy == strategy) return &r;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Paired bootstrap

/// Two-sided paired bootstrap on the exact-F1 mean difference a - b.
/// p = min(1, 2 * min(frac(stat <= 0), frac(stat >= 0))) over `resamples`
/// draws of n indices with replacement (xoshiro256** seeded by `seed`).
inline double paired_bootstrap(const std::vector<SampleMetrics>& a, const std::vector<SampleMetrics>& b,
                               std::uint64_t seed, std::size_t resamples = 10000) {
    if (a.size() != b.size()) throw ValidationError("paired bootstrap needs equal-length sample lists");
    if (a.empty()) throw ValidationError("paired bootstrap needs at least one sample");
    if (resamples == 0) throw ValidationError("paired bootstrap needs at least one resample");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].image_id != b[i].image_id)
            throw ValidationError("paired bootstrap samples misaligned at index " + std::to_string(i) + " ('" +
                                  a[i].image_id + "' vs '" + b[i].image_id + "')");
        diff[i] = a[i].f1 - b[i].f1;
    }

    Xoshiro256 rng(seed);
    std::size_t at_most_zero = 0, at_least_zero = 0;
    const auto n = static_cast<std::uint64_t>(diff.size());
    for (std::size_t r = 0; r < resamples; ++r) {
        double sum = 0;
        for (std::uint64_t k = 0; k < n; ++k) sum += diff[rng.below(n)];
        if (sum <= 0) ++at_most_zero;
        if (sum >= 0) ++at_least_zero;
    }
    const double tail = static_cast<double>(std::min(at_most_zero, at_least_zero)) / static_cast<double>(resamples);
    return std::clamp(2 * tail, 0.0, 1.0);
}

} // namespace ocrbench
