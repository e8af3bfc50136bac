#pragma once

// One document through grouping, extraction and scoring.

#include <string>
#include <string_view>
#include <vector>

#include "ocrbench/clustering.hpp"
#include "ocrbench/core_model.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/extraction.hpp"
#include "ocrbench/metrics.hpp"

namespace ocrbench {

enum class Strategy { raw, line, dbscan_flat, dbscan_vote };

inline constexpr Strategy kAllStrategies[] = {Strategy::raw, Strategy::line, Strategy::dbscan_flat,
                                              Strategy::dbscan_vote};

inline const char* to_string(Strategy s) {
    switch (s) {
    case Strategy::raw: return "raw";
    case Strategy::line: return "line";
    case Strategy::dbscan_flat: return "dbscan_flat";
    case Strategy::dbscan_vote: return "dbscan_vote";
    }
    return "?";
}

/// Table label used in markdown reports.
inline const char* display_name(Strategy s) {
    switch (s) {
    case Strategy::raw: return "Raw OCR";
    case Strategy::line: return "Line-based";
    case Strategy::dbscan_flat: return "DBSCAN flat";
    case Strategy::dbscan_vote: return "DBSCAN+vote";
    }
    return "?";
}

inline Strategy parse_strategy(std::string_view s) {
    for (auto st : kAllStrategies)
        if (s == to_string(st)) return st;
    throw ConfigError("unknown strategy '" + std::string(s) + "' (expected raw, line, dbscan_flat or dbscan_vote)");
}

struct PipelineContext {
    ClusterConfig cluster;
    DelimiterSet delimiters;
    StopList stop_list;
    std::vector<VocabularySet> vocabs; ///< required by dbscan_vote only
    std::size_t fuzzy_max_dist = 2;
};

/// Candidate names the strategy forwards to extraction: raw forwards the
/// length-filtered words, line every line separately, the DBSCAN strategies
/// only the winning cluster.
inline std::vector<CandidateIngredient> detect(const OcrDocument& doc, Strategy strategy, const PipelineContext& ctx) {
    switch (strategy) {
    case Strategy::raw:
        return extract_ingredients(strategy_raw(doc), ctx.delimiters, ctx.stop_list);
    case Strategy::line:
        return extract_from_lines(strategy_line_based(doc, ctx.cluster), ctx.delimiters, ctx.stop_list);
    case Strategy::dbscan_flat:
        return extract_ingredients(strategy_dbscan_flat(doc, ctx.cluster), ctx.delimiters, ctx.stop_list);
    case Strategy::dbscan_vote:
        return extract_ingredients(strategy_dbscan_voting(doc, ctx.cluster, ctx.vocabs, ctx.fuzzy_max_dist),
                                   ctx.delimiters, ctx.stop_list);
    }
    return {};
}

inline std::vector<CanonicalName> truth_names(const GroundTruthLabel& label) {
    std::vector<CanonicalName> out;
    out.reserve(label.ingredients.size());
    for (const auto& ing : label.ingredients) out.push_back(canonicalize(ing.name));
    return out;
}

/// Scores one document against its label. Throws ExcludedSampleError when
/// the label has no ingredients.
inline SampleMetrics evaluate_document(const OcrDocument& doc, const GroundTruthLabel& truth, Strategy strategy,
                                       const PipelineContext& ctx) {
    return score_sample(names_of(detect(doc, strategy, ctx)), truth_names(truth), truth.image_id, truth.language,
                        ctx.fuzzy_max_dist);
}

} // namespace ocrbench
