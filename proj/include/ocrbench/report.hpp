#pragma once

// Report serialization: flat per-sample CSV, full JSON, and markdown tables
// in the engine-comparison, per-language and strategy-ablation layouts.

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocrbench/metrics.hpp"

namespace ocrbench {

/// Per-sample metrics of one (engine, strategy) row, ordered by image_id.
struct SampleSet {
    std::string engine;
    std::string strategy;
    std::vector<SampleMetrics> samples;
};

struct BootstrapComparison {
    std::string engine;
    std::string strategy_a;
    std::string strategy_b;
    double mean_f1_difference = 0; ///< a - b
    double p_value = 1;
};

namespace detail {

inline std::string fixed(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

/// CSV field quoting per RFC 4180.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline std::string samples_csv(const std::vector<SampleSet>& sets) {
    std::string out =
        "engine,strategy,image_id,language,precision,recall,f1,fuzzy_f1,is_catastrophic,true_positives,n_detected,n_truth\n";
    for (const auto& set : sets) {
        for (const auto& s : set.samples) {
            out += detail::csv_field(set.engine) + "," + set.strategy + "," + detail::csv_field(s.image_id) + "," +
                   detail::csv_field(s.language) + "," + detail::fixed(s.precision, 6) + "," +
                   detail::fixed(s.recall, 6) + "," + detail::fixed(s.f1, 6) + "," + detail::fixed(s.fuzzy_f1, 6) +
                   "," + (s.is_catastrophic ? "true" : "false") + "," + std::to_string(s.true_positives) + "," +
                   std::to_string(s.n_detected) + "," + std::to_string(s.n_truth) + "\n";
        }
    }
    return out;
}

inline nlohmann::ordered_json stats_json(const AggregateStats& a) {
    nlohmann::ordered_json j;
    j["n"] = a.n;
    j["precision"] = a.precision;
    j["recall"] = a.recall;
    j["f1"] = a.f1;
    j["fuzzy_f1"] = a.fuzzy_f1;
    j["catastrophic"] = a.catastrophic;
    j["catastrophic_rate"] = a.catastrophic_rate;
    auto& langs = j["per_language"] = nlohmann::ordered_json::object();
    for (const auto& [lang, l] : a.per_language) langs[lang] = {{"n", l.n}, {"f1", l.f1}, {"fuzzy_f1", l.fuzzy_f1}};
    return j;
}

inline nlohmann::ordered_json report_rows_json(const AggregateReport& report) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json j;
        j["engine"] = r.engine;
        j["strategy"] = r.strategy;
        const auto stats = stats_json(r.stats);
        for (const auto& [k, v] : stats.items()) j[k] = v;
        rows.push_back(std::move(j));
    }
    return rows;
}

inline nlohmann::ordered_json bootstrap_json(const std::vector<BootstrapComparison>& cmp) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : cmp)
        arr.push_back({{"engine", c.engine},
                       {"strategy_a", c.strategy_a},
                       {"strategy_b", c.strategy_b},
                       {"mean_f1_difference", c.mean_f1_difference},
                       {"p_value", c.p_value}});
    return arr;
}

/// Engine | F1 | Fuz. | P | R | Cat.% (one row per engine and strategy).
inline std::string engine_table_md(const AggregateReport& report) {
    std::string out = "| Engine | Strategy | n | F1 | Fuz. | P | R | Cat.% |\n|---|---|--:|--:|--:|--:|--:|--:|\n";
    for (const auto& r : report.rows) {
        const auto& a = r.stats;
        out += "| " + r.engine + " | " + r.strategy + " | " + std::to_string(a.n) + " | " + detail::fixed(a.f1) +
               " | " + detail::fixed(a.fuzzy_f1) + " | " + detail::fixed(a.precision) + " | " +
               detail::fixed(a.recall) + " | " + detail::fixed(a.catastrophic_rate, 1) + " |\n";
    }
    return out;
}

/// Lang | n | one exact-F1 column per (engine, strategy) row.
inline std::string language_table_md(const AggregateReport& report) {
    std::set<std::string> langs;
    for (const auto& r : report.rows)
        for (const auto& [lang, l] : r.stats.per_language) langs.insert(lang);

    std::string out = "| Lang | n |";
    std::string rule = "|---|--:|";
    for (const auto& r : report.rows) {
        out += " " + r.engine + " (" + r.strategy + ") |";
        rule += "--:|";
    }
    out += "\n" + rule + "\n";
    for (const auto& lang : langs) {
        std::size_t n = 0;
        for (const auto& r : report.rows)
            if (auto it = r.stats.per_language.find(lang); it != r.stats.per_language.end()) n = std::max(n, it->second.n);
        out += "| " + lang + " | " + std::to_string(n) + " |";
        for (const auto& r : report.rows) {
            const auto it = r.stats.per_language.find(lang);
            out += " " + (it == r.stats.per_language.end() ? std::string("-") : detail::fixed(it->second.f1)) + " |";
        }
        out += "\n";
    }
    return out;
}

/// (a)-(d) | Strategy | F1 | P | R for one engine.
inline std::string ablation_table_md(const AggregateReport& report, const std::string& engine,
                                     const std::vector<std::pair<std::string, std::string>>& strategies) {
    std::string out = "|  | Strategy | F1 | P | R |\n|---|---|--:|--:|--:|\n";
    char tag = 'a';
    for (const auto& [key, label] : strategies) {
        const auto* row = report.find(engine, key);
        if (!row) continue;
        out += std::string("| (") + tag++ + ") | " + label + " | " + detail::fixed(row->stats.f1) + " | " +
               detail::fixed(row->stats.precision) + " | " + detail::fixed(row->stats.recall) + " |\n";
    }
    return out;
}

inline std::string bootstrap_table_md(const std::vector<BootstrapComparison>& cmp) {
    std::string out = "| Engine | A | B | mean F1 (A - B) | p |\n|---|---|---|--:|--:|\n";
    for (const auto& c : cmp)
        out += "| " + c.engine + " | " + c.strategy_a + " | " + c.strategy_b + " | " +
               detail::fixed(c.mean_f1_difference) + " | " + detail::fixed(c.p_value) + " |\n";
    return out;
}

} // namespace ocrbench
