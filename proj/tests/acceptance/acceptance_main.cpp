// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ocrbench/harness.hpp"
#include "oracles/brute_matching.hpp"
#include "oracles/multiset_overlap.hpp"
#include "oracles/naive_dbscan.hpp"
#include "oracles/rational_prf.hpp"
#include "oracles/reference_levenshtein.hpp"

using namespace ocrbench;

namespace {

const fs::path kData = OCRBENCH_TEST_DATA_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_s; ///< 0 = no runtime bound
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Samples of every corpus evaluated here, for the fuzzy >= exact check.
std::vector<SampleMetrics> g_all_samples;

Evaluation evaluate_spec(const fs::path& spec_path, std::span<const Strategy> strategies,
                         const std::function<void(CorpusSpec&)>& tweak = {}) {
    auto spec = load_corpus_spec(spec_path, kData);
    if (tweak) tweak(spec);
    const auto corpus = build_corpus(spec);
    std::vector<GroundTruthLabel> labels;
    std::vector<OcrDocument> docs;
    for (const auto& item : corpus) {
        labels.push_back(item.label.truth);
        docs.push_back(item.ocr);
    }
    const auto ctx = make_context(default_run_config(kData));
    auto ev = evaluate(labels, docs, strategies, ctx, 0);
    for (const auto& set : ev.sets) g_all_samples.insert(g_all_samples.end(), set.samples.begin(), set.samples.end());
    return ev;
}

SampleMetrics with_f1(const std::string& id, double f1) {
    SampleMetrics s;
    s.image_id = id;
    s.language = "en";
    s.precision = s.recall = s.f1 = s.fuzzy_f1 = f1;
    s.is_catastrophic = f1 < kCatastrophicF1;
    return s;
}

std::string random_edit(std::string s, std::mt19937_64& rng) {
    auto u = unicode::to_u32(s);
    const char32_t letters[] = U"abcdefghijklmnopqrstuvwxyz";
    const int edits = static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
        const auto pos = u.empty() ? 0 : rng() % u.size();
        const char32_t c = letters[rng() % 26];
        switch (rng() % 3) {
        case 0: if (!u.empty()) u[pos] = c; break;
        case 1: u.insert(u.begin() + static_cast<std::ptrdiff_t>(pos), c); break;
        default: if (u.size() > 1) u.erase(pos, 1); break;
        }
    }
    return unicode::to_utf8(u);
}

// ---------------------------------------------------------------------------

Outcome metric_exactness() {
    std::mt19937_64 rng(1);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t ng = 1 + static_cast<std::int64_t>(rng() % 60);
        const std::int64_t nd = static_cast<std::int64_t>(rng() % 61);
        const std::int64_t tp = static_cast<std::int64_t>(rng() % (std::min(nd, ng) + 1));
        MatchResult m;
        for (std::int64_t k = 0; k < tp; ++k) m.pairs.push_back({static_cast<std::size_t>(k), static_cast<std::size_t>(k), 0});
        const auto s = sample_metrics(m, static_cast<std::size_t>(nd), static_cast<std::size_t>(ng));
        const auto e = oracle::exact_prf(tp, nd, ng);
        worst = std::max({worst, std::abs(s.precision - oracle::to_double(e.p)),
                          std::abs(s.recall - oracle::to_double(e.r)), std::abs(s.f1 - oracle::to_double(e.f1))});
    }
    return {worst <= 1e-12, "max abs error " + fmt("%.3g", worst)};
}

Outcome exact_matching_oracle() {
    std::mt19937_64 rng(2);
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::string> d_raw, g_raw;
        std::vector<CanonicalName> d, g;
        auto draw = [&](std::vector<std::string>& raw, std::vector<CanonicalName>& canon) {
            const auto n = rng() % 21;
            for (std::size_t k = 0; k < n; ++k) {
                const auto idx = rng() % 10;
                std::string name = "name" + std::to_string(idx);
                raw.push_back(name);
                if (rng() % 2) name[0] = 'N';
                canon.push_back(canonicalize(name));
            }
        };
        draw(d_raw, d);
        draw(g_raw, g);
        if (match_exact(d, g).true_positives() != oracle::multiset_intersection(d_raw, g_raw)) ++mismatches;
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches / 1000"};
}

Outcome fuzzy_matching_oracle() {
    std::mt19937_64 rng(3);
    const auto en = VocabularySet::load(kData / "vocab" / "en.txt");
    std::vector<std::string> pool;
    for (const auto& e : en.entries()) pool.push_back(e.value());
    int discrepancies = 0;
    for (int i = 0; i < 500; ++i) {
        std::vector<std::string> g_raw, d_raw;
        const auto ng = 1 + rng() % 6;
        for (std::size_t k = 0; k < ng; ++k) g_raw.push_back(random_edit(pool[rng() % pool.size()], rng));
        const auto nd = rng() % 7;
        for (std::size_t k = 0; k < nd; ++k) {
            // Mostly noisy copies of truth names, some unrelated vocabulary.
            const std::string& base = rng() % 4 ? g_raw[rng() % g_raw.size()] : pool[rng() % pool.size()];
            d_raw.push_back(random_edit(base, rng));
        }
        std::vector<CanonicalName> d, g;
        for (const auto& s : d_raw) d.push_back(canonicalize(s));
        for (const auto& s : g_raw) g.push_back(canonicalize(s));
        std::vector<std::vector<bool>> adj(d.size(), std::vector<bool>(g.size()));
        for (std::size_t a = 0; a < d.size(); ++a)
            for (std::size_t b = 0; b < g.size(); ++b) adj[a][b] = oracle::levenshtein(d[a].value(), g[b].value()) <= 2;
        const auto greedy = match_fuzzy(d, g, 2);
        for (const auto& p : greedy.pairs)
            if (!adj[p.detected][p.truth]) return {false, "greedy accepted a pair beyond distance 2"};
        const auto best = oracle::max_matching(adj);
        if (greedy.true_positives() != best) {
            ++discrepancies;
            std::cout << "  discrepancy #" << discrepancies << " (instance " << i << "): greedy "
                      << greedy.true_positives() << " vs maximum " << best << "\n";
        }
    }
    return {discrepancies <= 5, std::to_string(discrepancies) + " / 500 instances below the maximum matching"};
}

Outcome levenshtein_oracle() {
    std::mt19937_64 rng(4);
    const std::vector<std::string> alphabet{"a", "b", "c", "e", "é", "ß", "水", "ç", "ı", "ا"};
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        std::string a, b;
        for (auto len = rng() % 31; len > 0; --len) a += alphabet[rng() % alphabet.size()];
        for (auto len = rng() % 31; len > 0; --len) b += alphabet[rng() % alphabet.size()];
        if (levenshtein(unicode::to_u32(a), unicode::to_u32(b)) != oracle::levenshtein(a, b)) ++mismatches;
    }
    const auto gel = levenshtein(canonicalize("gelatin"), canonicalize("Gelaton"));
    return {mismatches == 0 && gel == 1,
            std::to_string(mismatches) + " mismatches / 1000; gelatin/gelaton = " + std::to_string(gel)};
}

Outcome dbscan_oracle() {
    std::mt19937_64 rng(5);
    const std::pair<double, std::size_t> settings[] = {{1.5, 3}, {4.0, 5}, {9.0, 2}};
    int mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        std::vector<oracle::Pt> p(1 + rng() % 200);
        std::normal_distribution<double> jitter(0, 2.5);
        std::vector<oracle::Pt> centers(1 + rng() % 6);
        for (auto& c : centers) c = {static_cast<double>(rng() % 100), static_cast<double>(rng() % 100)};
        for (auto& q : p) {
            if (rng() % 4 == 0) {
                q = {static_cast<double>(rng() % 10000) / 100, static_cast<double>(rng() % 10000) / 100};
            } else {
                const auto& c = centers[rng() % centers.size()];
                q = {c.x + jitter(rng), c.y + jitter(rng)};
            }
        }
        std::vector<Point> pts;
        for (const auto& q : p) pts.push_back({q.x, q.y});
        for (const auto& [eps, ms] : settings) {
            oracle::Partition got;
            for (const auto& c : dbscan(pts, eps, ms)) {
                if (c.label == kNoise)
                    for (auto k : c.member_indices) got.insert({k});
                else
                    got.insert({c.member_indices.begin(), c.member_indices.end()});
            }
            if (got != oracle::naive_dbscan(p, eps, ms)) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches / 1500 (500 sets x 3 settings)"};
}

Outcome zero_noise_end_to_end() {
    const std::vector<Strategy> s{Strategy::dbscan_vote};
    const auto ev = evaluate_spec(kData / "fixtures" / "clean_ab.json", s);
    const auto& row = ev.report.rows.at(0);
    return {row.stats.n == 200 && row.stats.f1 == 1.0,
            "n = " + std::to_string(row.stats.n) + ", mean exact F1 = " + fmt("%.17g", row.stats.f1)};
}

Outcome ablation_direction() {
    const auto ev = evaluate_spec(kData / "fixtures" / "noisy_c.json", kAllStrategies);
    const auto& r = ev.report;
    const auto line = r.find("synthetic", "line")->stats;
    const auto flat = r.find("synthetic", "dbscan_flat")->stats;
    const auto vote = r.find("synthetic", "dbscan_vote")->stats;
    const auto raw = r.find("synthetic", "raw")->stats;
    const bool pass = line.n == 100 && line.f1 < 0.5 * flat.f1 && vote.precision >= flat.precision;
    return {pass, "n = " + std::to_string(line.n) + "; F1 raw " + fmt("%.3f", raw.f1) + ", line " + fmt("%.3f", line.f1) +
                      ", flat " + fmt("%.3f", flat.f1) + ", vote " + fmt("%.3f", vote.f1) + "; P flat " +
                      fmt("%.3f", flat.precision) + ", vote " + fmt("%.3f", vote.precision)};
}

void ablation_all_languages_info() {
    const auto ev = evaluate_spec(kData / "fixtures" / "noisy_c.json", kAllStrategies,
                                  [](CorpusSpec& s) { s.languages.clear(); });
    const auto& r = ev.report;
    const auto line = r.find("synthetic", "line")->stats;
    const auto flat = r.find("synthetic", "dbscan_flat")->stats;
    const auto vote = r.find("synthetic", "dbscan_vote")->stats;
    std::cout << "INFO  same fixture over all 14 languages: F1 line " << fmt("%.3f", line.f1) << ", flat "
              << fmt("%.3f", flat.f1) << " (ratio " << fmt("%.2f", line.f1 / flat.f1) << "); P flat "
              << fmt("%.3f", flat.precision) << ", vote " << fmt("%.3f", vote.precision) << "\n";
}

Outcome fuzzy_at_least_exact() {
    // One more corpus with character noise, where fuzzy and exact diverge.
    evaluate_spec(kData / "fixtures" / "clean_ab.json", kAllStrategies, [](CorpusSpec& s) {
        s.templates.clear();
        s.noise.char_substitution_rate = 0.08;
        s.noise.word_drop_rate = 0.05;
        s.noise.delimiter_corruption_rate = 0.05;
        s.noise.panel_merge_rate = 0.05;
        s.noise.curvature_amplitude = 6;
        s.noise.seed = 31;
    });
    std::size_t violations = 0, strictly_higher = 0;
    for (const auto& s : g_all_samples) {
        if (s.fuzzy_f1 < s.f1) ++violations;
        if (s.fuzzy_f1 > s.f1) ++strictly_higher;
    }
    return {violations == 0 && !g_all_samples.empty(),
            std::to_string(violations) + " exceptions over " + std::to_string(g_all_samples.size()) + " samples (" +
                std::to_string(strictly_higher) + " strictly higher)"};
}

Outcome catastrophic_rate() {
    std::vector<SampleMetrics> samples;
    for (std::size_t i = 0; i < 36; ++i) {
        MatchResult m;
        const std::size_t tp = i < 12 ? 0 : 1 + i % 4;
        for (std::size_t k = 0; k < tp; ++k) m.pairs.push_back({k, k, 0});
        auto s = sample_metrics(m, 5, 5);
        s.image_id = std::to_string(i);
        samples.push_back(s);
    }
    const auto a = aggregate(samples);
    return {std::abs(a.catastrophic_rate - 33.3) <= 0.05, "rate = " + fmt("%.4f", a.catastrophic_rate) + "%"};
}

Outcome bootstrap_calibration() {
    std::vector<SampleMetrics> ones, zeros;
    for (int i = 0; i < 20; ++i) {
        ones.push_back(with_f1(std::to_string(i), 1.0));
        zeros.push_back(with_f1(std::to_string(i), 0.0));
    }
    const double p_same = paired_bootstrap(ones, ones, 42);
    const double p_sep = paired_bootstrap(ones, zeros, 42);

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> f1(0, 1);
    int above = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<SampleMetrics> a, b;
        for (int i = 0; i < 36; ++i) {
            a.push_back(with_f1(std::to_string(i), f1(rng)));
            b.push_back(with_f1(std::to_string(i), f1(rng)));
        }
        if (paired_bootstrap(a, b, derive_seed(42, static_cast<std::uint64_t>(t))) > 0.01) ++above;
    }
    return {p_same == 1.0 && p_sep == 0.0 && above >= 95,
            "identical p = " + fmt("%.3f", p_same) + ", separated p = " + fmt("%.3f", p_sep) + ", null trials p > 0.01: " +
                std::to_string(above) + "/100"};
}

Outcome split_determinism() {
    const auto path = kData / "fixtures" / "split_50.coco.json";
    const auto ds = load_coco(path);
    const auto a = stratified_split(ds, 42, 0.2);
    const auto b = stratified_split(load_coco(path), 42, 0.2);
    const auto langs = resolve_languages(ds);
    std::map<std::string, std::pair<int, int>> strata; // size, test count
    for (const auto& [id, split] : a.assignment) {
        auto& s = strata[langs.at(id)];
        ++s.first;
        s.second += split == Split::test;
    }
    int off = 0;
    for (const auto& [lang, s] : strata)
        if (std::abs(s.second - 0.2 * s.first) > 1.0) ++off;
    return {ds.images.size() == 50 && strata.size() == 12 && off == 0 && split_csv(a) == split_csv(b),
            std::to_string(strata.size()) + " strata, " + std::to_string(off) + " outside +-1, byte-identical: " +
                (split_csv(a) == split_csv(b) ? "yes" : "no")};
}

Outcome corpus_statistics() {
    const auto spec = load_corpus_spec(kData / "fixtures" / "full_corpus.json", kData);
    const auto corpus = build_corpus(spec);
    std::size_t annotations = 0;
    for (const auto& item : corpus) annotations += item.label.truth.ingredients.size();
    const double mean = static_cast<double>(annotations) / static_cast<double>(corpus.size());
    return {corpus.size() == 993 && std::abs(mean - 35.9) <= 2.0,
            std::to_string(corpus.size()) + " images, " + std::to_string(annotations) + " annotations, mean " +
                fmt("%.2f", mean)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"metric formula exactness", 1, metric_exactness},
        {"exact-matching oracle", 0, exact_matching_oracle},
        {"fuzzy-matching oracle", 10, fuzzy_matching_oracle},
        {"levenshtein oracle", 0, levenshtein_oracle},
        {"dbscan equivalence", 30, dbscan_oracle},
        {"zero-noise end-to-end", 5, zero_noise_end_to_end},
        {"ablation direction", 10, ablation_direction},
        {"fuzzy >= exact", 0, fuzzy_at_least_exact},
        {"catastrophic-rate arithmetic", 0, catastrophic_rate},
        {"bootstrap calibration", 60, bootstrap_calibration},
        {"split determinism", 0, split_determinism},
        {"corpus statistics", 30, corpus_statistics},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_s == 0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << (i + 1 < 10 ? " " : "") << i + 1 << ". " << c.name << ": "
                  << o.detail << " [" << fmt("%.2f", secs) << " s"
                  << (c.budget_s > 0 ? ", budget " + fmt("%.0f", c.budget_s) + " s" : std::string()) << "]\n";
        if (c.name == "ablation direction") {
            try {
                ablation_all_languages_info();
            } catch (const std::exception& e) {
                std::cout << "INFO  all-language variant failed: " << e.what() << "\n";
            }
        }
        std::cout.flush();
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : std::string("all criteria passed\n"));
    return failed ? 1 : 0;
}
