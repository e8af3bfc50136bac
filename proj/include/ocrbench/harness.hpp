#pragma once

// Run configuration, corpus specs, parallel evaluation and the four CLI
// commands. Needs OpenSSL (libcrypto) and threads at link time.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "ocrbench/clustering.hpp"
#include "ocrbench/errors.hpp"
#include "ocrbench/extraction.hpp"
#include "ocrbench/ingest.hpp"
#include "ocrbench/metrics.hpp"
#include "ocrbench/pipeline.hpp"
#include "ocrbench/report.hpp"
#include "ocrbench/synthgen.hpp"

namespace ocrbench {

inline constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

inline std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

namespace detail {

inline fs::path resolve_against(const fs::path& base, const fs::path& p) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

inline void require_exists(const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw IoError(std::string(what) + " not found: " + p.string());
}

/// UTC timestamp, or SOURCE_DATE_EPOCH when set.
inline std::string timestamp_utc() {
    std::time_t t = std::time(nullptr);
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Corpus specs

/// Declarative synthetic corpus. Paths are resolved against the spec file's
/// directory; unset paths default to the shipped data directory.
struct CorpusSpec {
    std::size_t count = 0;
    std::uint64_t seed = 42;
    std::vector<std::string> templates; ///< ids; empty = every template
    std::vector<std::string> languages; ///< tags; empty = every vocabulary
    NoiseConfig noise;
    fs::path template_file;
    fs::path vocab_dir;
    fs::path confusions;
};

inline CorpusSpec corpus_spec_from_json(const nlohmann::json& j, const fs::path& base, const fs::path& data_dir) {
    if (!j.is_object()) throw ConfigError("corpus spec must be a JSON object");
    detail::reject_unknown_keys(j, {"count", "seed", "templates", "languages", "noise", "template_file", "vocab_dir", "confusions"},
                                "corpus spec");
    CorpusSpec s;
    try {
        const auto count = j.at("count").get<std::int64_t>();
        if (count < 1) throw ValidationError("corpus count must be at least 1");
        s.count = static_cast<std::size_t>(count);
        s.seed = j.value("seed", s.seed);
        s.templates = j.value("templates", std::vector<std::string>{});
        s.languages = j.value("languages", std::vector<std::string>{});
        if (j.contains("noise")) s.noise = noise_from_json(j["noise"]);
        s.template_file = j.contains("template_file") ? detail::resolve_against(base, j["template_file"].get<std::string>())
                                                       : data_dir / "templates.json";
        s.vocab_dir = j.contains("vocab_dir") ? detail::resolve_against(base, j["vocab_dir"].get<std::string>())
                                              : data_dir / "vocab";
        s.confusions = j.contains("confusions") ? detail::resolve_against(base, j["confusions"].get<std::string>())
                                                : data_dir / "confusions.tsv";
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed corpus spec: ") + e.what());
    }
    return s;
}

inline CorpusSpec load_corpus_spec(const fs::path& path, const fs::path& data_dir) {
    const auto j = detail::parse_json(detail::read_file(path), "corpus spec");
    return corpus_spec_from_json(j, path.parent_path(), data_dir);
}

/// Files a corpus depends on, for input hashing.
inline std::vector<fs::path> corpus_inputs(const CorpusSpec& s) {
    std::vector<fs::path> out{s.template_file, s.confusions};
    for (const auto& e : fs::directory_iterator(s.vocab_dir))
        if (e.path().extension() == ".txt") out.push_back(e.path());
    std::sort(out.begin() + 2, out.end());
    return out;
}

inline std::vector<CorpusItem> build_corpus(const CorpusSpec& spec) {
    detail::require_exists(spec.template_file, "template file");
    detail::require_exists(spec.vocab_dir, "vocabulary directory");
    detail::require_exists(spec.confusions, "confusion table");
    const auto all_templates = load_templates(spec.template_file);
    std::vector<LayoutTemplate> templates;
    if (spec.templates.empty()) {
        templates = all_templates;
    } else {
        for (const auto& id : spec.templates) {
            const auto it = std::find_if(all_templates.begin(), all_templates.end(),
                                         [&](const LayoutTemplate& t) { return t.id == id; });
            if (it == all_templates.end()) throw ValidationError("unknown template id '" + id + "'");
            templates.push_back(*it);
        }
    }
    const auto all_vocabs = VocabularySet::load_directory(spec.vocab_dir);
    std::vector<VocabularySet> vocabs;
    if (spec.languages.empty()) {
        vocabs = all_vocabs;
    } else {
        for (const auto& lang : spec.languages) {
            const auto it = std::find_if(all_vocabs.begin(), all_vocabs.end(),
                                         [&](const VocabularySet& v) { return v.language() == lang; });
            if (it == all_vocabs.end()) throw ValidationError("no vocabulary for language '" + lang + "'");
            vocabs.push_back(*it);
        }
    }
    return generate_corpus(templates, vocabs, spec.count, spec.noise, spec.seed, ConfusionTable::load(spec.confusions));
}

// ---------------------------------------------------------------------------
// Run configuration

/// Harness configuration, a JSON file. Inputs are either `truth` + `ocr_dir`
/// or a synthetic `corpus` spec. Relative paths resolve against the config
/// file's directory.
struct RunConfig {
    std::optional<fs::path> truth;
    std::optional<fs::path> ocr_dir;
    std::optional<fs::path> corpus;
    std::vector<Strategy> strategies{Strategy::dbscan_vote};
    ClusterConfig cluster;
    bool full_stop_delimiter = true;
    fs::path stoplist;
    fs::path vocab_dir;
    std::size_t fuzzy_max_dist = 2;
    std::size_t bootstrap_resamples = 10000;
    std::optional<std::uint64_t> bootstrap_seed; ///< defaults to `seed`
    fs::path output_dir = "ocrbench-out";
    std::uint64_t seed = 42;
    unsigned threads = 0; ///< 0 = hardware concurrency
    fs::path data_dir;    ///< where default stoplist, vocabularies and templates live

    void validate() const {
        if (strategies.empty()) throw ConfigError("at least one strategy is required");
        cluster.validate();
        if (corpus && (truth || ocr_dir)) throw ConfigError("give either a corpus spec or truth + ocr_dir, not both");
        if (!corpus && !(truth && ocr_dir)) throw ConfigError("inputs missing: need truth + ocr_dir, or corpus");
        if (bootstrap_resamples < 1) throw ConfigError("bootstrap resamples must be at least 1");
    }

    /// Paths must exist when a run starts.
    void check_paths() const {
        if (truth) detail::require_exists(*truth, "ground-truth file");
        if (ocr_dir) detail::require_exists(*ocr_dir, "OCR directory");
        if (corpus) detail::require_exists(*corpus, "corpus spec");
        detail::require_exists(stoplist, "stop list");
        detail::require_exists(vocab_dir, "vocabulary directory");
    }

    std::uint64_t effective_bootstrap_seed() const { return bootstrap_seed.value_or(seed); }
};

inline RunConfig default_run_config(const fs::path& data_dir) {
    RunConfig c;
    c.data_dir = data_dir;
    c.stoplist = data_dir / "stoplist.txt";
    c.vocab_dir = data_dir / "vocab";
    return c;
}

inline RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base, const fs::path& data_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"truth", "ocr_dir", "corpus", "strategies", "cluster", "delimiters", "stoplist",
                                 "vocab_dir", "fuzzy_max_dist", "bootstrap", "output_dir", "seed", "threads"},
                                "config");
    auto c = default_run_config(data_dir);
    auto path = [&](const char* key) { return detail::resolve_against(base, j.at(key).get<std::string>()); };
    try {
        if (j.contains("truth")) c.truth = path("truth");
        if (j.contains("ocr_dir")) c.ocr_dir = path("ocr_dir");
        if (j.contains("corpus")) c.corpus = path("corpus");
        if (j.contains("strategies")) {
            c.strategies.clear();
            for (const auto& s : j["strategies"]) c.strategies.push_back(parse_strategy(s.get<std::string>()));
        }
        if (j.contains("cluster")) {
            const auto& k = j["cluster"];
            detail::reject_unknown_keys(k, {"eps_multiplier", "min_samples", "line_y_tolerance_multiplier"}, "cluster");
            c.cluster.eps_multiplier = k.value("eps_multiplier", c.cluster.eps_multiplier);
            const auto ms = k.value("min_samples", static_cast<std::int64_t>(c.cluster.min_samples));
            if (ms < 1) throw ConfigError("min_samples must be at least 1");
            c.cluster.min_samples = static_cast<std::size_t>(ms);
            c.cluster.line_y_tolerance_multiplier =
                k.value("line_y_tolerance_multiplier", c.cluster.line_y_tolerance_multiplier);
        }
        if (j.contains("delimiters")) {
            detail::reject_unknown_keys(j["delimiters"], {"full_stop"}, "delimiters");
            c.full_stop_delimiter = j["delimiters"].value("full_stop", true);
        }
        if (j.contains("stoplist")) c.stoplist = path("stoplist");
        if (j.contains("vocab_dir")) c.vocab_dir = path("vocab_dir");
        if (j.contains("fuzzy_max_dist")) c.fuzzy_max_dist = j["fuzzy_max_dist"].get<std::size_t>();
        if (j.contains("bootstrap")) {
            const auto& b = j["bootstrap"];
            detail::reject_unknown_keys(b, {"resamples", "seed"}, "bootstrap");
            c.bootstrap_resamples = b.value("resamples", c.bootstrap_resamples);
            if (b.contains("seed")) c.bootstrap_seed = b["seed"].get<std::uint64_t>();
        }
        if (j.contains("output_dir")) c.output_dir = path("output_dir");
        c.seed = j.value("seed", c.seed);
        c.threads = j.value("threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

inline RunConfig load_run_config(const fs::path& path, const fs::path& data_dir) {
    const auto j = detail::parse_json(detail::read_file(path), "config");
    return run_config_from_json(j, path.parent_path(), data_dir);
}

inline nlohmann::ordered_json run_config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    if (c.truth) j["truth"] = c.truth->string();
    if (c.ocr_dir) j["ocr_dir"] = c.ocr_dir->string();
    if (c.corpus) j["corpus"] = c.corpus->string();
    auto& s = j["strategies"] = nlohmann::ordered_json::array();
    for (auto st : c.strategies) s.push_back(to_string(st));
    j["cluster"] = {{"eps_multiplier", c.cluster.eps_multiplier},
                    {"min_samples", c.cluster.min_samples},
                    {"line_y_tolerance_multiplier", c.cluster.line_y_tolerance_multiplier}};
    j["delimiters"] = {{"full_stop", c.full_stop_delimiter}};
    j["stoplist"] = c.stoplist.string();
    j["vocab_dir"] = c.vocab_dir.string();
    j["fuzzy_max_dist"] = c.fuzzy_max_dist;
    j["bootstrap"] = {{"resamples", c.bootstrap_resamples}, {"seed", c.effective_bootstrap_seed()}};
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

inline PipelineContext make_context(const RunConfig& c) {
    PipelineContext ctx;
    ctx.cluster = c.cluster;
    ctx.delimiters = DelimiterSet(c.full_stop_delimiter);
    ctx.stop_list = StopList::load(c.stoplist);
    ctx.vocabs = VocabularySet::load_directory(c.vocab_dir);
    ctx.fuzzy_max_dist = c.fuzzy_max_dist;
    return ctx;
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvaluationCounts {
    std::size_t documents = 0;            ///< OCR documents read
    std::size_t evaluated = 0;            ///< documents paired with a non-empty label
    std::size_t unlabeled = 0;            ///< documents without a ground-truth label
    std::size_t excluded_empty_truth = 0; ///< documents whose label has no ingredients
    std::size_t missing_ocr = 0;          ///< (engine, non-empty label) pairs without a document
};

struct Evaluation {
    std::vector<SampleSet> sets; ///< engine-major, strategies in request order
    AggregateReport report;
    EvaluationCounts counts;
    Warnings warnings;
};

namespace detail {

/// Runs fn(i) for i in [0, n) on `threads` workers; rethrows the first
/// exception after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
        work();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace detail

/// Pairs documents with labels (by label image_id or an alias such as the
/// numeric COCO id) and scores every pair under every strategy. Sample order
/// within a set is by image_id regardless of thread count.
inline Evaluation evaluate(const std::vector<GroundTruthLabel>& labels, const std::vector<OcrDocument>& docs,
                           std::span<const Strategy> strategies, const PipelineContext& ctx, unsigned threads = 0,
                           const std::map<std::string, std::string>& aliases = {}) {
    if (strategies.empty()) throw ConfigError("at least one strategy is required");
    Evaluation ev;
    ev.counts.documents = docs.size();

    std::map<std::string, const GroundTruthLabel*> by_id;
    for (const auto& l : labels) by_id[l.image_id] = &l;
    auto find_label = [&](const std::string& id) -> const GroundTruthLabel* {
        if (auto it = by_id.find(id); it != by_id.end()) return it->second;
        if (auto a = aliases.find(id); a != aliases.end())
            if (auto it = by_id.find(a->second); it != by_id.end()) return it->second;
        return nullptr;
    };

    std::map<std::string, std::map<std::string, std::pair<const OcrDocument*, const GroundTruthLabel*>>> engines;
    std::size_t labeled = 0;
    for (const auto& d : docs) {
        const auto* label = find_label(d.image_id);
        if (!label) {
            ++ev.counts.unlabeled;
            ev.warnings.push_back("no ground truth for OCR document '" + d.image_id + "' (" + d.engine_id + ")");
            continue;
        }
        ++labeled;
        if (label->ingredients.empty()) {
            ++ev.counts.excluded_empty_truth;
            continue;
        }
        auto& slot = engines[d.engine_id][label->image_id];
        if (slot.first) throw ValidationError("duplicate OCR document for '" + label->image_id + "' from engine " + d.engine_id);
        slot = {&d, label};
    }
    if (labeled == 0) throw ValidationError("no OCR document image_id matches a ground-truth label");

    struct Task {
        const OcrDocument* doc;
        const GroundTruthLabel* label;
        std::size_t set;
    };
    std::vector<Task> tasks;
    for (const auto& [engine, pairs] : engines) {
        std::size_t labels_with_truth = 0;
        for (const auto& l : labels) labels_with_truth += !l.ingredients.empty();
        ev.counts.missing_ocr += labels_with_truth - pairs.size();
        ev.counts.evaluated += pairs.size();
        for (auto st : strategies) {
            ev.sets.push_back({engine, to_string(st), {}});
            for (const auto& [id, p] : pairs) tasks.push_back({p.first, p.second, ev.sets.size() - 1});
        }
    }

    std::vector<SampleMetrics> results(tasks.size());
    detail::parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto& t = tasks[i];
        results[i] = evaluate_document(*t.doc, *t.label, parse_strategy(ev.sets[t.set].strategy), ctx);
    });
    for (std::size_t i = 0; i < tasks.size(); ++i) ev.sets[tasks[i].set].samples.push_back(std::move(results[i]));

    for (auto& set : ev.sets) {
        std::sort(set.samples.begin(), set.samples.end(),
                  [](const SampleMetrics& a, const SampleMetrics& b) { return a.image_id < b.image_id; });
        if (!set.samples.empty()) ev.report.rows.push_back({set.engine, set.strategy, aggregate(set.samples)});
    }
    return ev;
}

/// Pairwise paired bootstraps between strategies, per engine; for i < j the
/// comparison is strategies[j] minus strategies[i].
inline std::vector<BootstrapComparison> pairwise_bootstrap(const Evaluation& ev, std::uint64_t seed,
                                                           std::size_t resamples) {
    std::vector<BootstrapComparison> out;
    std::map<std::string, std::vector<const SampleSet*>> by_engine;
    std::vector<std::string> engine_order;
    for (const auto& s : ev.sets) {
        if (!by_engine.count(s.engine)) engine_order.push_back(s.engine);
        by_engine[s.engine].push_back(&s);
    }
    for (const auto& engine : engine_order) {
        const auto& sets = by_engine[engine];
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (std::size_t j = i + 1; j < sets.size(); ++j) {
                const auto& a = sets[j]->samples;
                const auto& b = sets[i]->samples;
                if (a.empty()) continue;
                BootstrapComparison c{engine, sets[j]->strategy, sets[i]->strategy, 0, 1};
                for (std::size_t k = 0; k < a.size(); ++k) c.mean_f1_difference += a[k].f1 - b[k].f1;
                c.mean_f1_difference /= static_cast<double>(a.size());
                c.p_value = paired_bootstrap(a, b, seed, resamples);
                out.push_back(c);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands

struct LoadedInputs {
    std::vector<GroundTruthLabel> labels;
    std::vector<OcrDocument> docs;
    std::map<std::string, std::string> aliases;
    std::vector<fs::path> files; ///< hashed into the report
    Warnings warnings;
};

/// Every *.json file of the directory, sorted by name. Malformed files are
/// all listed in one ValidationError.
inline std::vector<OcrDocument> load_ocr_directory(const fs::path& dir, std::vector<fs::path>* files = nullptr) {
    if (!fs::is_directory(dir)) throw IoError("OCR directory not found: " + dir.string());
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<OcrDocument> docs;
    std::string errors;
    std::size_t n_errors = 0;
    for (const auto& p : paths) {
        try {
            docs.push_back(load_ocr_document(p));
        } catch (const IoError&) {
            throw;
        } catch (const Error& e) {
            ++n_errors;
            errors += "\n  " + p.filename().string() + ": " + e.what();
        }
    }
    if (n_errors) throw ValidationError(std::to_string(n_errors) + " malformed OCR file(s):" + errors);
    if (files) files->insert(files->end(), paths.begin(), paths.end());
    return docs;
}

inline LoadedInputs load_inputs(const RunConfig& cfg) {
    LoadedInputs in;
    if (cfg.corpus) {
        const auto spec = load_corpus_spec(*cfg.corpus, cfg.data_dir);
        in.files.push_back(*cfg.corpus);
        for (auto& f : corpus_inputs(spec)) in.files.push_back(f);
        for (auto& item : build_corpus(spec)) {
            in.labels.push_back(std::move(item.label.truth));
            in.docs.push_back(std::move(item.ocr));
        }
        return in;
    }
    const auto ds = load_coco(*cfg.truth);
    in.files.push_back(*cfg.truth);
    in.labels = labels_from_coco(ds, LabelSource::real, &in.warnings);
    for (const auto& im : ds.images) in.aliases[std::to_string(im.id)] = image_key(im);
    in.docs = load_ocr_directory(*cfg.ocr_dir, &in.files);
    return in;
}

inline nlohmann::ordered_json input_hashes(const RunConfig& cfg, const std::vector<fs::path>& data_files) {
    std::vector<fs::path> files = data_files;
    files.push_back(cfg.stoplist);
    for (const auto& e : fs::directory_iterator(cfg.vocab_dir))
        if (e.path().extension() == ".txt") files.push_back(e.path());
    std::sort(files.begin() + static_cast<std::ptrdiff_t>(data_files.size()) + 1, files.end());
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : files) arr.push_back({{"path", f.string()}, {"sha256", sha256_hex(detail::read_file(f))}});
    return arr;
}

inline nlohmann::ordered_json counts_json(const Evaluation& ev) {
    return {{"documents", ev.counts.documents},
            {"evaluated", ev.counts.evaluated},
            {"unlabeled", ev.counts.unlabeled},
            {"excluded_empty_truth", ev.counts.excluded_empty_truth},
            {"missing_ocr", ev.counts.missing_ocr}};
}

struct CommandResult {
    Evaluation evaluation;
    std::vector<BootstrapComparison> bootstrap;
    Warnings warnings;
    std::vector<fs::path> inputs; ///< data files hashed into the report
};

namespace detail {

inline nlohmann::ordered_json report_header(const RunConfig& cfg, const std::vector<fs::path>& files) {
    nlohmann::ordered_json j;
    j["generated_at"] = timestamp_utc();
    j["tool"] = {{"name", "ocrbench"}, {"version", kVersion}};
    j["inputs"] = input_hashes(cfg, files);
    j["config"] = run_config_json(cfg);
    return j;
}

inline std::string counts_md(const Evaluation& ev) {
    const auto& c = ev.counts;
    return "Documents: " + std::to_string(c.documents) + "; evaluated: " + std::to_string(c.evaluated) +
           "; unlabeled (skipped): " + std::to_string(c.unlabeled) +
           "; empty ground truth (excluded): " + std::to_string(c.excluded_empty_truth) +
           "; labels without OCR output: " + std::to_string(c.missing_ocr) + "\n";
}

inline CommandResult run(const RunConfig& cfg, std::span<const Strategy> strategies) {
    cfg.validate();
    cfg.check_paths();
    auto ctx = make_context(cfg);
    auto inputs = load_inputs(cfg);
    CommandResult r;
    r.evaluation = evaluate(inputs.labels, inputs.docs, strategies, ctx, cfg.threads, inputs.aliases);
    r.warnings = inputs.warnings;
    r.inputs = inputs.files;
    r.warnings.insert(r.warnings.end(), r.evaluation.warnings.begin(), r.evaluation.warnings.end());

    fs::create_directories(cfg.output_dir);
    write_file(cfg.output_dir / "effective_config.json", run_config_json(cfg).dump(2) + "\n");
    write_file(cfg.output_dir / "samples.csv", samples_csv(r.evaluation.sets));
    return r;
}

} // namespace detail

/// Writes samples.csv, report.json, report.md and effective_config.json.
inline CommandResult cmd_evaluate(const RunConfig& cfg) {
    auto r = detail::run(cfg, cfg.strategies);
    auto j = detail::report_header(cfg, r.inputs);
    j["counts"] = counts_json(r.evaluation);
    j["rows"] = report_rows_json(r.evaluation.report);
    j["warnings"] = r.warnings;
    detail::write_file(cfg.output_dir / "report.json", j.dump(2) + "\n");

    std::string md = "<!-- generated_at: " + j["generated_at"].get<std::string>() + " -->\n";
    md += std::string("# Evaluation report\n\nocrbench ") + kVersion + "\n\n" + detail::counts_md(r.evaluation);
    md += "\n## Engine comparison\n\n" + engine_table_md(r.evaluation.report);
    md += "\n## Per-language exact F1\n\n" + language_table_md(r.evaluation.report);
    detail::write_file(cfg.output_dir / "report.md", md);
    return r;
}

/// All four strategies on the same documents plus pairwise paired-bootstrap
/// p-values. Writes samples.csv, ablation.json, ablation.md and
/// effective_config.json.
inline CommandResult cmd_ablation(const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
    auto r = detail::run(cfg, cfg.strategies);
    r.bootstrap = pairwise_bootstrap(r.evaluation, cfg.effective_bootstrap_seed(), cfg.bootstrap_resamples);

    auto j = detail::report_header(cfg, r.inputs);
    j["counts"] = counts_json(r.evaluation);
    j["rows"] = report_rows_json(r.evaluation.report);
    j["bootstrap"] = bootstrap_json(r.bootstrap);
    j["warnings"] = r.warnings;
    detail::write_file(cfg.output_dir / "ablation.json", j.dump(2) + "\n");

    std::vector<std::pair<std::string, std::string>> labels;
    for (auto st : kAllStrategies) labels.emplace_back(to_string(st), display_name(st));
    std::string md = "<!-- generated_at: " + j["generated_at"].get<std::string>() + " -->\n";
    md += std::string("# Clustering ablation\n\nocrbench ") + kVersion + "\n\n" + detail::counts_md(r.evaluation);
    std::set<std::string> seen;
    for (const auto& row : r.evaluation.report.rows) {
        if (!seen.insert(row.engine).second) continue;
        md += "\n## " + row.engine + "\n\n" + ablation_table_md(r.evaluation.report, row.engine, labels);
    }
    md += "\n## Paired bootstrap (exact F1, " + std::to_string(cfg.bootstrap_resamples) + " resamples)\n\n" +
          bootstrap_table_md(r.bootstrap);
    detail::write_file(cfg.output_dir / "ablation.md", md);
    return r;
}

/// Writes truth.coco.json, ocr/<image_id>.json and manifest.csv.
inline std::vector<CorpusItem> cmd_generate(const CorpusSpec& spec, const fs::path& out_dir) {
    auto corpus = build_corpus(spec);
    fs::create_directories(out_dir / "ocr");
    detail::write_file(out_dir / "truth.coco.json", serialize_coco(corpus_to_coco(corpus)));
    for (const auto& item : corpus)
        detail::write_file(out_dir / "ocr" / (item.label.image_id + ".json"), write_interchange(item.ocr));
    detail::write_file(out_dir / "manifest.csv", corpus_manifest(corpus));
    return corpus;
}

inline SplitAssignment cmd_split(const fs::path& dataset, std::uint64_t seed, double fraction) {
    return stratified_split(load_coco(dataset), seed, fraction);
}

} // namespace ocrbench
