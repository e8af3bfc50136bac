// ocrbench: evaluate, ablation, generate, split.
// Exit status: 0 success, 1 validation error, 2 I/O error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocrbench/harness.hpp"

namespace {

using namespace ocrbench;

struct RunFlags {
    std::string config;
    std::string truth;
    std::string ocr_dir;
    std::string corpus;
    std::vector<std::string> strategies;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> eps_multiplier;
    std::optional<std::size_t> min_samples;
    std::optional<std::size_t> fuzzy_max_dist;
    std::optional<std::size_t> bootstrap_resamples;
    bool no_full_stop = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_strategies) {
    cmd->add_option("-c,--config", f.config, "JSON run configuration");
    cmd->add_option("--truth", f.truth, "COCO ground-truth file");
    cmd->add_option("--ocr-dir", f.ocr_dir, "directory of normalized OCR JSON documents");
    cmd->add_option("--corpus", f.corpus, "synthetic corpus spec (instead of --truth/--ocr-dir)");
    if (with_strategies)
        cmd->add_option("--strategies", f.strategies, "raw, line, dbscan_flat, dbscan_vote")->delimiter(',');
    cmd->add_option("-o,--output", f.output, "output directory");
    cmd->add_option("--seed", f.seed, "run seed (bootstrap default)");
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    cmd->add_option("--eps-multiplier", f.eps_multiplier, "DBSCAN eps as a multiple of median word height");
    cmd->add_option("--min-samples", f.min_samples, "DBSCAN min_samples");
    cmd->add_option("--fuzzy-max-dist", f.fuzzy_max_dist, "Levenshtein bound for fuzzy matching");
    cmd->add_option("--bootstrap-resamples", f.bootstrap_resamples, "paired bootstrap resamples");
    cmd->add_flag("--no-full-stop", f.no_full_stop, "do not split ingredients on '.'");
}

fs::path data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("OCRBENCH_DATA_DIR")) return env;
    return OCRBENCH_DEFAULT_DATA_DIR;
}

RunConfig build_config(const RunFlags& f, const fs::path& data) {
    auto cfg = f.config.empty() ? default_run_config(data) : load_run_config(f.config, data);
    if (!f.truth.empty()) cfg.truth = f.truth;
    if (!f.ocr_dir.empty()) cfg.ocr_dir = f.ocr_dir;
    if (!f.corpus.empty()) {
        cfg.corpus = f.corpus;
        if (f.truth.empty()) cfg.truth.reset();
        if (f.ocr_dir.empty()) cfg.ocr_dir.reset();
    } else if (!f.truth.empty() || !f.ocr_dir.empty()) {
        cfg.corpus.reset();
    }
    if (!f.strategies.empty()) {
        cfg.strategies.clear();
        for (const auto& s : f.strategies) cfg.strategies.push_back(parse_strategy(s));
    }
    if (!f.output.empty()) cfg.output_dir = f.output;
    if (f.seed) cfg.seed = *f.seed;
    if (f.threads) cfg.threads = *f.threads;
    if (f.eps_multiplier) cfg.cluster.eps_multiplier = *f.eps_multiplier;
    if (f.min_samples) cfg.cluster.min_samples = *f.min_samples;
    if (f.fuzzy_max_dist) cfg.fuzzy_max_dist = *f.fuzzy_max_dist;
    if (f.bootstrap_resamples) cfg.bootstrap_resamples = *f.bootstrap_resamples;
    if (f.no_full_stop) cfg.full_stop_delimiter = false;
    return cfg;
}

void print_warnings(const Warnings& w) {
    constexpr std::size_t kShown = 20;
    for (std::size_t i = 0; i < w.size() && i < kShown; ++i) std::cerr << "warning: " << w[i] << '\n';
    if (w.size() > kShown) std::cerr << "warning: ... " << (w.size() - kShown) << " more\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark toolkit for OCR on food-packaging ingredient lists"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    std::string data_flag;
    app.add_option("--data-dir", data_flag, "shipped data directory (stop list, vocabularies, templates)");

    RunFlags eval_flags, ablation_flags;
    auto* evaluate = app.add_subcommand("evaluate", "score OCR output against ground truth");
    add_run_flags(evaluate, eval_flags, true);
    auto* ablation = app.add_subcommand("ablation", "compare the four word-grouping strategies");
    add_run_flags(ablation, ablation_flags, false);

    std::string spec_path, gen_out;
    std::optional<std::size_t> gen_count;
    std::optional<std::uint64_t> gen_seed;
    auto* generate = app.add_subcommand("generate", "write a synthetic corpus");
    generate->add_option("--spec", spec_path, "corpus spec JSON")->required();
    generate->add_option("-o,--output", gen_out, "output directory")->required();
    generate->add_option("--count", gen_count, "override the spec's item count");
    generate->add_option("--seed", gen_seed, "override the spec's seed");

    std::string dataset, split_out;
    std::uint64_t split_seed = 42;
    double fraction = 0.2;
    auto* split = app.add_subcommand("split", "language-stratified train/test split");
    split->add_option("--dataset", dataset, "COCO ground-truth file")->required();
    split->add_option("--seed", split_seed, "shuffle seed");
    split->add_option("--fraction", fraction, "test fraction in (0, 1)");
    split->add_option("-o,--output", split_out, "CSV output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto data = data_dir(data_flag);
        if (evaluate->parsed()) {
            const auto r = cmd_evaluate(build_config(eval_flags, data));
            print_warnings(r.warnings);
            std::cout << engine_table_md(r.evaluation.report);
        } else if (ablation->parsed()) {
            const auto cfg = build_config(ablation_flags, data);
            const auto r = cmd_ablation(cfg);
            print_warnings(r.warnings);
            std::cout << engine_table_md(r.evaluation.report) << '\n' << bootstrap_table_md(r.bootstrap);
        } else if (generate->parsed()) {
            auto spec = load_corpus_spec(spec_path, data);
            if (gen_count) {
                if (*gen_count < 1) throw ValidationError("corpus count must be at least 1");
                spec.count = *gen_count;
            }
            if (gen_seed) spec.seed = *gen_seed;
            const auto corpus = cmd_generate(spec, gen_out);
            std::cout << "wrote " << corpus.size() << " labels to " << gen_out << '\n';
        } else if (split->parsed()) {
            const auto s = cmd_split(dataset, split_seed, fraction);
            print_warnings(s.warnings);
            if (split_out.empty())
                std::cout << split_csv(s);
            else
                detail::write_file(split_out, split_csv(s));
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
