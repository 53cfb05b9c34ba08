// Command-line front end: fit, bench, gen, lambda.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shark/baselines.hpp"
#include "shark/eval.hpp"
#include "shark/harness.hpp"
#include "shark/synth.hpp"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kDatasetAborted = 3;
constexpr int kOutputError = 4;

struct DataOptions {
    std::string path;
    bool has_header = false;
    std::optional<long> label_column;
    std::string normalize = "range";
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--dataset", d.path, "CSV data set")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--header", d.has_header, "First row is a header");
    cmd->add_option("--label-column", d.label_column,
                    "Ground-truth column (negative counts from the end)");
    cmd->add_option("--normalize", d.normalize, "range | zscore | none")
        ->check(CLI::IsMember({"range", "zscore", "z-score", "none"}));
}

shark::CsvDataset load(const DataOptions& d) {
    shark::CsvOptions opts;
    opts.has_header = d.has_header;
    opts.label_column = d.label_column;
    return shark::load_csv(d.path, opts);
}

void write_text(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f || !(f << text)) throw std::runtime_error("cannot write " + out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-weighted k-means: SHARK, k-means++, FWSA, LW-k-means"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(shark::kVersion));

    // fit ---------------------------------------------------------------
    auto* fit = app.add_subcommand("fit", "Fit one algorithm to one data set");
    DataOptions fit_data;
    add_data_options(fit, fit_data);
    std::size_t fit_k = 0;
    std::string fit_algo = "shark", fit_format = "text", fit_out;
    std::uint64_t fit_seed = 0;
    double fit_lambda = 0.005;
    bool fit_fallback = false;
    fit->add_option("--k", fit_k, "Number of clusters (defaults to the label count)");
    fit->add_option("--algorithm", fit_algo, "kmeans_pp | fwsa | lw | shark");
    fit->add_option("--seed", fit_seed, "Random seed");
    fit->add_option("--lambda", fit_lambda, "LW-k-means lambda");
    fit->add_flag("--lambda-fallback", fit_fallback, "Back off lambda by decades until LW succeeds");
    fit->add_option("--format", fit_format, "text | json")->check(CLI::IsMember({"text", "json"}));
    fit->add_option("--out", fit_out, "Output file (default stdout)");

    // bench -------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Run a seeded benchmark and emit a report");
    std::string bench_config, bench_dataset, bench_out, bench_format;
    std::vector<std::string> bench_algos;
    std::optional<std::size_t> bench_runs, bench_k;
    std::optional<std::uint64_t> bench_seed;
    std::optional<double> bench_noise;
    std::string bench_selection;
    bool bench_header = false;
    std::optional<long> bench_label = -1;
    bench->add_option("--config", bench_config, "JSON experiment config")->check(CLI::ExistingFile);
    bench->add_option("--dataset", bench_dataset, "CSV data set (when no config is given)");
    bench->add_flag("--header", bench_header, "Data set has a header row");
    bench->add_option("--label-column", bench_label, "Ground-truth column");
    bench->add_option("--k", bench_k, "Number of clusters");
    bench->add_option("--algorithm", bench_algos, "Algorithms (repeatable)");
    bench->add_option("--runs", bench_runs, "Restarts per data set");
    bench->add_option("--seed", bench_seed, "Base seed");
    bench->add_option("--noise-fraction", bench_noise, "Override synthetic noise fraction");
    bench->add_option("--selection", bench_selection, "Best-of-runs criterion: own | kmeans_cost")
        ->check(CLI::IsMember({"own", "kmeans_cost"}));
    bench->add_option("--out", bench_out, "Report path (default stdout)");
    bench->add_option("--format", bench_format, "csv | json | markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown", "md"}));

    // gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Write synthetic Gaussian-mixture data sets as CSV");
    shark::SynthConfig gen_cfg;
    std::size_t gen_replicates = 1;
    std::string gen_out = ".";
    gen->add_option("--n", gen_cfg.n, "Points");
    gen->add_option("--m", gen_cfg.m, "Informative features");
    gen->add_option("--k", gen_cfg.k, "Clusters");
    gen->add_option("--noise-fraction", gen_cfg.noise_fraction, "Noise features per informative feature");
    gen->add_option("--min-cluster-size", gen_cfg.min_cluster_size, "Smallest cluster");
    gen->add_option("--seed", gen_cfg.seed, "Seed of the first replicate");
    gen->add_option("--replicates", gen_replicates, "Number of data sets (seeds seed..seed+r-1)");
    gen->add_option("--out", gen_out, "Output directory");

    // lambda ------------------------------------------------------------
    auto* lam = app.add_subcommand("lambda", "Stability selection of the LW-k-means lambda");
    DataOptions lam_data;
    add_data_options(lam, lam_data);
    std::size_t lam_k = 0;
    std::uint64_t lam_seed = 0;
    shark::StabilityOptions lam_opts;
    lam->add_option("--k", lam_k, "Number of clusters (defaults to the label count)");
    lam->add_option("--seed", lam_seed, "Random seed");
    lam->add_option("--grid-size", lam_opts.grid_size, "Lambdas on [0, 1]")->check(CLI::Range(2, 100000));
    lam->add_option("--runs-per-lambda", lam_opts.runs_per_lambda, "Paired subsample fits per lambda");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) {
            const auto csv = load(fit_data);
            std::size_t k = fit_k;
            if (k == 0 && csv.labels) k = csv.labels->k;
            if (k == 0) throw std::invalid_argument("--k is required for unlabeled data");
            const auto algo = shark::algorithm_from_string(fit_algo);
            const auto X = shark::normalize(csv.X, shark::normalization_from_string(fit_data.normalize));
            shark::LwSettings lw;
            lw.params.lambda = fit_lambda;
            lw.mode = fit_fallback ? shark::LambdaMode::Fallback : shark::LambdaMode::Fixed;
            const auto outcome = shark::fit_algorithm(algo, X, k, fit_seed, lw);
            const auto& model = outcome.model;

            nlohmann::json j{{"algorithm", shark::to_string(algo)},
                             {"k", k},
                             {"objective", model.objective},
                             {"iterations", model.iterations},
                             {"converged", model.converged},
                             {"failed", model.failed},
                             {"weights", model.weights},
                             {"labels", model.labels.assign}};
            if (outcome.lambda) j["lambda"] = *outcome.lambda;
            if (csv.labels && !model.failed) j["ari"] = shark::ari(model.labels.assign, csv.labels->assign);

            std::string text;
            if (fit_format == "json") {
                text = j.dump(2) + "\n";
            } else {
                std::ostringstream out;
                out << "algorithm  " << j["algorithm"].get<std::string>() << "\n"
                    << "objective  " << model.objective << "\n"
                    << "iterations " << model.iterations << (model.converged ? " (converged)" : "") << "\n"
                    << "failed     " << (model.failed ? "yes" : "no") << "\n";
                if (j.contains("lambda")) out << "lambda     " << j["lambda"].get<double>() << "\n";
                if (j.contains("ari")) out << "ari        " << j["ari"].get<double>() << "\n";
                out << "weights   ";
                for (double w : model.weights) out << ' ' << w;
                out << "\nlabels    ";
                for (auto l : model.labels.assign) out << ' ' << l;
                out << "\n";
                text = out.str();
            }
            write_text(text, fit_out);
            return model.failed ? kDatasetAborted : kOk;
        }

        if (*bench) {
            shark::ExperimentConfig cfg;
            if (!bench_config.empty()) {
                cfg = shark::load_config(bench_config);
            } else {
                if (bench_dataset.empty()) throw std::invalid_argument("bench needs --config or --dataset");
                shark::DatasetSpec spec;
                spec.path = bench_dataset;
                spec.name = std::filesystem::path(bench_dataset).stem().string();
                spec.csv.has_header = bench_header;
                spec.csv.label_column = bench_label;
                spec.k = bench_k;
                cfg.datasets.push_back(spec);
                cfg.algorithms = {shark::Algorithm::KMeansPP, shark::Algorithm::Fwsa, shark::Algorithm::Lw,
                                  shark::Algorithm::Shark};
            }
            if (!bench_algos.empty()) {
                cfg.algorithms.clear();
                for (const auto& a : bench_algos) cfg.algorithms.push_back(shark::algorithm_from_string(a));
            }
            if (bench_runs) cfg.runs = *bench_runs;
            if (bench_seed) cfg.base_seed = *bench_seed;
            if (bench_noise)
                for (auto& d : cfg.datasets)
                    if (d.synth) {
                        d.synth->noise_fraction = *bench_noise;
                        d.name = d.synth->name();
                    }
            if (!bench_selection.empty()) cfg.selection = shark::selection_from_string(bench_selection);
            if (!bench_out.empty()) cfg.output = bench_out;
            if (!bench_format.empty()) cfg.format = bench_format;

            const auto report = shark::run_experiment(cfg);
            const auto format = shark::report_format_from_string(cfg.format);
            try {
                if (cfg.output)
                    shark::emit_report(report, format, *cfg.output);
                else
                    std::cout << shark::render_report(report, format);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kOutputError;
            }
            for (const auto& e : report.errors) std::cerr << "aborted: " << e << "\n";
            return report.errors.empty() ? kOk : kDatasetAborted;
        }

        if (*gen) {
            std::filesystem::create_directories(gen_out);
            for (std::size_t r = 0; r < gen_replicates; ++r) {
                auto cfg = gen_cfg;
                cfg.seed = gen_cfg.seed + r;
                const auto ds = shark::generate_dataset(cfg);
                const auto path = std::filesystem::path(gen_out) /
                                  (cfg.name() + "_seed" + std::to_string(cfg.seed) + ".csv");
                shark::save_csv(path, ds.X, &ds.truth);
                std::cout << path.string() << "\n";
            }
            return kOk;
        }

        if (*lam) {
            const auto csv = load(lam_data);
            std::size_t k = lam_k;
            if (k == 0 && csv.labels) k = csv.labels->k;
            if (k == 0) throw std::invalid_argument("--k is required for unlabeled data");
            const auto X = shark::normalize(csv.X, shark::normalization_from_string(lam_data.normalize));
            shark::Rng rng(lam_seed);
            const auto sel = shark::lambda_stability_select(X, k, rng, lam_opts);
            std::cout << "lambda " << sel.lambda << (sel.fell_back ? " (fallback)" : "") << "\n";
            for (std::size_t g = 0; g < sel.grid.size(); ++g)
                std::cout << sel.grid[g] << "\t" << sel.scores[g] << "\n";
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
