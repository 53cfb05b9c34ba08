#include "shark/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "shark/shapley.hpp"

namespace shark {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::KMeansPP: return "kmeans_pp";
        case Algorithm::Fwsa: return "fwsa";
        case Algorithm::Lw: return "lw";
        case Algorithm::Shark: return "shark";
    }
    return "unknown";
}

std::string_view to_string(Normalization n) {
    switch (n) {
        case Normalization::None: return "none";
        case Normalization::Range: return "range";
        case Normalization::ZScore: return "zscore";
    }
    return "unknown";
}

std::string_view to_string(LambdaMode m) {
    switch (m) {
        case LambdaMode::Auto: return "auto";
        case LambdaMode::Fixed: return "fixed";
        case LambdaMode::Fallback: return "fallback";
        case LambdaMode::Stability: return "stability";
    }
    return "unknown";
}

std::string_view to_string(Selection s) { return s == Selection::Own ? "own" : "kmeans_cost"; }

Algorithm algorithm_from_string(std::string_view s) {
    if (s == "kmeans_pp" || s == "kmeans++" || s == "kmeans") return Algorithm::KMeansPP;
    if (s == "fwsa") return Algorithm::Fwsa;
    if (s == "lw" || s == "lw_kmeans") return Algorithm::Lw;
    if (s == "shark") return Algorithm::Shark;
    throw std::invalid_argument("unknown algorithm: " + std::string(s));
}

Normalization normalization_from_string(std::string_view s) {
    if (s == "none") return Normalization::None;
    if (s == "range") return Normalization::Range;
    if (s == "zscore" || s == "z-score") return Normalization::ZScore;
    throw std::invalid_argument("unknown normalization: " + std::string(s));
}

LambdaMode lambda_mode_from_string(std::string_view s) {
    if (s == "auto") return LambdaMode::Auto;
    if (s == "fixed") return LambdaMode::Fixed;
    if (s == "fallback") return LambdaMode::Fallback;
    if (s == "stability") return LambdaMode::Stability;
    throw std::invalid_argument("unknown lambda mode: " + std::string(s));
}

Selection selection_from_string(std::string_view s) {
    if (s == "own") return Selection::Own;
    if (s == "kmeans_cost") return Selection::KMeansCost;
    throw std::invalid_argument("unknown selection criterion: " + std::string(s));
}

DataMatrix normalize(const DataMatrix& X, Normalization how) {
    switch (how) {
        case Normalization::Range: return range_normalize(X);
        case Normalization::ZScore: return zscore_normalize(X);
        case Normalization::None: break;
    }
    return X;
}

Normalization default_normalization(Algorithm a) {
    return a == Algorithm::Fwsa ? Normalization::ZScore : Normalization::Range;
}

InitMethod default_init(Algorithm a) {
    switch (a) {
        case Algorithm::KMeansPP:
        case Algorithm::Lw: return InitMethod::KMeansPlusPlus;
        case Algorithm::Fwsa:
        case Algorithm::Shark: break;
    }
    return InitMethod::UniformDistinct;
}

FitOutcome fit_algorithm(Algorithm algo, const DataMatrix& X, std::size_t k, std::uint64_t seed,
                         const LwSettings& lw, std::optional<InitMethod> init) {
    // Same seed, different algorithm: an unrelated stream.
    std::seed_seq mix{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(algo)};
    Rng rng(mix);
    const InitMethod method = init.value_or(default_init(algo));
    FitOutcome out;
    switch (algo) {
        case Algorithm::KMeansPP:
            out.model = run_kmeans(X, k, method, rng);
            break;
        case Algorithm::Fwsa:
            out.model = run_fwsa(X, k, rng, FwsaOptions{method, {}});
            break;
        case Algorithm::Shark:
            out.model = run_shark(X, k, rng, SharkOptions{method, {}});
            break;
        case Algorithm::Lw: {
            LwOptions opts;
            opts.init = method;
            if (lw.mode == LambdaMode::Fallback) {
                try {
                    auto fit = fit_lw_with_fallback(X, k, lw.params.lambda, rng, lw.params, opts);
                    out.model = std::move(fit.model);
                    out.lambda = fit.lambda;
                } catch (const std::runtime_error&) {
                    out.model.failed = true;
                }
            } else {
                out.model = run_lw(X, k, lw.params, rng, opts);
                out.lambda = lw.params.lambda;
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
    if (runs == 0) throw std::invalid_argument("config: runs must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("config: no algorithms selected");
    for (const auto& d : datasets) {
        if (d.path.has_value() == d.synth.has_value())
            throw std::invalid_argument("config: dataset '" + d.name +
                                        "' needs exactly one of path / synth");
        if (d.synth) d.synth->validate();
        if (d.replicates == 0) throw std::invalid_argument("config: replicates must be >= 1");
    }
    lw.params.validate();
}

Normalization ExperimentConfig::normalization_for(Algorithm a) const {
    auto it = normalization.find(a);
    return it != normalization.end() ? it->second : default_normalization(a);
}

InitMethod ExperimentConfig::init_for(Algorithm a) const {
    auto it = init.find(a);
    return it != init.end() ? it->second : default_init(a);
}

namespace {

SynthConfig parse_synth(const nlohmann::json& j) {
    SynthConfig s;
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.k = j.value("k", s.k);
    s.noise_fraction = j.value("noise_fraction", s.noise_fraction);
    s.min_cluster_size = j.value("min_cluster_size", s.min_cluster_size);
    s.seed = j.value("seed", s.seed);
    return s;
}

nlohmann::json synth_to_json(const SynthConfig& s) {
    return {{"n", s.n},
            {"m", s.m},
            {"k", s.k},
            {"noise_fraction", s.noise_fraction},
            {"min_cluster_size", s.min_cluster_size},
            {"seed", s.seed}};
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    for (const auto& d : j.at("datasets")) {
        if (d.contains("grid")) {
            // Shorthand for the twelve benchmark shapes.
            if (d.at("grid").get<std::string>() != "benchmark")
                throw std::invalid_argument("config: unknown grid '" + d.at("grid").get<std::string>() + "'");
            const double noise = d.value("noise_fraction", 0.0);
            for (auto synth : benchmark_grid(noise)) {
                synth.seed = d.value("seed", std::uint64_t{0});
                synth.min_cluster_size = d.value("min_cluster_size", synth.min_cluster_size);
                DatasetSpec spec;
                spec.synth = synth;
                spec.name = synth.name();
                spec.replicates = d.value("replicates", std::size_t{1});
                cfg.datasets.push_back(std::move(spec));
            }
            continue;
        }
        DatasetSpec spec;
        if (d.contains("synth")) {
            spec.synth = parse_synth(d.at("synth"));
            spec.name = d.value("name", spec.synth->name());
            spec.replicates = d.value("replicates", std::size_t{1});
        } else {
            std::filesystem::path p = d.at("path").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            spec.path = p;
            spec.name = d.value("name", p.stem().string());
            spec.csv.has_header = d.value("has_header", false);
            if (d.contains("label_column") && !d.at("label_column").is_null())
                spec.csv.label_column = d.at("label_column").get<long>();
            if (d.contains("k")) spec.k = d.at("k").get<std::size_t>();
        }
        cfg.datasets.push_back(std::move(spec));
    }
    for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    cfg.runs = j.value("runs", cfg.runs);
    cfg.base_seed = j.value("base_seed", cfg.base_seed);
    if (j.contains("normalization"))
        for (const auto& [algo, norm] : j.at("normalization").items())
            cfg.normalization[algorithm_from_string(algo)] = normalization_from_string(norm.get<std::string>());
    if (j.contains("init"))
        for (const auto& [algo, init] : j.at("init").items())
            cfg.init[algorithm_from_string(algo)] = init_method_from_string(init.get<std::string>());
    if (j.contains("lw")) {
        const auto& lw = j.at("lw");
        cfg.lw.mode = lambda_mode_from_string(lw.value("lambda_mode", std::string("auto")));
        cfg.lw.params.lambda = lw.value("lambda", cfg.lw.params.lambda);
        cfg.lw.params.beta = lw.value("beta", cfg.lw.params.beta);
        if (lw.contains("alpha") && !lw.at("alpha").is_null()) cfg.lw.params.alpha = lw.at("alpha").get<double>();
        cfg.lw.grid_size = lw.value("grid_size", cfg.lw.grid_size);
        cfg.lw.runs_per_lambda = lw.value("runs_per_lambda", cfg.lw.runs_per_lambda);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        if (o.contains("path")) {
            std::filesystem::path p = o.at("path").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            cfg.output = p;
        }
        cfg.format = o.value("format", cfg.format);
    }
    cfg.workers = j.value("workers", cfg.workers);
    cfg.selection = selection_from_string(j.value("selection", std::string(to_string(cfg.selection))));
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    return parse_config(nlohmann::json::parse(in), path.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json datasets = nlohmann::json::array();
    for (const auto& d : cfg.datasets) {
        nlohmann::json e{{"name", d.name}};
        if (d.synth) {
            e["synth"] = synth_to_json(*d.synth);
            e["replicates"] = d.replicates;
        } else {
            e["path"] = d.path->string();
            e["has_header"] = d.csv.has_header;
            e["label_column"] = d.csv.label_column ? nlohmann::json(*d.csv.label_column) : nlohmann::json();
            if (d.k) e["k"] = *d.k;
        }
        datasets.push_back(std::move(e));
    }
    nlohmann::json algorithms = nlohmann::json::array();
    nlohmann::json norms = nlohmann::json::object(), inits = nlohmann::json::object();
    for (auto a : cfg.algorithms) {
        algorithms.push_back(to_string(a));
        norms[std::string(to_string(a))] = to_string(cfg.normalization_for(a));
        inits[std::string(to_string(a))] = to_string(cfg.init_for(a));
    }
    return {{"datasets", datasets},
            {"algorithms", algorithms},
            {"runs", cfg.runs},
            {"base_seed", cfg.base_seed},
            {"selection", to_string(cfg.selection)},
            {"normalization", norms},
            {"init", inits},
            {"lw",
             {{"lambda_mode", to_string(cfg.lw.mode)},
              {"lambda", cfg.lw.params.lambda},
              {"beta", cfg.lw.params.beta},
              {"alpha", cfg.lw.params.alpha ? nlohmann::json(*cfg.lw.params.alpha) : nlohmann::json()},
              {"grid_size", cfg.lw.grid_size},
              {"runs_per_lambda", cfg.lw.runs_per_lambda}}}};
}

// ---------------------------------------------------------------------------
// Execution

const ReportRow* Report::find(std::string_view dataset, std::string_view algorithm) const {
    for (const auto& r : rows)
        if (r.dataset == dataset && r.algorithm == algorithm) return &r;
    return nullptr;
}

std::size_t default_workers() {
    if (const char* env = std::getenv("SHARK_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace {

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
    }
    if (error) std::rethrow_exception(error);
}

struct Instance {
    std::size_t spec = 0;  // index into cfg.datasets
    std::string id;
    DataMatrix X;
    Labeling truth;
};

struct Prepared {
    DataMatrix X;
    LwSettings lw;
};

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t workers = cfg.workers > 0 ? cfg.workers : default_workers();
    Report report;
    for (auto a : cfg.algorithms) report.algorithms.emplace_back(to_string(a));

    // Materialise every data set; a load failure drops that data set only.
    std::vector<Instance> instances;
    std::vector<bool> spec_ok(cfg.datasets.size(), true);
    for (std::size_t s = 0; s < cfg.datasets.size(); ++s) {
        const auto& spec = cfg.datasets[s];
        try {
            if (spec.synth) {
                for (std::size_t r = 0; r < spec.replicates; ++r) {
                    SynthConfig sc = *spec.synth;
                    sc.seed += r;
                    auto ds = generate_dataset(sc);
                    instances.push_back({s, spec.name + "#" + std::to_string(r), std::move(ds.X),
                                         std::move(ds.truth)});
                }
            } else {
                auto csv = load_csv(*spec.path, spec.csv);
                if (!csv.labels)
                    throw std::invalid_argument("no label column; scoring needs ground truth");
                validate_data(csv.X);
                Labeling truth = std::move(*csv.labels);
                if (spec.k && *spec.k != truth.k)
                    throw std::invalid_argument("configured k disagrees with the label column");
                instances.push_back({s, spec.name, std::move(csv.X), std::move(truth)});
            }
        } catch (const std::exception& e) {
            spec_ok[s] = false;
            report.errors.push_back(spec.name + ": " + e.what());
        }
    }

    // Per (instance, algorithm) preparation: normalisation and LW lambda.
    const std::size_t n_algos = cfg.algorithms.size();
    std::vector<Prepared> prepared(instances.size() * n_algos);
    parallel_for(prepared.size(), workers, [&](std::size_t t) {
        const auto& inst = instances[t / n_algos];
        const Algorithm algo = cfg.algorithms[t % n_algos];
        Prepared& p = prepared[t];
        p.X = normalize(inst.X, cfg.normalization_for(algo));
        p.lw = cfg.lw;
        if (algo != Algorithm::Lw) return;
        if (p.lw.mode == LambdaMode::Auto)
            p.lw.mode = cfg.datasets[inst.spec].synthetic() ? LambdaMode::Fallback : LambdaMode::Stability;
        if (p.lw.mode == LambdaMode::Stability) {
            StabilityOptions so;
            so.grid_size = p.lw.grid_size;
            so.runs_per_lambda = p.lw.runs_per_lambda;
            so.fallback_start = p.lw.params.lambda;
            so.params = p.lw.params;
            so.lw.init = cfg.init_for(algo);
            Rng rng(cfg.base_seed);
            p.lw.params.lambda = lambda_stability_select(p.X, inst.truth.k, rng, so).lambda;
            p.lw.mode = LambdaMode::Fixed;
        }
    });
    for (std::size_t t = 0; t < prepared.size(); ++t)
        if (cfg.algorithms[t % n_algos] == Algorithm::Lw && prepared[t].lw.mode == LambdaMode::Fixed)
            report.lambdas[instances[t / n_algos].id] = prepared[t].lw.params.lambda;

    // Every (instance, algorithm, run) fit.
    report.runs.resize(prepared.size() * cfg.runs);
    std::vector<std::optional<double>> run_lambda(report.runs.size());
    parallel_for(report.runs.size(), workers, [&](std::size_t t) {
        const std::size_t pair = t / cfg.runs, run = t % cfg.runs;
        const auto& inst = instances[pair / n_algos];
        const Algorithm algo = cfg.algorithms[pair % n_algos];
        const Prepared& p = prepared[pair];
        RunRecord& rec = report.runs[t];
        rec.algorithm = to_string(algo);
        rec.dataset = inst.id;
        rec.seed = cfg.base_seed + run;
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto fit = fit_algorithm(algo, p.X, inst.truth.k, rec.seed, p.lw, cfg.init_for(algo));
            rec.failed = fit.model.failed || fit.model.labels.non_empty_clusters() < inst.truth.k;
            rec.objective = cfg.selection == Selection::Own || rec.failed
                                ? fit.model.objective
                                : kmeans_objective(p.X, fit.model.labels, fit.model.centroids);
            run_lambda[t] = fit.lambda;
            rec.ari = rec.failed ? 0.0 : ari(fit.model.labels.assign, inst.truth.assign);
        } catch (const std::exception&) {
            rec.failed = true;
        }
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    // Aggregate per configuration: best-of-runs ARI per data set, then
    // mean / deviation across the configuration's data sets.
    std::map<std::string, std::map<std::string, double>> table;
    for (std::size_t s = 0; s < cfg.datasets.size(); ++s) {
        if (!spec_ok[s]) continue;
        for (std::size_t a = 0; a < n_algos; ++a) {
            ReportRow row;
            row.dataset = cfg.datasets[s].name;
            row.algorithm = to_string(cfg.algorithms[a]);
            std::vector<RunRecord> best;
            for (std::size_t i = 0; i < instances.size(); ++i) {
                if (instances[i].spec != s) continue;
                const auto first = report.runs.begin() + static_cast<std::ptrdiff_t>((i * n_algos + a) * cfg.runs);
                const std::span<const RunRecord> runs(&*first, cfg.runs);
                ++row.n_datasets;
                row.result.n_runs += runs.size();
                row.result.n_failures += static_cast<std::size_t>(
                    std::count_if(runs.begin(), runs.end(), [](const RunRecord& r) { return r.failed; }));
                try {
                    const RunRecord& winner = best_of_runs(runs);
                    best.push_back(winner);
                    const auto index = static_cast<std::size_t>(&winner - report.runs.data());
                    if (run_lambda[index] && !report.lambdas.contains(instances[i].id))
                        report.lambdas[instances[i].id] = *run_lambda[index];
                } catch (const NoSuccessfulRun&) {
                    ++row.n_failed_datasets;
                }
            }
            const auto agg = aggregate(best);
            row.result.mean_ari = agg.mean_ari;
            row.result.std_ari = agg.std_ari;
            row.result.per_algorithm_rank = std::nan("");
            table[row.dataset][row.algorithm] = row.result.mean_ari;
            report.rows.push_back(std::move(row));
        }
    }

    // Ranks only over configurations where every algorithm has a score.
    std::map<std::string, std::map<std::string, double>> complete;
    for (const auto& [config, scores] : table)
        if (std::none_of(scores.begin(), scores.end(), [](const auto& kv) { return std::isnan(kv.second); }))
            complete.emplace(config, scores);
    for (auto& row : report.rows) {
        auto it = complete.find(row.dataset);
        if (it == complete.end()) continue;
        std::vector<double> scores;
        std::size_t self = 0;
        for (const auto& [algo, score] : it->second) {
            if (algo == row.algorithm) self = scores.size();
            scores.push_back(score);
        }
        row.result.per_algorithm_rank = descending_ranks(scores)[self];
    }
    if (!complete.empty()) report.mean_relative_rank = mean_relative_rank(complete);

    report.provenance = {
        {"library", "shark"},
        {"version", kVersion},
        {"config", config_to_json(cfg)},
        {"seeds",
         {{"base_seed", cfg.base_seed},
          {"runs", cfg.runs},
          {"rule", "run i of every (data set, algorithm) pair uses seed base_seed + i; "
                   "synthetic replicate r uses synth.seed + r; the random stream of a run "
                   "is derived from its seed and the algorithm, so algorithms do not share "
                   "initial centroids"}}},
        {"selection", cfg.selection == Selection::Own
                          ? "per data set, the non-failed run with the lowest algorithm objective"
                          : "per data set, the non-failed run with the lowest k-means cost"},
    };
    return report;
}

}  // namespace shark
