#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "shark/baselines.hpp"
#include "shark/core.hpp"
#include "shark/eval.hpp"
#include "shark/lloyd.hpp"
#include "shark/synth.hpp"

namespace shark {

inline constexpr std::string_view kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// CSV data sets

class CsvError : public std::runtime_error {
public:
    enum class Kind { Io, Empty, Ragged, NonNumeric };
    CsvError(Kind kind, std::size_t line, const std::string& what);
    Kind kind() const { return kind_; }
    // 1-based; 0 when not tied to a line.
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

struct CsvOptions {
    bool has_header = false;
    // Negative values count from the last column (-1 is the last one).
    std::optional<long> label_column;
};

struct CsvDataset {
    DataMatrix X;
    std::optional<Labeling> labels;
    std::vector<std::string> header;
    // Label strings in factorisation order.
    std::vector<std::string> classes;
};

CsvDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
CsvDataset parse_csv(std::string_view text, const CsvOptions& options = {});
// Features first, then a trailing integer label column when given.
void save_csv(const std::filesystem::path& path, const DataMatrix& X,
              const Labeling* labels = nullptr, bool header = true);

// ---------------------------------------------------------------------------
// Algorithms as seen by the harness

enum class Algorithm { KMeansPP, Fwsa, Lw, Shark };
enum class Normalization { None, Range, ZScore };
enum class LambdaMode { Auto, Fixed, Fallback, Stability };
enum class Selection { Own, KMeansCost };

std::string_view to_string(Algorithm a);
std::string_view to_string(Normalization n);
std::string_view to_string(LambdaMode m);
std::string_view to_string(Selection s);
Algorithm algorithm_from_string(std::string_view s);
Normalization normalization_from_string(std::string_view s);
LambdaMode lambda_mode_from_string(std::string_view s);
Selection selection_from_string(std::string_view s);

DataMatrix normalize(const DataMatrix& X, Normalization how);
// Range for everything except FWSA, which uses the z-score.
Normalization default_normalization(Algorithm a);
InitMethod default_init(Algorithm a);

struct LwSettings {
    LambdaMode mode = LambdaMode::Auto;
    LwParams params;  // params.lambda is the fixed value / fallback start
    std::size_t grid_size = 20;
    std::size_t runs_per_lambda = 10;
};

struct FitOutcome {
    ClusterModel model;
    std::optional<double> lambda;  // LW only
};

// One seeded fit on already-normalised data. The random stream depends on
// both `seed` and `algo`. LW uses `lw.params.lambda`
// unless `mode` is Fallback, in which case it backs off by decades.
FitOutcome fit_algorithm(Algorithm algo, const DataMatrix& X, std::size_t k, std::uint64_t seed,
                         const LwSettings& lw = {}, std::optional<InitMethod> init = std::nullopt);

// ---------------------------------------------------------------------------
// Experiments

struct DatasetSpec {
    std::string name;
    // Exactly one of path / synth is set.
    std::optional<std::filesystem::path> path;
    CsvOptions csv;
    std::optional<std::size_t> k;  // required for unlabeled files
    std::optional<SynthConfig> synth;
    std::size_t replicates = 1;  // synthetic only; replicate r uses seed + r

    bool synthetic() const { return synth.has_value(); }
};

struct ExperimentConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<Algorithm> algorithms;
    std::size_t runs = 25;
    std::uint64_t base_seed = 0;
    std::map<Algorithm, Normalization> normalization;  // overrides
    std::map<Algorithm, InitMethod> init;              // overrides
    LwSettings lw;
    std::optional<std::filesystem::path> output;
    std::string format = "markdown";
    std::size_t workers = 0;  // 0: SHARK_WORKERS or hardware concurrency
    // Criterion for best-of-runs: each algorithm's own objective, or the plain
    // k-means cost of the final partition on that algorithm's normalised data.
    Selection selection = Selection::Own;

    void validate() const;
    Normalization normalization_for(Algorithm a) const;
    InitMethod init_for(Algorithm a) const;
};

// Parses the JSON config dialect (see README). `base_dir` resolves relative
// dataset paths.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct ReportRow {
    std::string dataset;  // configuration name
    std::string algorithm;
    // Mean / deviation over data sets of the best-of-runs ARI.
    AggregateResult result;
    std::size_t n_datasets = 0;
    // Data sets where every run failed.
    std::size_t n_failed_datasets = 0;
};

struct Report {
    std::vector<std::string> algorithms;
    std::vector<ReportRow> rows;
    std::map<std::string, double> mean_relative_rank;
    std::vector<RunRecord> runs;
    // LW lambda per data set instance: the selected value, or under fallback
    // the one used by the best run.
    std::map<std::string, double> lambdas;
    std::vector<std::string> errors;  // aborted data sets
    nlohmann::json provenance;

    const ReportRow* find(std::string_view dataset, std::string_view algorithm) const;
};

// Worker count: SHARK_WORKERS if set, else hardware concurrency (>= 1).
std::size_t default_workers();

Report run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Json, Markdown };
ReportFormat report_format_from_string(std::string_view s);

std::string render_report(const Report& report, ReportFormat format);
// Throws std::runtime_error when the path cannot be written.
void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path);
// Reads the rows back from the CSV rendering.
std::vector<ReportRow> parse_report_csv(std::string_view text);

}  // namespace shark
