#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "shark/harness.hpp"

namespace shark {

ReportFormat report_format_from_string(std::string_view s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    if (s == "markdown" || s == "md") return ReportFormat::Markdown;
    throw std::invalid_argument("unknown report format: " + std::string(s));
}

namespace {

constexpr std::string_view kCsvHeader =
    "dataset,algorithm,n_datasets,n_failed_datasets,n_runs,n_failures,mean_ari,std_ari,rank";

// Shortest representation that parses back to the same double.
std::string exact(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string fixed3(double x) {
    if (std::isnan(x)) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

std::string fixed1(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", x);
    return buf;
}

std::string render_csv(const Report& report) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows)
        out << r.dataset << ',' << r.algorithm << ',' << r.n_datasets << ',' << r.n_failed_datasets << ','
            << r.result.n_runs << ',' << r.result.n_failures << ',' << exact(r.result.mean_ari) << ','
            << exact(r.result.std_ari) << ',' << exact(r.result.per_algorithm_rank) << '\n';
    return out.str();
}

nlohmann::json number_or_null(double x) { return std::isnan(x) ? nlohmann::json() : nlohmann::json(x); }

std::string render_json(const Report& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"dataset", r.dataset},
                        {"algorithm", r.algorithm},
                        {"n_datasets", r.n_datasets},
                        {"n_failed_datasets", r.n_failed_datasets},
                        {"n_runs", r.result.n_runs},
                        {"n_failures", r.result.n_failures},
                        {"mean_ari", number_or_null(r.result.mean_ari)},
                        {"std_ari", number_or_null(r.result.std_ari)},
                        {"rank", number_or_null(r.result.per_algorithm_rank)}});
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : report.runs)
        runs.push_back({{"algorithm", r.algorithm},
                        {"dataset", r.dataset},
                        {"seed", r.seed},
                        {"ari", r.ari},
                        {"objective", r.objective},
                        {"failed", r.failed},
                        {"wall_time_s", r.wall_time}});
    nlohmann::json j{{"provenance", report.provenance.is_null() ? nlohmann::json::object() : report.provenance},
                     {"algorithms", report.algorithms},
                     {"rows", rows},
                     {"mean_relative_rank", report.mean_relative_rank},
                     {"lambdas", report.lambdas},
                     {"errors", report.errors},
                     {"runs", runs}};
    return j.dump(2) + "\n";
}

std::string render_markdown(const Report& report) {
    std::ostringstream out;
    out << "| dataset |";
    for (const auto& a : report.algorithms) out << ' ' << a << " |";
    out << "\n|---|";
    for (std::size_t a = 0; a < report.algorithms.size(); ++a) out << "---|";
    out << '\n';

    // Rows keep the order of first appearance.
    std::vector<std::string> datasets;
    for (const auto& r : report.rows)
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            datasets.push_back(r.dataset);

    for (const auto& d : datasets) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : report.algorithms)
            if (const auto* r = report.find(d, a); r && !std::isnan(r->result.mean_ari))
                best = std::max(best, std::round(r->result.mean_ari * 1000.0));
        out << "| " << d << " |";
        for (const auto& a : report.algorithms) {
            const auto* r = report.find(d, a);
            if (!r || std::isnan(r->result.mean_ari)) {
                out << " failed |";
                continue;
            }
            std::string mean = fixed3(r->result.mean_ari);
            if (std::round(r->result.mean_ari * 1000.0) == best) mean = "**" + mean + "**";
            out << ' ' << mean << " ± " << fixed3(r->result.std_ari) << " |";
        }
        out << '\n';
    }
    if (!report.mean_relative_rank.empty()) {
        out << "| Mean Relative Rank |";
        for (const auto& a : report.algorithms) {
            auto it = report.mean_relative_rank.find(a);
            out << ' ' << (it == report.mean_relative_rank.end() ? "-" : fixed1(it->second)) << " |";
        }
        out << '\n';
    }
    return out.str();
}

double parse_field(std::string_view s) {
    if (s == "nan") return std::nan("");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("report csv: bad number '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Csv: return render_csv(report);
        case ReportFormat::Json: return render_json(report);
        case ReportFormat::Markdown: return render_markdown(report);
    }
    return {};
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report to " + path.string());
    out << render_report(report, format);
    if (!out) throw std::runtime_error("failed writing report to " + path.string());
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
    std::vector<ReportRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("report csv: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 9) throw std::invalid_argument("report csv: expected 9 fields");
        ReportRow r;
        r.dataset = f[0];
        r.algorithm = f[1];
        r.n_datasets = std::stoul(f[2]);
        r.n_failed_datasets = std::stoul(f[3]);
        r.result.n_runs = std::stoul(f[4]);
        r.result.n_failures = std::stoul(f[5]);
        r.result.mean_ari = parse_field(f[6]);
        r.result.std_ari = parse_field(f[7]);
        r.result.per_algorithm_rank = parse_field(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace shark
