#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "shark/harness.hpp"

namespace shark {

CsvError::CsvError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      kind_(kind),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace

CsvDataset parse_csv(std::string_view text, const CsvOptions& options) {
    CsvDataset out;
    std::vector<double> values;
    std::vector<std::size_t> labels;
    std::unordered_map<std::string, std::size_t> class_ids;
    std::size_t width = 0, rows = 0, label_index = 0;
    bool header_pending = options.has_header;

    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);

        const auto fields = split_fields(line);
        if (width == 0) {
            width = fields.size();
            if (options.label_column) {
                const long c = *options.label_column;
                const long w = static_cast<long>(width);
                const long idx = c < 0 ? w + c : c;
                if (idx < 0 || idx >= w)
                    throw CsvError(CsvError::Kind::Ragged, line_no, "label column out of range");
                label_index = static_cast<std::size_t>(idx);
                if (width < 2)
                    throw CsvError(CsvError::Kind::Ragged, line_no, "no feature columns besides the label");
            }
        } else if (fields.size() != width) {
            throw CsvError(CsvError::Kind::Ragged, line_no,
                           "expected " + std::to_string(width) + " fields, found " +
                               std::to_string(fields.size()));
        }

        if (header_pending) {
            header_pending = false;
            for (std::size_t c = 0; c < fields.size(); ++c)
                if (!options.label_column || c != label_index) out.header.emplace_back(fields[c]);
            continue;
        }

        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (options.label_column && c == label_index) {
                std::string key(fields[c]);
                auto [it, inserted] = class_ids.try_emplace(key, class_ids.size());
                if (inserted) out.classes.push_back(key);
                labels.push_back(it->second);
                continue;
            }
            const auto v = parse_number(fields[c]);
            if (!v)
                throw CsvError(CsvError::Kind::NonNumeric, line_no,
                               "column " + std::to_string(c + 1) + " is not a finite number: '" +
                                   std::string(fields[c]) + "'");
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) throw CsvError(CsvError::Kind::Empty, 0, "no data rows");

    const std::size_t cols = options.label_column ? width - 1 : width;
    out.X = DataMatrix(rows, cols, std::move(values));
    if (options.label_column) out.labels = Labeling(std::move(labels), class_ids.size());
    return out;
}

CsvDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError(CsvError::Kind::Io, 0, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), options);
}

void save_csv(const std::filesystem::path& path, const DataMatrix& X, const Labeling* labels,
              bool header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << std::setprecision(17);
    if (header) {
        for (std::size_t v = 0; v < X.cols(); ++v) out << (v ? "," : "") << "f" << v;
        if (labels) out << ",label";
        out << '\n';
    }
    for (std::size_t i = 0; i < X.rows(); ++i) {
        for (std::size_t v = 0; v < X.cols(); ++v) out << (v ? "," : "") << X(i, v);
        if (labels) out << ',' << (*labels)[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace shark
