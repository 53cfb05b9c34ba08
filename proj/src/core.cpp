#include "shark/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shark {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols)
        throw DimensionError("Matrix: value count does not match shape");
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> tmp;
    for (const auto& r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    const std::size_t cols = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw DimensionError("Matrix::from_rows: ragged rows");
        values.insert(values.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), cols, std::move(values));
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

bool Matrix::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
    Matrix out(rows_, cols.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t c = 0; c < cols.size(); ++c) out(i, c) = (*this)(i, cols[c]);
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(rows.size(), cols_);
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy_n(row(rows[r]).begin(), cols_, out.row(r).begin());
    return out;
}

Matrix Matrix::hconcat(const Matrix& other) const {
    if (other.rows_ != rows_) throw DimensionError("Matrix::hconcat: row count mismatch");
    Matrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto dst = out.row(i);
        std::copy(row(i).begin(), row(i).end(), dst.begin());
        std::copy(other.row(i).begin(), other.row(i).end(), dst.begin() + cols_);
    }
    return out;
}

void validate_data(const DataMatrix& X) {
    if (X.rows() == 0 || X.cols() == 0)
        throw std::invalid_argument("data matrix must have at least one row and one column");
    if (!X.all_finite()) throw std::invalid_argument("data matrix contains NaN or Inf");
}

Labeling::Labeling(std::vector<std::size_t> labels, std::size_t clusters)
    : assign(std::move(labels)), k(clusters) {
    for (auto l : assign)
        if (l >= k) throw std::invalid_argument("Labeling: label out of range [0, k)");
}

std::vector<std::size_t> Labeling::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : assign) ++sizes[l];
    return sizes;
}

std::size_t Labeling::non_empty_clusters() const {
    auto sizes = cluster_sizes();
    return static_cast<std::size_t>(
        std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    double sum = 0.0;
    for (double x : w_) {
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("WeightVector: weights must be finite and nonnegative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument("WeightVector: weights must sum to 1");
}

WeightVector WeightVector::uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("WeightVector::uniform: m must be positive");
    return WeightVector(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

WeightVector WeightVector::normalized(std::vector<double> w) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw std::invalid_argument("WeightVector::normalized: sum must be positive and finite");
    for (double& x : w) x /= sum;
    return WeightVector(std::move(w));
}

namespace {

struct ColumnStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double sd = 0.0;  // population
};

ColumnStats column_stats(const DataMatrix& X, std::size_t v) {
    ColumnStats s;
    const std::size_t n = X.rows();
    s.min = s.max = X(0, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = X(i, v);
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = X(i, v) - s.mean;
        ss += d * d;
    }
    s.sd = std::sqrt(ss / static_cast<double>(n));
    return s;
}

template <typename Scale>
DataMatrix normalize_columns(const DataMatrix& X, Scale scale_of) {
    validate_data(X);
    DataMatrix out(X.rows(), X.cols());
    for (std::size_t v = 0; v < X.cols(); ++v) {
        const ColumnStats s = column_stats(X, v);
        const double scale = scale_of(s);
        if (!(scale > 0.0)) continue;  // constant column stays zero
        for (std::size_t i = 0; i < X.rows(); ++i) out(i, v) = (X(i, v) - s.mean) / scale;
    }
    return out;
}

}  // namespace

DataMatrix range_normalize(const DataMatrix& X) {
    return normalize_columns(X, [](const ColumnStats& s) { return s.max - s.min; });
}

DataMatrix zscore_normalize(const DataMatrix& X) {
    return normalize_columns(X, [](const ColumnStats& s) { return s.sd; });
}

double weighted_sqdist(std::span<const double> x, std::span<const double> z,
                       std::span<const double> w) {
    if (x.size() != z.size() || x.size() != w.size())
        throw DimensionError("weighted_sqdist: dimension mismatch");
    double d = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        const double diff = x[v] - z[v];
        d += w[v] * diff * diff;
    }
    return d;
}

double sqdist(std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size()) throw DimensionError("sqdist: dimension mismatch");
    double d = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        const double diff = x[v] - z[v];
        d += diff * diff;
    }
    return d;
}

}  // namespace shark
