#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shark {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Dense row-major matrix. Used for both the data set (n x m) and the
// centroids (k x m).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }

    std::vector<double> column(std::size_t j) const;
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const;

    // Keeps the listed columns, in the given order.
    Matrix select_columns(std::span<const std::size_t> cols) const;
    Matrix select_rows(std::span<const std::size_t> rows) const;
    // Appends the columns of `other` to the right; row counts must agree.
    Matrix hconcat(const Matrix& other) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

using DataMatrix = Matrix;
using Centroids = Matrix;

// Throws std::invalid_argument unless X is non-empty and every entry is finite.
void validate_data(const DataMatrix& X);

struct Labeling {
    std::vector<std::size_t> assign;
    std::size_t k = 0;

    Labeling() = default;
    Labeling(std::vector<std::size_t> labels, std::size_t clusters);

    std::size_t size() const { return assign.size(); }
    std::size_t operator[](std::size_t i) const { return assign[i]; }

    std::vector<std::size_t> cluster_sizes() const;
    std::size_t non_empty_clusters() const;
    // True iff all k clusters have at least one member.
    bool valid() const { return non_empty_clusters() == k; }

    friend bool operator==(const Labeling&, const Labeling&) = default;
};

// Nonnegative feature weights summing to one.
class WeightVector {
public:
    static constexpr double kSumTolerance = 1e-9;

    WeightVector() = default;
    // Validates the simplex invariant; throws std::invalid_argument otherwise.
    explicit WeightVector(std::vector<double> w);

    static WeightVector uniform(std::size_t m);
    // Rescales nonnegative entries with a positive sum onto the simplex.
    static WeightVector normalized(std::vector<double> w);

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t v) const { return w_[v]; }
    std::span<const double> span() const { return w_; }
    const std::vector<double>& values() const { return w_; }
    operator std::span<const double>() const { return w_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> w_;
};

// (x_iv - mean_v) / (max_v - min_v); constant columns become zero.
DataMatrix range_normalize(const DataMatrix& X);
// (x_iv - mean_v) / sd_v with the population (1/n) deviation; constant
// columns become zero.
DataMatrix zscore_normalize(const DataMatrix& X);

double weighted_sqdist(std::span<const double> x, std::span<const double> z,
                       std::span<const double> w);
double sqdist(std::span<const double> x, std::span<const double> z);

}  // namespace shark
