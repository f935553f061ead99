#ifndef MWK_DATASET_HPP
#define MWK_DATASET_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mwk {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    std::span<const double> flat() const noexcept { return data_; }
    std::span<double> flat() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/**
 * n x m data matrix with optional ground truth. `labels` are class ids per row;
 * `informative_mask[v]` is true for original (non-noise) features.
 */
struct Dataset {
    Matrix values;
    std::vector<std::string> feature_names;
    std::optional<std::vector<int>> labels;
    std::optional<std::vector<bool>> informative_mask;

    std::size_t n() const noexcept { return values.rows(); }
    std::size_t m() const noexcept { return values.cols(); }

    /// Throws mwk::Error if any invariant (finite values, consistent lengths) is broken.
    void validate() const;

    /// Builds a dataset from row vectors; feature names default to f0..f{m-1}.
    static Dataset from_rows(const std::vector<std::vector<double>>& rows);
};

std::vector<std::string> default_feature_names(std::size_t m);

/// Dataset restricted to the given row indices, in the given order. Metadata travels along.
Dataset select_rows(const Dataset& data, std::span<const std::size_t> rows);

/// Dataset restricted to the given columns, in the given order.
Dataset select_columns(const Dataset& data, std::span<const std::size_t> columns);

}  // namespace mwk

#endif
