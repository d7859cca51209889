#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hsc/errors.hpp"

namespace hsc {

/// Small dense row-major matrix. Sized for horizon-scale systems
/// (tens of rows/columns), not for anything large.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }

    std::vector<double> multiply(std::span<const double> x) const;
    DenseMatrix transposed() const;

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// argmin_x ||a*x - b||_2 via Householder QR with column pivoting.
/// Rank-deficient systems (diagonal threshold 1e-12 relative) fall back to
/// the minimum-norm minimizer.
std::vector<double> lstsq(const DenseMatrix& a, std::span<const double> b);

/// lstsq, then overwrite negative entries at the given solution indices with
/// zero. Entries outside clamp_indices are left untouched.
std::vector<double> modified_lstsq(const DenseMatrix& a, std::span<const double> b,
                                   std::span<const std::size_t> clamp_indices);

/// ||a*x - b||_2
double residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b);

}  // namespace hsc
