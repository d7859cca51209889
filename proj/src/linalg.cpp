#include "hsc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hsc {

namespace {

constexpr double kRankTol = 1e-12;  // relative to the largest factor diagonal

struct Reflector {
    std::vector<double> v;
    double tau = 0.0;
};

// Householder vector annihilating x[1:]. Returns the resulting leading entry.
Reflector make_reflector(std::span<const double> x, double& alpha_out) {
    Reflector h;
    h.v.assign(x.begin(), x.end());
    double norm = 0.0;
    for (double e : x) norm += e * e;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        alpha_out = 0.0;
        return h;
    }
    const double alpha = x[0] >= 0.0 ? -norm : norm;
    h.v[0] -= alpha;
    double vtv = 0.0;
    for (double e : h.v) vtv += e * e;
    h.tau = vtv > 0.0 ? 2.0 / vtv : 0.0;
    alpha_out = alpha;
    return h;
}

// w <- (I - tau v v^T) w for the subvector w[offset:].
void apply_reflector(const Reflector& h, std::vector<double>& w, std::size_t offset) {
    if (h.tau == 0.0) return;
    double dot = 0.0;
    for (std::size_t i = 0; i < h.v.size(); ++i) dot += h.v[i] * w[offset + i];
    const double s = h.tau * dot;
    for (std::size_t i = 0; i < h.v.size(); ++i) w[offset + i] -= s * h.v[i];
}

// Plain (unpivoted) Householder QR of a tall matrix held column-wise.
// Factors in place; returns the reflectors and leaves R in the upper triangle.
std::vector<Reflector> qr_in_place(std::vector<std::vector<double>>& cols, std::size_t m,
                                   std::size_t n) {
    std::vector<Reflector> hs;
    hs.reserve(n);
    for (std::size_t k = 0; k < n && k < m; ++k) {
        std::span<const double> tail(cols[k].data() + k, m - k);
        double alpha = 0.0;
        Reflector h = make_reflector(tail, alpha);
        cols[k][k] = alpha;
        std::fill(cols[k].begin() + static_cast<std::ptrdiff_t>(k) + 1, cols[k].end(), 0.0);
        for (std::size_t j = k + 1; j < n; ++j) apply_reflector(h, cols[j], k);
        hs.push_back(std::move(h));
    }
    return hs;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ * cols_ != data_.size())
        throw ShapeMismatch("DenseMatrix: rows*cols != data length");
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw ShapeMismatch("multiply: vector length != cols");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> lstsq(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw ShapeMismatch("lstsq: rhs length != rows");
    if (n == 0) return {};

    // Column-pivoted Householder QR, columns stored separately for cheap swaps.
    std::vector<std::vector<double>> cols(n, std::vector<double>(m));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) cols[j][i] = a(i, j);
    std::vector<double> c(b.begin(), b.end());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    const std::size_t kmax = std::min(m, n);
    std::size_t rank = 0;
    double dmax = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
        // pivot: remaining column with the largest tail norm (first on ties)
        std::size_t best = k;
        double best_norm = -1.0;
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += cols[j][i] * cols[j][i];
            if (s > best_norm) {
                best_norm = s;
                best = j;
            }
        }
        if (best != k) {
            std::swap(cols[best], cols[k]);
            std::swap(perm[best], perm[k]);
        }
        std::span<const double> tail(cols[k].data() + k, m - k);
        double alpha = 0.0;
        Reflector h = make_reflector(tail, alpha);
        cols[k][k] = alpha;
        std::fill(cols[k].begin() + static_cast<std::ptrdiff_t>(k) + 1, cols[k].end(), 0.0);
        for (std::size_t j = k + 1; j < n; ++j) apply_reflector(h, cols[j], k);
        apply_reflector(h, c, k);

        if (k == 0) dmax = std::abs(alpha);
        if (std::abs(alpha) <= kRankTol * dmax || dmax == 0.0) break;
        rank = k + 1;
    }

    std::vector<double> x(n, 0.0);
    if (rank == 0) return x;

    std::vector<double> y(n, 0.0);
    if (rank == n) {
        // full column rank: back substitution on R y = c
        for (std::size_t ii = n; ii-- > 0;) {
            double acc = c[ii];
            for (std::size_t j = ii + 1; j < n; ++j) acc -= cols[j][ii] * y[j];
            y[ii] = acc / cols[ii][ii];
        }
    } else {
        // Minimum-norm completion: QR of [R11 R12]^T gives T = R2^T Q2^T, so the
        // constraint T y = c1 has min-norm solution y = Q2 (R2^{-T} c1).
        std::vector<std::vector<double>> tcols(rank, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = i; j < n; ++j) tcols[i][j] = cols[j][i];
        auto hs = qr_in_place(tcols, n, rank);

        std::vector<double> u(n, 0.0);
        for (std::size_t i = 0; i < rank; ++i) {  // forward substitution on R2^T u = c1
            double acc = c[i];
            for (std::size_t j = 0; j < i; ++j) acc -= tcols[i][j] * u[j];
            u[i] = acc / tcols[i][i];
        }
        for (std::size_t k = hs.size(); k-- > 0;) apply_reflector(hs[k], u, k);
        y = std::move(u);
    }

    for (std::size_t j = 0; j < n; ++j) x[perm[j]] = y[j];
    return x;
}

std::vector<double> modified_lstsq(const DenseMatrix& a, std::span<const double> b,
                                   std::span<const std::size_t> clamp_indices) {
    std::vector<double> x = lstsq(a, b);
    for (std::size_t idx : clamp_indices) {
        if (idx >= x.size()) throw ShapeMismatch("modified_lstsq: clamp index out of range");
        if (x[idx] < 0.0) x[idx] = 0.0;
    }
    return x;
}

double residual(const DenseMatrix& a, std::span<const double> x, std::span<const double> b) {
    if (b.size() != a.rows()) throw ShapeMismatch("residual: rhs length != rows");
    std::vector<double> ax = a.multiply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = ax[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace hsc
