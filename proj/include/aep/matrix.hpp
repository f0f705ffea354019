#ifndef AEP_MATRIX_HPP
#define AEP_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace aep {

/// Dense row-major matrix of doubles. Rows are samples, columns features.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    bool empty() const { return rows == 0; }

    /// New matrix made of the given rows, in the given order (repeats allowed).
    Matrix gather(std::span<const std::size_t> row_ids) const {
        Matrix out(row_ids.size(), cols);
        for (std::size_t i = 0; i < row_ids.size(); ++i) {
            const double* src = data.data() + row_ids[i] * cols;
            std::copy(src, src + cols, out.data.data() + i * cols);
        }
        return out;
    }
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

/// In-place Cholesky factorization A = L L^T of a symmetric positive-definite
/// matrix stored densely. Returns false if a pivot is not strictly positive.
bool cholesky_factor(Matrix& a);

/// Solves L z = b for z given a lower-triangular factor from cholesky_factor.
void cholesky_forward_solve(const Matrix& l, std::span<const double> b, std::span<double> z);

} // namespace aep

#endif
