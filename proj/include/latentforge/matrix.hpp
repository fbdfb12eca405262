#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace latentforge {

// Dense row-major matrix of 64-bit reals. This is the only numeric container
// in the project; everything (images, field curves, kernel matrices, encoder
// activations) is stored through it.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<double> flat() { return {data_.data(), data_.size()}; }
    std::span<const double> flat() const { return {data_.data(), data_.size()}; }

    bool operator==(const Matrix& other) const = default;

    // Throws NumericFailure if any entry is non-finite.
    void check_finite(const char* what) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// out = a * b. Sizes must agree; out is resized.
void matmul_into(const Matrix& a, const Matrix& b, Matrix& out);
Matrix matmul(const Matrix& a, const Matrix& b);

// a^T * b and a * b^T (used by backprop; avoids materializing transposes).
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// In-place Cholesky of a symmetric positive definite matrix: on success the
// lower triangle of `a` holds L with L L^T = input and the strict upper
// triangle is zeroed. Returns false (leaving `a` unspecified) if a
// non-positive pivot is met.
bool cholesky_in_place(Matrix& a);

// Solve L y = b and L^T x = y for lower-triangular L.
std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b);
std::vector<double> backward_substitute_transposed(const Matrix& lower, std::span<const double> b);

// Symmetric inverse from a Cholesky factor: returns (L L^T)^{-1}.
Matrix inverse_from_cholesky(const Matrix& lower);

} // namespace latentforge
