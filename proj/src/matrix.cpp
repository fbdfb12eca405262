#include "latentforge/matrix.hpp"

#include "latentforge/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace latentforge {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

void Matrix::check_finite(const char* what) const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw NumericFailure(std::string(what) + ": non-finite entry");
        }
    }
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Dot product with eight independent accumulators. The lane-parallel order is
// fixed (deterministic across runs) and lets the compiler vectorize the
// reduction without fast-math reassociation.
double dot_kernel(const double* a, const double* b, std::size_t n) {
    double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
        acc[4] += a[i + 4] * b[i + 4];
        acc[5] += a[i + 5] * b[i + 5];
        acc[6] += a[i + 6] * b[i + 6];
        acc[7] += a[i + 7] * b[i + 7];
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return (((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]))) +
           tail;
}

} // namespace

void matmul_into(const Matrix& a, const Matrix& b, Matrix& out) {
    require(a.cols() == b.rows(), "matmul: inner dimensions differ");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    out = Matrix(n, m);
    // i-k-j order: the inner loop runs over contiguous rows of b and out.
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i).data();
        double* orow = out.row(i).data();
        for (std::size_t p = 0; p < k; ++p) {
            const double aik = arow[p];
            if (aik == 0.0) continue;
            const double* brow = b.row(p).data();
            for (std::size_t j = 0; j < m; ++j) orow[j] += aik * brow[j];
        }
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix out;
    matmul_into(a, b, out);
    return out;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "matmul_at_b: row counts differ");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix out(k, m);
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i).data();
        const double* brow = b.row(i).data();
        for (std::size_t p = 0; p < k; ++p) {
            const double v = arow[p];
            if (v == 0.0) continue;
            double* orow = out.row(p).data();
            for (std::size_t j = 0; j < m; ++j) orow[j] += v * brow[j];
        }
    }
    return out;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_a_bt: column counts differ");
    const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
    Matrix out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.row(i).data();
        double* orow = out.row(i).data();
        for (std::size_t j = 0; j < m; ++j) orow[j] = dot_kernel(arow, b.row(j).data(), k);
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

bool cholesky_in_place(Matrix& a) {
    require(a.rows() == a.cols(), "cholesky: matrix not square");
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        const double* jrow = a.row(j).data();
        const double diag = a(j, j) - dot_kernel(jrow, jrow, j);
        if (!(diag > 0.0)) return false;
        const double ljj = std::sqrt(diag);
        a(j, j) = ljj;
        const double inv = 1.0 / ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            const double* irow = a.row(i).data();
            a(i, j) = (a(i, j) - dot_kernel(irow, jrow, j)) * inv;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = 0.0;
    return true;
}

std::vector<double> forward_substitute(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    require(b.size() == n, "forward_substitute: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = lower.row(i).data();
        y[i] = (b[i] - dot_kernel(row, y.data(), i)) / row[i];
    }
    return y;
}

std::vector<double> backward_substitute_transposed(const Matrix& lower, std::span<const double> b) {
    const std::size_t n = lower.rows();
    require(b.size() == n, "backward_substitute: size mismatch");
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t ii = n; ii-- > 0;) {
        x[ii] /= lower(ii, ii);
        const double xi = x[ii];
        for (std::size_t p = 0; p < ii; ++p) x[p] -= lower(ii, p) * xi;
    }
    return x;
}

Matrix inverse_from_cholesky(const Matrix& lower) {
    const std::size_t n = lower.rows();
    // V = L^{-1} (lower triangular), built column by column, then K^{-1} = V^T V.
    Matrix v(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        col.assign(n, 0.0);
        col[j] = 1.0 / lower(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            const double* irow = lower.row(i).data();
            col[i] = -dot_kernel(irow + j, col.data() + j, i - j) / irow[i];
        }
        for (std::size_t i = j; i < n; ++i) v(i, j) = col[i];
    }
    // vt rows are contiguous columns of V; entry (i,j) of the inverse is the
    // dot of vt rows i and j over the shared tail k >= max(i,j).
    Matrix vt = transpose(v);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* ri = vt.row(i).data();
        for (std::size_t j = i; j < n; ++j) {
            const double acc = dot_kernel(ri + j, vt.row(j).data() + j, n - j);
            out(i, j) = acc;
            out(j, i) = acc;
        }
    }
    return out;
}

} // namespace latentforge
