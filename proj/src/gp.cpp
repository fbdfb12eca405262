#include "latentforge/gp.hpp"

#include "latentforge/adam.hpp"
#include "latentforge/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace latentforge {

double KernelHyper::amplitude() const { return std::exp(log_amplitude); }
double KernelHyper::lengthscale() const { return std::exp(log_lengthscale); }
double KernelHyper::noise() const { return std::exp(log_noise); }

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178; // 0.5 * log(2*pi)

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        acc += d * d;
    }
    return acc;
}

// Pairwise squared distances of the rows of x (symmetric, zero diagonal).
Matrix self_squared_distances(const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix d2(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = squared_distance(x.row(i), x.row(j));
            d2(i, j) = d;
            d2(j, i) = d;
        }
    }
    return d2;
}

struct FactorizedKernel {
    Matrix chol;    // L
    Matrix rbf;     // amplitude * exp(-d^2 / 2l^2), no diagonal terms
    double jitter = 0.0;
};

// Builds K = rbf + (noise + jitter) I from pairwise squared distances and
// factorizes it, escalating jitter from 1e-6*amplitude by 10x up to
// 1e-2*amplitude.
FactorizedKernel factorize_from_distances(const Matrix& d2, const KernelHyper& hyper) {
    const std::size_t n = d2.rows();
    const double amp = hyper.amplitude();
    const double inv2l2 = 0.5 / (hyper.lengthscale() * hyper.lengthscale());
    FactorizedKernel fk;
    fk.rbf = d2;
    for (double& v : fk.rbf.flat()) v = amp * std::exp(-v * inv2l2);

    const double noise = hyper.noise();
    for (double jitter = 1e-6 * amp; jitter <= 1e-2 * amp * (1.0 + 1e-12); jitter *= 10.0) {
        Matrix k = fk.rbf;
        for (std::size_t i = 0; i < n; ++i) k(i, i) += noise + jitter;
        if (cholesky_in_place(k)) {
            fk.chol = std::move(k);
            fk.jitter = jitter;
            return fk;
        }
    }
    throw NumericFailure("gp: kernel not positive definite after jitter escalation to 1e-2*amplitude (n=" +
                         std::to_string(n) + ")");
}

FactorizedKernel factorize_train_kernel(const Matrix& x, const KernelHyper& hyper) {
    return factorize_from_distances(self_squared_distances(x), hyper);
}

double lml_from_factorization(const Matrix& chol, std::span<const double> alpha,
                              std::span<const double> y) {
    const std::size_t n = chol.rows();
    double fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) fit += y[i] * alpha[i];
    double logdet = 0.0;
    for (std::size_t i = 0; i < n; ++i) logdet += std::log(chol(i, i));
    return -0.5 * fit - logdet - static_cast<double>(n) * kHalfLog2Pi;
}

double log_normal_logpdf(double x, const PriorSpec& prior) {
    const double t = (std::log(x) - prior.mean) / prior.stdev;
    return -std::log(x) - std::log(prior.stdev) - kHalfLog2Pi - 0.5 * t * t;
}

// d/d(log x) of log_normal_logpdf(x = e^theta).
double log_normal_logpdf_dtheta(double log_x, const PriorSpec& prior) {
    return -1.0 - (log_x - prior.mean) / (prior.stdev * prior.stdev);
}

} // namespace

Matrix rbf_kernel(const Matrix& a, const Matrix& b, const KernelHyper& hyper, bool include_noise) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("rbf_kernel: input dimensions differ");
    if (include_noise && a.rows() != b.rows())
        throw std::invalid_argument("rbf_kernel: include_noise requires a square kernel (same point set)");

    const double amp = hyper.amplitude();
    const double inv2l2 = 0.5 / (hyper.lengthscale() * hyper.lengthscale());
    Matrix k(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            k(i, j) = amp * std::exp(-squared_distance(a.row(i), b.row(j)) * inv2l2);
        }
    }
    if (include_noise) {
        const double noise = hyper.noise();
        for (std::size_t i = 0; i < k.rows(); ++i) k(i, i) += noise;
    }
    return k;
}

GpFit gp_fit(Matrix X, std::vector<double> y, const KernelHyper& hyper) {
    if (X.rows() == 0 || X.rows() != y.size())
        throw std::invalid_argument("gp_fit: need n >= 1 inputs with matching targets");
    FactorizedKernel fk = factorize_train_kernel(X, hyper);
    GpFit fit;
    fit.alpha_vector = backward_substitute_transposed(fk.chol, forward_substitute(fk.chol, y));
    fit.cholesky_factor = std::move(fk.chol);
    fit.jitter = fk.jitter;
    fit.train_inputs = std::move(X);
    fit.train_targets = std::move(y);
    fit.hyper = hyper;
    return fit;
}

double log_marginal_likelihood(const Matrix& X, const std::vector<double>& y,
                               const KernelHyper& hyper) {
    if (X.rows() == 0 || X.rows() != y.size())
        throw std::invalid_argument("log_marginal_likelihood: need n >= 1 with matching targets");
    FactorizedKernel fk = factorize_train_kernel(X, hyper);
    const std::vector<double> alpha =
        backward_substitute_transposed(fk.chol, forward_substitute(fk.chol, y));
    return lml_from_factorization(fk.chol, alpha, y);
}

double log_prior(const KernelHyper& hyper, const PriorSpec& prior) {
    return log_normal_logpdf(hyper.amplitude(), prior) +
           log_normal_logpdf(hyper.lengthscale(), prior);
}

PosteriorPrediction gp_predict(const GpFit& fit, const Matrix& queries, bool full_covariance) {
    if (queries.cols() != fit.train_inputs.cols())
        throw std::invalid_argument("gp_predict: query dimension does not match training inputs");

    const Matrix ks = rbf_kernel(queries, fit.train_inputs, fit.hyper, false);
    const std::size_t m = queries.rows(), n = fit.train_inputs.rows();

    PosteriorPrediction pred;
    pred.mean.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* row = ks.row(i).data();
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * fit.alpha_vector[j];
        pred.mean[i] = acc;
    }

    // v_i = L^{-1} k_i gives var_i = k(x,x) - |v_i|^2.
    const double amp = fit.hyper.amplitude();
    pred.variance.resize(m);
    Matrix v(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const std::vector<double> vi = forward_substitute(fit.cholesky_factor, ks.row(i));
        double norm2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            v(i, j) = vi[j];
            norm2 += vi[j] * vi[j];
        }
        pred.variance[i] = std::max(amp - norm2, 0.0);
    }

    if (full_covariance) {
        Matrix cov = rbf_kernel(queries, queries, fit.hyper, false);
        const Matrix vvt = matmul_a_bt(v, v);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) cov(i, j) -= vvt(i, j);
        pred.covariance = std::move(cov);
    }
    return pred;
}

MapObjectiveGrad map_objective_gradients(const Matrix& X, const std::vector<double>& y,
                                         const KernelHyper& hyper, const PriorSpec& prior,
                                         bool want_input_grad) {
    const std::size_t n = X.rows();
    if (n == 0 || n != y.size())
        throw std::invalid_argument("map_objective_gradients: need n >= 1 with matching targets");

    const double l2 = hyper.lengthscale() * hyper.lengthscale();
    const Matrix d2 = self_squared_distances(X);
    FactorizedKernel fk = factorize_from_distances(d2, hyper);

    const std::vector<double> alpha =
        backward_substitute_transposed(fk.chol, forward_substitute(fk.chol, y));

    MapObjectiveGrad g;
    g.log_marginal = lml_from_factorization(fk.chol, alpha, y);
    g.objective = g.log_marginal + log_prior(hyper, prior) +
                  log_normal_logpdf(hyper.noise(), prior);

    // W = alpha alpha^T - K^{-1}; dLML/dtheta = 0.5 tr(W dK/dtheta).
    Matrix w = inverse_from_cholesky(fk.chol);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = w.row(i).data();
        for (std::size_t j = 0; j < n; ++j) row[j] = alpha[i] * alpha[j] - row[j];
    }

    double tr_w = 0.0, tr_w_rbf = 0.0, tr_w_rbf_d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* wrow = w.row(i).data();
        const double* krow = fk.rbf.row(i).data();
        const double* drow = d2.row(i).data();
        tr_w += wrow[i];
        for (std::size_t j = 0; j < n; ++j) {
            tr_w_rbf += wrow[j] * krow[j];
            tr_w_rbf_d2 += wrow[j] * krow[j] * drow[j];
        }
    }
    // The jitter is proportional to amplitude, so it contributes to the
    // amplitude derivative; keeping it makes finite differences agree exactly.
    g.d_log_amplitude = 0.5 * (tr_w_rbf + fk.jitter * tr_w) +
                        log_normal_logpdf_dtheta(hyper.log_amplitude, prior);
    g.d_log_lengthscale = 0.5 * tr_w_rbf_d2 / l2 +
                          log_normal_logpdf_dtheta(hyper.log_lengthscale, prior);
    g.d_log_noise = 0.5 * tr_w * hyper.noise() +
                    log_normal_logpdf_dtheta(hyper.log_noise, prior);

    if (want_input_grad) {
        // dLML/dX_pk = -(1/l^2) sum_q M_pq (X_pk - X_qk), M = W .* K_rbf.
        Matrix m = fk.rbf;
        for (std::size_t i = 0; i < n * n; ++i) m.flat()[i] *= w.flat()[i];
        std::vector<double> rowsum(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* mrow = m.row(i).data();
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += mrow[j];
            rowsum[i] = acc;
        }
        const Matrix mx = matmul(m, X);
        g.d_inputs = Matrix(n, X.cols());
        for (std::size_t i = 0; i < n; ++i) {
            const double* xrow = X.row(i).data();
            const double* mrow = mx.row(i).data();
            double* grow = g.d_inputs.row(i).data();
            for (std::size_t k = 0; k < X.cols(); ++k)
                grow[k] = -(xrow[k] * rowsum[i] - mrow[k]) / l2;
        }
    }
    return g;
}

KernelHyper gp_fit_hyperparams(const Matrix& X, const std::vector<double>& y, KernelHyper init,
                               const PriorSpec& prior, std::size_t steps, double lr,
                               std::vector<double>* objective_trace) {
    if (steps == 0) throw std::invalid_argument("gp_fit_hyperparams: steps must be >= 1");
    KernelHyper hyper = init;
    AdamState opt(3, lr);
    for (std::size_t t = 0; t < steps; ++t) {
        const MapObjectiveGrad g = map_objective_gradients(X, y, hyper, prior, false);
        if (objective_trace) objective_trace->push_back(g.objective);
        double params[3] = {hyper.log_amplitude, hyper.log_lengthscale, hyper.log_noise};
        const double grads[3] = {-g.d_log_amplitude, -g.d_log_lengthscale, -g.d_log_noise};
        adam_step(opt, params, grads);
        hyper.log_amplitude = params[0];
        hyper.log_lengthscale = params[1];
        hyper.log_noise = params[2];
    }
    return hyper;
}

} // namespace latentforge
