#pragma once

#include "latentforge/matrix.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace latentforge {

// RBF kernel hyperparameters kept in log space so plain gradient steps keep
// amplitude, lengthscale and noise positive.
struct KernelHyper {
    double log_amplitude = 0.0;
    double log_lengthscale = 0.0;
    double log_noise = 0.0;

    double amplitude() const;
    double lengthscale() const;
    double noise() const;
};

// logNormal(mean, stdev) hyperprior applied to amplitude and lengthscale
// (and, as a modelling choice, to the noise term inside the MAP objective).
struct PriorSpec {
    double mean = 0.0;
    double stdev = 1.0;
};

// K_ij = amplitude * exp(-0.5 ||a_i - b_j||^2 / lengthscale^2), plus noise on
// the diagonal when include_noise is set. include_noise is only meaningful
// when a and b are the same point set; it requires square output.
Matrix rbf_kernel(const Matrix& a, const Matrix& b, const KernelHyper& hyper, bool include_noise);

struct PosteriorPrediction {
    std::vector<double> mean;
    std::vector<double> variance; // clamped at 0 after round-off
    std::optional<Matrix> covariance;
};

struct GpFit {
    Matrix train_inputs;
    std::vector<double> train_targets;
    KernelHyper hyper;
    Matrix cholesky_factor;           // lower triangular L with L L^T = K + jitter I
    std::vector<double> alpha_vector; // K^{-1} y
    double jitter = 0.0;              // the escalated value actually used
};

// Jitter starts at 1e-6 * amplitude and escalates by 10x up to 1e-2 *
// amplitude; the same policy is applied everywhere a training kernel is
// factorized so fits and gradients see the same matrix.
GpFit gp_fit(Matrix X, std::vector<double> y, const KernelHyper& hyper);

double log_marginal_likelihood(const Matrix& X, const std::vector<double>& y,
                               const KernelHyper& hyper);

// Sum of logNormal log-densities of amplitude and lengthscale.
double log_prior(const KernelHyper& hyper, const PriorSpec& prior);

PosteriorPrediction gp_predict(const GpFit& fit, const Matrix& queries, bool full_covariance = false);

// MAP fit: Adam ascent on log_marginal_likelihood + hyperpriors in log space.
// objective_trace, when given, receives the objective value at every step.
KernelHyper gp_fit_hyperparams(const Matrix& X, const std::vector<double>& y, KernelHyper init,
                               const PriorSpec& prior, std::size_t steps, double lr,
                               std::vector<double>* objective_trace = nullptr);

// Value and gradients of the MAP objective (marginal likelihood plus
// hyperpriors on amplitude, lengthscale and noise). d_inputs, filled when
// requested, is the gradient with respect to the training inputs themselves —
// the hook the deep kernel chains its encoder backprop onto.
struct MapObjectiveGrad {
    double objective = 0.0;
    double log_marginal = 0.0;
    double d_log_amplitude = 0.0;
    double d_log_lengthscale = 0.0;
    double d_log_noise = 0.0;
    Matrix d_inputs;
};
MapObjectiveGrad map_objective_gradients(const Matrix& X, const std::vector<double>& y,
                                         const KernelHyper& hyper, const PriorSpec& prior,
                                         bool want_input_grad);

} // namespace latentforge
