#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "latentforge/errors.hpp"
#include "latentforge/gp.hpp"
#include "latentforge/gradcheck.hpp"
#include "latentforge/rng.hpp"

#include "test_oracles.hpp"

#include <algorithm>
#include <cmath>

using namespace latentforge;
using lftest::random_matrix;
using lftest::random_vector;

TEST_CASE("rbf kernel pinned values") {
    KernelHyper h; // amplitude 1, lengthscale 1
    h.log_noise = std::log(0.1);

    Matrix p(1, 1);
    p(0, 0) = 0.3;
    const Matrix self = rbf_kernel(p, p, h, true);
    CHECK(self(0, 0) == doctest::Approx(1.1).epsilon(1e-15)); // alpha + noise on the diagonal

    Matrix a(1, 1), b(1, 1);
    a(0, 0) = 0.0;
    b(0, 0) = 1.0;
    const Matrix k = rbf_kernel(a, b, h, false);
    CHECK(k(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    // huge lengthscale: off-diagonals approach amplitude
    KernelHyper wide;
    wide.log_lengthscale = std::log(1e6);
    Rng rng(3);
    const Matrix x = random_matrix(5, 2, rng);
    const Matrix kw = rbf_kernel(x, x, wide, false);
    for (double v : kw.flat()) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    Matrix wrong(2, 3);
    CHECK_THROWS_AS(rbf_kernel(x, wrong, h, false), std::invalid_argument);
}

TEST_CASE("kernel symmetry and exact diagonal over random instances") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        KernelHyper h{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-5, -1)};
        const Matrix x = random_matrix(7, 3, rng);
        const Matrix k = rbf_kernel(x, x, h, true);
        for (std::size_t i = 0; i < 7; ++i) {
            CHECK(k(i, i) == h.amplitude() + h.noise()); // exact
            for (std::size_t j = 0; j < 7; ++j)
                CHECK(std::abs(k(i, j) - k(j, i)) <= 1e-12);
        }
    }
}

TEST_CASE("log marginal likelihood 1-point closed forms") {
    // n=1, amplitude 1, tiny noise: K = [[1 + jitter]]
    KernelHyper h;
    h.log_noise = std::log(1e-12); // effectively zero against the 1e-6 jitter
    Matrix x(1, 1);
    std::vector<double> y{0.0};
    CHECK(log_marginal_likelihood(x, y, h) == doctest::Approx(-0.918939).epsilon(1e-4));
    y[0] = 1.0;
    CHECK(log_marginal_likelihood(x, y, h) == doctest::Approx(-1.418939).epsilon(1e-4));
}

TEST_CASE("log marginal likelihood matches dense-inversion oracle") {
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix x = random_matrix(5, 2, rng);
        const auto y = random_vector(5, rng);
        KernelHyper h{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-4, -1)};
        const GpFit fit = gp_fit(x, y, h);
        CHECK(log_marginal_likelihood(x, y, h) ==
              doctest::Approx(lftest::dense_lml(x, y, h, fit.jitter)).epsilon(1e-8));
    }
}

TEST_CASE("log prior closed forms and gradient") {
    PriorSpec prior;
    KernelHyper unit; // alpha = l = 1
    CHECK(log_prior(unit, prior) == doctest::Approx(-1.837877).epsilon(1e-5));

    KernelHyper at_e{1.0, 0.0, 0.0}; // alpha = e, l = 1
    CHECK(log_prior(at_e, prior) == doctest::Approx(-3.337877).epsilon(1e-5));

    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        return log_prior(KernelHyper{p[0], p[1], 0.0}, prior);
    };
    fn.gradient = [&](std::span<const double> p) {
        // d/dtheta of (-theta - theta^2/2) = -1 - theta, per hyperparameter
        return std::vector<double>{-1.0 - p[0], -1.0 - p[1]};
    };
    const std::vector<double> p{0.4, -0.7};
    CHECK(grad_check(fn, p) < 1e-6);
}

TEST_CASE("gp_fit caches a valid factorization") {
    SUBCASE("scalar case") {
        KernelHyper h;
        h.log_noise = std::log(0.25);
        Matrix x(1, 1);
        const GpFit fit = gp_fit(x, {0.7}, h);
        CHECK(fit.cholesky_factor(0, 0) ==
              doctest::Approx(std::sqrt(1.0 + 0.25 + fit.jitter)).epsilon(1e-12));
    }

    SUBCASE("reconstruction and residual on random data") {
        Rng rng(31);
        const Matrix x = random_matrix(5, 2, rng);
        const auto y = random_vector(5, rng);
        KernelHyper h{0.2, -0.1, std::log(0.05)};
        const GpFit fit = gp_fit(x, y, h);

        Matrix k = rbf_kernel(x, x, h, true);
        for (std::size_t i = 0; i < 5; ++i) k(i, i) += fit.jitter;
        const Matrix rec = matmul_a_bt(fit.cholesky_factor, fit.cholesky_factor);
        for (std::size_t i = 0; i < k.size(); ++i)
            CHECK(rec.flat()[i] == doctest::Approx(k.flat()[i]).epsilon(1e-10));

        for (std::size_t i = 0; i < 5; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 5; ++j) acc += k(i, j) * fit.alpha_vector[j];
            CHECK(acc == doctest::Approx(y[i]).epsilon(1e-8));
        }
    }

    SUBCASE("duplicate points escalate jitter rather than fail") {
        Matrix x(3, 1);
        x(0, 0) = x(1, 0) = x(2, 0) = 0.5; // rank-1 kernel
        KernelHyper h;
        h.log_noise = std::log(1e-12);
        const GpFit fit = gp_fit(x, {1.0, 1.0, 1.0}, h);
        CHECK(fit.jitter >= 1e-6);
    }
}

TEST_CASE("gp_predict pinned limits") {
    Rng rng(41);
    // spread points and a short lengthscale keep K well conditioned, so the
    // only interpolation error left is the jitter itself
    const Matrix x = random_matrix(6, 2, rng, -2.0, 2.0);
    const auto y = random_vector(6, rng);
    KernelHyper h;
    h.log_amplitude = std::log(0.5); // the jitter floor 1e-6*amplitude stays below 1e-6
    h.log_lengthscale = std::log(0.3);
    h.log_noise = std::log(1e-12);
    const GpFit fit = gp_fit(x, y, h);

    SUBCASE("noiseless GP interpolates its training points") {
        const PosteriorPrediction pred = gp_predict(fit, x);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(pred.mean[i] == doctest::Approx(y[i]).epsilon(1e-6));
            CHECK(pred.variance[i] < 1e-6);
        }
    }

    SUBCASE("far queries revert to the prior") {
        Matrix far(1, 2);
        far(0, 0) = 100.0;
        far(0, 1) = 100.0; // >> 10 lengthscales from everything
        const PosteriorPrediction pred = gp_predict(fit, far);
        CHECK(std::abs(pred.mean[0]) < std::exp(-50.0) * 10.0);
        CHECK(pred.variance[0] == doctest::Approx(h.amplitude()).epsilon(1e-9));
    }

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(gp_predict(fit, Matrix(2, 3)), std::invalid_argument);
    }
}

TEST_CASE("gp_predict matches the dense-inversion oracle on 50 random instances") {
    Rng rng(51);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.uniform_index(8);
        const std::size_t d = 1 + rng.uniform_index(3);
        const Matrix x = random_matrix(n, d, rng);
        const auto y = random_vector(n, rng);
        KernelHyper h{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-5, -1)};
        const GpFit fit = gp_fit(x, y, h);
        const Matrix q = random_matrix(4, d, rng);
        const PosteriorPrediction pred = gp_predict(fit, q);
        const auto oracle = lftest::dense_gp_posterior(x, y, q, h, fit.jitter);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(pred.mean[i] - oracle.mean[i]) < 1e-8);
            CHECK(std::abs(pred.variance[i] - std::max(oracle.variance[i], 0.0)) < 1e-8);
        }
    }
}

TEST_CASE("posterior variance never rises when a training point is added") {
    Rng rng(61);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix x = random_matrix(6, 2, rng);
        const auto y = random_vector(6, rng);
        KernelHyper h{0.0, 0.0, std::log(0.05)};

        Matrix x5(5, 2);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 2; ++j) x5(i, j) = x(i, j);
        const std::vector<double> y5(y.begin(), y.begin() + 5);

        const GpFit small = gp_fit(x5, y5, h);
        const GpFit full = gp_fit(x, y, h);
        const Matrix q = random_matrix(6, 2, rng);
        const auto ps = gp_predict(small, q);
        const auto pf = gp_predict(full, q);
        for (std::size_t i = 0; i < 6; ++i) CHECK(pf.variance[i] <= ps.variance[i] + 1e-8);
    }
}

TEST_CASE("map objective gradient vs finite differences") {
    Rng rng(71);
    const Matrix x = random_matrix(6, 2, rng);
    const auto y = random_vector(6, rng);
    const PriorSpec prior;
    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        return map_objective_gradients(x, y, KernelHyper{p[0], p[1], p[2]}, prior, false).objective;
    };
    fn.gradient = [&](std::span<const double> p) {
        const auto g = map_objective_gradients(x, y, KernelHyper{p[0], p[1], p[2]}, prior, false);
        return std::vector<double>{g.d_log_amplitude, g.d_log_lengthscale, g.d_log_noise};
    };
    const std::vector<double> p{0.1, -0.2, -3.0};
    CHECK(grad_check(fn, p) < 1e-4);
}

TEST_CASE("hyperparameter MAP recovers a known lengthscale within factor 2") {
    std::vector<double> recovered;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(derive_seed(900, seed));
        const Matrix x = random_matrix(100, 1, rng, -2.0, 2.0);
        KernelHyper truth;
        truth.log_lengthscale = std::log(0.5);
        truth.log_noise = std::log(0.01);
        const auto y = lftest::sample_gp_targets(x, truth, rng);

        KernelHyper init;
        init.log_noise = std::log(0.1);
        const KernelHyper fitted = gp_fit_hyperparams(x, y, init, PriorSpec{}, 200, 0.05);
        recovered.push_back(fitted.lengthscale());
    }
    std::sort(recovered.begin(), recovered.end());
    const double median = recovered[2];
    CHECK(median > 0.25);
    CHECK(median < 1.0);
}

TEST_CASE("gp_fit_hyperparams step contracts") {
    Rng rng(81);
    const Matrix x = random_matrix(6, 1, rng);
    const auto y = random_vector(6, rng);
    CHECK_THROWS_AS(gp_fit_hyperparams(x, y, KernelHyper{}, PriorSpec{}, 0, 0.01),
                    std::invalid_argument);

    const KernelHyper one = gp_fit_hyperparams(x, y, KernelHyper{}, PriorSpec{}, 1, 0.01);
    const bool moved = one.log_amplitude != 0.0 || one.log_lengthscale != 0.0 ||
                       one.log_noise != 0.0;
    CHECK(moved);

    // objective non-decreasing over the last 10% of a longer run
    std::vector<double> trace;
    gp_fit_hyperparams(x, y, KernelHyper{}, PriorSpec{}, 200, 0.02, &trace);
    REQUIRE(trace.size() == 200);
    for (std::size_t t = 180; t + 1 < 200; ++t) CHECK(trace[t + 1] >= trace[t] - 1e-6);
}
