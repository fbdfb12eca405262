#include "latentforge/selfcheck.hpp"

#include "latentforge/gp.hpp"
#include "latentforge/gradcheck.hpp"
#include "latentforge/mlp.hpp"
#include "latentforge/rng.hpp"
#include "latentforge/vae.hpp"

#include <algorithm>
#include <cmath>

namespace latentforge {

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0,
                     double hi = 1.0) {
    Matrix m(rows, cols);
    for (double& v : m.flat()) v = rng.uniform(lo, hi);
    return m;
}

double mlp_backprop_error(std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::size_t> sizes{3, 5, 4, 2};
    MlpParams params = mlp_init(sizes, seed);
    const Matrix x = random_matrix(6, 3, rng);
    const Matrix target = random_matrix(6, 2, rng);

    MlpParams scratch = params;
    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        scratch.assign_from_flat(p);
        const Matrix out = mlp_forward(scratch, x);
        double loss = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double d = out.flat()[i] - target.flat()[i];
            loss += 0.5 * d * d;
        }
        return loss;
    };
    fn.gradient = [&](std::span<const double> p) {
        scratch.assign_from_flat(p);
        const MlpForwardCache cache = mlp_forward_cached(scratch, x);
        Matrix grad = cache.output();
        for (std::size_t i = 0; i < grad.size(); ++i) grad.flat()[i] -= target.flat()[i];
        return mlp_backward(scratch, cache, grad).gradients.flatten();
    };
    return grad_check(fn, params.flatten());
}

double gp_map_error(std::uint64_t seed) {
    Rng rng(seed);
    const Matrix x = random_matrix(6, 2, rng);
    std::vector<double> y(6);
    for (double& v : y) v = rng.uniform(-1.0, 1.0);
    const PriorSpec prior;

    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        const KernelHyper h{p[0], p[1], p[2]};
        return map_objective_gradients(x, y, h, prior, false).objective;
    };
    fn.gradient = [&](std::span<const double> p) {
        const KernelHyper h{p[0], p[1], p[2]};
        const MapObjectiveGrad g = map_objective_gradients(x, y, h, prior, false);
        return std::vector<double>{g.d_log_amplitude, g.d_log_lengthscale, g.d_log_noise};
    };
    const double start[3] = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                             rng.uniform(-4.0, -2.0)};
    return grad_check(fn, start);
}

double dkl_joint_error(std::uint64_t seed) {
    Rng rng(seed);
    const Matrix x = random_matrix(8, 3, rng);
    std::vector<double> y(8);
    for (double& v : y) v = rng.uniform(-1.0, 1.0);
    const PriorSpec prior;

    MlpParams encoder = mlp_init({3, 4, 2}, seed);
    const std::size_t n_mlp = encoder.parameter_count();
    MlpParams scratch = encoder;

    // flat layout: encoder params, then log amplitude / lengthscale / noise
    auto unpack = [&](std::span<const double> p) {
        scratch.assign_from_flat(p.first(n_mlp));
        return KernelHyper{p[n_mlp], p[n_mlp + 1], p[n_mlp + 2]};
    };
    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        const KernelHyper h = unpack(p);
        return map_objective_gradients(mlp_forward(scratch, x), y, h, prior, false).objective;
    };
    fn.gradient = [&](std::span<const double> p) {
        const KernelHyper h = unpack(p);
        const MlpForwardCache cache = mlp_forward_cached(scratch, x);
        const MapObjectiveGrad g = map_objective_gradients(cache.output(), y, h, prior, true);
        std::vector<double> out = mlp_backward(scratch, cache, g.d_inputs).gradients.flatten();
        out.push_back(g.d_log_amplitude);
        out.push_back(g.d_log_lengthscale);
        out.push_back(g.d_log_noise);
        return out;
    };
    std::vector<double> start = encoder.flatten();
    start.push_back(0.1);
    start.push_back(-0.1);
    start.push_back(-3.0);
    return grad_check(fn, start);
}

double vae_loss_error(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t width = 6, batch = 5;
    Matrix x(batch, width);
    for (double& v : x.flat()) v = rng.uniform(0.0, 1.0);
    Matrix eps(batch, 2);
    for (double& v : eps.flat()) v = rng.normal();

    VaeModel model;
    model.encoder = mlp_init({width, 5, 4}, derive_seed(seed, "enc"));
    model.decoder = mlp_init({2, 5, width}, derive_seed(seed, "dec"));
    const std::size_t n_enc = model.encoder.parameter_count();
    const std::size_t n_dec = model.decoder.parameter_count();

    VaeModel scratch = model;
    auto unpack = [&](std::span<const double> p) {
        scratch.encoder.assign_from_flat(p.first(n_enc));
        scratch.decoder.assign_from_flat(p.subspan(n_enc, n_dec));
    };
    DiffFunction fn;
    fn.value = [&](std::span<const double> p) {
        unpack(p);
        return vae_loss(scratch, x, eps).total;
    };
    fn.gradient = [&](std::span<const double> p) {
        unpack(p);
        std::vector<double> grad;
        vae_loss_with_gradients(scratch, x, eps, grad);
        return grad;
    };
    std::vector<double> start = model.encoder.flatten();
    const std::vector<double> dp = model.decoder.flatten();
    start.insert(start.end(), dp.begin(), dp.end());
    return grad_check(fn, start);
}

} // namespace

std::vector<SelfCheckReport> run_gradient_selfchecks(std::size_t seeds, double tolerance,
                                                     std::uint64_t master_seed) {
    struct Suite {
        const char* name;
        double (*run)(std::uint64_t);
    };
    const Suite suites[] = {
        {"mlp-backprop", mlp_backprop_error},
        {"gp-map-objective", gp_map_error},
        {"dkl-joint", dkl_joint_error},
        {"vae-loss-fixed-noise", vae_loss_error},
    };

    std::vector<SelfCheckReport> reports;
    for (const Suite& s : suites) {
        SelfCheckReport report;
        report.name = s.name;
        report.tolerance = tolerance;
        for (std::size_t k = 0; k < seeds; ++k) {
            const std::uint64_t seed = derive_seed(derive_seed(master_seed, s.name), k);
            report.max_rel_error = std::max(report.max_rel_error, s.run(seed));
        }
        report.pass = report.max_rel_error < tolerance;
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace latentforge
