#include "latentforge/ferrosim.hpp"

#include "latentforge/errors.hpp"
#include "latentforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace latentforge {

double SimConfig::saturation() const { return std::sqrt(-a2 / (2.0 * a4)); }

namespace {

void require_valid(const SimConfig& cfg) {
    if (cfg.size < 4) throw std::invalid_argument("ferrosim: lattice size must be >= 4");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("ferrosim: dt must be > 0");
    if (!(cfg.a4 > 0.0)) throw std::invalid_argument("ferrosim: a4 must be > 0");
}

} // namespace

double free_energy(const LatticeState& state, double e_x, const SimConfig& cfg) {
    const std::size_t n = state.size;
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = (i + 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jp = (j + 1) % n;
            const std::size_t s = i * n + j;
            const double px = state.px[s], py = state.py[s];
            const double p2 = px * px + py * py;
            f += cfg.a2 * p2 + cfg.a4 * p2 * p2 - e_x * px;
            // each unordered neighbor pair counted once: right and down
            const std::size_t sr = i * n + jp, sd = ip * n + j;
            const double dxr = px - state.px[sr], dyr = py - state.py[sr];
            const double dxd = px - state.px[sd], dyd = py - state.py[sd];
            f += 0.5 * cfg.k_grad * (dxr * dxr + dyr * dyr + dxd * dxd + dyd * dyd);
        }
    }
    if (!std::isfinite(f)) throw NumericFailure("free_energy: non-finite value");
    return f;
}

ForceField force(const LatticeState& state, double e_x, const SimConfig& cfg) {
    const std::size_t n = state.size;
    ForceField out;
    out.fx.resize(n * n);
    out.fy.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jm = (j + n - 1) % n, jp = (j + 1) % n;
            const std::size_t s = i * n + j;
            const double px = state.px[s], py = state.py[s];
            const double p2 = px * px + py * py;
            const double local = 2.0 * cfg.a2 + 4.0 * cfg.a4 * p2;
            double fx = local * px;
            double fy = local * py;
            fx += cfg.k_grad * (4.0 * px - state.px[im * n + j] - state.px[ip * n + j] -
                                state.px[i * n + jm] - state.px[i * n + jp]);
            fy += cfg.k_grad * (4.0 * py - state.py[im * n + j] - state.py[ip * n + j] -
                                state.py[i * n + jm] - state.py[i * n + jp]);
            fx -= e_x;
            out.fx[s] = fx;
            out.fy[s] = fy;
        }
    }
    return out;
}

void relax_step(LatticeState& state, double e_x, const SimConfig& cfg) {
    require_valid(cfg);
    const ForceField f = force(state, e_x, cfg);
    const double step = cfg.mobility * cfg.dt;
    const double bound2 = 100.0 * cfg.saturation() * cfg.saturation(); // (10 Ps)^2
    for (std::size_t s = 0; s < state.sites(); ++s) {
        state.px[s] -= step * f.fx[s];
        state.py[s] -= step * f.fy[s];
        const double p2 = state.px[s] * state.px[s] + state.py[s] * state.py[s];
        if (!(p2 <= bound2))
            throw NumericFailure("relax_step: |P| exceeded 10x saturation (dt=" +
                                 std::to_string(cfg.dt) + " too large?)");
    }
}

LatticeState initial_state(const SimConfig& cfg, std::uint64_t seed) {
    require_valid(cfg);
    LatticeState state(cfg.size);
    Rng rng(derive_seed(seed, "lattice-init"));
    for (std::size_t s = 0; s < state.sites(); ++s) {
        state.px[s] = rng.uniform(-cfg.init_amplitude, cfg.init_amplitude);
        state.py[s] = rng.uniform(-cfg.init_amplitude, cfg.init_amplitude);
    }
    return state;
}

FieldCurve sample_field_curve(const FieldCurveParams& params, std::size_t n_samples) {
    FieldCurve curve;
    curve.params = params;
    curve.samples.resize(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n_samples);
        curve.samples[k] = params.amplitude * std::exp(params.growth * t) *
                               std::sin(params.frequency * t) +
                           params.offset;
    }
    return curve;
}

SimResult run_simulation(const FieldCurve& curve, const SimConfig& cfg, std::uint64_t seed) {
    SimResult res;
    LatticeState state = initial_state(cfg, seed);
    const std::size_t steps = curve.samples.size();
    res.mean_px.reserve(steps + 1);
    res.mean_py.reserve(steps + 1);
    res.curl_series.reserve(steps + 1);

    const double inv_sites = 1.0 / static_cast<double>(state.sites());
    auto record = [&] {
        double sx = 0.0, sy = 0.0;
        for (std::size_t s = 0; s < state.sites(); ++s) {
            sx += state.px[s];
            sy += state.py[s];
        }
        res.mean_px.push_back(sx * inv_sites);
        res.mean_py.push_back(sy * inv_sites);
        res.curl_series.push_back(target_curl(state));
    };

    record();
    for (std::size_t k = 0; k < steps; ++k) {
        try {
            relax_step(state, curve.samples[k], cfg);
        } catch (const NumericFailure& e) {
            throw NumericFailure("run_simulation: step " + std::to_string(k) + ": " + e.what());
        }
        record();
    }
    res.curl = target_curl(state);
    res.normalized_curl = target_normalized_curl(state);
    res.total_polarization = target_total_polarization(state);
    res.final_state = std::move(state);
    return res;
}

std::vector<std::pair<double, double>> hysteresis_loop(double amplitude, std::size_t periods,
                                                       const SimConfig& cfg,
                                                       std::size_t steps_per_period,
                                                       std::uint64_t seed) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("hysteresis_loop: amplitude must be >= 0");
    LatticeState state = initial_state(cfg, seed);
    const double inv_sites = 1.0 / static_cast<double>(state.sites());
    std::vector<std::pair<double, double>> loop;
    loop.reserve(periods * steps_per_period);
    const std::size_t total = (periods + 1) * steps_per_period; // one warm-up cycle
    for (std::size_t k = 0; k < total; ++k) {
        const double e = amplitude * std::sin(2.0 * 3.14159265358979323846 *
                                              static_cast<double>(k % steps_per_period) /
                                              static_cast<double>(steps_per_period));
        relax_step(state, e, cfg);
        if (k >= steps_per_period) {
            double sx = 0.0;
            for (std::size_t s = 0; s < state.sites(); ++s) sx += state.px[s];
            loop.emplace_back(e, sx * inv_sites);
        }
    }
    return loop;
}

double target_curl(const LatticeState& state) {
    const std::size_t n = state.size;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t jm = (j + n - 1) % n, jp = (j + 1) % n;
            const double c = 0.5 * (state.py[ip * n + j] - state.py[im * n + j]) -
                             0.5 * (state.px[i * n + jp] - state.px[i * n + jm]);
            total += std::abs(c);
        }
    }
    return total;
}

double target_normalized_curl(const LatticeState& state) {
    LatticeState unit(state.size);
    for (std::size_t s = 0; s < state.sites(); ++s) {
        const double m = std::sqrt(state.px[s] * state.px[s] + state.py[s] * state.py[s]);
        if (m >= 1e-9) {
            unit.px[s] = state.px[s] / m;
            unit.py[s] = state.py[s] / m;
        }
    }
    return target_curl(unit);
}

double target_total_polarization(const LatticeState& state) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t s = 0; s < state.sites(); ++s) {
        sx += state.px[s];
        sy += state.py[s];
    }
    return std::hypot(sx, sy);
}

std::vector<FieldCurve> generate_field_family(const FieldFamilyConfig& cfg) {
    if (cfg.n_curves == 0) throw std::invalid_argument("generate_field_family: n_curves must be >= 1");
    auto check_range = [](std::pair<double, double> r, const char* name) {
        if (!(r.first <= r.second) || !std::isfinite(r.first) || !std::isfinite(r.second))
            throw std::invalid_argument(std::string("generate_field_family: bad range for ") + name);
    };
    check_range(cfg.amplitude_range, "amplitude");
    check_range(cfg.growth_range, "growth");
    check_range(cfg.frequency_range, "frequency");
    check_range(cfg.offset_range, "offset");

    Rng rng(derive_seed(cfg.seed, "field-family"));
    std::vector<FieldCurve> curves;
    curves.reserve(cfg.n_curves);
    for (std::size_t i = 0; i < cfg.n_curves; ++i) {
        FieldCurveParams p;
        p.amplitude = rng.uniform(cfg.amplitude_range.first, cfg.amplitude_range.second);
        p.growth = rng.uniform(cfg.growth_range.first, cfg.growth_range.second);
        p.frequency = rng.uniform(cfg.frequency_range.first, cfg.frequency_range.second);
        p.offset = rng.uniform(cfg.offset_range.first, cfg.offset_range.second);
        curves.push_back(sample_field_curve(p, cfg.t_samples));
    }
    return curves;
}

Matrix field_family_inputs(const std::vector<FieldCurve>& curves) {
    if (curves.empty()) return {};
    Matrix x(curves.size(), curves.front().samples.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& s = curves[i].samples;
        if (s.size() != x.cols())
            throw std::invalid_argument("field_family_inputs: ragged curve lengths");
        std::copy(s.begin(), s.end(), x.row(i).begin());
    }
    return x;
}

} // namespace latentforge
