#pragma once

#include "latentforge/matrix.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace latentforge {

// Square lattice of two-component polarization vectors, periodic boundaries.
// px/py are row-major size x size.
struct LatticeState {
    std::size_t size = 0;
    std::vector<double> px;
    std::vector<double> py;

    LatticeState() = default;
    explicit LatticeState(std::size_t n) : size(n), px(n * n, 0.0), py(n * n, 0.0) {}
    std::size_t sites() const { return size * size; }
};

// Free energy: sum_sites [a2 |P|^2 + a4 |P|^4] + (k_grad/2) sum_pairs |P_i - P_j|^2
//            - sum_sites E_x P_x, with the field applied along x only.
struct SimConfig {
    std::size_t size = 20;
    double a2 = -1.0;
    double a4 = 1.0;
    double k_grad = 0.5;
    double mobility = 1.0;
    double dt = 0.02;
    double init_amplitude = 0.01;

    // Spontaneous polarization of the uniform double-well minimum.
    double saturation() const;
};

double free_energy(const LatticeState& state, double e_x, const SimConfig& cfg);

struct ForceField {
    std::vector<double> fx;
    std::vector<double> fy;
};
// Analytic dF/dP per site: 2 a2 P + 4 a4 |P|^2 P + k_grad sum_nb (P - P_nb) - (E_x, 0).
ForceField force(const LatticeState& state, double e_x, const SimConfig& cfg);

// Explicit relaxational update P <- P - mobility*dt*dF/dP. Throws
// NumericFailure (naming dt) if any |P| exceeds 10x the saturation value.
void relax_step(LatticeState& state, double e_x, const SimConfig& cfg);

// Seeded uniform noise of the configured amplitude on both components.
LatticeState initial_state(const SimConfig& cfg, std::uint64_t seed);

struct FieldCurveParams {
    double amplitude = 1.0; // A
    double growth = 0.0;    // exponential rate
    double frequency = 0.0; // angular frequency
    double offset = 0.0;    // B
};

// E_x(t) = A exp(growth*t) sin(frequency*t) + offset sampled at t = k/n_samples.
struct FieldCurve {
    FieldCurveParams params;
    std::vector<double> samples;
};
FieldCurve sample_field_curve(const FieldCurveParams& params, std::size_t n_samples);

struct SimResult {
    LatticeState final_state;
    std::vector<double> mean_px;      // length steps+1, initial state included
    std::vector<double> mean_py;
    std::vector<double> curl_series;
    double curl = 0.0;
    double normalized_curl = 0.0;
    double total_polarization = 0.0;
};

// One relaxation step per field sample, recording the series and the three
// end-of-run target functionals.
SimResult run_simulation(const FieldCurve& curve, const SimConfig& cfg, std::uint64_t seed);

// Drives E_x = amplitude*sin(2 pi k / steps_per_period) for one warm-up cycle
// plus `periods` recorded cycles; returns (E_x, mean P_x) pairs.
std::vector<std::pair<double, double>> hysteresis_loop(double amplitude, std::size_t periods,
                                                       const SimConfig& cfg,
                                                       std::size_t steps_per_period = 400,
                                                       std::uint64_t seed = 0);

// Sum over sites of |curl|, central differences with periodic wrap.
double target_curl(const LatticeState& state);
// Same after normalizing each site vector to unit length (|P| < 1e-9 sites
// contribute a zero vector).
double target_normalized_curl(const LatticeState& state);
// Magnitude of the lattice-summed polarization vector.
double target_total_polarization(const LatticeState& state);

struct FieldFamilyConfig {
    std::size_t n_curves = 7500;
    std::size_t t_samples = 100;
    std::pair<double, double> amplitude_range{0.5, 3.0};
    std::pair<double, double> growth_range{-2.0, 2.0};
    std::pair<double, double> frequency_range{6.283185307179586, 25.132741228718345}; // [2pi, 8pi]
    std::pair<double, double> offset_range{-0.5, 0.5};
    std::uint64_t seed = 0;
};

// Uniform seeded sampling of the curve family; row i of the returned matrix
// view is curve i's samples (the BO input space).
std::vector<FieldCurve> generate_field_family(const FieldFamilyConfig& cfg);
Matrix field_family_inputs(const std::vector<FieldCurve>& curves);

} // namespace latentforge
