#pragma once

#include "latentforge/dkl.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

namespace latentforge {

// Upper confidence bound mu + lambda * variance^exponent. The default
// exponent 0.5 scores with the standard deviation; 1.0 scores with the
// variance (kept configurable for sensitivity checks).
struct AcquisitionSpec {
    double lambda = 10.0;
    double exponent = 0.5;
};

std::vector<double> acquisition_ucb(const PosteriorPrediction& pred, const AcquisitionSpec& spec);

struct TraceRow {
    std::size_t step = 0;
    std::size_t chosen_index = 0; // index into the master pool
    double acq_value = 0.0;
    double pred_mean = 0.0;
    double pred_std = 0.0;
    double true_target = 0.0;
    double cumulative_best = 0.0;
};

// measured/pool always partition the master index set; both kept ascending so
// the argmax tie-break (first strict maximum) is the lowest pool index.
struct BoState {
    std::vector<std::size_t> measured_indices;
    std::vector<std::size_t> pool_indices;
    std::vector<double> targets; // aligned with measured_indices
    std::vector<TraceRow> trace;
    std::uint64_t seed = 0;
    std::size_t n_init = 100;
    std::size_t n_steps = 500;

    double best_target() const;
};

using Oracle = std::function<double(std::size_t)>;

struct BoConfig {
    std::size_t n_init = 100;
    std::size_t n_steps = 500;
    AcquisitionSpec acquisition{};
    std::uint64_t seed = 0;
    DklConfig dkl{.hidden_sizes = {64, 64}, .steps = 200, .lr = 0.01};
};

// Called after each step's scores are computed, before the pool is updated;
// `scores` is aligned with state.pool_indices, `chosen` indexes into it.
using BoStepObserver =
    std::function<void(const BoState& state, const std::vector<double>& scores, std::size_t chosen)>;

// One acquisition: retrains a DKL from scratch on the measured set (seed
// derived from the run seed and the step index), predicts on the remaining
// pool, acquires the acquisition argmax and evaluates the oracle there. If the
// oracle throws, the state is left unchanged.
void bo_step(BoState& state, const Matrix& pool_inputs, const Oracle& oracle,
             const BoConfig& config, const BoStepObserver& observer = {});

struct BoResult {
    BoState state;
    DklModel final_model; // retrained on the full measured set after the loop
};

BoResult bo_run(const Matrix& pool_inputs, const Oracle& oracle, const BoConfig& config,
                const BoStepObserver& observer = {});

// Identical protocol with uniform-random acquisition (no surrogate); the
// model-prediction trace columns are recorded as NaN.
BoState random_baseline(const Matrix& pool_inputs, const Oracle& oracle, const BoConfig& config);

// CSV with header step,chosen_index,acq_value,pred_mean,pred_std,true_target,cumulative_best.
void write_trace_csv(const BoState& state, const std::filesystem::path& path);

} // namespace latentforge
