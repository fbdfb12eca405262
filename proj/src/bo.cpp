#include "latentforge/bo.hpp"

#include "latentforge/csv.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace latentforge {

std::vector<double> acquisition_ucb(const PosteriorPrediction& pred, const AcquisitionSpec& spec) {
    if (spec.lambda < 0.0) throw std::invalid_argument("acquisition_ucb: lambda must be >= 0");
    std::vector<double> scores(pred.mean.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double v = pred.variance[i];
        if (!(v >= 0.0) || !std::isfinite(pred.mean[i]))
            throw NumericFailure("acquisition_ucb: invalid prediction (variance must be pre-clamped)");
        scores[i] = pred.mean[i] + spec.lambda * std::pow(v, spec.exponent);
    }
    return scores;
}

double BoState::best_target() const {
    double best = -std::numeric_limits<double>::infinity();
    for (double v : targets) best = std::max(best, v);
    return best;
}

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = x.row(rows[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

// n_init distinct indices from [0, n): partial seeded Fisher-Yates.
std::vector<std::size_t> sample_initial(std::size_t n, std::size_t n_init, std::uint64_t seed) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    Rng rng(derive_seed(seed, "bo-init"));
    for (std::size_t i = 0; i < n_init; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(all[i], all[j]);
    }
    all.resize(n_init);
    return all;
}

} // namespace

void bo_step(BoState& state, const Matrix& pool_inputs, const Oracle& oracle,
             const BoConfig& config, const BoStepObserver& observer) {
    if (state.pool_indices.empty()) throw std::logic_error("bo_step: pool is empty");

    const std::size_t step = state.trace.size();
    DklConfig retrain = config.dkl;
    retrain.seed = derive_seed(derive_seed(config.seed, "dkl-retrain"), step);

    const DklModel model =
        dkl_train(gather_rows(pool_inputs, state.measured_indices), state.targets, retrain);
    const PosteriorPrediction pred =
        dkl_predict(model, gather_rows(pool_inputs, state.pool_indices));
    const std::vector<double> scores = acquisition_ucb(pred, config.acquisition);

    std::size_t chosen = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[chosen]) chosen = i; // ties keep the lowest pool index

    if (observer) observer(state, scores, chosen);

    const std::size_t master = state.pool_indices[chosen];
    const double y = oracle(master); // may throw; state untouched until here

    TraceRow row;
    row.step = step;
    row.chosen_index = master;
    row.acq_value = scores[chosen];
    row.pred_mean = pred.mean[chosen];
    row.pred_std = std::sqrt(pred.variance[chosen]);
    row.true_target = y;
    row.cumulative_best = std::max(y, state.targets.empty() ? y : state.best_target());

    state.pool_indices.erase(state.pool_indices.begin() + static_cast<std::ptrdiff_t>(chosen));
    const auto pos = std::lower_bound(state.measured_indices.begin(), state.measured_indices.end(),
                                      master);
    state.targets.insert(state.targets.begin() + (pos - state.measured_indices.begin()), y);
    state.measured_indices.insert(pos, master);
    state.trace.push_back(row);
}

namespace {

BoState init_state(const Matrix& pool_inputs, const Oracle& oracle, const BoConfig& config) {
    const std::size_t n = pool_inputs.rows();
    if (config.n_init >= n)
        throw std::invalid_argument("bo: n_init must be smaller than the pool");

    BoState state;
    state.seed = config.seed;
    state.n_init = config.n_init;
    state.n_steps = config.n_steps;

    std::vector<std::size_t> init = sample_initial(n, config.n_init, config.seed);
    std::sort(init.begin(), init.end());
    state.measured_indices = init;
    state.targets.reserve(config.n_init);
    for (std::size_t idx : init) state.targets.push_back(oracle(idx));

    state.pool_indices.reserve(n - config.n_init);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (k < init.size() && init[k] == i) {
            ++k;
        } else {
            state.pool_indices.push_back(i);
        }
    }
    return state;
}

} // namespace

BoResult bo_run(const Matrix& pool_inputs, const Oracle& oracle, const BoConfig& config,
                const BoStepObserver& observer) {
    BoResult result;
    result.state = init_state(pool_inputs, oracle, config);
    for (std::size_t step = 0; step < config.n_steps; ++step)
        bo_step(result.state, pool_inputs, oracle, config, observer);

    DklConfig final_cfg = config.dkl;
    final_cfg.seed = derive_seed(derive_seed(config.seed, "dkl-retrain"), config.n_steps);
    result.final_model = dkl_train(gather_rows(pool_inputs, result.state.measured_indices),
                                   result.state.targets, final_cfg);
    return result;
}

BoState random_baseline(const Matrix& pool_inputs, const Oracle& oracle, const BoConfig& config) {
    BoState state = init_state(pool_inputs, oracle, config);
    Rng rng(derive_seed(config.seed, "bo-random-arm"));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t step = 0; step < config.n_steps; ++step) {
        if (state.pool_indices.empty()) throw std::logic_error("random_baseline: pool is empty");
        const std::size_t chosen = rng.uniform_index(state.pool_indices.size());
        const std::size_t master = state.pool_indices[chosen];
        const double y = oracle(master);

        TraceRow row;
        row.step = step;
        row.chosen_index = master;
        row.acq_value = nan;
        row.pred_mean = nan;
        row.pred_std = nan;
        row.true_target = y;
        row.cumulative_best = std::max(y, state.best_target());

        state.pool_indices.erase(state.pool_indices.begin() + static_cast<std::ptrdiff_t>(chosen));
        const auto pos = std::lower_bound(state.measured_indices.begin(),
                                          state.measured_indices.end(), master);
        state.targets.insert(state.targets.begin() + (pos - state.measured_indices.begin()), y);
        state.measured_indices.insert(pos, master);
        state.trace.push_back(row);
    }
    return state;
}

void write_trace_csv(const BoState& state, const std::filesystem::path& path) {
    CsvWriter csv(path, {"step", "chosen_index", "acq_value", "pred_mean", "pred_std",
                         "true_target", "cumulative_best"});
    for (const TraceRow& r : state.trace) {
        csv.begin_row();
        csv.field(r.step);
        csv.field(r.chosen_index);
        csv.field(r.acq_value);
        csv.field(r.pred_mean);
        csv.field(r.pred_std);
        csv.field(r.true_target);
        csv.field(r.cumulative_best);
        csv.end_row();
    }
}

} // namespace latentforge
