#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace latentforge {

// Adam with bias correction; minimizes (subtract the update from the params).
// Callers that maximize pass the negated gradient.
struct AdamState {
    std::size_t step_count = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState() = default;
    AdamState(std::size_t n_params, double lr)
        : first_moment(n_params, 0.0), second_moment(n_params, 0.0), learning_rate(lr) {}
};

// In-place update of params; increments state.step_count.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

} // namespace latentforge
