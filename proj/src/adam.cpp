#include "latentforge/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace latentforge {

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != grads.size())
        throw std::invalid_argument("adam_step: params/grads length mismatch");
    if (state.first_moment.size() != params.size())
        throw std::invalid_argument("adam_step: state sized for a different parameter count");

    state.step_count += 1;
    const double t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(state.beta1, t);
    const double c2 = 1.0 - std::pow(state.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g;
        state.second_moment[i] = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.first_moment[i] / c1;
        const double vhat = state.second_moment[i] / c2;
        params[i] -= state.learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    }
}

} // namespace latentforge
