#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latentforge {

struct SelfCheckReport {
    std::string name;
    double max_rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Finite-difference verification of every analytic gradient in the project:
// MLP backprop, the GP MAP objective in log-hyperparameter space, the joint
// deep-kernel gradient, and the VAE loss with fixed noise. Each check runs
// `seeds` randomized instances and reports the worst relative error seen.
std::vector<SelfCheckReport> run_gradient_selfchecks(std::size_t seeds, double tolerance,
                                                     std::uint64_t master_seed = 17);

} // namespace latentforge
