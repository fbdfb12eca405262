#pragma once

#include "latentforge/gp.hpp"
#include "latentforge/mlp.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace latentforge {

struct LatentPoint {
    double d1 = 0.0;
    double d2 = 0.0;
};

struct DklConfig {
    std::vector<std::size_t> hidden_sizes{64, 64}; // latent width 2 is appended internally
    std::size_t steps = 500;
    double lr = 0.01;
    std::uint64_t seed = 0;
    PriorSpec prior{};
};

// Exact GP over a learned 2-d embedding. The encoder and kernel
// hyperparameters are trained jointly against the marginal likelihood, so the
// fit's train_inputs are always the encoder's output for the training set as
// of the last step.
struct DklModel {
    MlpParams encoder;
    KernelHyper hyper;
    GpFit fit;        // over encoded inputs, standardized targets
    Matrix train_x;   // raw inputs the model was trained on
    std::vector<double> train_y; // raw targets
    double target_mean = 0.0;
    double target_std = 1.0;
    std::vector<double> objective_trace;
    std::uint64_t seed = 0;
};

// RBF kernel evaluated on encoder outputs.
Matrix deep_kernel(const DklModel& model, const Matrix& a, const Matrix& b,
                   bool include_noise = false);

DklModel dkl_train(const Matrix& X, const std::vector<double>& y, const DklConfig& config);

PosteriorPrediction dkl_predict(const DklModel& model, const Matrix& queries);

std::vector<LatentPoint> dkl_embed(const DklModel& model, const Matrix& inputs);

// Checkpoint: a JSON header (layer sizes, hyperparameters, standardization
// constants, seed) followed by a raw little-endian f64 block holding the
// encoder parameters, training inputs and training targets. Self-contained:
// loading rebuilds the GP fit without the source dataset.
void save_dkl_checkpoint(const DklModel& model, const std::filesystem::path& path);
DklModel load_dkl_checkpoint(const std::filesystem::path& path);

} // namespace latentforge
