#pragma once

#include "latentforge/mlp.hpp"
#include "latentforge/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace latentforge {

struct VaeConfig {
    std::vector<std::size_t> encoder_hidden{64};
    std::vector<std::size_t> decoder_hidden{64};
    std::size_t epochs = 50;
    std::size_t batch_size = 64;
    double lr = 1e-3;
    double beta = 1.0;
    std::uint64_t seed = 0;
    // Per-column min-max rescaling of the inputs into [0,1] before training.
    // Needed when the data is not pixel-like (field curves); the constants are
    // stored on the model and in its checkpoint.
    bool normalize_inputs = false;
};

// Plain VAE with a 2-d Gaussian latent: the encoder emits
// (mu_1, mu_2, logvar_1, logvar_2), the decoder emits Bernoulli logits over
// the input pixels (sigmoid applied at use sites).
struct VaeModel {
    MlpParams encoder; // input -> hidden... -> 4
    MlpParams decoder; // 2 -> hidden... -> input
    std::vector<double> input_offset; // empty means identity scaling
    std::vector<double> input_scale;
    std::vector<double> epoch_loss;
    double beta = 1.0;
    std::uint64_t seed = 0;

    Matrix scale_inputs(const Matrix& x) const;
};

// KL(N(mu, diag(exp(logvar))) || N(0, I)) = 0.5 sum(mu^2 + e^lv - 1 - lv).
double kl_divergence(std::span<const double> mu, std::span<const double> logvar);

struct VaeLoss {
    double total = 0.0;
    double reconstruction = 0.0; // Bernoulli cross-entropy, sum over pixels
    double kl = 0.0;
    // all three are means over the batch
};

// Reparameterized single-sample ELBO loss; eps supplies the unit-normal draw
// (batch x 2), which keeps the value reproducible and finite-differentiable.
VaeLoss vae_loss(const VaeModel& model, const Matrix& batch, const Matrix& eps);
// Convenience overload drawing eps from the generator.
VaeLoss vae_loss(const VaeModel& model, const Matrix& batch, Rng& rng);

// Same loss with gradients for all encoder and decoder parameters
// (flattened encoder-then-decoder, matching VaeModel parameter layout).
VaeLoss vae_loss_with_gradients(const VaeModel& model, const Matrix& batch, const Matrix& eps,
                                std::vector<double>& grad_out);

VaeModel vae_train(const Matrix& data, const VaeConfig& config);

// Encoder means only, one (z1, z2) row per input.
Matrix vae_embed(const VaeModel& model, const Matrix& inputs);

// Decodes a grid_n x grid_n lattice over [-1.5, 1.5]^2, row-major with z2
// descending and z1 ascending. Each row of the result is one decoded image.
Matrix vae_decode_grid(const VaeModel& model, std::size_t grid_n = 25);

// Checkpoint format shared with the DKL models (JSON header + raw f64 block).
void save_vae_checkpoint(const VaeModel& model, const std::filesystem::path& path);
VaeModel load_vae_checkpoint(const std::filesystem::path& path);

} // namespace latentforge
