#pragma once

#include "latentforge/matrix.hpp"

#include <cstdint>
#include <vector>

namespace latentforge {

// Fully-connected network with tanh hidden layers and a linear output layer.
// weights[k] is (layer_sizes[k] x layer_sizes[k+1]); activations are computed
// as row-batches: out = act(in * W + b).
struct MlpParams {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t input_dim() const { return layer_sizes.front(); }
    std::size_t output_dim() const { return layer_sizes.back(); }
    std::size_t parameter_count() const;

    std::vector<double> flatten() const;
    void assign_from_flat(std::span<const double> flat);
};

struct MlpGradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::vector<double> flatten() const;
};

// Glorot-uniform weights (+-sqrt(6/(n_in+n_out))), zero biases. Deterministic
// given the seed. layer_sizes needs >= 2 entries, all >= 1.
MlpParams mlp_init(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

Matrix mlp_forward(const MlpParams& params, const Matrix& x_batch);

// Forward pass that keeps per-layer outputs for backprop.
// activations[0] is the input batch, activations[k+1] the output of layer k.
struct MlpForwardCache {
    std::vector<Matrix> activations;
    const Matrix& output() const { return activations.back(); }
};
MlpForwardCache mlp_forward_cached(const MlpParams& params, const Matrix& x_batch);

struct MlpBackwardResult {
    MlpGradients gradients;
    Matrix input_gradient;
};
// output_grad holds dL/d(output) for an arbitrary scalar loss L.
MlpBackwardResult mlp_backward(const MlpParams& params, const MlpForwardCache& cache,
                               const Matrix& output_grad);

} // namespace latentforge
