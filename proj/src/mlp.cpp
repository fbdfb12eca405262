#include "latentforge/mlp.hpp"

#include "latentforge/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace latentforge {

std::size_t MlpParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k)
        n += (layer_sizes[k] + 1) * layer_sizes[k + 1];
    return n;
}

std::vector<double> MlpParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        flat.insert(flat.end(), weights[k].flat().begin(), weights[k].flat().end());
        flat.insert(flat.end(), biases[k].begin(), biases[k].end());
    }
    return flat;
}

void MlpParams::assign_from_flat(std::span<const double> flat) {
    if (flat.size() != parameter_count())
        throw std::invalid_argument("MlpParams::assign_from_flat: length mismatch");
    std::size_t pos = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        auto w = weights[k].flat();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = flat[pos++];
        for (double& b : biases[k]) b = flat[pos++];
    }
}

std::vector<double> MlpGradients::flatten() const {
    std::vector<double> flat;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        flat.insert(flat.end(), weights[k].flat().begin(), weights[k].flat().end());
        flat.insert(flat.end(), biases[k].begin(), biases[k].end());
    }
    return flat;
}

MlpParams mlp_init(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("mlp_init: need at least input and output layer");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw std::invalid_argument("mlp_init: zero layer size");

    MlpParams p;
    p.layer_sizes = layer_sizes;
    Rng rng(derive_seed(seed, "mlp-init"));
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        const std::size_t nin = layer_sizes[k], nout = layer_sizes[k + 1];
        const double lim = std::sqrt(6.0 / static_cast<double>(nin + nout));
        Matrix w(nin, nout);
        for (double& v : w.flat()) v = rng.uniform(-lim, lim);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(nout, 0.0);
    }
    return p;
}

namespace {

void layer_forward(const Matrix& in, const Matrix& w, const std::vector<double>& b, bool tanh_act,
                   Matrix& out) {
    matmul_into(in, w, out);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i).data();
        for (std::size_t j = 0; j < out.cols(); ++j) {
            row[j] += b[j];
            if (tanh_act) row[j] = std::tanh(row[j]);
        }
    }
}

} // namespace

Matrix mlp_forward(const MlpParams& params, const Matrix& x_batch) {
    return mlp_forward_cached(params, x_batch).activations.back();
}

MlpForwardCache mlp_forward_cached(const MlpParams& params, const Matrix& x_batch) {
    if (x_batch.cols() != params.input_dim())
        throw std::invalid_argument("mlp_forward: input width does not match first layer");
    MlpForwardCache cache;
    cache.activations.reserve(params.weights.size() + 1);
    cache.activations.push_back(x_batch);
    for (std::size_t k = 0; k < params.weights.size(); ++k) {
        const bool hidden = k + 1 < params.weights.size();
        Matrix out;
        layer_forward(cache.activations.back(), params.weights[k], params.biases[k], hidden, out);
        cache.activations.push_back(std::move(out));
    }
    return cache;
}

MlpBackwardResult mlp_backward(const MlpParams& params, const MlpForwardCache& cache,
                               const Matrix& output_grad) {
    const std::size_t layers = params.weights.size();
    const Matrix& out = cache.activations.back();
    if (output_grad.rows() != out.rows() || output_grad.cols() != out.cols())
        throw std::invalid_argument("mlp_backward: output_grad shape mismatch");

    MlpBackwardResult res;
    res.gradients.weights.resize(layers);
    res.gradients.biases.resize(layers);

    Matrix delta = output_grad; // dL/d(pre-activation of current layer)
    for (std::size_t kk = layers; kk-- > 0;) {
        if (kk + 1 < layers) {
            // Hidden layer: fold in tanh'(z) = 1 - a^2 using the stored activation.
            const Matrix& act = cache.activations[kk + 1];
            for (std::size_t i = 0; i < delta.rows(); ++i) {
                double* drow = delta.row(i).data();
                const double* arow = act.row(i).data();
                for (std::size_t j = 0; j < delta.cols(); ++j)
                    drow[j] *= 1.0 - arow[j] * arow[j];
            }
        }
        const Matrix& in = cache.activations[kk];
        res.gradients.weights[kk] = matmul_at_b(in, delta);
        std::vector<double> bg(delta.cols(), 0.0);
        for (std::size_t i = 0; i < delta.rows(); ++i) {
            const double* drow = delta.row(i).data();
            for (std::size_t j = 0; j < delta.cols(); ++j) bg[j] += drow[j];
        }
        res.gradients.biases[kk] = std::move(bg);
        delta = matmul_a_bt(delta, params.weights[kk]);
    }
    res.input_gradient = std::move(delta);
    return res;
}

} // namespace latentforge
