#include "latentforge/vae.hpp"

#include "latentforge/adam.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace latentforge {

namespace {

constexpr std::size_t kLatentDim = 2;

double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// Numerically stable Bernoulli cross-entropy from logits:
// max(z,0) - z*x + log(1 + exp(-|z|)).
double bce_from_logit(double z, double x) {
    return std::max(z, 0.0) - z * x + std::log1p(std::exp(-std::abs(z)));
}

std::vector<std::size_t> chain(std::size_t in, const std::vector<std::size_t>& hidden,
                               std::size_t out) {
    std::vector<std::size_t> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

} // namespace

Matrix VaeModel::scale_inputs(const Matrix& x) const {
    if (input_offset.empty()) return x;
    if (input_offset.size() != x.cols())
        throw std::invalid_argument("VaeModel: input width does not match scaling constants");
    Matrix out = x;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* row = out.row(i).data();
        for (std::size_t j = 0; j < out.cols(); ++j)
            row[j] = (row[j] - input_offset[j]) * input_scale[j];
    }
    return out;
}

double kl_divergence(std::span<const double> mu, std::span<const double> logvar) {
    if (mu.size() != logvar.size())
        throw std::invalid_argument("kl_divergence: length mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k)
        acc += mu[k] * mu[k] + std::exp(logvar[k]) - 1.0 - logvar[k];
    return 0.5 * acc;
}

namespace {

VaeLoss loss_impl(const VaeModel& model, const Matrix& raw_batch, const Matrix& eps,
                  std::vector<double>* grad_out) {
    const Matrix batch = model.scale_inputs(raw_batch);
    if (batch.cols() != model.encoder.input_dim())
        throw std::invalid_argument("vae_loss: batch width does not match encoder");
    if (eps.rows() != batch.rows() || eps.cols() != kLatentDim)
        throw std::invalid_argument("vae_loss: eps must be batch x 2");
    const std::size_t b = batch.rows();
    const double inv_b = 1.0 / static_cast<double>(b);

    const MlpForwardCache enc = mlp_forward_cached(model.encoder, batch);
    const Matrix& h = enc.output(); // [mu | logvar]
    Matrix z(b, kLatentDim);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t k = 0; k < kLatentDim; ++k)
            z(i, k) = h(i, k) + std::exp(0.5 * h(i, k + kLatentDim)) * eps(i, k);

    const MlpForwardCache dec = mlp_forward_cached(model.decoder, z);
    const Matrix& logits = dec.output();

    VaeLoss loss;
    for (std::size_t i = 0; i < b; ++i) {
        const double* lrow = logits.row(i).data();
        const double* xrow = batch.row(i).data();
        for (std::size_t j = 0; j < batch.cols(); ++j)
            loss.reconstruction += bce_from_logit(lrow[j], xrow[j]);
        loss.kl += kl_divergence(h.row(i).subspan(0, kLatentDim),
                                 h.row(i).subspan(kLatentDim, kLatentDim));
    }
    loss.reconstruction *= inv_b;
    loss.kl *= inv_b;
    loss.total = loss.reconstruction + model.beta * loss.kl;

    if (grad_out) {
        Matrix dlogits(b, logits.cols());
        for (std::size_t i = 0; i < b; ++i) {
            const double* lrow = logits.row(i).data();
            const double* xrow = batch.row(i).data();
            double* grow = dlogits.row(i).data();
            for (std::size_t j = 0; j < logits.cols(); ++j)
                grow[j] = (sigmoid(lrow[j]) - xrow[j]) * inv_b;
        }
        const MlpBackwardResult dback = mlp_backward(model.decoder, dec, dlogits);

        // through the reparameterization into [dmu | dlogvar], plus KL terms
        Matrix dh(b, 2 * kLatentDim);
        for (std::size_t i = 0; i < b; ++i) {
            for (std::size_t k = 0; k < kLatentDim; ++k) {
                const double dz = dback.input_gradient(i, k);
                const double lv = h(i, k + kLatentDim);
                dh(i, k) = dz + model.beta * h(i, k) * inv_b;
                dh(i, k + kLatentDim) = dz * 0.5 * std::exp(0.5 * lv) * eps(i, k) +
                                        model.beta * 0.5 * (std::exp(lv) - 1.0) * inv_b;
            }
        }
        const MlpBackwardResult eback = mlp_backward(model.encoder, enc, dh);

        grad_out->clear();
        const std::vector<double> ge = eback.gradients.flatten();
        const std::vector<double> gd = dback.gradients.flatten();
        grad_out->reserve(ge.size() + gd.size());
        grad_out->insert(grad_out->end(), ge.begin(), ge.end());
        grad_out->insert(grad_out->end(), gd.begin(), gd.end());
    }
    return loss;
}

} // namespace

VaeLoss vae_loss(const VaeModel& model, const Matrix& batch, const Matrix& eps) {
    return loss_impl(model, batch, eps, nullptr);
}

VaeLoss vae_loss(const VaeModel& model, const Matrix& batch, Rng& rng) {
    Matrix eps(batch.rows(), kLatentDim);
    for (double& v : eps.flat()) v = rng.normal();
    return loss_impl(model, batch, eps, nullptr);
}

VaeLoss vae_loss_with_gradients(const VaeModel& model, const Matrix& batch, const Matrix& eps,
                                std::vector<double>& grad_out) {
    return loss_impl(model, batch, eps, &grad_out);
}

VaeModel vae_train(const Matrix& data, const VaeConfig& config) {
    if (data.rows() == 0) throw std::invalid_argument("vae_train: empty dataset");

    VaeModel model;
    model.beta = config.beta;
    model.seed = config.seed;
    model.encoder = mlp_init(chain(data.cols(), config.encoder_hidden, 2 * kLatentDim),
                             derive_seed(config.seed, "vae-encoder"));
    model.decoder = mlp_init(chain(kLatentDim, config.decoder_hidden, data.cols()),
                             derive_seed(config.seed, "vae-decoder"));

    if (config.normalize_inputs) {
        model.input_offset.resize(data.cols());
        model.input_scale.resize(data.cols());
        for (std::size_t j = 0; j < data.cols(); ++j) {
            double lo = data(0, j), hi = data(0, j);
            for (std::size_t i = 1; i < data.rows(); ++i) {
                lo = std::min(lo, data(i, j));
                hi = std::max(hi, data(i, j));
            }
            model.input_offset[j] = lo;
            model.input_scale[j] = hi > lo ? 1.0 / (hi - lo) : 1.0;
        }
    }

    const std::size_t n_enc = model.encoder.parameter_count();
    const std::size_t n_dec = model.decoder.parameter_count();
    std::vector<double> params = model.encoder.flatten();
    {
        const std::vector<double> dp = model.decoder.flatten();
        params.insert(params.end(), dp.begin(), dp.end());
    }
    AdamState opt(params.size(), config.lr);
    Rng rng(derive_seed(config.seed, "vae-train"));

    const std::size_t n = data.rows();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grads;

    model.epoch_loss.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        // seeded Fisher-Yates shuffle
        for (std::size_t i = n; i-- > 1;)
            std::swap(order[i], order[rng.uniform_index(i + 1)]);

        double epoch_total = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t stop = std::min(start + config.batch_size, n);
            Matrix batch(stop - start, data.cols());
            for (std::size_t i = start; i < stop; ++i) {
                const auto src = data.row(order[i]);
                std::copy(src.begin(), src.end(), batch.row(i - start).begin());
            }
            Matrix eps(batch.rows(), kLatentDim);
            for (double& v : eps.flat()) v = rng.normal();

            VaeLoss loss;
            try {
                loss = loss_impl(model, batch, eps, &grads);
            } catch (const NumericFailure& e) {
                throw NumericFailure("vae_train: epoch " + std::to_string(epoch) + ": " + e.what());
            }
            if (!std::isfinite(loss.total))
                throw NumericFailure("vae_train: non-finite loss at epoch " + std::to_string(epoch));
            epoch_total += loss.total * static_cast<double>(batch.rows());

            adam_step(opt, params, grads);
            model.encoder.assign_from_flat(std::span<const double>(params).first(n_enc));
            model.decoder.assign_from_flat(std::span<const double>(params).subspan(n_enc, n_dec));
        }
        model.epoch_loss.push_back(epoch_total / static_cast<double>(n));
    }
    return model;
}

Matrix vae_embed(const VaeModel& model, const Matrix& inputs) {
    const Matrix h = mlp_forward(model.encoder, model.scale_inputs(inputs));
    Matrix z(h.rows(), kLatentDim);
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t k = 0; k < kLatentDim; ++k) z(i, k) = h(i, k);
    return z;
}

Matrix vae_decode_grid(const VaeModel& model, std::size_t grid_n) {
    if (grid_n < 2) throw std::invalid_argument("vae_decode_grid: grid_n must be >= 2");
    constexpr double kLim = 1.5;
    Matrix zs(grid_n * grid_n, kLatentDim);
    std::size_t row = 0;
    for (std::size_t r = 0; r < grid_n; ++r) {
        // z2 descending down the grid, z1 ascending across
        const double z2 = kLim - 2.0 * kLim * static_cast<double>(r) / static_cast<double>(grid_n - 1);
        for (std::size_t c = 0; c < grid_n; ++c, ++row) {
            zs(row, 0) = -kLim + 2.0 * kLim * static_cast<double>(c) / static_cast<double>(grid_n - 1);
            zs(row, 1) = z2;
        }
    }
    Matrix logits = mlp_forward(model.decoder, zs);
    for (double& v : logits.flat()) v = sigmoid(v);
    return logits;
}

void save_vae_checkpoint(const VaeModel& model, const std::filesystem::path& path) {
    nlohmann::json header;
    header["model"] = "vae";
    header["encoder_sizes"] = model.encoder.layer_sizes;
    header["decoder_sizes"] = model.decoder.layer_sizes;
    header["beta"] = model.beta;
    header["seed"] = model.seed;
    header["normalized"] = !model.input_offset.empty();

    std::vector<double> block = model.encoder.flatten();
    {
        const std::vector<double> dp = model.decoder.flatten();
        block.insert(block.end(), dp.begin(), dp.end());
    }
    block.insert(block.end(), model.input_offset.begin(), model.input_offset.end());
    block.insert(block.end(), model.input_scale.begin(), model.input_scale.end());
    write_checkpoint_file(path, header, block);
}

VaeModel load_vae_checkpoint(const std::filesystem::path& path) {
    const CheckpointBlob blob = read_checkpoint_file(path);
    if (blob.header.value("model", "") != "vae")
        throw LoadFailure("checkpoint is not a vae model: " + path.string());

    VaeModel model;
    auto build = [](const std::vector<std::size_t>& sizes) {
        MlpParams p;
        p.layer_sizes = sizes;
        for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
            p.weights.emplace_back(sizes[k], sizes[k + 1]);
            p.biases.emplace_back(sizes[k + 1], 0.0);
        }
        return p;
    };
    model.encoder = build(blob.header.at("encoder_sizes").get<std::vector<std::size_t>>());
    model.decoder = build(blob.header.at("decoder_sizes").get<std::vector<std::size_t>>());
    model.beta = blob.header.at("beta").get<double>();
    model.seed = blob.header.at("seed").get<std::uint64_t>();

    const std::size_t n_enc = model.encoder.parameter_count();
    const std::size_t n_dec = model.decoder.parameter_count();
    const bool normalized = blob.header.at("normalized").get<bool>();
    const std::size_t width = model.encoder.input_dim();
    const std::size_t expected = n_enc + n_dec + (normalized ? 2 * width : 0);
    if (blob.block.size() != expected)
        throw LoadFailure("checkpoint block length mismatch: " + path.string());

    std::span<const double> block(blob.block);
    model.encoder.assign_from_flat(block.first(n_enc));
    model.decoder.assign_from_flat(block.subspan(n_enc, n_dec));
    if (normalized) {
        model.input_offset.assign(block.begin() + static_cast<std::ptrdiff_t>(n_enc + n_dec),
                                  block.begin() + static_cast<std::ptrdiff_t>(n_enc + n_dec + width));
        model.input_scale.assign(block.begin() + static_cast<std::ptrdiff_t>(n_enc + n_dec + width),
                                 block.end());
    }
    return model;
}

} // namespace latentforge
