#include "latentforge/dkl.hpp"

#include "latentforge/adam.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/io.hpp"
#include "latentforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latentforge {

namespace {

constexpr std::size_t kLatentDim = 2;

std::vector<std::size_t> encoder_sizes(std::size_t input_dim,
                                       const std::vector<std::size_t>& hidden) {
    std::vector<std::size_t> sizes;
    sizes.push_back(input_dim);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(kLatentDim);
    return sizes;
}

} // namespace

Matrix deep_kernel(const DklModel& model, const Matrix& a, const Matrix& b, bool include_noise) {
    return rbf_kernel(mlp_forward(model.encoder, a), mlp_forward(model.encoder, b), model.hyper,
                      include_noise);
}

DklModel dkl_train(const Matrix& X, const std::vector<double>& y, const DklConfig& config) {
    if (X.rows() < 2 || X.rows() != y.size())
        throw std::invalid_argument("dkl_train: need n >= 2 inputs with matching targets");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("dkl_train: non-finite target");

    DklModel model;
    model.seed = config.seed;
    model.train_x = X;
    model.train_y = y;

    const std::size_t n = X.rows();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(n));
    if (sd <= 0.0) sd = 1.0;
    model.target_mean = mean;
    model.target_std = sd;
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = (y[i] - mean) / sd;

    model.encoder = mlp_init(encoder_sizes(X.cols(), config.hidden_sizes), config.seed);
    model.hyper = KernelHyper{0.0, 0.0, std::log(0.01)};

    const std::size_t n_mlp = model.encoder.parameter_count();
    AdamState opt(n_mlp + 3, config.lr);
    std::vector<double> params = model.encoder.flatten();
    params.push_back(model.hyper.log_amplitude);
    params.push_back(model.hyper.log_lengthscale);
    params.push_back(model.hyper.log_noise);
    std::vector<double> grads(params.size());

    model.objective_trace.reserve(config.steps);
    for (std::size_t t = 0; t < config.steps; ++t) {
        const MlpForwardCache cache = mlp_forward_cached(model.encoder, X);
        MapObjectiveGrad g;
        try {
            g = map_objective_gradients(cache.output(), ys, model.hyper, config.prior, true);
        } catch (const NumericFailure& e) {
            throw NumericFailure("dkl_train: step " + std::to_string(t) + ": " + e.what());
        }
        model.objective_trace.push_back(g.objective);

        const MlpBackwardResult back = mlp_backward(model.encoder, cache, g.d_inputs);
        const std::vector<double> mg = back.gradients.flatten();
        for (std::size_t i = 0; i < n_mlp; ++i) grads[i] = -mg[i];
        grads[n_mlp + 0] = -g.d_log_amplitude;
        grads[n_mlp + 1] = -g.d_log_lengthscale;
        grads[n_mlp + 2] = -g.d_log_noise;

        adam_step(opt, params, grads);
        model.encoder.assign_from_flat(std::span<const double>(params).first(n_mlp));
        model.hyper.log_amplitude = params[n_mlp + 0];
        model.hyper.log_lengthscale = params[n_mlp + 1];
        model.hyper.log_noise = params[n_mlp + 2];
    }

    model.fit = gp_fit(mlp_forward(model.encoder, X), std::move(ys), model.hyper);
    return model;
}

PosteriorPrediction dkl_predict(const DklModel& model, const Matrix& queries) {
    PosteriorPrediction pred = gp_predict(model.fit, mlp_forward(model.encoder, queries));
    const double sd = model.target_std;
    for (double& m : pred.mean) m = m * sd + model.target_mean;
    for (double& v : pred.variance) v *= sd * sd;
    if (pred.covariance)
        for (double& v : pred.covariance->flat()) v *= sd * sd;
    return pred;
}

std::vector<LatentPoint> dkl_embed(const DklModel& model, const Matrix& inputs) {
    const Matrix z = mlp_forward(model.encoder, inputs);
    std::vector<LatentPoint> out(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) out[i] = {z(i, 0), z(i, 1)};
    return out;
}

void save_dkl_checkpoint(const DklModel& model, const std::filesystem::path& path) {
    nlohmann::json header;
    header["model"] = "dkl";
    header["layer_sizes"] = model.encoder.layer_sizes;
    header["log_amplitude"] = model.hyper.log_amplitude;
    header["log_lengthscale"] = model.hyper.log_lengthscale;
    header["log_noise"] = model.hyper.log_noise;
    header["target_mean"] = model.target_mean;
    header["target_std"] = model.target_std;
    header["seed"] = model.seed;
    header["n_train"] = model.train_x.rows();
    header["input_dim"] = model.train_x.cols();

    std::vector<double> block = model.encoder.flatten();
    block.insert(block.end(), model.train_x.flat().begin(), model.train_x.flat().end());
    block.insert(block.end(), model.train_y.begin(), model.train_y.end());
    write_checkpoint_file(path, header, block);
}

DklModel load_dkl_checkpoint(const std::filesystem::path& path) {
    const CheckpointBlob blob = read_checkpoint_file(path);
    if (blob.header.value("model", "") != "dkl")
        throw LoadFailure("checkpoint is not a dkl model: " + path.string());

    DklModel model;
    const auto sizes = blob.header.at("layer_sizes").get<std::vector<std::size_t>>();
    model.encoder.layer_sizes = sizes;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        model.encoder.weights.emplace_back(sizes[k], sizes[k + 1]);
        model.encoder.biases.emplace_back(sizes[k + 1], 0.0);
    }
    model.hyper.log_amplitude = blob.header.at("log_amplitude").get<double>();
    model.hyper.log_lengthscale = blob.header.at("log_lengthscale").get<double>();
    model.hyper.log_noise = blob.header.at("log_noise").get<double>();
    model.target_mean = blob.header.at("target_mean").get<double>();
    model.target_std = blob.header.at("target_std").get<double>();
    model.seed = blob.header.at("seed").get<std::uint64_t>();

    const std::size_t n = blob.header.at("n_train").get<std::size_t>();
    const std::size_t d = blob.header.at("input_dim").get<std::size_t>();
    const std::size_t n_mlp = model.encoder.parameter_count();
    if (blob.block.size() != n_mlp + n * d + n)
        throw LoadFailure("checkpoint block length mismatch: " + path.string());

    std::span<const double> block(blob.block);
    model.encoder.assign_from_flat(block.first(n_mlp));
    model.train_x = Matrix(n, d);
    std::copy_n(block.data() + n_mlp, n * d, model.train_x.data());
    model.train_y.assign(block.begin() + static_cast<std::ptrdiff_t>(n_mlp + n * d), block.end());

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i)
        ys[i] = (model.train_y[i] - model.target_mean) / model.target_std;
    model.fit = gp_fit(mlp_forward(model.encoder, model.train_x), std::move(ys), model.hyper);
    return model;
}

} // namespace latentforge
