#include "latentforge/commands.hpp"

#include "latentforge/bo.hpp"
#include "latentforge/cards.hpp"
#include "latentforge/csv.hpp"
#include "latentforge/dkl.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/ferrosim.hpp"
#include "latentforge/io.hpp"
#include "latentforge/latentstats.hpp"
#include "latentforge/png.hpp"
#include "latentforge/selfcheck.hpp"
#include "latentforge/vae.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <thread>

namespace latentforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

Json lattice_defaults() {
    return Json{{"size", 20},        {"a2", -1.0},  {"a4", 1.0},
                {"k_grad", 0.5},     {"mobility", 1.0}, {"dt", 0.02},
                {"init_amplitude", 0.01}};
}

Json target_defaults() {
    return Json{{"kind", "ordinal_suit"}, {"suit", "hearts"}, {"column", "curl"}};
}

SimConfig lattice_from_json(const Json& j) {
    SimConfig cfg;
    cfg.size = j.at("size").get<std::size_t>();
    cfg.a2 = j.at("a2").get<double>();
    cfg.a4 = j.at("a4").get<double>();
    cfg.k_grad = j.at("k_grad").get<double>();
    cfg.mobility = j.at("mobility").get<double>();
    cfg.dt = j.at("dt").get<double>();
    cfg.init_amplitude = j.at("init_amplitude").get<double>();
    return cfg;
}

Suit suit_from_name(const std::string& name) {
    if (name == "clubs") return Suit::clubs;
    if (name == "spades") return Suit::spades;
    if (name == "hearts") return Suit::hearts;
    if (name == "diamonds") return Suit::diamonds;
    throw ConfigError("unknown suit '" + name + "'");
}

DatasetContainer load_dataset_arg(const Json& cfg) {
    const std::string path = cfg.at("dataset").get<std::string>();
    if (path.empty()) throw ConfigError("config key 'dataset' must point to a dataset directory");
    return load_dataset(path);
}

// Seed of the ferrosim run for curve i of a field dataset. simulate-sweep and
// the live run-bo oracle share this derivation so their targets agree exactly.
std::uint64_t sweep_curve_seed(std::uint64_t dataset_seed, std::size_t index) {
    return derive_seed(derive_seed(dataset_seed, "ferrosim-sweep"), index);
}

// Latent CSV: index, <coord names>, optional predicted/target, every dataset
// target column and every meta column except index.
struct LatentExport {
    std::vector<std::string> names;
    std::vector<const std::vector<double>*> columns; // aligned with names, after coords
};

void write_latent_csv(const std::filesystem::path& path, const char* c1, const char* c2,
                      const Matrix& coords, const std::vector<std::size_t>& indices,
                      const LatentExport& extra) {
    std::vector<std::string> header{"index", c1, c2};
    header.insert(header.end(), extra.names.begin(), extra.names.end());
    CsvWriter csv(path, header);
    for (std::size_t r = 0; r < coords.rows(); ++r) {
        const std::size_t master = indices.empty() ? r : indices[r];
        csv.begin_row();
        csv.field(master);
        csv.field(coords(r, 0));
        csv.field(coords(r, 1));
        for (const auto* col : extra.columns) csv.field((*col)[master]);
        csv.end_row();
    }
}

LatentExport dataset_ground_truth_columns(const DatasetContainer& ds) {
    LatentExport ex;
    for (const auto& [name, values] : ds.targets) {
        ex.names.push_back(name);
        ex.columns.push_back(&values);
    }
    for (const auto& name : ds.meta_columns) {
        if (name == "index") continue;
        ex.names.push_back(name);
        ex.columns.push_back(&ds.meta.at(name));
    }
    return ex;
}

std::size_t thread_count(const Json& cfg) {
    const auto req = cfg.at("threads").get<std::size_t>();
    if (req > 0) return req;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------- gen-cards

std::vector<std::string> cmd_gen_cards(const Json& cfg, const std::filesystem::path& out) {
    CardsConfig cc;
    cc.seed = cfg.at("seed").get<std::uint64_t>();
    cc.per_suit = cfg.at("per_suit").get<std::size_t>();
    cc.size = cfg.at("size").get<std::size_t>();
    const CardsDataset cards = generate_cards_dataset(cc);

    DatasetContainer ds;
    ds.n_rows = cards.images.size();
    ds.n_cols = cc.size * cc.size;
    ds.seed = cc.seed;
    ds.source = "cards";
    ds.inputs = cards.inputs();
    ds.meta_columns = {"index", "suit", "rotation_rad", "shear_rad"};
    auto& idx = ds.meta["index"];
    auto& suit = ds.meta["suit"];
    auto& rot = ds.meta["rotation_rad"];
    auto& shear = ds.meta["shear_rad"];
    for (std::size_t i = 0; i < cards.images.size(); ++i) {
        idx.push_back(static_cast<double>(i));
        suit.push_back(static_cast<double>(static_cast<int>(cards.images[i].suit)));
        rot.push_back(cards.images[i].rotation);
        shear.push_back(cards.images[i].shear);
    }
    save_dataset(ds, out / "dataset");
    return {"dataset"};
}

// ---------------------------------------------------------------- gen-fields

std::vector<std::string> cmd_gen_fields(const Json& cfg, const std::filesystem::path& out) {
    FieldFamilyConfig fc;
    fc.seed = cfg.at("seed").get<std::uint64_t>();
    fc.n_curves = cfg.at("n_curves").get<std::size_t>();
    fc.t_samples = cfg.at("t_samples").get<std::size_t>();
    auto range = [&](const char* key) {
        const auto v = cfg.at(key).get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError(std::string("range '") + key + "' needs two entries");
        return std::pair<double, double>{v[0], v[1]};
    };
    fc.amplitude_range = range("amplitude");
    fc.growth_range = range("growth");
    fc.frequency_range = range("frequency");
    fc.offset_range = range("offset");

    const std::vector<FieldCurve> curves = generate_field_family(fc);

    DatasetContainer ds;
    ds.n_rows = curves.size();
    ds.n_cols = fc.t_samples;
    ds.seed = fc.seed;
    ds.source = "fields";
    ds.inputs = field_family_inputs(curves);
    ds.meta_columns = {"index", "amplitude", "growth", "frequency", "offset"};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        ds.meta["index"].push_back(static_cast<double>(i));
        ds.meta["amplitude"].push_back(curves[i].params.amplitude);
        ds.meta["growth"].push_back(curves[i].params.growth);
        ds.meta["frequency"].push_back(curves[i].params.frequency);
        ds.meta["offset"].push_back(curves[i].params.offset);
    }
    save_dataset(ds, out / "dataset");
    return {"dataset"};
}

// ------------------------------------------------------------ simulate-sweep

std::vector<std::string> cmd_simulate_sweep(const Json& cfg, const std::filesystem::path& out) {
    DatasetContainer ds = load_dataset_arg(cfg);
    const SimConfig lattice = lattice_from_json(cfg.at("lattice"));

    const std::size_t n = ds.n_rows;
    std::vector<double> curl(n), ncurl(n), tpol(n);
    const std::size_t workers = std::min(thread_count(cfg), std::max<std::size_t>(n, 1));

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            FieldCurve curve;
            curve.samples.assign(ds.inputs.row(i).begin(), ds.inputs.row(i).end());
            const SimResult res = run_simulation(curve, lattice, sweep_curve_seed(ds.seed, i));
            curl[i] = res.curl;
            ncurl[i] = res.normalized_curl;
            tpol[i] = res.total_polarization;
        }
    };
    if (workers <= 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk, hi = std::min(lo + chunk, n);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    ds.source = "ferrosim-sweep";
    ds.targets["curl"] = curl;
    ds.targets["normalized_curl"] = ncurl;
    ds.targets["total_polarization"] = tpol;
    save_dataset(ds, out / "dataset");

    std::vector<std::string> header{"index"};
    for (const auto& name : ds.meta_columns)
        if (name != "index") header.push_back(name);
    header.insert(header.end(), {"curl", "normalized_curl", "total_polarization"});
    CsvWriter csv(out / "sweep.csv", header);
    for (std::size_t i = 0; i < n; ++i) {
        csv.begin_row();
        csv.field(i);
        for (const auto& name : ds.meta_columns)
            if (name != "index") csv.field(ds.meta.at(name)[i]);
        csv.field(curl[i]);
        csv.field(ncurl[i]);
        csv.field(tpol[i]);
        csv.end_row();
    }
    return {"dataset", "sweep.csv"};
}

// ------------------------------------------------------------------ train-vae

std::vector<std::string> cmd_train_vae(const Json& cfg, const std::filesystem::path& out) {
    const DatasetContainer ds = load_dataset_arg(cfg);

    VaeConfig vc;
    vc.seed = cfg.at("seed").get<std::uint64_t>();
    vc.encoder_hidden = cfg.at("encoder_hidden").get<std::vector<std::size_t>>();
    vc.decoder_hidden = cfg.at("decoder_hidden").get<std::vector<std::size_t>>();
    vc.epochs = cfg.at("epochs").get<std::size_t>();
    vc.batch_size = cfg.at("batch_size").get<std::size_t>();
    vc.lr = cfg.at("lr").get<double>();
    vc.beta = cfg.at("beta").get<double>();

    const Json& norm = cfg.at("normalize_inputs");
    if (norm.is_boolean()) {
        vc.normalize_inputs = norm.get<bool>();
    } else if (norm.is_string() && norm.get<std::string>() == "auto") {
        vc.normalize_inputs = false;
        for (double v : ds.inputs.flat()) {
            if (v < 0.0 || v > 1.0) {
                vc.normalize_inputs = true;
                break;
            }
        }
    } else {
        throw ConfigError("normalize_inputs must be true, false or \"auto\"");
    }

    const VaeModel model = vae_train(ds.inputs, vc);
    save_vae_checkpoint(model, out / "checkpoint.lfc");

    const Matrix z = vae_embed(model, ds.inputs);
    write_latent_csv(out / "latent.csv", "z1", "z2", z, {}, dataset_ground_truth_columns(ds));

    CsvWriter loss(out / "loss_trace.csv", {"epoch", "mean_loss"});
    for (std::size_t e = 0; e < model.epoch_loss.size(); ++e) {
        loss.begin_row();
        loss.field(e);
        loss.field(model.epoch_loss[e]);
        loss.end_row();
    }
    return {"checkpoint.lfc", "latent.csv", "loss_trace.csv"};
}

// ------------------------------------------------------------ train-dkl-static

std::vector<std::string> cmd_train_dkl_static(const Json& cfg, const std::filesystem::path& out) {
    const DatasetContainer ds = load_dataset_arg(cfg);
    const ResolvedTarget target = resolve_target(ds, cfg.at("target"));

    DklConfig dc;
    dc.seed = cfg.at("seed").get<std::uint64_t>();
    dc.hidden_sizes = cfg.at("hidden_sizes").get<std::vector<std::size_t>>();
    dc.steps = cfg.at("steps").get<std::size_t>();
    dc.lr = cfg.at("lr").get<double>();

    const DklModel model = dkl_train(ds.inputs, target.values, dc);
    save_dkl_checkpoint(model, out / "checkpoint.lfc");

    const PosteriorPrediction pred = dkl_predict(model, ds.inputs);
    Matrix z(ds.n_rows, 2);
    {
        const auto pts = dkl_embed(model, ds.inputs);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            z(i, 0) = pts[i].d1;
            z(i, 1) = pts[i].d2;
        }
    }
    LatentExport extra;
    extra.names = {"predicted", "target"};
    extra.columns = {&pred.mean, &target.values};
    const LatentExport gt = dataset_ground_truth_columns(ds);
    extra.names.insert(extra.names.end(), gt.names.begin(), gt.names.end());
    extra.columns.insert(extra.columns.end(), gt.columns.begin(), gt.columns.end());
    write_latent_csv(out / "latent.csv", "d1", "d2", z, {}, extra);

    CsvWriter trace(out / "objective_trace.csv", {"step", "objective"});
    for (std::size_t t = 0; t < model.objective_trace.size(); ++t) {
        trace.begin_row();
        trace.field(t);
        trace.field(model.objective_trace[t]);
        trace.end_row();
    }
    return {"checkpoint.lfc", "latent.csv", "objective_trace.csv"};
}

// --------------------------------------------------------------------- run-bo

std::vector<std::string> cmd_run_bo(const Json& cfg, const std::filesystem::path& out) {
    const DatasetContainer ds = load_dataset_arg(cfg);

    BoConfig bc;
    bc.seed = cfg.at("seed").get<std::uint64_t>();
    bc.n_init = cfg.at("n_init").get<std::size_t>();
    bc.n_steps = cfg.at("n_steps").get<std::size_t>();
    bc.acquisition.lambda = cfg.at("lambda").get<double>();
    bc.acquisition.exponent = cfg.at("exponent").get<double>();
    bc.dkl.hidden_sizes = cfg.at("dkl").at("hidden_sizes").get<std::vector<std::size_t>>();
    bc.dkl.steps = cfg.at("dkl").at("steps").get<std::size_t>();
    bc.dkl.lr = cfg.at("dkl").at("lr").get<double>();
    if (bc.n_init >= ds.n_rows) throw ConfigError("n_init must be smaller than the pool size");

    Oracle oracle;
    const std::string kind = cfg.at("oracle").get<std::string>();
    std::vector<double> precomputed;
    if (kind == "column") {
        precomputed = resolve_target(ds, cfg.at("target")).values;
        oracle = [&precomputed](std::size_t i) { return precomputed[i]; };
    } else if (kind == "live-ferrosim") {
        const SimConfig lattice = lattice_from_json(cfg.at("lattice"));
        const std::string functional = cfg.at("target").at("column").get<std::string>();
        if (functional != "curl" && functional != "normalized_curl" &&
            functional != "total_polarization")
            throw ConfigError("live-ferrosim target.column must be a ferrosim functional");
        oracle = [&ds, lattice, functional](std::size_t i) {
            FieldCurve curve;
            curve.samples.assign(ds.inputs.row(i).begin(), ds.inputs.row(i).end());
            const SimResult res = run_simulation(curve, lattice, sweep_curve_seed(ds.seed, i));
            if (functional == "curl") return res.curl;
            if (functional == "normalized_curl") return res.normalized_curl;
            return res.total_polarization;
        };
    } else {
        throw ConfigError("oracle must be 'column' or 'live-ferrosim'");
    }

    const BoResult result = bo_run(ds.inputs, oracle, bc);
    write_trace_csv(result.state, out / "trace.csv");
    save_dkl_checkpoint(result.final_model, out / "checkpoint.lfc");

    {
        CsvWriter best(out / "cumulative_best.csv", {"step", "cumulative_best"});
        for (const TraceRow& r : result.state.trace) {
            best.begin_row();
            best.field(r.step);
            best.field(r.cumulative_best);
            best.end_row();
        }
    }

    // latent exports with final-model predictions over explored / unexplored / all
    const PosteriorPrediction pred = dkl_predict(result.final_model, ds.inputs);
    Matrix z(ds.n_rows, 2);
    {
        const auto pts = dkl_embed(result.final_model, ds.inputs);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            z(i, 0) = pts[i].d1;
            z(i, 1) = pts[i].d2;
        }
    }
    const LatentExport gt = dataset_ground_truth_columns(ds);
    LatentExport extra;
    extra.names = {"predicted"};
    extra.columns = {&pred.mean};
    extra.names.insert(extra.names.end(), gt.names.begin(), gt.names.end());
    extra.columns.insert(extra.columns.end(), gt.columns.begin(), gt.columns.end());

    auto subset_csv = [&](const std::filesystem::path& path, const std::vector<std::size_t>& idx) {
        Matrix zc(idx.size(), 2);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            zc(r, 0) = z(idx[r], 0);
            zc(r, 1) = z(idx[r], 1);
        }
        write_latent_csv(path, "d1", "d2", zc, idx, extra);
    };
    subset_csv(out / "latent_explored.csv", result.state.measured_indices);
    subset_csv(out / "latent_unexplored.csv", result.state.pool_indices);
    write_latent_csv(out / "latent_all.csv", "d1", "d2", z, {}, extra);

    std::vector<std::string> artifacts{"trace.csv",           "cumulative_best.csv",
                                       "checkpoint.lfc",      "latent_explored.csv",
                                       "latent_unexplored.csv", "latent_all.csv"};

    if (cfg.at("baseline").get<bool>()) {
        const BoState base = random_baseline(ds.inputs, oracle, bc);
        write_trace_csv(base, out / "baseline_trace.csv");
        artifacts.push_back("baseline_trace.csv");
    }
    return artifacts;
}

// ----------------------------------------------------------------- export-plots

void render_scatter(const std::filesystem::path& path, std::span<const double> x,
                    std::span<const double> y, std::span<const double> value, std::size_t size,
                    std::size_t radius) {
    RgbImage img(size, size);
    if (!x.empty()) {
        const double x0 = *std::min_element(x.begin(), x.end());
        const double x1 = *std::max_element(x.begin(), x.end());
        const double y0 = *std::min_element(y.begin(), y.end());
        const double y1 = *std::max_element(y.begin(), y.end());
        double v0 = 0.0, v1 = 0.0;
        bool has_value = false;
        for (double v : value) {
            if (!std::isfinite(v)) continue;
            if (!has_value) {
                v0 = v1 = v;
                has_value = true;
            }
            v0 = std::min(v0, v);
            v1 = std::max(v1, v);
        }
        const double margin = 0.04 * static_cast<double>(size);
        const double span = static_cast<double>(size) - 2.0 * margin;
        auto to_px = [&](double v, double lo, double hi) {
            const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
            return margin + t * span;
        };
        const auto r = static_cast<std::ptrdiff_t>(radius);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(value[i])) continue;
            const double t = v1 > v0 ? (value[i] - v0) / (v1 - v0) : 0.5;
            std::uint8_t cr, cg, cb;
            viridis(t, cr, cg, cb);
            const auto cx = static_cast<std::ptrdiff_t>(to_px(x[i], x0, x1));
            const auto cy = static_cast<std::ptrdiff_t>(
                static_cast<double>(size) - to_px(y[i], y0, y1)); // y up
            for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
                for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    const std::ptrdiff_t px = cx + dx, py = cy + dy;
                    if (px < 0 || py < 0 || px >= static_cast<std::ptrdiff_t>(size) ||
                        py >= static_cast<std::ptrdiff_t>(size))
                        continue;
                    img.set(static_cast<std::size_t>(px), static_cast<std::size_t>(py), cr, cg, cb);
                }
            }
        }
    }
    write_png(img, path);
}

void write_binned_csv(const std::filesystem::path& path, const BinnedSurface& s) {
    CsvWriter csv(path, {"bin_x", "bin_y", "count", "mean"});
    for (std::size_t i = 0; i < s.bins; ++i) {
        for (std::size_t j = 0; j < s.bins; ++j) {
            csv.begin_row();
            csv.field(i);
            csv.field(j);
            csv.field(s.count[i * s.bins + j]);
            csv.field(s.occupied(i, j) ? s.mean(i, j)
                                       : std::numeric_limits<double>::quiet_NaN());
            csv.end_row();
        }
    }
}

// Renders the heatmap strictly from the binned CSV so the PNG is a pure
// function of the exported table.
void render_heatmap_from_csv(const std::filesystem::path& csv_path,
                             const std::filesystem::path& png_path, std::size_t bins,
                             std::size_t size) {
    const CsvTable table = read_csv(csv_path);
    const auto& means = table.column("mean");
    const auto& counts = table.column("count");
    double v0 = 0.0, v1 = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (counts[k] <= 0.0 || !std::isfinite(means[k])) continue;
        if (!any) {
            v0 = v1 = means[k];
            any = true;
        }
        v0 = std::min(v0, means[k]);
        v1 = std::max(v1, means[k]);
    }
    RgbImage img(size, size);
    const double cell = static_cast<double>(size) / static_cast<double>(bins);
    for (std::size_t k = 0; k < means.size(); ++k) {
        if (counts[k] <= 0.0 || !std::isfinite(means[k])) continue;
        const auto bx = static_cast<std::size_t>(table.column("bin_x")[k]);
        const auto by = static_cast<std::size_t>(table.column("bin_y")[k]);
        const double t = v1 > v0 ? (means[k] - v0) / (v1 - v0) : 0.5;
        std::uint8_t r, g, b;
        viridis(t, r, g, b);
        const auto px0 = static_cast<std::size_t>(static_cast<double>(bx) * cell);
        const auto px1 = static_cast<std::size_t>(static_cast<double>(bx + 1) * cell);
        // bin_y ascending maps bottom-up
        const auto py1 = size - static_cast<std::size_t>(static_cast<double>(by) * cell);
        const auto py0 = size - static_cast<std::size_t>(static_cast<double>(by + 1) * cell);
        for (std::size_t py = py0; py < py1 && py < size; ++py)
            for (std::size_t px = px0; px < px1 && px < size; ++px) img.set(px, py, r, g, b);
    }
    write_png(img, png_path);
}

std::vector<std::string> cmd_export_plots(const Json& cfg, const std::filesystem::path& out) {
    const std::filesystem::path run = cfg.at("run").get<std::string>();
    if (run.empty()) throw ConfigError("config key 'run' must point to a finished run directory");
    const Json manifest = read_run_manifest(run);
    const std::string command = manifest.at("command").get<std::string>();
    const auto bins = cfg.at("bins").get<std::size_t>();
    const auto size = cfg.at("size").get<std::size_t>();
    const auto radius = cfg.at("point_radius").get<std::size_t>();

    std::vector<std::string> artifacts;
    auto process_latent = [&](const std::string& file) {
        const std::filesystem::path src = run / file;
        if (!std::filesystem::exists(src)) throw ConfigError("missing run artifact: " + src.string());
        const CsvTable table = read_csv(src);
        const bool dkl = table.has_column("d1");
        const auto& cx = table.column(dkl ? "d1" : "z1");
        const auto& cy = table.column(dkl ? "d2" : "z2");
        const std::string base = std::filesystem::path(file).stem().string();

        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const std::string& name = table.columns[c];
            if (name == "index" || name == (dkl ? "d1" : "z1") || name == (dkl ? "d2" : "z2"))
                continue;
            const auto& values = table.data[c];
            {
                const std::string scsv = "scatter_" + base + "_" + name + ".csv";
                CsvWriter sc(out / scsv, {"x", "y", "value", "color_key"});
                for (std::size_t i = 0; i < values.size(); ++i) {
                    sc.begin_row();
                    sc.field(cx[i]);
                    sc.field(cy[i]);
                    sc.field(values[i]);
                    sc.field(name);
                    sc.end_row();
                }
                artifacts.push_back(scsv);
            }
            const std::string spng = "scatter_" + base + "_" + name + ".png";
            render_scatter(out / spng, cx, cy, values, size, radius);
            artifacts.push_back(spng);

            const bool surface_worthy = name == "target" || name == "predicted" ||
                                        name == "curl" || name == "normalized_curl" ||
                                        name == "total_polarization";
            if (surface_worthy) {
                const BinnedSurface s = binned_mean_surface(cx, cy, values, bins);
                const std::string bcsv = "binned_" + base + "_" + name + ".csv";
                write_binned_csv(out / bcsv, s);
                const std::string hpng = "heatmap_" + base + "_" + name + ".png";
                render_heatmap_from_csv(out / bcsv, out / hpng, bins, size);
                artifacts.push_back(bcsv);
                artifacts.push_back(hpng);
            }
        }
    };

    if (command == "train-vae" || command == "train-dkl-static") {
        process_latent("latent.csv");
    } else if (command == "run-bo") {
        process_latent("latent_explored.csv");
        process_latent("latent_unexplored.csv");
        process_latent("latent_all.csv");
    } else if (command == "simulate-sweep") {
        const SimConfig lattice = lattice_from_json(manifest.at("config").at("lattice"));
        const auto amplitude = cfg.at("hysteresis_amplitude").get<double>();
        const auto periods = cfg.at("hysteresis_periods").get<std::size_t>();
        const auto loop = hysteresis_loop(amplitude, periods, lattice);
        CsvWriter csv(out / "hysteresis.csv", {"e_x", "mean_px"});
        std::vector<double> ex, px;
        for (const auto& [e, p] : loop) {
            csv.begin_row();
            csv.field(e);
            csv.field(p);
            csv.end_row();
            ex.push_back(e);
            px.push_back(p);
        }
        std::vector<double> color(ex.size());
        for (std::size_t i = 0; i < color.size(); ++i)
            color[i] = static_cast<double>(i) / static_cast<double>(color.size());
        render_scatter(out / "hysteresis.png", ex, px, color, size, 2);
        artifacts.push_back("hysteresis.csv");
        artifacts.push_back("hysteresis.png");
    } else {
        throw ConfigError("export-plots: unsupported source command '" + command + "'");
    }
    return artifacts;
}

// ------------------------------------------------------------------ grad-check

std::vector<std::string> cmd_grad_check(const Json& cfg, const std::filesystem::path& out) {
    const auto seeds = cfg.at("seeds").get<std::size_t>();
    const auto tolerance = cfg.at("tolerance").get<double>();
    const auto reports = run_gradient_selfchecks(seeds, tolerance, cfg.at("seed").get<std::uint64_t>());

    CsvWriter csv(out / "grad_check.csv", {"check", "max_rel_error", "tolerance", "pass"});
    bool all_pass = true;
    for (const auto& r : reports) {
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name << " max_rel_error="
                  << CsvWriter::format_double(r.max_rel_error) << " tol="
                  << CsvWriter::format_double(r.tolerance) << "\n";
        csv.begin_row();
        csv.field(r.name);
        csv.field(r.max_rel_error);
        csv.field(r.tolerance);
        csv.field(std::string(r.pass ? "1" : "0"));
        csv.end_row();
        all_pass = all_pass && r.pass;
    }
    if (!all_pass) throw NumericFailure("grad-check: at least one gradient check failed");
    return {"grad_check.csv"};
}

} // namespace

std::vector<std::string> known_commands() {
    return {"gen-cards",  "gen-fields",      "simulate-sweep", "train-vae",
            "train-dkl-static", "run-bo",    "export-plots",   "grad-check"};
}

Json command_defaults(const std::string& command) {
    if (command == "gen-cards")
        return Json{{"seed", 0}, {"per_suit", 2000}, {"size", 32}};
    if (command == "gen-fields")
        return Json{{"seed", 0},
                    {"n_curves", 7500},
                    {"t_samples", 100},
                    {"amplitude", {0.5, 3.0}},
                    {"growth", {-2.0, 2.0}},
                    {"frequency", {2.0 * kPi, 8.0 * kPi}},
                    {"offset", {-0.5, 0.5}}};
    if (command == "simulate-sweep")
        return Json{{"dataset", ""}, {"lattice", lattice_defaults()}, {"threads", 0}};
    if (command == "train-vae")
        return Json{{"seed", 0},
                    {"dataset", ""},
                    {"encoder_hidden", {64}},
                    {"decoder_hidden", {64}},
                    {"epochs", 50},
                    {"batch_size", 64},
                    {"lr", 1e-3},
                    {"beta", 1.0},
                    {"normalize_inputs", "auto"}};
    if (command == "train-dkl-static")
        return Json{{"seed", 0},
                    {"dataset", ""},
                    {"target", target_defaults()},
                    {"hidden_sizes", {256, 64}},
                    {"steps", 500},
                    {"lr", 0.01}};
    if (command == "run-bo")
        return Json{{"seed", 0},
                    {"dataset", ""},
                    {"target", target_defaults()},
                    {"oracle", "column"},
                    {"lattice", lattice_defaults()},
                    {"n_init", 100},
                    {"n_steps", 500},
                    {"lambda", 10.0},
                    {"exponent", 0.5},
                    {"dkl", Json{{"hidden_sizes", {64, 64}}, {"steps", 200}, {"lr", 0.01}}},
                    {"baseline", false}};
    if (command == "export-plots")
        return Json{{"run", ""},
                    {"bins", 20},
                    {"size", 800},
                    {"point_radius", 3},
                    {"hysteresis_amplitude", 2.0},
                    {"hysteresis_periods", 2}};
    if (command == "grad-check")
        return Json{{"seed", 17}, {"seeds", 10}, {"tolerance", 1e-4}};
    throw ConfigError("unknown command '" + command + "'");
}

ResolvedTarget resolve_target(const DatasetContainer& ds, const Json& target_cfg) {
    const std::string kind = target_cfg.at("kind").get<std::string>();
    auto meta_column = [&](const char* name) -> const std::vector<double>& {
        const auto it = ds.meta.find(name);
        if (it == ds.meta.end())
            throw ConfigError(std::string("dataset has no meta column '") + name +
                              "' required by target kind '" + kind + "'");
        return it->second;
    };

    ResolvedTarget out;
    if (kind == "one_vs_rest") {
        const std::string suit_name = target_cfg.at("suit").get<std::string>();
        const auto want = static_cast<double>(static_cast<int>(suit_from_name(suit_name)));
        for (double s : meta_column("suit")) out.values.push_back(s == want ? 1.0 : 0.0);
        out.name = suit_name + "_one_vs_rest";
    } else if (kind == "ordinal_suit") {
        out.values = meta_column("suit");
        out.name = "ordinal_suit";
    } else if (kind == "rotation") {
        out.values = meta_column("rotation_rad");
        out.name = "rotation";
    } else if (kind == "shear") {
        out.values = meta_column("shear_rad");
        out.name = "shear";
    } else if (kind == "column") {
        const std::string column = target_cfg.at("column").get<std::string>();
        const auto it = ds.targets.find(column);
        if (it == ds.targets.end())
            throw ConfigError("dataset has no target column '" + column + "'");
        out.values = it->second;
        out.name = column;
    } else {
        throw ConfigError("unknown target kind '" + kind + "'");
    }
    return out;
}

int run_command(const std::string& command, const Json& config,
                const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::string> artifacts;
    if (command == "gen-cards") artifacts = cmd_gen_cards(config, out_dir);
    else if (command == "gen-fields") artifacts = cmd_gen_fields(config, out_dir);
    else if (command == "simulate-sweep") artifacts = cmd_simulate_sweep(config, out_dir);
    else if (command == "train-vae") artifacts = cmd_train_vae(config, out_dir);
    else if (command == "train-dkl-static") artifacts = cmd_train_dkl_static(config, out_dir);
    else if (command == "run-bo") artifacts = cmd_run_bo(config, out_dir);
    else if (command == "export-plots") artifacts = cmd_export_plots(config, out_dir);
    else if (command == "grad-check") artifacts = cmd_grad_check(config, out_dir);
    else throw ConfigError("unknown command '" + command + "'");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run_manifest(out_dir, command, config, artifacts, wall);
    return 0;
}

} // namespace latentforge
