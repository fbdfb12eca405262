#include "latentforge/dataset.hpp"

#include "latentforge/csv.hpp"
#include "latentforge/errors.hpp"
#include "latentforge/io.hpp"

#include <algorithm>

namespace latentforge {

void save_dataset(const DatasetContainer& ds, const std::filesystem::path& dir) {
    if (ds.inputs.rows() != ds.n_rows || ds.inputs.cols() != ds.n_cols)
        throw std::invalid_argument("save_dataset: inputs shape disagrees with counts");
    std::filesystem::create_directories(dir);

    nlohmann::json manifest;
    manifest["schema_version"] = ds.schema_version;
    manifest["n_rows"] = ds.n_rows;
    manifest["n_cols"] = ds.n_cols;
    manifest["dtype"] = "f64le";
    manifest["seed"] = ds.seed;
    manifest["source"] = ds.source;
    nlohmann::json targets = nlohmann::json::object();
    for (const auto& [name, values] : ds.targets) {
        if (values.size() != ds.n_rows)
            throw std::invalid_argument("save_dataset: target '" + name + "' length mismatch");
        const std::string file = "targets_" + name + ".f64";
        targets[name] = file;
        write_f64_file(dir / file, values);
    }
    manifest["targets"] = targets;
    manifest["has_meta"] = !ds.meta_columns.empty();

    write_f64_file(dir / "inputs.f64", ds.inputs.flat());
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

    if (!ds.meta_columns.empty()) {
        CsvWriter csv(dir / "meta.csv", ds.meta_columns);
        for (std::size_t r = 0; r < ds.n_rows; ++r) {
            csv.begin_row();
            for (const auto& col : ds.meta_columns) {
                const auto it = ds.meta.find(col);
                if (it == ds.meta.end() || it->second.size() != ds.n_rows)
                    throw std::invalid_argument("save_dataset: meta column '" + col + "' missing or short");
                csv.field(it->second[r]);
            }
            csv.end_row();
        }
    }
}

DatasetContainer load_dataset(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    if (!std::filesystem::exists(manifest_path))
        throw LoadFailure("load_dataset: missing manifest.json in " + dir.string());
    const nlohmann::json manifest =
        nlohmann::json::parse(read_text_file(manifest_path), nullptr, false);
    if (manifest.is_discarded())
        throw LoadFailure("load_dataset: manifest.json is not valid JSON");

    DatasetContainer ds;
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!manifest.contains(key))
            throw LoadFailure(std::string("load_dataset: manifest missing field '") + key + "'");
        return manifest.at(key);
    };
    ds.schema_version = need("schema_version").get<int>();
    if (ds.schema_version != 1)
        throw LoadFailure("load_dataset: unsupported schema_version " +
                          std::to_string(ds.schema_version));
    ds.n_rows = need("n_rows").get<std::size_t>();
    ds.n_cols = need("n_cols").get<std::size_t>();
    if (need("dtype").get<std::string>() != "f64le")
        throw LoadFailure("load_dataset: unsupported dtype (field 'dtype')");
    ds.seed = need("seed").get<std::uint64_t>();
    ds.source = need("source").get<std::string>();

    const std::vector<double> flat = read_f64_file(dir / "inputs.f64");
    if (flat.size() != ds.n_rows * ds.n_cols)
        throw LoadFailure("load_dataset: inputs.f64 size mismatch (expected " +
                          std::to_string(ds.n_rows * ds.n_cols) + " values, got " +
                          std::to_string(flat.size()) + ")");
    ds.inputs = Matrix(ds.n_rows, ds.n_cols);
    std::copy(flat.begin(), flat.end(), ds.inputs.flat().begin());

    for (const auto& [name, file] : need("targets").items()) {
        std::vector<double> values = read_f64_file(dir / file.get<std::string>());
        if (values.size() != ds.n_rows)
            throw LoadFailure("load_dataset: target '" + name + "' length mismatch");
        ds.targets[name] = std::move(values);
    }

    if (manifest.value("has_meta", false)) {
        const CsvTable table = read_csv(dir / "meta.csv");
        if (table.rows() != ds.n_rows)
            throw LoadFailure("load_dataset: meta.csv row count mismatch");
        ds.meta_columns = table.columns;
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            ds.meta[table.columns[c]] = table.data[c];
    }
    return ds;
}

} // namespace latentforge
