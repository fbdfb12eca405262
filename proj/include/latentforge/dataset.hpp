#pragma once

#include "latentforge/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace latentforge {

// On-disk dataset directory:
//   manifest.json   n_rows, n_cols, dtype "f64le", seed, source, schema_version,
//                   and the names of any target files
//   inputs.f64      row-major little-endian doubles, 8*n_rows*n_cols bytes
//   targets_<k>.f64 optional named target vectors (one double per row)
//   meta.csv        optional numeric ground-truth columns
struct DatasetContainer {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::uint64_t seed = 0;
    std::string source;
    int schema_version = 1;
    Matrix inputs;
    std::map<std::string, std::vector<double>> targets;
    std::vector<std::string> meta_columns; // order preserved for meta.csv
    std::map<std::string, std::vector<double>> meta;
};

void save_dataset(const DatasetContainer& ds, const std::filesystem::path& dir);
DatasetContainer load_dataset(const std::filesystem::path& dir);

} // namespace latentforge
