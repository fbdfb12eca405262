#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace latentforge {

// Raw little-endian f64 stream (the on-disk dtype of every numeric artifact).
void write_f64_file(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_f64_file(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Checkpoint container: magic, length-prefixed JSON header, length-prefixed
// raw f64 block. Round-trips bitwise.
void write_checkpoint_file(const std::filesystem::path& path, const nlohmann::json& header,
                           std::span<const double> block);
struct CheckpointBlob {
    nlohmann::json header;
    std::vector<double> block;
};
CheckpointBlob read_checkpoint_file(const std::filesystem::path& path);

} // namespace latentforge
