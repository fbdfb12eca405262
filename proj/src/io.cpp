#include "latentforge/io.hpp"

#include "latentforge/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "the on-disk f64le formats assume a little-endian host");

namespace latentforge {

namespace {

constexpr char kCheckpointMagic[8] = {'L', 'F', 'C', 'K', 'P', 'T', '0', '1'};

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadFailure("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadFailure("cannot open for reading: " + path.string());
    return in;
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::ifstream& in, const char* what) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
        throw LoadFailure(std::string("truncated file while reading ") + what);
    return v;
}

} // namespace

void write_f64_file(const std::filesystem::path& path, std::span<const double> values) {
    auto out = open_out(path);
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!out) throw LoadFailure("write failed: " + path.string());
}

std::vector<double> read_f64_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0);
    if (bytes % sizeof(double) != 0)
        throw LoadFailure("f64 file size not a multiple of 8: " + path.string());
    std::vector<double> values(bytes / sizeof(double));
    if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(bytes)))
        throw LoadFailure("read failed: " + path.string());
    return values;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw LoadFailure("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

void write_checkpoint_file(const std::filesystem::path& path, const nlohmann::json& header,
                           std::span<const double> block) {
    auto out = open_out(path);
    out.write(kCheckpointMagic, sizeof kCheckpointMagic);
    const std::string h = header.dump();
    put_u64(out, h.size());
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    put_u64(out, block.size());
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(double)));
    if (!out) throw LoadFailure("checkpoint write failed: " + path.string());
}

CheckpointBlob read_checkpoint_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    char magic[sizeof kCheckpointMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
        throw LoadFailure("not a checkpoint file (bad magic): " + path.string());
    const std::uint64_t hlen = get_u64(in, "header length");
    std::string h(hlen, '\0');
    if (!in.read(h.data(), static_cast<std::streamsize>(hlen)))
        throw LoadFailure("truncated checkpoint header: " + path.string());
    CheckpointBlob blob;
    blob.header = nlohmann::json::parse(h, nullptr, false);
    if (blob.header.is_discarded())
        throw LoadFailure("checkpoint header is not valid JSON: " + path.string());
    const std::uint64_t count = get_u64(in, "block length");
    blob.block.resize(count);
    if (!in.read(reinterpret_cast<char*>(blob.block.data()),
                 static_cast<std::streamsize>(count * sizeof(double))))
        throw LoadFailure("truncated checkpoint block: " + path.string());
    return blob;
}

} // namespace latentforge
