#include "latentforge/png.hpp"

#include "latentforge/errors.hpp"

#include <array>
#include <cmath>
#include <fstream>

namespace latentforge {

namespace {

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t crc = 0xFFFFFFFFu) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc;
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& payload) {
    put_be32(out, static_cast<std::uint32_t>(payload.size()));
    std::vector<std::uint8_t> body(type, type + 4);
    body.insert(body.end(), payload.begin(), payload.end());
    out.insert(out.end(), body.begin(), body.end());
    put_be32(out, crc32(body.data(), body.size()) ^ 0xFFFFFFFFu);
}

// zlib stream with stored (uncompressed) deflate blocks plus adler32.
std::vector<std::uint8_t> zlib_stored(const std::vector<std::uint8_t>& raw) {
    std::vector<std::uint8_t> out;
    out.push_back(0x78); // CMF: deflate, 32K window
    out.push_back(0x01); // FLG with valid check bits, no dict
    std::size_t pos = 0;
    do {
        const std::size_t chunk = std::min<std::size_t>(raw.size() - pos, 65535);
        const bool last = pos + chunk == raw.size();
        out.push_back(last ? 0x01 : 0x00);
        out.push_back(static_cast<std::uint8_t>(chunk & 0xFF));
        out.push_back(static_cast<std::uint8_t>(chunk >> 8));
        out.push_back(static_cast<std::uint8_t>(~chunk & 0xFF));
        out.push_back(static_cast<std::uint8_t>((~chunk >> 8) & 0xFF));
        out.insert(out.end(), raw.begin() + static_cast<std::ptrdiff_t>(pos),
                   raw.begin() + static_cast<std::ptrdiff_t>(pos + chunk));
        pos += chunk;
    } while (pos < raw.size());

    std::uint32_t a = 1, b = 0;
    for (std::uint8_t byte : raw) {
        a = (a + byte) % 65521;
        b = (b + a) % 65521;
    }
    put_be32(out, (b << 16) | a);
    return out;
}

} // namespace

void write_png(const RgbImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> file = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(image.width));
    put_be32(ihdr, static_cast<std::uint32_t>(image.height));
    ihdr.push_back(8); // bit depth
    ihdr.push_back(2); // color type: truecolor
    ihdr.push_back(0); // compression
    ihdr.push_back(0); // filter
    ihdr.push_back(0); // interlace
    append_chunk(file, "IHDR", ihdr);

    // each scanline prefixed with filter byte 0
    std::vector<std::uint8_t> raw;
    raw.reserve(image.height * (1 + image.width * 3));
    for (std::size_t y = 0; y < image.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = image.pixels.data() + y * image.width * 3;
        raw.insert(raw.end(), row, row + image.width * 3);
    }
    append_chunk(file, "IDAT", zlib_stored(raw));
    append_chunk(file, "IEND", {});

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw LoadFailure("cannot open png for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
    if (!out) throw LoadFailure("png write failed: " + path.string());
}

void viridis(double t, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
    // anchor points of the standard viridis map
    static constexpr double anchors[][3] = {
        {0.267004, 0.004874, 0.329415}, {0.282623, 0.140926, 0.457517},
        {0.253935, 0.265254, 0.529983}, {0.206756, 0.371758, 0.553117},
        {0.163625, 0.471133, 0.558148}, {0.127568, 0.566949, 0.550556},
        {0.134692, 0.658636, 0.517649}, {0.266941, 0.748751, 0.440573},
        {0.477504, 0.821444, 0.318195}, {0.741388, 0.873449, 0.149561},
        {0.993248, 0.906157, 0.143936},
    };
    constexpr int n = static_cast<int>(std::size(anchors));
    if (!(t >= 0.0)) t = 0.0;
    if (t > 1.0) t = 1.0;
    const double x = t * (n - 1);
    const int i = std::min(static_cast<int>(x), n - 2);
    const double f = x - i;
    r = static_cast<std::uint8_t>(std::lround(255.0 * (anchors[i][0] * (1 - f) + anchors[i + 1][0] * f)));
    g = static_cast<std::uint8_t>(std::lround(255.0 * (anchors[i][1] * (1 - f) + anchors[i + 1][1] * f)));
    b = static_cast<std::uint8_t>(std::lround(255.0 * (anchors[i][2] * (1 - f) + anchors[i + 1][2] * f)));
}

} // namespace latentforge
