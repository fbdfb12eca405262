#include "latentforge/cards.hpp"

#include "latentforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latentforge {

namespace {

// Glyphs are designed in a [-1,1]^2 frame (v up) and shrunk by this factor so
// even 16x16 renders keep a 2-pixel margin.
constexpr double kGlyphScale = 0.72;
constexpr int kSupersample = 4;

struct Vec2 {
    double x, y;
};

bool in_disc(double u, double v, double cx, double cy, double r) {
    const double dx = u - cx, dy = v - cy;
    return dx * dx + dy * dy <= r * r;
}

bool in_triangle(double u, double v, Vec2 a, Vec2 b, Vec2 c) {
    auto side = [&](Vec2 p, Vec2 q) { return (q.x - p.x) * (v - p.y) - (q.y - p.y) * (u - p.x); };
    const double d1 = side(a, b), d2 = side(b, c), d3 = side(c, a);
    const bool any_neg = d1 < 0 || d2 < 0 || d3 < 0;
    const bool any_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(any_neg && any_pos);
}

bool in_heart(double u, double v) {
    return in_disc(u, v, -0.42, 0.38, 0.44) || in_disc(u, v, 0.42, 0.38, 0.44) ||
           in_triangle(u, v, {-0.86, 0.26}, {0.86, 0.26}, {0.0, -0.96});
}

bool in_spade(double u, double v) {
    // inverted heart plus a flared stem
    return in_disc(u, v, -0.42, -0.38, 0.44) || in_disc(u, v, 0.42, -0.38, 0.44) ||
           in_triangle(u, v, {-0.86, -0.26}, {0.86, -0.26}, {0.0, 0.96}) ||
           in_triangle(u, v, {0.0, -0.02}, {-0.34, -0.98}, {0.34, -0.98});
}

bool in_club(double u, double v) {
    return in_disc(u, v, 0.0, 0.52, 0.38) || in_disc(u, v, -0.45, -0.10, 0.38) ||
           in_disc(u, v, 0.45, -0.10, 0.38) ||
           in_triangle(u, v, {0.0, 0.0}, {-0.32, -0.98}, {0.32, -0.98});
}

bool in_diamond(double u, double v) {
    // axis-aligned square rotated 45 degrees; equal diagonals keep the 90
    // degree rotation degeneracy the suit is known for
    return std::abs(u) / 0.92 + std::abs(v) / 0.92 <= 1.0;
}

bool inside_glyph(Suit suit, double u, double v) {
    switch (suit) {
        case Suit::clubs: return in_club(u, v);
        case Suit::spades: return in_spade(u, v);
        case Suit::hearts: return in_heart(u, v);
        case Suit::diamonds: return in_diamond(u, v);
    }
    throw std::invalid_argument("render_suit_glyph: unknown suit");
}

double bilinear_at(const Matrix& img, double sx, double sy) {
    const auto h = static_cast<std::ptrdiff_t>(img.rows());
    const auto w = static_cast<std::ptrdiff_t>(img.cols());
    const auto x0 = static_cast<std::ptrdiff_t>(std::floor(sx));
    const auto y0 = static_cast<std::ptrdiff_t>(std::floor(sy));
    const double fx = sx - static_cast<double>(x0);
    const double fy = sy - static_cast<double>(y0);
    auto at = [&](std::ptrdiff_t yy, std::ptrdiff_t xx) -> double {
        if (yy < 0 || yy >= h || xx < 0 || xx >= w) return 0.0;
        return img(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx));
    };
    return at(y0, x0) * (1 - fx) * (1 - fy) + at(y0, x0 + 1) * fx * (1 - fy) +
           at(y0 + 1, x0) * (1 - fx) * fy + at(y0 + 1, x0 + 1) * fx * fy;
}

} // namespace

Matrix render_suit_glyph(Suit suit, std::size_t size) {
    if (size < 16) throw std::invalid_argument("render_suit_glyph: size must be >= 16");
    const int s = static_cast<int>(suit);
    if (s < 0 || s > 3) throw std::invalid_argument("render_suit_glyph: unknown suit");

    Matrix img(size, size);
    const double inv = 1.0 / static_cast<double>(size);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
            int hits = 0;
            for (int sy = 0; sy < kSupersample; ++sy) {
                for (int sx = 0; sx < kSupersample; ++sx) {
                    const double px = static_cast<double>(c) + (sx + 0.5) / kSupersample;
                    const double py = static_cast<double>(r) + (sy + 0.5) / kSupersample;
                    const double u = (2.0 * px * inv - 1.0) / kGlyphScale;
                    const double v = (1.0 - 2.0 * py * inv) / kGlyphScale; // v points up
                    hits += inside_glyph(suit, u, v) ? 1 : 0;
                }
            }
            img(r, c) = static_cast<double>(hits) / (kSupersample * kSupersample);
        }
    }
    return img;
}

Matrix warp_affine(const Matrix& image, const double m[4]) {
    const std::size_t h = image.rows(), w = image.cols();
    const double cx = (static_cast<double>(w) - 1.0) / 2.0;
    const double cy = (static_cast<double>(h) - 1.0) / 2.0;
    Matrix out(h, w);
    for (std::size_t r = 0; r < h; ++r) {
        const double dy = static_cast<double>(r) - cy;
        for (std::size_t c = 0; c < w; ++c) {
            const double dx = static_cast<double>(c) - cx;
            const double sx = m[0] * dx + m[1] * dy + cx;
            const double sy = m[2] * dx + m[3] * dy + cy;
            out(r, c) = bilinear_at(image, sx, sy);
        }
    }
    return out;
}

Matrix affine_transform(const Matrix& image, double rotation, double shear) {
    // forward map p' = S R (p - c) + c with S = [[1, tan s], [tan s, 1]];
    // pixels are pulled through the inverse R^-1 S^-1.
    const double t = std::tan(shear);
    const double det_s = 1.0 - t * t;
    if (std::abs(det_s) < 1e-9)
        throw std::invalid_argument("affine_transform: shear makes the transform singular");
    const double cs = std::cos(rotation), sn = std::sin(rotation);
    // S^-1 = 1/det [[1, -t], [-t, 1]]
    const double s00 = 1.0 / det_s, s01 = -t / det_s;
    // R^-1 = [[cos, sin], [-sin, cos]]
    const double m[4] = {
        cs * s00 + sn * s01, cs * s01 + sn * s00,
        -sn * s00 + cs * s01, -sn * s01 + cs * s00,
    };
    if (rotation == 0.0 && shear == 0.0) return image;
    return warp_affine(image, m);
}

Matrix CardsDataset::inputs() const {
    if (images.empty()) return {};
    const std::size_t d = image_size * image_size;
    Matrix x(images.size(), d);
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& px = images[i].pixels;
        std::copy(px.flat().begin(), px.flat().end(), x.row(i).begin());
    }
    return x;
}

CardsDataset generate_cards_dataset(const CardsConfig& config) {
    if (config.per_suit == 0)
        throw std::invalid_argument("generate_cards_dataset: per_suit must be >= 1");

    constexpr double kMaxRotation = 2.0 * 3.14159265358979323846 / 3.0; // 120 deg
    constexpr double kMaxShear = 3.14159265358979323846 / 9.0;          // 20 deg

    CardsDataset ds;
    ds.image_size = config.size;
    ds.per_suit = config.per_suit;
    ds.images.reserve(4 * config.per_suit);

    const std::uint64_t stream = derive_seed(config.seed, "cards-dataset");
    Matrix glyphs[4];
    for (int s = 0; s < 4; ++s) glyphs[s] = render_suit_glyph(static_cast<Suit>(s), config.size);

    std::size_t index = 0;
    for (int s = 0; s < 4; ++s) {
        for (std::size_t i = 0; i < config.per_suit; ++i, ++index) {
            Rng rng(derive_seed(stream, index));
            CardImage img;
            img.suit = static_cast<Suit>(s);
            img.rotation = rng.uniform(-kMaxRotation, kMaxRotation);
            img.shear = rng.uniform(-kMaxShear, kMaxShear);
            img.pixels = affine_transform(glyphs[s], img.rotation, img.shear);
            ds.images.push_back(std::move(img));
        }
    }
    return ds;
}

std::vector<double> encode_target(const CardsDataset& dataset, TargetKind kind, Suit target_suit) {
    std::vector<double> y(dataset.images.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const CardImage& img = dataset.images[i];
        switch (kind) {
            case TargetKind::one_vs_rest: y[i] = img.suit == target_suit ? 1.0 : 0.0; break;
            case TargetKind::ordinal_suit: y[i] = static_cast<double>(static_cast<int>(img.suit)); break;
            case TargetKind::rotation: y[i] = img.rotation; break;
            case TargetKind::shear: y[i] = img.shear; break;
        }
    }
    return y;
}

} // namespace latentforge
