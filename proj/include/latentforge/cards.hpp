#pragma once

#include "latentforge/matrix.hpp"

#include <cstdint>
#include <vector>

namespace latentforge {

enum class Suit : int { clubs = 0, spades = 1, hearts = 2, diamonds = 3 };

struct CardImage {
    Matrix pixels; // size x size, values in [0,1]
    Suit suit = Suit::clubs;
    double rotation = 0.0; // radians, ground truth
    double shear = 0.0;    // radians, applied equally in x and y
};

struct CardsDataset {
    std::vector<CardImage> images;
    std::size_t image_size = 0;
    std::size_t per_suit = 0;

    // Row-major view: one flattened image per row.
    Matrix inputs() const;
};

struct CardsConfig {
    std::size_t per_suit = 2000;
    std::size_t size = 32;
    std::uint64_t seed = 0;
};

// Anti-aliased filled glyph built from analytic primitives (discs, triangles,
// a rotated square), centred with >= 2 px margin; foreground 1, background 0.
Matrix render_suit_glyph(Suit suit, std::size_t size = 32);

// Rotate about the centre, then shear with [[1, tan s], [tan s, 1]];
// implemented by inverse-mapping with bilinear sampling, zero outside.
Matrix affine_transform(const Matrix& image, double rotation, double shear);

// Inverse-map `image` through an arbitrary 2x2 output->source pixel map
// (row-major coefficients m00 m01 m10 m11 acting on centre-relative (x, y)).
Matrix warp_affine(const Matrix& image, const double m[4]);

// rotation ~ U[-120 deg, 120 deg], shear ~ U[-20 deg, 20 deg], both stored in
// radians; per-image seeds derived from (seed, image index).
CardsDataset generate_cards_dataset(const CardsConfig& config);

enum class TargetKind { one_vs_rest, ordinal_suit, rotation, shear };

// one_vs_rest -> 1.0 for target_suit else 0.0; ordinal_suit -> 0/1/2/3;
// rotation/shear -> recorded ground truth in radians.
std::vector<double> encode_target(const CardsDataset& dataset, TargetKind kind,
                                  Suit target_suit = Suit::hearts);

} // namespace latentforge
