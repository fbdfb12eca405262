#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace latentforge {

// Mean of a scalar over a bins x bins grid spanning the data range of the
// scatter coordinates.
struct BinnedSurface {
    std::size_t bins = 0;
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    std::vector<double> sum;        // bins*bins, row-major in (ix, iy)
    std::vector<std::size_t> count;

    bool occupied(std::size_t ix, std::size_t iy) const { return count[ix * bins + iy] > 0; }
    double mean(std::size_t ix, std::size_t iy) const {
        return sum[ix * bins + iy] / static_cast<double>(count[ix * bins + iy]);
    }
};

BinnedSurface binned_mean_surface(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> value, std::size_t bins);

// Occupied bins whose mean strictly exceeds every occupied 8-neighbor.
// Isolated occupied bins count (they exceed all zero of their neighbors).
std::size_t count_strict_local_maxima(const BinnedSurface& surface);

// Majority vote over the k nearest training points in a 2-d latent space;
// ties broken toward the smaller label. Returns the fraction of correctly
// classified query points.
double knn_vote_accuracy(std::span<const double> train_x, std::span<const double> train_y,
                         std::span<const int> train_label, std::span<const double> query_x,
                         std::span<const double> query_y, std::span<const int> query_label,
                         std::size_t k);

// Mean absolute error of k-NN regression in a 2-d latent space (leave-self-out
// when query and train sets are the same points is the caller's concern).
double knn_regression_mae(std::span<const double> train_x, std::span<const double> train_y,
                          std::span<const double> train_value, std::span<const double> query_x,
                          std::span<const double> query_y, std::span<const double> query_value,
                          std::size_t k);

} // namespace latentforge
