#include "latentforge/latentstats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace latentforge {

BinnedSurface binned_mean_surface(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> value, std::size_t bins) {
    if (x.size() != y.size() || x.size() != value.size())
        throw std::invalid_argument("binned_mean_surface: length mismatch");
    if (bins < 2) throw std::invalid_argument("binned_mean_surface: bins must be >= 2");

    BinnedSurface s;
    s.bins = bins;
    s.sum.assign(bins * bins, 0.0);
    s.count.assign(bins * bins, 0);
    if (x.empty()) return s;

    s.x_min = *std::min_element(x.begin(), x.end());
    s.x_max = *std::max_element(x.begin(), x.end());
    s.y_min = *std::min_element(y.begin(), y.end());
    s.y_max = *std::max_element(y.begin(), y.end());
    const double dx = s.x_max - s.x_min, dy = s.y_max - s.y_min;

    for (std::size_t i = 0; i < x.size(); ++i) {
        auto bin_of = [&](double v, double lo, double span) {
            if (span <= 0.0) return std::size_t{0};
            const auto b = static_cast<std::ptrdiff_t>((v - lo) / span * static_cast<double>(bins));
            return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1));
        };
        const std::size_t ix = bin_of(x[i], s.x_min, dx);
        const std::size_t iy = bin_of(y[i], s.y_min, dy);
        s.sum[ix * bins + iy] += value[i];
        s.count[ix * bins + iy] += 1;
    }
    return s;
}

std::size_t count_strict_local_maxima(const BinnedSurface& s) {
    std::size_t maxima = 0;
    const auto n = static_cast<std::ptrdiff_t>(s.bins);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            if (!s.occupied(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) continue;
            const double v = s.mean(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            bool is_max = true;
            for (std::ptrdiff_t di = -1; di <= 1 && is_max; ++di) {
                for (std::ptrdiff_t dj = -1; dj <= 1 && is_max; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const std::ptrdiff_t a = i + di, b = j + dj;
                    if (a < 0 || a >= n || b < 0 || b >= n) continue;
                    if (s.occupied(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) &&
                        s.mean(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) >= v)
                        is_max = false;
                }
            }
            if (is_max) ++maxima;
        }
    }
    return maxima;
}

namespace {

std::vector<std::size_t> nearest_k(std::span<const double> tx, std::span<const double> ty,
                                   double qx, double qy, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> d(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i) {
        const double ddx = tx[i] - qx, ddy = ty[i] - qy;
        d[i] = {ddx * ddx + ddy * ddy, i};
    }
    k = std::min(k, d.size());
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = d[i].second;
    return idx;
}

} // namespace

double knn_vote_accuracy(std::span<const double> train_x, std::span<const double> train_y,
                         std::span<const int> train_label, std::span<const double> query_x,
                         std::span<const double> query_y, std::span<const int> query_label,
                         std::size_t k) {
    if (query_x.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t q = 0; q < query_x.size(); ++q) {
        std::map<int, std::size_t> votes;
        for (std::size_t i : nearest_k(train_x, train_y, query_x[q], query_y[q], k))
            votes[train_label[i]] += 1;
        int best = votes.begin()->first;
        std::size_t best_count = votes.begin()->second;
        for (const auto& [label, count] : votes) {
            if (count > best_count) {
                best = label;
                best_count = count;
            }
        }
        if (best == query_label[q]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(query_x.size());
}

double knn_regression_mae(std::span<const double> train_x, std::span<const double> train_y,
                          std::span<const double> train_value, std::span<const double> query_x,
                          std::span<const double> query_y, std::span<const double> query_value,
                          std::size_t k) {
    if (query_x.empty()) return 0.0;
    double err = 0.0;
    for (std::size_t q = 0; q < query_x.size(); ++q) {
        double acc = 0.0;
        const auto idx = nearest_k(train_x, train_y, query_x[q], query_y[q], k);
        for (std::size_t i : idx) acc += train_value[i];
        err += std::abs(acc / static_cast<double>(idx.size()) - query_value[q]);
    }
    return err / static_cast<double>(query_x.size());
}

} // namespace latentforge
