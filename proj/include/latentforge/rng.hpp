#pragma once

#include <cstdint>
#include <string_view>

namespace latentforge {

// Deterministic 64-bit generator (SplitMix64). All randomness in the project
// flows through this type so that runs are reproducible bit-for-bit from a
// master seed. Independent streams are derived with derive_seed, which mixes
// the master seed with a component label or index; changing the RNG usage of
// one component never perturbs another.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound) { return next_u64() % bound; }

    // Standard normal via Box-Muller (pair cached).
    double normal();

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Seed for a named sub-component: splitmix of (master xor FNV-1a(label)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

// Seed for the index-th element of a stream (per image, per curve, per BO step).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace latentforge
