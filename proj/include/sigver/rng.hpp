#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sigver/errors.hpp"

namespace sigver {

// splitmix64 step, used for seed mixing only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derived seed for stream `stream` of a root seed: splitmix64(splitmix64(seed) ^ stream).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s) ^ stream;
    return splitmix64(mixed);
}

// Deterministic random source: a std::mt19937_64 engine plus distribution helpers
// implemented by hand so that draws are identical on every platform and compiler
// (the standard library distributions are implementation-defined).
//
// Substreams: substream(seed, k) seeds the engine with derive_seed(seed, k).
// Experiments derive one substream per trial / per signer so that parallel
// execution cannot change any draw.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { engine_.seed(seed); }

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n) without modulo bias (rejection sampling).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw InputError("Rng::below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Box-Muller; consumes exactly two engine draws per call.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = unit();
        double u2 = unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        return mean + stddev * r * std::cos(theta);
    }

    // Fisher-Yates; std::shuffle is implementation-defined, this is not.
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // First k entries of a random permutation of [0, n). Draw order is part of the
    // contract: callers slice the result into consecutive roles (references first,
    // then test samples).
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n) throw InputError("Rng::sample_indices: k exceeds n");
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace sigver
