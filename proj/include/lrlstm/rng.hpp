#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace lrlstm {

// Deterministic stream RNG: splitmix64 seeded from a 64-bit run seed XOR a
// hashed stream label. Every stochastic choice in the library (parameter
// init, embedding noise, shuffling, splits, dropout) draws from a named
// stream, so runs are bit-reproducible across platforms and thread counts.
class Rng {
public:
    Rng(uint64_t seed, std::string_view stream);

    uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    double uniform(double lo, double hi);

    // Uniform integer in [0, n); n > 0. Rejection-free bounded draw with
    // negligible bias (n << 2^64 everywhere this is used).
    uint64_t next_below(uint64_t n);

    // One keep/drop flag per entry, P(keep) = 1 - p_drop.
    std::vector<uint8_t> bernoulli_keep(size_t n, double p_drop);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    static uint64_t hash_label(std::string_view label);

private:
    uint64_t state_;
};

}  // namespace lrlstm
