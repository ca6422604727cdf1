#include "lrlstm/rng.hpp"

namespace lrlstm {

namespace {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

uint64_t Rng::hash_label(std::string_view label) {
    // FNV-1a 64
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

Rng::Rng(uint64_t seed, std::string_view stream) : state_(seed ^ hash_label(stream)) {
    // one warm-up step so that nearby seeds decorrelate
    splitmix64(state_);
}

uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

uint64_t Rng::next_below(uint64_t n) { return next_u64() % n; }

std::vector<uint8_t> Rng::bernoulli_keep(size_t n, double p_drop) {
    std::vector<uint8_t> keep(n, 1);
    for (size_t i = 0; i < n; ++i) {
        keep[i] = next_double() >= p_drop ? 1 : 0;
    }
    return keep;
}

}  // namespace lrlstm
