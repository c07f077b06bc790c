#ifndef ALTREL_UTIL_HPP
#define ALTREL_UTIL_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace altrel {

// Library-wide error for violated preconditions and malformed inputs.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic 64-bit hashing and RNG. Reports must be byte-identical
// across runs and platforms, so std::hash and std::mt19937 are off-limits.

inline uint64_t fnv1a64(uint64_t h, uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t fnv1a64_init() { return 0xcbf29ce484222325ull; }

inline uint64_t fnv1a64_span(uint64_t h, std::span<const int> xs) {
    for (int x : xs)
        h = fnv1a64(h, static_cast<uint64_t>(static_cast<int64_t>(x)));
    return h;
}

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Seeded generator for reproducible corpora.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ^ 0x6a09e667f3bcc909ull) {}

    uint64_t next() { return splitmix64(state_); }

    // uniform in [0, bound)
    uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    bool chance(int num, int den) { return below(static_cast<uint64_t>(den)) < static_cast<uint64_t>(num); }

private:
    uint64_t state_;
};

}  // namespace altrel

#endif
