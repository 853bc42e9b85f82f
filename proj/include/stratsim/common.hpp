#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace stratsim {

using Rng = std::mt19937_64;

// FNV-1a, used for state hashing and rules-file checksums.
inline constexpr std::uint64_t fnv1a_init = 1469598103934665603ull;

inline constexpr std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

inline constexpr std::uint64_t fnv1a_bytes(std::string_view bytes,
                                           std::uint64_t h = fnv1a_init) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64: seed-derivation mix so that per-game seeds are independent of
// scheduling order.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                           std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ mix64(a + 0x1000));
    h = mix64(h ^ mix64(b + 0x2000));
    h = mix64(h ^ mix64(c + 0x3000));
    return h;
}

} // namespace stratsim
