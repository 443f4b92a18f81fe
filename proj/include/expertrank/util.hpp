#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace expertrank {

// 64-bit FNV-1a. Used for feature-registry fingerprints and seed derivation;
// must stay stable across runs and platforms.
inline std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(base));
    return fnv1a(tag, fnv1a(buf));
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& tag, std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "#%llu", static_cast<unsigned long long>(n));
    return derive_seed(base, tag + buf);
}

// Bounded draws are hand-rolled instead of std::uniform_int_distribution so
// that sequences are identical across standard library implementations.
inline std::size_t rng_below(std::mt19937_64& g, std::size_t n) {
    return static_cast<std::size_t>(g() % n);
}

inline double rng_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

template <typename T>
void rng_shuffle(std::mt19937_64& g, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng_below(g, i);
        std::swap(v[i - 1], v[j]);
    }
}

// Fixed-precision double -> string (printf semantics); run files and reports
// rely on this being byte-stable.
inline std::string fmt_double(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

}  // namespace expertrank
