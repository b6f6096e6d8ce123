#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace brlsim {

// Uniform doubles straight from the engine's bits. std::uniform_real_distribution
// is implementation-defined, which would make seeded outputs depend on the
// standard library; these helpers keep every seeded artifact reproducible.

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // 53 bits in [0,1)
}

inline double uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

inline double log_uniform_in(std::mt19937_64& gen, double lo, double hi) {
    return std::exp(uniform_in(gen, std::log(lo), std::log(hi)));
}

inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
    auto k = static_cast<std::size_t>(uniform01(gen) * static_cast<double>(n));
    return k < n ? k : n - 1;
}

}  // namespace brlsim
