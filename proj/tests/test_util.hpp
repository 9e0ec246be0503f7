#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include "krylov/algebra.hpp"
#include "krylov/evolution.hpp"

namespace testutil {

// Randomized fixtures draw from KRYLOV_SEED when it is set.
inline std::uint64_t seed() {
    const char* s = std::getenv("KRYLOV_SEED");
    if (s && *s) return std::strtoull(s, nullptr, 10);
    return 20240611ULL;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(seed());
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline krylov::Matrix random_hermitian(int n, double scale = 1.0) {
    krylov::Matrix a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = krylov::cplx(uniform(-scale, scale), uniform(-scale, scale));
    return (a + a.adjoint()) / 2.0;
}

inline krylov::Vector random_unit(int n) {
    krylov::Vector v(n);
    for (int k = 0; k < n; ++k) v[k] = krylov::cplx(uniform(-1, 1), uniform(-1, 1));
    return v / v.norm();
}

inline double rel(krylov::cplx a, krylov::cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// ln(1 - |r|^2) for an SU(1,1) pair; an exact gap avoids the cancellation
// in 1 - |r|^2 near the boundary of the disc.
inline double log_one_minus(const krylov::ProjectivePair& p) {
    if (p.gap) return std::log(*p.gap / std::norm(p.den));
    return std::log1p(-std::norm(p.num) / std::norm(p.den));
}

}  // namespace testutil
