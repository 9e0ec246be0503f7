#pragma once

#include <vector>

#include "krylov/algebra.hpp"
#include "krylov/parallel.hpp"

namespace krylov {

struct TridiagonalData {
    std::vector<double> a;
    std::vector<double> b;  // b[0] couples basis 0 and 1
    std::vector<Vector> basis;

    Matrix tridiagonal() const;
};

// Direct recursion with full reorthogonalization. breakdown_tol < 0 selects
// 1e-12 * ||H||.
TridiagonalData tridiagonalize(const Matrix& h, const Vector& seed, double breakdown_tol = -1.0);

// S(t) = <seed| e^{iHt} |seed>, by spectral decomposition.
cplx survival_amplitude(const Matrix& h, const Vector& seed, double t);
std::vector<cplx> survival_amplitude(const Matrix& h, const Vector& seed, const std::vector<double>& t,
                                     Exec exec = Exec::Parallel);

// mu_n = <seed| (iH)^n |seed>, n = 0..count.
std::vector<cplx> moments(const Matrix& h, const Vector& seed, int count);

// Lanczos coefficients from moments (a, b only). Stops when b^2 falls below
// tol relative to the moment scale; moment counts above 24 are rejected.
TridiagonalData lanczos_from_moments(const std::vector<cplx>& mu, double tol = 1e-10);

void require_hermitian(const Matrix& h, double tol = 1e-10);

}  // namespace krylov
