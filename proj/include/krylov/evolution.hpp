#pragma once

#include <optional>
#include <vector>

#include "krylov/algebra.hpp"
#include "krylov/parallel.hpp"
#include "krylov/specfun.hpp"

namespace krylov {

// Lambda_+ = num / den, kept as a pair so poles of Lambda_+ never materialize.
// For SU(1,1), gap = |den|^2 - |num|^2 when it is known in closed form.
struct ProjectivePair {
    cplx num{0.0, 0.0};
    cplx den{1.0, 0.0};
    std::optional<double> gap;

    cplx ratio() const { return num / den; }
    double abs_ratio() const { return std::abs(num) / std::abs(den); }
    // |num|^2 / (|num|^2 + |den|^2), the bounded SU(2) coordinate.
    double bounded_fraction() const;
    // |num|^2 / (|den|^2 - |num|^2) = x / (1 - x) with x = |Lambda_+|^2.
    double hyperbolic_fraction() const;
};

struct GaussPoint {
    double t = 0.0;
    ProjectivePair lambda_plus;
    cplx lambda_zero{0.0, 0.0};
    cplx lambda_minus{0.0, 0.0};
    cplx global_phase{1.0, 0.0};
    // False when only Re(lambda_zero) is available from a closed form.
    bool phase_known = true;
};

struct GaussCoefficients {
    Group group = Group::SU2;
    std::vector<double> t;
    std::vector<ProjectivePair> lambda_plus;
    std::vector<cplx> lambda_zero;
    std::vector<cplx> lambda_minus;
    std::vector<cplx> global_phase;

    std::size_t size() const { return t.size(); }
    void push(const GaussPoint& p);
    // Removes 4*pi jumps in Im(lambda_zero) along the grid, starting at 0.
    void unwrap_lambda_zero();
};

GaussPoint su2_static(double alpha, double gamma, double delta, double t);
GaussPoint su2_driven(double omega0, double omega, double b0, double t);
GaussPoint su2_damped(double omega0, double omega, double b0, double eta, double t, const SeriesControl& ctl = {});

struct KickGenerator {
    double alpha = 0.0;
    cplx xi{0.0, 0.0};
};
// One-period generator G with e^{-iw0 T Sz} e^{-i chi Sx} = e^{-i G},
// G = alpha Sz + xi S+ + conj(xi) S-.
KickGenerator kick_generator(double omega0, double period, double chi);
// The linearized generator alpha = w0 T, xi = -i w0 chi T / (2 (1 - e^{i w0 T})).
KickGenerator kick_generator_first_order(double omega0, double period, double chi);
Matrix kick_period_matrix(double omega0, double period, double chi);
GaussPoint su2_kicked(const KickGenerator& g, int k);
GaussPoint su2_kicked(double omega0, double period, double chi, int k);

struct H1Point {
    double t = 0.0;
    cplx log_k{0.0, 0.0};
    cplx alpha{0.0, 0.0};
    cplx beta{0.0, 0.0};
    cplx gamma{0.0, 0.0};
    cplx k() const { return std::exp(log_k); }
};
H1Point h1_driven(double omega0, double omega, double f0, double eta, double t);

GaussPoint su11_driven(double omega0, double omega, double g, double eta, double t, const SeriesControl& ctl = {});
GaussPoint quench_coefficients(double omega0, double eta0, double tau, double t);

// Faithful low-dimensional representations used by the numeric routes.
GeneratorSet su11_fundamental();  // K0 = diag(-1/2, 1/2), K+ = E10, K- = -E01
GeneratorSet h1_faithful();       // a = E01, a+ = E12, N = E11, central E02

HamiltonianAssembly su2_static_assembly(double alpha, double gamma, double delta);
HamiltonianAssembly su2_driven_assembly(double omega0, double omega, double b0, double eta);
HamiltonianAssembly h1_driven_assembly(double omega0, double omega, double f0, double eta);
HamiltonianAssembly su11_driven_assembly(double omega0, double omega, double g, double eta);
HamiltonianAssembly quench_assembly(double omega0, double eta0);

struct PropagatorOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double t0 = 0.0;
    std::size_t max_steps = 5000000;
    bool force_integrator = false;
};

// U(t) for every grid point, U(t0) = I. Time-independent assemblies use
// spectral exponentiation; everything else the embedded 5(4) Runge-Kutta.
std::vector<Matrix> integrate_propagator(const HamiltonianAssembly& h, const std::vector<double>& t_grid,
                                         const PropagatorOptions& opt = {});

// e^{-iHt} for a constant matrix.
Matrix exponentiate(const Matrix& h, double t, bool hermitian);

struct Decomposition {
    ProjectivePair lambda_plus;
    cplx lambda_zero{0.0, 0.0};
    cplx lambda_minus{0.0, 0.0};
};

// 2x2 SU(2) or SU(1,1) matrix (lowest weight first) -> Gauss coordinates.
Decomposition gauss_decompose(const Matrix& u, Group group);
GaussCoefficients decompose_trajectory(const std::vector<Matrix>& u, const std::vector<double>& t, Group group);

// 3x3 faithful H1 matrix -> (log K, alpha, beta, gamma).
H1Point h1_decompose(const Matrix& m, double t = 0.0);

double unitarity_defect(const Matrix& u);
double pseudo_unitarity_defect(const Matrix& u);

}  // namespace krylov
