#include "krylov/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <omp.h>

#include "krylov/error.hpp"

namespace krylov {

void set_thread_count(int n) {
    if (n > 0) omp_set_num_threads(n);
    else omp_set_num_threads(omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

void require_hermitian(const Matrix& h, double tol) {
    if (h.rows() != h.cols()) throw NotHermitian("matrix is not square");
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > tol * scale) throw NotHermitian("matrix is not Hermitian");
}

Matrix TridiagonalData::tridiagonal() const {
    const int d = static_cast<int>(a.size());
    Matrix t = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        t(n, n) = a[n];
        if (n + 1 < d) {
            t(n, n + 1) = b[n];
            t(n + 1, n) = b[n];
        }
    }
    return t;
}

TridiagonalData tridiagonalize(const Matrix& h, const Vector& seed, double breakdown_tol) {
    require_hermitian(h);
    if (seed.size() != h.rows()) throw ZeroSeed("seed dimension does not match the matrix");
    const double norm = seed.norm();
    if (!(norm > 1e-300)) throw ZeroSeed("seed vector is zero");
    if (breakdown_tol < 0.0) breakdown_tol = 1e-12 * std::max(h.norm(), 1e-300);

    TridiagonalData out;
    const int dim = static_cast<int>(h.rows());
    out.basis.push_back(seed / norm);
    for (int n = 0; n < dim; ++n) {
        const Vector& v = out.basis[n];
        Vector w = h * v;
        const double an = v.dot(w).real();
        out.a.push_back(an);
        if (n + 1 == dim) break;
        w -= an * v;
        if (n > 0) w -= out.b[n - 1] * out.basis[n - 1];
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& u : out.basis) w -= u.dot(w) * u;
        }
        const double bn = w.norm();
        if (bn <= breakdown_tol) break;
        out.b.push_back(bn);
        out.basis.push_back(w / bn);
    }
    return out;
}

namespace {

struct Spectral {
    Eigen::VectorXd evals;
    Eigen::VectorXd weights;
};

Spectral spectral_weights(const Matrix& h, const Vector& seed) {
    require_hermitian(h);
    if (seed.size() != h.rows() || !(seed.norm() > 1e-300)) throw ZeroSeed("invalid seed vector");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Vector overlap = es.eigenvectors().adjoint() * (seed / seed.norm());
    return {es.eigenvalues(), overlap.cwiseAbs2()};
}

cplx evaluate(const Spectral& s, double t) {
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < s.evals.size(); ++k) acc += s.weights[k] * std::polar(1.0, s.evals[k] * t);
    return acc;
}

}  // namespace

cplx survival_amplitude(const Matrix& h, const Vector& seed, double t) { return evaluate(spectral_weights(h, seed), t); }

std::vector<cplx> survival_amplitude(const Matrix& h, const Vector& seed, const std::vector<double>& t, Exec exec) {
    const Spectral s = spectral_weights(h, seed);
    std::vector<cplx> out(t.size());
    for_each_index(t.size(), exec, [&](std::size_t i) { out[i] = evaluate(s, t[i]); });
    return out;
}

std::vector<cplx> moments(const Matrix& h, const Vector& seed, int count) {
    require_hermitian(h);
    if (seed.size() != h.rows() || !(seed.norm() > 1e-300)) throw ZeroSeed("invalid seed vector");
    const Vector s = seed / seed.norm();
    const cplx ii(0.0, 1.0);
    std::vector<cplx> mu;
    Vector v = s;
    mu.push_back(1.0);
    for (int n = 1; n <= count; ++n) {
        v = ii * (h * v);
        mu.push_back(s.dot(v));
    }
    return mu;
}

TridiagonalData lanczos_from_moments(const std::vector<cplx>& mu, double tol) {
    if (mu.size() < 2) throw NumericalBreakdown("lanczos_from_moments: need at least mu_0 and mu_1");
    if (mu.size() > 25) throw DomainError("lanczos_from_moments: more than 24 moments is ill-conditioned");
    if (std::abs(mu[0] - 1.0) > 1e-12) throw NumericalBreakdown("lanczos_from_moments: mu_0 must be 1");

    // Real moments m_n = <H^n> from mu_n = i^n m_n.
    const int top = static_cast<int>(mu.size()) - 1;
    std::vector<double> m(top + 1);
    cplx ipow = 1.0;
    for (int n = 0; n <= top; ++n) {
        m[n] = (mu[n] / ipow).real();
        ipow *= cplx(0.0, 1.0);
    }
    const double scale = std::max(1.0, top >= 2 ? std::abs(m[2]) : 1.0);

    // Monic orthogonal polynomials in coefficient form, <p,q> = sum p_i q_j m_{i+j}.
    auto inner = [&](const std::vector<double>& p, const std::vector<double>& q, int shift) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j) acc += p[i] * q[j] * m[i + j + shift];
        return acc;
    };

    TridiagonalData out;
    std::vector<double> prev, cur{1.0};
    double cur_norm = 1.0;
    for (int n = 0;; ++n) {
        const int deg = n;
        if (2 * deg + 1 > top) break;
        const double an = inner(cur, cur, 1) / cur_norm;
        out.a.push_back(an);
        if (2 * deg + 2 > top) break;
        std::vector<double> next(deg + 2, 0.0);
        for (int i = 0; i <= deg; ++i) {
            next[i + 1] += cur[i];
            next[i] -= an * cur[i];
        }
        if (!out.b.empty()) {
            const double b2 = out.b.back() * out.b.back();
            for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= b2 * prev[i];
        }
        const double next_norm = inner(next, next, 0);
        const double b2 = next_norm / cur_norm;
        if (b2 < -tol * scale) throw NumericalBreakdown("lanczos_from_moments: negative b^2 (ill-conditioned moments)");
        if (b2 <= tol * scale) break;
        out.b.push_back(std::sqrt(b2));
        prev = std::move(cur);
        cur = std::move(next);
        cur_norm = next_norm;
    }
    return out;
}

}  // namespace krylov
