#include "krylov/algebra.hpp"

#include <cmath>

#include "krylov/error.hpp"

namespace krylov {

namespace {

bool is_half_integer_multiple(double x) {
    const double d = 2.0 * x;
    return std::abs(d - std::round(d)) < 1e-12;
}

Matrix zeros(int d) { return Matrix::Zero(d, d); }

}  // namespace

const char* group_name(Group g) {
    switch (g) {
        case Group::SU2: return "SU2";
        case Group::H1: return "H1";
        case Group::SU11: return "SU11";
        case Group::SU3: return "SU3";
    }
    return "?";
}

const Matrix& GeneratorSet::at(const std::string& label) const {
    auto it = generators.find(label);
    if (it == generators.end()) throw UnknownLabel("unknown generator label '" + label + "'");
    return it->second;
}

Matrix GeneratorSet::commutator(const std::string& x, const std::string& y) const {
    const Matrix& a = at(x);
    const Matrix& b = at(y);
    return a * b - b * a;
}

Matrix GeneratorSet::casimir() const {
    switch (group) {
        case Group::SU2: {
            const Matrix& j0 = at("J0");
            const Matrix& jp = at("J+");
            const Matrix& jm = at("J-");
            return j0 * j0 + 0.5 * (jp * jm + jm * jp);
        }
        case Group::SU11: {
            const Matrix& k0 = at("K0");
            const Matrix& kp = at("K+");
            const Matrix& km = at("K-");
            return k0 * k0 - 0.5 * (kp * km + km * kp);
        }
        default: throw DomainError(std::string("no quadratic Casimir provided for ") + group_name(group));
    }
}

GeneratorSet build_su2(double j) {
    if (!(j >= 0.0) || !is_half_integer_multiple(j)) {
        throw InvalidWeight("build_su2: 2j must be a non-negative integer");
    }
    const int two_j = static_cast<int>(std::lround(2.0 * j));
    const int d = two_j + 1;
    Matrix j0 = zeros(d), jp = zeros(d);
    for (int n = 0; n < d; ++n) {
        j0(n, n) = n - 0.5 * two_j;
        if (n + 1 < d) jp(n + 1, n) = std::sqrt(static_cast<double>((n + 1) * (two_j - n)));
    }
    GeneratorSet g{Group::SU2, 0.5 * two_j, d, {}};
    g.generators["J0"] = j0;
    g.generators["J+"] = jp;
    g.generators["J-"] = jp.adjoint();
    return g;
}

GeneratorSet build_h1(int n_max) {
    if (n_max < 1) throw InvalidWeight("build_h1: n_max must be at least 1");
    const int d = n_max + 1;
    Matrix a = zeros(d), n_op = zeros(d);
    for (int n = 0; n < d; ++n) {
        n_op(n, n) = n;
        if (n >= 1) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    GeneratorSet g{Group::H1, 0.0, d, {}};
    g.generators["a"] = a;
    g.generators["a+"] = a.adjoint();
    g.generators["N"] = n_op;
    return g;
}

GeneratorSet build_su11(double h, int n_max) {
    const bool quarter = std::abs(h - 0.25) < 1e-15;
    if (!quarter && !(h > 0.0 && is_half_integer_multiple(h))) {
        throw InvalidWeight("build_su11: 2h must be a positive integer, or h = 1/4");
    }
    if (n_max < 1) throw InvalidWeight("build_su11: n_max must be at least 1");
    const double hh = quarter ? 0.25 : 0.5 * std::round(2.0 * h);
    const int d = n_max + 1;
    Matrix k0 = zeros(d), kp = zeros(d);
    for (int n = 0; n < d; ++n) {
        k0(n, n) = n + hh;
        if (n + 1 < d) kp(n + 1, n) = std::sqrt((n + 1) * (2.0 * hh + n));
    }
    GeneratorSet g{Group::SU11, hh, d, {}};
    g.generators["K0"] = k0;
    g.generators["K+"] = kp;
    g.generators["K-"] = kp.adjoint();
    return g;
}

GeneratorSet build_su3_fundamental() {
    GeneratorSet g{Group::SU3, 0.0, 3, {}};
    auto unit = [](int r, int c) {
        Matrix m = Matrix::Zero(3, 3);
        m(r, c) = 1.0;
        return m;
    };
    Matrix sz12 = Matrix::Zero(3, 3), sz13 = Matrix::Zero(3, 3);
    sz12.diagonal() << 0.0, 1.0, -1.0;
    sz13.diagonal() << 1.0, 0.0, -1.0;
    g.generators["Sz12"] = sz12;
    g.generators["Sz13"] = sz13;
    g.generators["S+12"] = unit(1, 2);
    g.generators["S-12"] = unit(2, 1);
    g.generators["S+13"] = unit(0, 2);
    g.generators["S-13"] = unit(2, 0);
    g.generators["S+23"] = unit(0, 1);
    g.generators["S-23"] = unit(1, 0);
    return g;
}

HamiltonianAssembly::HamiltonianAssembly(GeneratorSet gen, std::map<std::string, CoeffFn> coeff, ShiftFn shift,
                                         bool time_independent)
    : gen_(std::move(gen)), shift_(std::move(shift)), time_independent_(time_independent) {
    for (auto& [label, fn] : coeff) {
        gen_.at(label);
        terms_.emplace_back(label, std::move(fn));
    }
}

Matrix HamiltonianAssembly::operator()(double t) const {
    Matrix h = Matrix::Zero(gen_.dim, gen_.dim);
    for (const auto& [label, fn] : terms_) {
        const cplx c = fn(t);
        if (c != cplx(0.0, 0.0)) h += c * gen_.at(label);
    }
    if (shift_) h.diagonal().array() += shift_(t);
    return h;
}

HamiltonianAssembly assemble(const GeneratorSet& gen, const std::map<std::string, CoeffFn>& coeff, ShiftFn shift,
                             bool time_independent) {
    return HamiltonianAssembly(gen, coeff, std::move(shift), time_independent);
}

HamiltonianAssembly assemble_constant(const GeneratorSet& gen, const std::map<std::string, cplx>& coeff,
                                      double shift) {
    std::map<std::string, CoeffFn> fns;
    for (const auto& [label, c] : coeff) fns[label] = [c](double) { return c; };
    ShiftFn sh;
    if (shift != 0.0) sh = [shift](double) { return shift; };
    return HamiltonianAssembly(gen, fns, sh, true);
}

}  // namespace krylov
