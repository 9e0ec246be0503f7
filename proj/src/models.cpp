#include "krylov/models.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/negative_binomial.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <set>

#include "krylov/error.hpp"
#include "krylov/lanczos.hpp"

namespace krylov {

namespace {

constexpr double kGuard = 1e8;
constexpr double kTailTarget = 1e-12;
constexpr double kTailLimit = 1e-10;

const std::map<Family, std::vector<std::string>>& required_params() {
    static const std::map<Family, std::vector<std::string>> req = {
        {Family::SU2Static, {"j", "alpha", "gamma"}},
        {Family::SU2Driven, {"j", "omega0", "omega", "b0"}},
        {Family::SU2Damped, {"j", "omega0", "omega", "b0", "eta"}},
        {Family::SU2Kicked, {"j", "omega0", "period", "chi"}},
        {Family::H1Driven, {"omega0", "omega", "f0"}},
        {Family::SU11TwoMode, {"omega0", "omega", "g"}},
        {Family::Quench, {"omega0", "eta0", "tau"}},
        {Family::SU3VConfig, {"omega", "g1", "g2"}},
    };
    return req;
}

bool infinite_dimensional(Family f) {
    return f == Family::H1Driven || f == Family::SU11TwoMode || f == Family::Quench;
}

bool su2_family(Family f) {
    return f == Family::SU2Static || f == Family::SU2Driven || f == Family::SU2Damped || f == Family::SU2Kicked;
}

int kick_index(double t, double period) { return static_cast<int>(std::floor(t / period + 1e-9)); }

// E[n^2] of the level distribution with mean c (c_n = n).
double second_moment(Family f, double weight, double c) {
    switch (f) {
        case Family::H1Driven: return c + c * c;
        case Family::SU11TwoMode:
        case Family::Quench: return c + c * c / (2.0 * weight) + c * c;
        case Family::SU3VConfig: throw InvalidModel("cost exponent 2 has no closed form for su3");
        default: {
            const double n = 2.0 * weight;
            const double q = n > 0.0 ? c / n : 0.0;
            return n * q * (1.0 - q) + c * c;
        }
    }
}

double apply_cost(Family f, double weight, double c, int k) {
    if (k == 1) return c;
    if (k == 2) return second_moment(f, weight, c);
    throw InvalidModel("cost exponent must be 1 or 2");
}

std::vector<double> level_distribution(Family f, double weight, double c, int levels) {
    namespace bm = boost::math;
    std::vector<double> p(levels, 0.0);
    if (c <= 0.0) {
        p[0] = 1.0;
        return p;
    }
    if (f == Family::H1Driven) {
        bm::poisson_distribution<double> d(c);
        for (int n = 0; n < levels; ++n) p[n] = bm::pdf(d, n);
    } else if (f == Family::SU11TwoMode || f == Family::Quench) {
        const double r = 2.0 * weight;
        bm::negative_binomial_distribution<double> d(r, r / (r + c));
        for (int n = 0; n < levels; ++n) p[n] = bm::pdf(d, n);
    } else {
        const int n_tot = static_cast<int>(std::lround(2.0 * weight));
        const double q = std::clamp(c / (2.0 * weight), 0.0, 1.0);
        bm::binomial_distribution<double> d(n_tot, q);
        for (int n = 0; n < levels && n <= n_tot; ++n) p[n] = bm::pdf(d, n);
    }
    return p;
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::SU2Static: return "su2-static";
        case Family::SU2Driven: return "su2-driven";
        case Family::SU2Damped: return "su2-damped";
        case Family::SU2Kicked: return "su2-kicked";
        case Family::H1Driven: return "h1";
        case Family::SU11TwoMode: return "su11";
        case Family::Quench: return "quench";
        case Family::SU3VConfig: return "su3";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    for (Family f : {Family::SU2Static, Family::SU2Driven, Family::SU2Damped, Family::SU2Kicked, Family::H1Driven,
                     Family::SU11TwoMode, Family::Quench, Family::SU3VConfig}) {
        if (s == family_name(f)) return f;
    }
    throw InvalidModel("unknown family '" + s + "'");
}

Group family_group(Family f) {
    if (su2_family(f)) return Group::SU2;
    if (f == Family::H1Driven) return Group::H1;
    if (f == Family::SU3VConfig) return Group::SU3;
    return Group::SU11;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed";
        case Method::Numeric: return "numeric";
        case Method::Both: return "both";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    if (s == "closed") return Method::ClosedForm;
    if (s == "numeric") return Method::Numeric;
    if (s == "both") return Method::Both;
    throw InvalidModel("unknown method '" + s + "'");
}

double ModelSpec::get(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) throw InvalidModel(std::string(family_name(family)) + ": missing parameter '" + name + "'");
    return it->second;
}

double ModelSpec::get(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

double ModelSpec::weight() const {
    if (su2_family(family)) return get("j");
    if (family == Family::SU11TwoMode) return get("h", 0.5);
    if (family == Family::Quench) return 0.25;
    return 0.0;
}

void ModelSpec::validate() const {
    for (const auto& name : required_params().at(family)) get(name);
    for (const auto& [name, v] : params) {
        if (!std::isfinite(v)) throw InvalidModel("parameter '" + name + "' is not finite");
    }
    if (su2_family(family)) {
        const double j = get("j");
        if (!(j > 0.0) || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-12) {
            throw InvalidWeight("j must be a positive half-integer");
        }
    }
    if (family == Family::SU11TwoMode) {
        const double h = weight();
        if (!(h > 0.0) || std::abs(2.0 * h - std::round(2.0 * h)) > 1e-12) {
            throw InvalidWeight("h must be a positive half-integer");
        }
        if (get("g") < 0.0) throw InvalidModel("g must be non-negative");
    }
    if (family == Family::SU2Damped && get("eta") == 0.0) throw InvalidModel("su2-damped needs eta != 0");
    if (family == Family::SU2Kicked && !(get("period") > 0.0)) throw InvalidModel("period must be positive");
    if (family == Family::Quench && get("tau") < 0.0) throw InvalidModel("tau must be non-negative");
    if (infinite_dimensional(family) && truncation != 0 && truncation < 16) {
        throw InvalidModel("truncation must be at least 16");
    }
}

double complexity_from_lambda(Group group, double weight, double abs_lambda_plus) {
    const double x = abs_lambda_plus * abs_lambda_plus;
    switch (group) {
        case Group::SU2:
            if (std::isinf(abs_lambda_plus)) return 2.0 * weight;
            return 2.0 * weight * (x / (1.0 + x));
        case Group::SU11:
            if (!(abs_lambda_plus < 1.0)) throw DomainError("SU(1,1) complexity needs |lambda_+| < 1");
            return 2.0 * weight * x / (1.0 - x);
        case Group::H1: return x;
        default: throw DomainError("complexity_from_lambda: no closed sum for this group");
    }
}

double complexity_from_pair(Group group, double weight, const ProjectivePair& pair) {
    switch (group) {
        case Group::SU2: return 2.0 * weight * pair.bounded_fraction();
        case Group::SU11: return 2.0 * weight * pair.hyperbolic_fraction();
        case Group::H1: return std::norm(pair.ratio());
        default: throw DomainError("complexity_from_pair: no closed sum for this group");
    }
}

double complexity_from_state(const Vector& psi, int cost_exponent) {
    const double norm2 = psi.squaredNorm();
    if (std::abs(norm2 - 1.0) > 1e-8) throw NotNormalized("state norm differs from 1 by more than 1e-8");
    double c = 0.0;
    for (Eigen::Index n = 0; n < psi.size(); ++n) {
        c += std::pow(static_cast<double>(n), cost_exponent) * std::norm(psi[n]);
    }
    return c;
}

double su3_complexity_closed(double omega, double g1, double g2, double t) {
    const double s = g1 * g1 + g2 * g2;
    if (!(s > 0.0)) throw DomainError("su3_complexity_closed: (g1, g2) must not both vanish");
    const double lam = std::sqrt(4.0 * s + 9.0 * omega * omega);
    const double g1s = g1 * g1, g2s = g2 * g2;
    const double a = 2.0 * g2s * (7.0 * g1s * g1s + g2s * g2s + 2.0 * g1s * (4.0 * g2s + 9.0 * omega * omega));
    const double b = 2.0 * g2s * (g1s * g1s - g2s * g2s);
    const double c = -2.0 * g1s * g2s * lam * (lam + 3.0 * omega);
    const double d = -2.0 * g1s * g2s * lam * (lam - 3.0 * omega);
    const double num = a + b * std::cos(lam * t) + c * std::cos((lam - 3.0 * omega) * t / 2.0) +
                       d * std::cos((lam + 3.0 * omega) * t / 2.0);
    return num / (lam * lam * s * s);
}

Matrix su3_vconfig_hamiltonian(double omega, double g1, double g2) {
    const GeneratorSet gen = build_su3_fundamental();
    return assemble_constant(gen, {{"Sz12", omega}, {"Sz13", omega}, {"S+12", g1}, {"S-12", g1}, {"S+13", g2}, {"S-13", g2}})(0.0);
}

std::vector<double> linear_grid(double t0, double t1, int samples) {
    if (samples < 1) throw InvalidModel("samples must be positive");
    std::vector<double> t(samples);
    if (samples == 1) {
        t[0] = t0;
        return t;
    }
    const double h = (t1 - t0) / (samples - 1);
    for (int i = 0; i < samples; ++i) t[i] = t0 + i * h;
    t.back() = t1;
    return t;
}

double tail_mass(Family family, double weight, double c, int n_max) {
    if (c <= 0.0) return 0.0;
    if (family == Family::H1Driven) return boost::math::gamma_p(static_cast<double>(n_max + 1), c);
    if (family == Family::SU11TwoMode || family == Family::Quench) {
        const double r = 2.0 * weight;
        const double x = c / (r + c);
        return boost::math::ibeta(static_cast<double>(n_max + 1), r, x);
    }
    return 0.0;
}

int auto_truncation(Family family, double weight, double c_max) {
    if (!infinite_dimensional(family)) return 0;
    for (int n = 32; n <= 512; ++n) {
        if (tail_mass(family, weight, c_max, n) < kTailTarget) return n;
    }
    return 512;
}

std::vector<double> closed_form_complexity(const ModelSpec& spec, const std::vector<double>& t_grid, Exec exec,
                                           int cost_exponent) {
    spec.validate();
    const Family f = spec.family;
    const double w = spec.weight();
    std::vector<double> c(t_grid.size());
    std::optional<KickGenerator> kick;
    if (f == Family::SU2Kicked) kick = kick_generator(spec.get("omega0"), spec.get("period"), spec.get("chi"));
    auto point = [&](double t) -> double {
        switch (f) {
            case Family::SU2Static:
                return complexity_from_pair(Group::SU2, w,
                                            su2_static(spec.get("alpha"), spec.get("gamma"), spec.get("delta", 0.0), t).lambda_plus);
            case Family::SU2Driven:
                return complexity_from_pair(Group::SU2, w, su2_driven(spec.get("omega0"), spec.get("omega"), spec.get("b0"), t).lambda_plus);
            case Family::SU2Damped:
                return complexity_from_pair(
                    Group::SU2, w, su2_damped(spec.get("omega0"), spec.get("omega"), spec.get("b0"), spec.get("eta"), t).lambda_plus);
            case Family::SU2Kicked:
                return complexity_from_pair(Group::SU2, w, su2_kicked(*kick, kick_index(t, spec.get("period"))).lambda_plus);
            case Family::H1Driven:
                return std::norm(h1_driven(spec.get("omega0"), spec.get("omega"), spec.get("f0"), spec.get("eta", 0.0), t).beta);
            case Family::SU11TwoMode:
                return complexity_from_pair(
                    Group::SU11, w, su11_driven(spec.get("omega0"), spec.get("omega"), spec.get("g"), spec.get("eta", 0.0), t).lambda_plus);
            case Family::Quench:
                return complexity_from_pair(Group::SU11, w,
                                            quench_coefficients(spec.get("omega0"), spec.get("eta0"), spec.get("tau"), t).lambda_plus);
            case Family::SU3VConfig: return su3_complexity_closed(spec.get("omega"), spec.get("g1"), spec.get("g2"), t);
        }
        return 0.0;
    };
    for_each_index(t_grid.size(), exec, [&](std::size_t i) { c[i] = apply_cost(f, w, point(t_grid[i]), cost_exponent); });
    return c;
}

std::vector<double> numeric_complexity(const ModelSpec& spec, const std::vector<double>& t_grid, double integrator_tol,
                                       Exec exec, int cost_exponent) {
    spec.validate();
    const Family f = spec.family;
    const double w = spec.weight();
    std::vector<double> c(t_grid.size());
    if (t_grid.empty()) return c;
    if (t_grid.front() < 0.0) throw DomainError("time grid must be non-negative");
    PropagatorOptions popt;
    popt.rel_tol = integrator_tol;
    popt.abs_tol = integrator_tol * 0.1;

    auto su2_from = [&](const std::vector<Matrix>& u) {
        for_each_index(u.size(), exec, [&](std::size_t i) {
            c[i] = apply_cost(f, w, complexity_from_pair(Group::SU2, w, gauss_decompose(u[i], Group::SU2).lambda_plus), cost_exponent);
        });
    };
    auto su11_from = [&](const std::vector<Matrix>& u) {
        for_each_index(u.size(), exec, [&](std::size_t i) {
            c[i] = apply_cost(f, w, complexity_from_pair(Group::SU11, w, gauss_decompose(u[i], Group::SU11).lambda_plus), cost_exponent);
        });
    };

    switch (f) {
        case Family::SU2Static:
            su2_from(integrate_propagator(su2_static_assembly(spec.get("alpha"), spec.get("gamma"), spec.get("delta", 0.0)), t_grid, popt));
            break;
        case Family::SU2Driven:
            su2_from(integrate_propagator(su2_driven_assembly(spec.get("omega0"), spec.get("omega"), spec.get("b0"), 0.0), t_grid, popt));
            break;
        case Family::SU2Damped:
            su2_from(integrate_propagator(
                su2_driven_assembly(spec.get("omega0"), spec.get("omega"), spec.get("b0"), spec.get("eta")), t_grid, popt));
            break;
        case Family::SU2Kicked: {
            const double period = spec.get("period");
            const Matrix ut = kick_period_matrix(spec.get("omega0"), period, spec.get("chi"));
            std::vector<Matrix> u(t_grid.size());
            Matrix acc = Matrix::Identity(2, 2);
            int k = 0;
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                const int target = kick_index(t_grid[i], period);
                while (k < target) {
                    acc = ut * acc;
                    ++k;
                }
                u[i] = acc;
            }
            su2_from(u);
            break;
        }
        case Family::H1Driven: {
            const auto u = integrate_propagator(
                h1_driven_assembly(spec.get("omega0"), spec.get("omega"), spec.get("f0"), spec.get("eta", 0.0)), t_grid, popt);
            for_each_index(u.size(), exec, [&](std::size_t i) { c[i] = apply_cost(f, w, std::norm(h1_decompose(u[i]).beta), cost_exponent); });
            break;
        }
        case Family::SU11TwoMode:
            su11_from(integrate_propagator(
                su11_driven_assembly(spec.get("omega0"), spec.get("omega"), spec.get("g"), spec.get("eta", 0.0)), t_grid, popt));
            break;
        case Family::Quench: {
            const double omega0 = spec.get("omega0"), tau = spec.get("tau");
            const Matrix hq = quench_assembly(omega0, spec.get("eta0"))(0.0);
            const Matrix hf = assemble_constant(su11_fundamental(), {{"K0", 2.0 * omega0}})(0.0);
            const Matrix u_tau = exponentiate(hq, tau, false);
            std::vector<Matrix> u(t_grid.size());
            for_each_index(t_grid.size(), exec, [&](std::size_t i) {
                const double t = t_grid[i];
                u[i] = t <= tau ? exponentiate(hq, t, false) : Matrix(exponentiate(hf, t - tau, false) * u_tau);
            });
            su11_from(u);
            break;
        }
        case Family::SU3VConfig: {
            const Matrix h = su3_vconfig_hamiltonian(spec.get("omega"), spec.get("g1"), spec.get("g2"));
            Vector seed = Vector::Zero(3);
            seed[0] = 1.0;
            const TridiagonalData td = tridiagonalize(h, seed);
            Matrix kb(3, td.basis.size());
            for (std::size_t n = 0; n < td.basis.size(); ++n) kb.col(n) = td.basis[n];
            for_each_index(t_grid.size(), exec, [&](std::size_t i) {
                const Vector psi = exponentiate(h, t_grid[i], true) * seed;
                c[i] = complexity_from_state(kb.adjoint() * psi, cost_exponent);
            });
            break;
        }
    }
    return c;
}

namespace {

void guard_su11(const ModelSpec& spec, const std::vector<double>& t_grid) {
    if (spec.family != Family::SU11TwoMode || t_grid.empty() || spec.get("eta", 0.0) != 0.0) return;
    const double g = spec.get("g");
    const double delta = spec.get("omega0") - spec.get("omega");
    if (classify_regime(g, delta) != Regime::Exponential) return;
    const double rate = std::sqrt(g * g - delta * delta);  // C ~ e^{rate t}
    const double nu = rate / 2.0;
    const double t_star = std::asinh(std::sqrt(kGuard) * 2.0 * nu / g) / nu;
    if (t_grid.back() > t_star) {
        throw ComplexityGuard("su11: predicted complexity exceeds 1e8 beyond t = " + std::to_string(t_star) +
                              "; asymptotic growth rate of C is " + std::to_string(rate));
    }
}

}  // namespace

ComplexityTrace run_model(const ModelSpec& spec, const std::vector<double>& t_grid, const RunOptions& opt) {
    spec.validate();
    if (t_grid.empty()) throw InvalidModel("empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw InvalidModel("time grid must be increasing");
    }
    guard_su11(spec, t_grid);

    ComplexityTrace tr;
    tr.family = spec.family;
    tr.t = t_grid;
    tr.method = opt.method;
    std::vector<double> closed, numeric;
    if (opt.method != Method::Numeric) closed = closed_form_complexity(spec, t_grid, opt.exec, opt.cost_exponent);
    if (opt.method != Method::ClosedForm) {
        numeric = numeric_complexity(spec, t_grid, opt.integrator_tol, opt.exec, opt.cost_exponent);
    }
    tr.C = opt.method == Method::Numeric ? numeric : closed;
    if (opt.method == Method::Both) {
        tr.dev.resize(t_grid.size());
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            tr.dev[i] = std::abs(closed[i] - numeric[i]) / std::max(1.0, std::abs(closed[i]));
            tr.max_route_deviation = std::max(tr.max_route_deviation, tr.dev[i]);
        }
    }
    // Damped pumping saturates, so only undamped and ramping runs are guarded.
    const bool grows = spec.family == Family::SU11TwoMode && spec.get("eta", 0.0) <= 0.0;
    for (double c : tr.C) {
        if (grows && c > kGuard) {
            throw ComplexityGuard("su11: complexity exceeds 1e8 on the requested window");
        }
    }

    const Family f = spec.family;
    const double w = spec.weight();
    const bool want_p = opt.probabilities;
    if (infinite_dimensional(f) && (want_p || spec.truncation > 0)) {
        double c_max = 0.0;
        for (double c : tr.C) c_max = std::max(c_max, opt.cost_exponent == 1 ? c : 0.0);
        if (opt.cost_exponent != 1) {
            const auto mean = closed_form_complexity(spec, t_grid, opt.exec, 1);
            c_max = *std::max_element(mean.begin(), mean.end());
        }
        const int n_max = spec.truncation > 0 ? spec.truncation : auto_truncation(f, w, c_max);
        const double tail = tail_mass(f, w, c_max, n_max);
        if (tail > kTailLimit) {
            throw TruncationOverflow("truncation " + std::to_string(n_max) + " leaves tail mass " + std::to_string(tail));
        }
        tr.levels = n_max + 1;
    } else if (su2_family(f)) {
        tr.levels = static_cast<int>(std::lround(2.0 * w)) + 1;
    } else if (f == Family::SU3VConfig) {
        tr.levels = 3;
    }

    if (want_p) {
        tr.p.resize(t_grid.size());
        if (f == Family::SU3VConfig) {
            const Matrix h = su3_vconfig_hamiltonian(spec.get("omega"), spec.get("g1"), spec.get("g2"));
            Vector seed = Vector::Zero(3);
            seed[0] = 1.0;
            const TridiagonalData td = tridiagonalize(h, seed);
            for_each_index(t_grid.size(), opt.exec, [&](std::size_t i) {
                const Vector psi = exponentiate(h, t_grid[i], true) * seed;
                tr.p[i].assign(3, 0.0);
                for (std::size_t n = 0; n < td.basis.size(); ++n) tr.p[i][n] = std::norm(td.basis[n].dot(psi));
            });
        } else {
            const std::vector<double> mean =
                opt.cost_exponent == 1 ? tr.C : closed_form_complexity(spec, t_grid, opt.exec, 1);
            for_each_index(t_grid.size(), opt.exec,
                           [&](std::size_t i) { tr.p[i] = level_distribution(f, w, mean[i], tr.levels); });
        }
    }
    return tr;
}

std::vector<std::string> check_invariants(const ModelSpec& spec, const ComplexityTrace& tr, double tol) {
    std::vector<std::string> bad;
    const double w = spec.weight();
    for (std::size_t i = 0; i < tr.C.size(); ++i) {
        const double c = tr.C[i];
        if (!std::isfinite(c) || c < -tol) {
            bad.push_back("C < 0 at t = " + std::to_string(tr.t[i]));
            break;
        }
        if (su2_family(spec.family) && c > 2.0 * w + tol) {
            bad.push_back("C exceeds 2j at t = " + std::to_string(tr.t[i]));
            break;
        }
        if (spec.family == Family::SU3VConfig && c > 2.0 + tol) {
            bad.push_back("C exceeds 2 at t = " + std::to_string(tr.t[i]));
            break;
        }
    }
    for (std::size_t i = 0; i < tr.p.size(); ++i) {
        double s = 0.0;
        for (double v : tr.p[i]) s += v;
        if (std::abs(s - 1.0) > tol) {
            bad.push_back("probabilities do not sum to 1 at t = " + std::to_string(tr.t[i]));
            break;
        }
    }
    return bad;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Oscillatory: return "oscillatory";
        case Regime::Quadratic: return "quadratic";
        case Regime::Exponential: return "exponential";
    }
    return "?";
}

Regime classify_regime(double g, double delta) {
    if (g < 0.0) throw DomainError("classify_regime: g must be non-negative");
    const double ad = std::abs(delta);
    if (std::abs(g - ad) <= 1e-12 * std::max(g, ad)) return Regime::Quadratic;
    return g < ad ? Regime::Oscillatory : Regime::Exponential;
}

double SweepAxis::value(int i) const {
    if (n <= 1) return lo;
    if (i == n - 1) return hi;
    return lo + i * (hi - lo) / (n - 1);
}

ModelSpec with_param(const ModelSpec& base, const std::string& name, double value) {
    ModelSpec s = base;
    if (name == "truncation") {
        s.truncation = static_cast<int>(std::lround(value));
    } else if (name == "delta" && s.family == Family::SU11TwoMode) {
        s.params["omega"] = s.get("omega0") - value;
    } else {
        s.params[name] = value;
    }
    return s;
}

SweepResult sweep(const ModelSpec& base, const SweepAxis& x, const SweepAxis& y, const std::vector<double>& t_grid,
                  SweepStat stat, const RunOptions& opt) {
    if (x.n < 1 || y.n < 1) throw InvalidModel("sweep axes need at least one point");
    if (static_cast<long long>(x.n) * y.n > 1000000) throw InvalidModel("sweep grids are limited to 1e6 cells");
    SweepResult r{x, y, std::vector<SweepCell>(static_cast<std::size_t>(x.n) * y.n)};
    RunOptions inner = opt;
    inner.exec = Exec::Serial;
    inner.probabilities = false;
    for_each_index(r.cells.size(), opt.exec, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / y.n), j = static_cast<int>(idx % y.n);
        SweepCell& cell = r.cells[idx];
        cell.x = x.value(i);
        cell.y = y.value(j);
        try {
            const ModelSpec s = with_param(with_param(base, x.param, cell.x), y.param, cell.y);
            if (s.family == Family::SU11TwoMode) cell.regime = classify_regime(s.get("g"), s.get("omega0") - s.get("omega"));
            const ComplexityTrace tr = run_model(s, t_grid, inner);
            cell.value = stat == SweepStat::CMax ? *std::max_element(tr.C.begin(), tr.C.end()) : tr.C.back();
        } catch (const Error& e) {
            cell.value = std::numeric_limits<double>::quiet_NaN();
            cell.error = std::string(e.kind()) + ": " + e.what();
        }
    });
    return r;
}

}  // namespace krylov
