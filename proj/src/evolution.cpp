#include "krylov/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "krylov/error.hpp"

namespace krylov {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI(0.0, 1.0);

bool near_resonance(double omega0, double omega) {
    return std::abs(omega - omega0) < 1e-9 * std::max({std::abs(omega), std::abs(omega0), 1.0});
}

// For x = nu^2 t^2 (real, either sign): ch = cosh(nu t), shc = sinh(nu t) / (nu t).
struct HyperPair {
    double ch, shc;
};

HyperPair hyper(double x) {
    if (std::abs(x) < 1e-6) return {1.0 + x / 2.0 + x * x / 24.0, 1.0 + x / 6.0 + x * x / 120.0};
    if (x > 0.0) {
        const double r = std::sqrt(x);
        if (r > 350.0) throw OverflowError("hyperbolic growth exceeds double range");
        return {std::cosh(r), std::sinh(r) / r};
    }
    const double r = std::sqrt(-x);
    return {std::cos(r), std::sin(r) / r};
}

ProjectivePair normalized(cplx num, cplx den) {
    const double s = std::max(std::abs(num), std::abs(den));
    if (!(s > 0.0) || !std::isfinite(s)) throw DegenerateEntry("projective pair vanishes or overflows");
    return {num / s, den / s, std::nullopt};
}

}  // namespace

double ProjectivePair::bounded_fraction() const {
    const double n2 = std::norm(num), d2 = std::norm(den);
    return n2 / (n2 + d2);
}

double ProjectivePair::hyperbolic_fraction() const {
    const double n2 = std::norm(num);
    const double g = gap ? *gap : std::norm(den) - n2;
    if (!(g > 0.0)) throw DomainError("SU(1,1) coordinate outside the unit disc");
    return n2 / g;
}

void GaussCoefficients::push(const GaussPoint& p) {
    t.push_back(p.t);
    lambda_plus.push_back(p.lambda_plus);
    lambda_zero.push_back(p.lambda_zero);
    lambda_minus.push_back(p.lambda_minus);
    global_phase.push_back(p.global_phase);
}

void GaussCoefficients::unwrap_lambda_zero() {
    const double period = 4.0 * kPi;
    double offset = 0.0;
    for (std::size_t i = 0; i < lambda_zero.size(); ++i) {
        double im = lambda_zero[i].imag() + offset;
        if (i > 0) {
            const double prev = lambda_zero[i - 1].imag();
            const double jump = std::round((im - prev) / period);
            offset -= jump * period;
            im -= jump * period;
        }
        lambda_zero[i] = {lambda_zero[i].real(), im};
    }
}

GaussPoint su2_static(double alpha, double gamma, double delta, double t) {
    const double nu2 = alpha * alpha + gamma * gamma / 4.0;
    const HyperPair hp = hyper(-nu2 * t * t);
    const cplx num = -kI * alpha * t * hp.shc;
    const cplx den = hp.ch + kI * gamma * t * hp.shc / 2.0;
    GaussPoint p;
    p.t = t;
    p.lambda_plus = {num, den, std::nullopt};
    p.lambda_zero = -2.0 * std::log(den);
    p.lambda_minus = num / den;
    p.global_phase = std::polar(1.0, -delta * t);
    return p;
}

GaussPoint su2_driven(double omega0, double omega, double b0, double t) {
    const double d = near_resonance(omega0, omega) ? 0.0 : omega - omega0;
    const double nu2 = (b0 * b0 + d * d) / 4.0;
    const HyperPair hp = hyper(-nu2 * t * t);
    const cplx rot = std::polar(1.0, -omega * t);
    const cplx den = 2.0 * hp.ch - kI * d * t * hp.shc;
    const cplx num = -kI * b0 * t * hp.shc * rot;
    GaussPoint p;
    p.t = t;
    p.lambda_plus = {num, den, std::nullopt};
    p.lambda_zero = -kI * omega * t - 2.0 * std::log(den / 2.0);
    p.lambda_minus = -kI * b0 * t * hp.shc / den;
    return p;
}

GaussPoint su2_damped(double omega0, double omega, double b0, double eta, double t, const SeriesControl& ctl) {
    if (eta == 0.0) throw DomainError("su2_damped: eta must be non-zero");
    GaussPoint p;
    p.t = t;
    p.phase_known = false;
    const cplx rot = std::polar(1.0, -omega * t);
    if (near_resonance(omega0, omega)) {
        const double theta = 0.5 * b0 * t * phi1(-eta * t).real();
        p.lambda_plus = {-kI * rot * std::sin(theta), std::cos(theta), std::nullopt};
        p.lambda_zero = -kI * omega * t - 2.0 * std::log(cplx(std::cos(theta)));
        p.lambda_minus = -kI * std::tan(theta);
        p.phase_known = true;
        return p;
    } else {
        const double d = omega - omega0;
        const cplx mu(0.5, d / (2.0 * eta));
        const cplx mup(0.5, -d / (2.0 * eta));
        const double kappa = b0 / (2.0 * eta);
        const double s = std::exp(-eta * t);
        const double zs = kappa * s;
        auto sp = [&](cplx e) { return std::exp(-e * eta * t); };  // s^e
        const cplx jm_k = bessel_j_scaled(-mu, kappa, ctl);
        const cplx jp_k = bessel_j_scaled(mu, kappa, ctl);
        const cplx num = 0.5 * kappa *
                         (sp(mu) * jm_k * bessel_j_scaled(mu, zs, ctl) - sp(-mu) * jp_k * bessel_j_scaled(-mu, zs, ctl));
        const cplx den = sp(-mup) * jm_k * bessel_j_scaled(-mup, zs, ctl) +
                         0.25 * kappa * kappa * sp(mup) * jp_k * bessel_j_scaled(mup, zs, ctl);
        p.lambda_plus = normalized(kI * rot * num, den);
    }
    p.lambda_zero = std::log1p(std::norm(p.lambda_plus.num) / std::norm(p.lambda_plus.den));
    return p;
}

Matrix kick_period_matrix(double omega0, double period, double chi) {
    const double phi = omega0 * period;
    const double c = std::cos(chi / 2.0), s = std::sin(chi / 2.0);
    const cplx up = std::polar(1.0, phi / 2.0), dn = std::polar(1.0, -phi / 2.0);
    Matrix u(2, 2);
    u << up * c, -kI * up * s, -kI * dn * s, dn * c;
    return u;
}

static void check_kick_pole(double omega0, double period) {
    if (std::abs(1.0 - std::polar(1.0, omega0 * period)) < 1e-12) {
        throw ResonantKickPole("su2_kicked: w0 T is a multiple of 2 pi");
    }
}

KickGenerator kick_generator(double omega0, double period, double chi) {
    check_kick_pole(omega0, period);
    const Matrix u = kick_period_matrix(omega0, period, chi);
    const double ch = u(0, 0).real();
    const double sh = std::sqrt(std::norm(cplx(0.0, u(0, 0).imag())) + std::norm(u(1, 0)));
    if (sh < 1e-300) {
        if (ch > 0.0) return {0.0, 0.0};
        throw NumericalBreakdown("kick_generator: period map is -I, generator not unique");
    }
    const double h = std::atan2(sh, ch);
    const Matrix g = (h / sh) * kI * (u - ch * Matrix::Identity(2, 2));
    return {(g(1, 1) - g(0, 0)).real(), g(1, 0)};
}

KickGenerator kick_generator_first_order(double omega0, double period, double chi) {
    check_kick_pole(omega0, period);
    const double a = omega0 * period;
    return {a, -kI * a * chi / (2.0 * (1.0 - std::polar(1.0, a)))};
}

GaussPoint su2_kicked(const KickGenerator& g, int k) {
    if (k < 0) throw DomainError("su2_kicked: k must be non-negative");
    const double nu = std::sqrt(g.alpha * g.alpha / 4.0 + std::norm(g.xi));
    const double kk = static_cast<double>(k);
    const double sn = nu > 0.0 ? std::sin(nu * kk) / nu : kk;
    const cplx den = std::cos(nu * kk) + kI * g.alpha * sn / 2.0;
    GaussPoint p;
    p.t = kk;
    p.lambda_plus = {-kI * g.xi * sn, den, std::nullopt};
    p.lambda_zero = -2.0 * std::log(den);
    p.lambda_minus = -kI * std::conj(g.xi) * sn / den;
    return p;
}

GaussPoint su2_kicked(double omega0, double period, double chi, int k) {
    GaussPoint p = su2_kicked(kick_generator(omega0, period, chi), k);
    p.t = k * period;
    return p;
}

H1Point h1_driven(double omega0, double omega, double f0, double eta, double t) {
    const double d = near_resonance(omega0, omega) ? 0.0 : omega - omega0;
    const cplx a(eta, -d), b(eta, d);
    H1Point p;
    p.t = t;
    p.alpha = -kI * omega0 * t;
    p.beta = -kI * f0 * t * phi1(-b * t);
    p.gamma = -kI * f0 * t * phi1(-a * t);
    if (std::abs(b) * t < 0.5) {
        // log K = -f0^2 sum_{k>=0, m>=1} (-a)^k (-1)^{m+1} b^{m-1} t^{k+m+1} / (k! m! (k+m+1))
        cplx sum = 0.0;
        cplx ak = 1.0;
        for (int k = 0; k < 40; ++k) {
            if (k > 0) ak *= -a * t / static_cast<double>(k);
            cplx bm = t;  // (-1)^{m+1} b^{m-1} t^m / m! at m = 1
            for (int m = 1; m < 40; ++m) {
                if (m > 1) bm *= -b * t / static_cast<double>(m);
                sum += ak * bm * t / static_cast<double>(k + m + 1);
                if (std::abs(bm) < 1e-18 * std::abs(t)) break;
            }
            if (std::abs(ak) < 1e-18) break;
        }
        p.log_k = -f0 * f0 * sum;
    } else {
        p.log_k = f0 * f0 * t * (phi1(-2.0 * eta * t) - phi1(-a * t)) / b;
    }
    return p;
}

GaussPoint su11_driven(double omega0, double omega, double g, double eta, double t, const SeriesControl& ctl) {
    GaussPoint p;
    p.t = t;
    const cplx rot = std::polar(1.0, -omega * t);
    const bool resonant = near_resonance(omega0, omega);
    if (eta == 0.0 || resonant) {
        if (resonant) {
            const double theta = 0.5 * g * t * (eta == 0.0 ? 1.0 : phi1(-eta * t).real());
            if (theta > 350.0) throw OverflowError("su11_driven: hyperbolic growth exceeds double range");
            p.lambda_plus = {-kI * rot * std::sinh(theta), std::cosh(theta), 1.0};
            p.lambda_zero = -kI * omega * t - 2.0 * std::log(std::cosh(theta));
            p.lambda_minus = -kI * std::tanh(theta);
            return p;
        }
        const double d = omega - omega0;
        const HyperPair hp = hyper((g * g - d * d) * t * t / 4.0);
        const cplx num = -kI * g * t * hp.shc * rot;
        const cplx den = 2.0 * hp.ch - kI * d * t * hp.shc;
        p.lambda_plus = {num, den, 4.0};
        p.lambda_zero = -kI * omega * t - 2.0 * std::log(den / 2.0);
        p.lambda_minus = -kI * g * t * hp.shc / den;
        return p;
    }
    p.phase_known = false;
    const double d = omega - omega0;
    const cplx mu(0.5, d / (2.0 * eta));
    const double kappa = g / (2.0 * eta);
    const double zs = kappa * std::exp(-eta * t);
    // Both entries carry kappa / 2, dropped here. The products grow like
    // e^{kappa + zs} while the differences are far smaller.
    // |num| < |den|, so den sets the accuracy scale for both.
    const BesselCross den = bessel_i_cross(mu, 1, kappa, zs, ctl);
    const BesselCross num = bessel_i_cross(mu, 0, kappa, zs, ctl, std::abs(den.value));
    // |den|^2 - |num|^2 = (2 |sin(pi mu)| / (pi kappa))^2 kappa / zs exactly, with
    // |sin(pi mu)| = cosh(pi Im mu); carrying it keeps 1 - |Lambda_+|^2 exact
    // where it underflows in the difference.
    const double s = std::max(std::abs(num.value), std::abs(den.value));
    if (!(s > 0.0) || !std::isfinite(s)) throw DegenerateEntry("su11_driven: projective pair vanishes or overflows");
    const double a = kPi * std::abs(mu.imag());
    const double log_sin = a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
    const double log_gap = 2.0 * (std::log(2.0 / (kPi * std::abs(kappa))) + log_sin) + eta * t - 2.0 * std::log(s);
    const double gap = std::exp(log_gap);
    if (!(gap > 0.0) || !std::isfinite(gap)) throw OverflowError("su11_driven: gap outside double range");
    p.lambda_plus = {kI * rot * num.value / s, den.value / s, gap};
    const double d2 = std::norm(p.lambda_plus.den);
    if (std::abs(d2 - std::norm(p.lambda_plus.num) - gap) > 8.0 * ctl.rel_tol * d2) {
        throw NumericalBreakdown("su11_driven: pair inconsistent with its exact gap");
    }
    p.lambda_zero = std::log(gap / d2);
    return p;
}

GaussPoint quench_coefficients(double omega0, double eta0, double tau, double t) {
    if (t < 0.0) throw DomainError("quench_coefficients: t must be non-negative");
    const double te = std::min(t, tau);
    const double w1sq = omega0 * omega0 + 2.0 * omega0 * eta0;
    const HyperPair hp = hyper(-w1sq * te * te);
    cplx num = -kI * eta0 * te * hp.shc;
    cplx den = hp.ch + kI * (omega0 + eta0) * te * hp.shc;
    GaussPoint p;
    p.t = t;
    p.lambda_zero = -2.0 * std::log(den);
    p.lambda_minus = num / den;
    if (t > tau) {
        const double dt = t - tau;
        num *= std::polar(1.0, -omega0 * dt);
        den *= std::polar(1.0, omega0 * dt);
        p.lambda_zero += -2.0 * kI * omega0 * dt;
    }
    p.lambda_plus = {num, den, 1.0};
    return p;
}

GeneratorSet su11_fundamental() {
    GeneratorSet g{Group::SU11, 0.5, 2, {}};
    Matrix k0 = Matrix::Zero(2, 2), kp = Matrix::Zero(2, 2), km = Matrix::Zero(2, 2);
    k0(0, 0) = -0.5;
    k0(1, 1) = 0.5;
    kp(1, 0) = 1.0;
    km(0, 1) = -1.0;
    g.generators["K0"] = k0;
    g.generators["K+"] = kp;
    g.generators["K-"] = km;
    return g;
}

GeneratorSet h1_faithful() {
    GeneratorSet g{Group::H1, 0.0, 3, {}};
    Matrix a = Matrix::Zero(3, 3), ad = Matrix::Zero(3, 3), n = Matrix::Zero(3, 3);
    a(0, 1) = 1.0;
    ad(1, 2) = 1.0;
    n(1, 1) = 1.0;
    g.generators["a"] = a;
    g.generators["a+"] = ad;
    g.generators["N"] = n;
    return g;
}

HamiltonianAssembly su2_static_assembly(double alpha, double gamma, double delta) {
    return assemble_constant(build_su2(0.5), {{"J+", alpha}, {"J-", alpha}, {"J0", gamma}}, delta);
}

HamiltonianAssembly su2_driven_assembly(double omega0, double omega, double b0, double eta) {
    std::map<std::string, CoeffFn> c;
    c["J0"] = [omega0](double) { return cplx(omega0); };
    c["J+"] = [=](double t) { return 0.5 * b0 * std::exp(-eta * t) * std::polar(1.0, -omega * t); };
    c["J-"] = [=](double t) { return 0.5 * b0 * std::exp(-eta * t) * std::polar(1.0, omega * t); };
    return assemble(build_su2(0.5), c);
}

HamiltonianAssembly h1_driven_assembly(double omega0, double omega, double f0, double eta) {
    std::map<std::string, CoeffFn> c;
    c["N"] = [omega0](double) { return cplx(omega0); };
    c["a"] = [=](double t) { return f0 * std::exp(-eta * t) * std::polar(1.0, omega * t); };
    c["a+"] = [=](double t) { return f0 * std::exp(-eta * t) * std::polar(1.0, -omega * t); };
    HamiltonianAssembly h = assemble(h1_faithful(), c);
    h.set_hermitian_expected(false);
    return h;
}

HamiltonianAssembly su11_driven_assembly(double omega0, double omega, double g, double eta) {
    std::map<std::string, CoeffFn> c;
    c["K0"] = [omega0](double) { return cplx(omega0); };
    c["K+"] = [=](double t) { return 0.5 * g * std::exp(-eta * t) * std::polar(1.0, -omega * t); };
    c["K-"] = [=](double t) { return 0.5 * g * std::exp(-eta * t) * std::polar(1.0, omega * t); };
    HamiltonianAssembly h = assemble(su11_fundamental(), c);
    h.set_hermitian_expected(false);
    return h;
}

HamiltonianAssembly quench_assembly(double omega0, double eta0) {
    HamiltonianAssembly h = assemble_constant(su11_fundamental(), {{"K0", 2.0 * (omega0 + eta0)}, {"K+", eta0}, {"K-", eta0}});
    h.set_hermitian_expected(false);
    return h;
}

Matrix exponentiate(const Matrix& h, double t, bool hermitian) {
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        Vector phases(es.eigenvalues().size());
        for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::polar(1.0, -es.eigenvalues()[k] * t);
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    const Matrix a = (-kI * t) * h;
    return a.exp();
}

std::vector<Matrix> integrate_propagator(const HamiltonianAssembly& h, const std::vector<double>& t_grid,
                                         const PropagatorOptions& opt) {
    const int d = h.dim();
    if (d > 512) throw DomainError("integrate_propagator: dimension above 512");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("integrate_propagator: t_grid must be increasing");
    }
    if (!t_grid.empty() && t_grid.front() < opt.t0) throw DomainError("integrate_propagator: grid starts before t0");
    std::vector<Matrix> out(t_grid.size());
    if (t_grid.empty()) return out;

    if (h.time_independent() && !opt.force_integrator) {
        const Matrix hm = h(opt.t0);
        for_each_index(t_grid.size(), Exec::Parallel,
                       [&](std::size_t i) { out[i] = exponentiate(hm, t_grid[i] - opt.t0, h.hermitian_expected()); });
        return out;
    }

    namespace ode = boost::numeric::odeint;
    using State = std::vector<double>;
    const std::size_t n = static_cast<std::size_t>(d) * d;
    State x(2 * n, 0.0);
    for (int k = 0; k < d; ++k) x[2 * (static_cast<std::size_t>(k) * d + k)] = 1.0;

    auto rhs = [&](const State& s, State& ds, double t) {
        Eigen::Map<const Matrix> u(reinterpret_cast<const cplx*>(s.data()), d, d);
        Eigen::Map<Matrix> du(reinterpret_cast<cplx*>(ds.data()), d, d);
        du.noalias() = (-kI) * (h(t) * u);
    };

    std::vector<double> times;
    times.reserve(t_grid.size() + 1);
    const bool prepend = t_grid.front() > opt.t0;
    if (prepend) times.push_back(opt.t0);
    times.insert(times.end(), t_grid.begin(), t_grid.end());
    std::size_t slot = 0;
    auto observer = [&](const State& s, double) {
        if (prepend && slot == 0) {
            ++slot;
            return;
        }
        out[slot - (prepend ? 1 : 0)] = Eigen::Map<const Matrix>(reinterpret_cast<const cplx*>(s.data()), d, d);
        ++slot;
    };

    auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
    try {
        if (times.size() == 1) {
            observer(x, times.front());
        } else {
            const double span = times.back() - times.front();
            ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), std::min(1e-3, span / 10.0), observer,
                                 ode::max_step_checker(opt.max_steps));
        }
    } catch (const ode::step_adjustment_error& e) {
        throw StepUnderflow(std::string("integrate_propagator: ") + e.what());
    } catch (const ode::no_progress_error& e) {
        throw StepUnderflow(std::string("integrate_propagator: ") + e.what());
    } catch (const ode::odeint_error& e) {
        throw StepUnderflow(std::string("integrate_propagator: ") + e.what());
    }

    if (h.hermitian_expected()) {
        const double span = t_grid.back() - opt.t0;
        const double defect = unitarity_defect(out.back());
        if (defect > 1e3 * opt.rel_tol * std::max(1.0, span)) {
            throw ToleranceNotMet("integrate_propagator: unitarity defect " + std::to_string(defect));
        }
    }
    return out;
}

Decomposition gauss_decompose(const Matrix& u, Group group) {
    if (u.rows() != 2 || u.cols() != 2) throw DomainError("gauss_decompose: expects a 2x2 matrix");
    if (group != Group::SU2 && group != Group::SU11) throw DomainError("gauss_decompose: group must be SU2 or SU11");
    const double scale = std::max(1.0, u.cwiseAbs2().maxCoeff());
    if (std::abs(u.determinant() - 1.0) > 1e-8 * scale) throw DomainError("gauss_decompose: det U != 1");
    Decomposition r;
    r.lambda_plus = {u(1, 0), u(0, 0), std::nullopt};
    if (group == Group::SU11) r.lambda_plus.gap = 1.0;
    r.lambda_zero = -2.0 * std::log(u(0, 0));
    r.lambda_minus = (group == Group::SU2 ? 1.0 : -1.0) * u(0, 1) / u(0, 0);
    return r;
}

GaussCoefficients decompose_trajectory(const std::vector<Matrix>& u, const std::vector<double>& t, Group group) {
    GaussCoefficients out;
    out.group = group;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Decomposition d = gauss_decompose(u[i], group);
        GaussPoint p;
        p.t = t[i];
        p.lambda_plus = d.lambda_plus;
        p.lambda_zero = d.lambda_zero;
        p.lambda_minus = d.lambda_minus;
        out.push(p);
    }
    out.unwrap_lambda_zero();
    return out;
}

H1Point h1_decompose(const Matrix& m, double t) {
    if (m.rows() != 3 || m.cols() != 3) throw DomainError("h1_decompose: expects a 3x3 matrix");
    H1Point p;
    p.t = t;
    p.alpha = std::log(m(1, 1));
    p.beta = m(1, 2) / m(1, 1);
    p.gamma = m(0, 1);
    p.log_k = m(0, 2);
    return p;
}

double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double pseudo_unitarity_defect(const Matrix& u) {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return (u.adjoint() * s * u - s).cwiseAbs().maxCoeff();
}

}  // namespace krylov
