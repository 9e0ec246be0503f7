#include "krylov/presets.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "krylov/error.hpp"

namespace krylov {

namespace {

FigurePreset make(std::string id, std::string caption, Family f, std::map<std::string, double> params, double t_end,
                  int samples = 1001) {
    FigurePreset p;
    p.id = std::move(id);
    p.caption = std::move(caption);
    p.spec.family = f;
    p.spec.params = std::move(params);
    p.t_end = t_end;
    p.samples = samples;
    return p;
}

// SU(1,1) presets are quoted through the detuning delta = omega0 - omega.
std::map<std::string, double> su11(double g, double delta, double eta) {
    return {{"g", g}, {"omega0", 4.0}, {"omega", 4.0 - delta}, {"eta", eta}};
}

std::vector<FigurePreset> build() {
    std::vector<FigurePreset> v;
    const auto su2d = Family::SU2Driven;
    const auto su2m = Family::SU2Damped;
    v.push_back(make("fig1a", "driven two-level atoms, j=5, B0=2.1, omega=2, omega0=4", su2d,
                     {{"j", 5}, {"b0", 2.1}, {"omega", 2}, {"omega0", 4}}, 20.0));
    v.push_back(make("fig1b", "driven two-level atoms at resonance, j=5, B0=2.1, omega=omega0=4", su2d,
                     {{"j", 5}, {"b0", 2.1}, {"omega", 4}, {"omega0", 4}}, 20.0));
    v.push_back(make("fig2a", "damped drive, j=5, B0=5, eta=0.09, omega=2, omega0=4", su2m,
                     {{"j", 5}, {"b0", 5}, {"eta", 0.09}, {"omega", 2}, {"omega0", 4}}, 60.0));
    v.push_back(make("fig2b", "damped drive at resonance, j=5, B0=5, eta=0.09, omega=omega0=4", su2m,
                     {{"j", 5}, {"b0", 5}, {"eta", 0.09}, {"omega", 4}, {"omega0", 4}}, 60.0));
    v.push_back(make("fig3a", "ramping drive, j=5, B0=2.1, eta=-0.1, omega=2, omega0=4", su2m,
                     {{"j", 5}, {"b0", 2.1}, {"eta", -0.1}, {"omega", 2}, {"omega0", 4}}, 15.0));
    v.push_back(make("fig3b", "ramping drive at resonance, j=5, B0=2.1, eta=-0.1, omega=omega0=4", su2m,
                     {{"j", 5}, {"b0", 2.1}, {"eta", -0.1}, {"omega", 4}, {"omega0", 4}}, 15.0));
    v.push_back(make("fig4a", "damped photon mode, f0=3, eta=0.1, omega=2, omega0=4", Family::H1Driven,
                     {{"f0", 3}, {"eta", 0.1}, {"omega", 2}, {"omega0", 4}}, 50.0));
    v.push_back(make("fig4b", "damped photon mode at resonance, f0=3, eta=0.1, omega=omega0=4", Family::H1Driven,
                     {{"f0", 3}, {"eta", 0.1}, {"omega", 4}, {"omega0", 4}}, 50.0));
    v.push_back(make("fig5a", "ramping photon mode, f0=3, eta=-0.1, omega=2, omega0=4", Family::H1Driven,
                     {{"f0", 3}, {"eta", -0.1}, {"omega", 2}, {"omega0", 4}}, 20.0));
    v.push_back(make("fig5b", "ramping photon mode at resonance, f0=3, eta=-0.1, omega=omega0=2", Family::H1Driven,
                     {{"f0", 3}, {"eta", -0.1}, {"omega", 2}, {"omega0", 2}}, 20.0));
    const auto tm = Family::SU11TwoMode;
    v.push_back(make("fig6a", "two-photon pumping, oscillatory: g=1, omega0-omega=2", tm, su11(1.0, 2.0, 0.0), 20.0));
    v.push_back(make("fig6b", "two-photon pumping, transition: g=omega0-omega=0.5", tm, su11(0.5, 0.5, 0.0), 20.0));
    v.push_back(make("fig6c", "two-photon pumping, exponential: g=2.1, omega0-omega=2", tm, su11(2.1, 2.0, 0.0), 20.0));
    v.push_back(make("fig7a", "damped pumping, eta=0.1, g=2, omega0-omega=2.1", tm, su11(2.0, 2.1, 0.1), 50.0));
    v.push_back(make("fig7b", "damped pumping, eta=0.1, g=omega0-omega=2.1", tm, su11(2.1, 2.1, 0.1), 50.0));
    v.push_back(make("fig7c", "damped pumping, eta=0.1, g=2.1, omega0-omega=2", tm, su11(2.1, 2.0, 0.1), 50.0));
    v.push_back(make("fig8", "damped pumping at resonance, eta=0.1, g=2.1, omega=omega0=4", tm, su11(2.1, 0.0, 0.1), 50.0));
    v.push_back(make("fig9a", "ramping pumping, eta=-0.1, g=2, omega0-omega=2.1", tm, su11(2.0, 2.1, -0.1), 6.0));
    v.push_back(make("fig9b", "ramping pumping, eta=-0.1, g=omega0-omega=2.1", tm, su11(2.1, 2.1, -0.1), 6.0));
    v.push_back(make("fig9c", "ramping pumping, eta=-0.1, g=2.1, omega0-omega=2", tm, su11(2.1, 2.0, -0.1), 6.0));
    v.push_back(make("fig9d", "ramping pumping at resonance, eta=-0.1, g=2.1, omega=omega0=4", tm, su11(2.1, 0.0, -0.1), 6.0));
    v.push_back(make("figquench", "quenched oscillator, omega0=1, eta0=0.5, tau=7.5", Family::Quench,
                     {{"omega0", 1}, {"eta0", 0.5}, {"tau", 7.5}}, 15.0, 1201));
    v.push_back(make("figsu3a", "three-level V atom, omega=4, g1=5, g2=2", Family::SU3VConfig,
                     {{"omega", 4}, {"g1", 5}, {"g2", 2}}, 20.0, 2001));
    v.push_back(make("figsu3b", "three-level V atom, omega=4, g1=2, g2=5", Family::SU3VConfig,
                     {{"omega", 4}, {"g1", 2}, {"g2", 5}}, 20.0, 2001));
    v.push_back(make("figsu3c", "three-level V atom, omega=2, g1=3, g2=4", Family::SU3VConfig,
                     {{"omega", 2}, {"g1", 3}, {"g2", 4}}, 20.0, 2001));
    return v;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

PresetCheck bound_check(const std::string& name, double value, double limit) {
    return {name, value <= limit, "observed " + fmt(value) + ", limit " + fmt(limit)};
}

// Sup of |C - f(t)| / max(1, |f(t)|) over the trace.
template <class F>
double sup_relative(const ComplexityTrace& tr, F&& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        const double ref = f(tr.t[i]);
        worst = std::max(worst, std::abs(tr.C[i] - ref) / std::max(1.0, std::abs(ref)));
    }
    return worst;
}

void family_checks(const FigurePreset& p, const ComplexityTrace& tr, std::vector<PresetCheck>& out) {
    const ModelSpec& s = p.spec;
    const std::string& id = p.id;
    if (id == "fig1a" || id == "fig1b") {
        const double j = s.get("j"), b0 = s.get("b0"), d = s.get("omega0") - s.get("omega");
        const double expected = 2.0 * j * b0 * b0 / (b0 * b0 + d * d);
        const auto [t1, c1] = refine_peak(s, tr.t, tr.C);
        out.push_back(bound_check("peak complexity", std::abs(c1 - expected), 1e-6));
        const double nu = std::sqrt(b0 * b0 + d * d) / 2.0;
        const double period = std::numbers::pi / nu;
        const auto [t2, c2] = refine_peak(s, tr.t, tr.C, t1 + 0.5 * period, t1 + 1.5 * period);
        out.push_back(bound_check("oscillation period", std::abs((t2 - t1) - period), 1e-6));
    } else if (id == "fig2b") {
        const double j = s.get("j"), b0 = s.get("b0"), eta = s.get("eta");
        out.push_back(bound_check("resonant damped closed form", sup_relative(tr, [&](double t) {
                                      const double x = std::sin(b0 * -std::expm1(-eta * t) / (2.0 * eta));
                                      return 2.0 * j * x * x;
                                  }),
                                  1e-8));
    } else if (id == "fig4a") {
        const double f0 = s.get("f0"), eta = s.get("eta"), d = s.get("omega") - s.get("omega0");
        out.push_back(bound_check("damped photon closed form", sup_relative(tr, [&](double t) {
                                      return f0 * f0 / (eta * eta + d * d) *
                                             (1.0 + std::exp(-2.0 * eta * t) - 2.0 * std::exp(-eta * t) * std::cos(d * t));
                                  }),
                                  1e-8));
    } else if (id == "fig4b" || id == "fig5b") {
        const double f0 = s.get("f0"), eta = s.get("eta");
        out.push_back(bound_check("resonant photon closed form", sup_relative(tr, [&](double t) {
                                      const double x = f0 * -std::expm1(-eta * t) / eta;
                                      return x * x;
                                  }),
                                  1e-8));
    } else if (id == "fig6a") {
        const double g = s.get("g"), d = s.get("omega0") - s.get("omega");
        const auto [tp, cp] = refine_peak(s, tr.t, tr.C);
        out.push_back(bound_check("oscillatory peak", std::abs(cp - g * g / (d * d - g * g)), 1e-8));
    } else if (id == "fig6b") {
        const double g = s.get("g");
        const QuadraticFit fit = fit_quadratic(tr.t, tr.C, 0.0, 5.0);
        out.push_back({"quadratic fit R^2", fit.r_squared >= 1.0 - 1e-6, "R^2 = " + fmt(fit.r_squared)});
        const double expected = g * g / 4.0;
        out.push_back(bound_check("quadratic coefficient", std::abs(fit.c2 - expected) / expected, 1e-6));
    } else if (id == "fig8") {
        const double g = s.get("g"), eta = s.get("eta");
        out.push_back(bound_check("resonant damped pumping closed form", sup_relative(tr, [&](double t) {
                                      const double x = std::sinh(g * -std::expm1(-eta * t) / (2.0 * eta));
                                      return x * x;
                                  }),
                                  1e-8));
    } else if (id == "figquench") {
        const double tau = s.get("tau");
        const double c_tau = closed_form_complexity(s, {tau}, Exec::Serial).front();
        double drift = 0.0;
        for (std::size_t i = 0; i < tr.t.size(); ++i) {
            if (tr.t[i] > tau) drift = std::max(drift, std::abs(tr.C[i] - c_tau));
        }
        out.push_back(bound_check("frozen after tau", drift, 1e-10));
        const double w0 = s.get("omega0"), e0 = s.get("eta0");
        const double w1 = std::sqrt(w0 * w0 + 2.0 * w0 * e0);
        out.push_back(bound_check("squeezing closed form", sup_relative(tr, [&](double t) {
                                      const double x = std::sin(w1 * std::min(t, tau));
                                      return e0 * e0 * x * x / (2.0 * w1 * w1);
                                  }),
                                  1e-9));
    } else if (s.family == Family::SU3VConfig) {
        const auto numeric = numeric_complexity(s, tr.t, 1e-12, Exec::Serial);
        double worst = 0.0;
        for (std::size_t i = 0; i < numeric.size(); ++i) worst = std::max(worst, std::abs(numeric[i] - tr.C[i]));
        out.push_back(bound_check("spectral oracle", worst, 1e-9));
        out.push_back(bound_check("C(0)", std::abs(tr.C.front()), 1e-12));
    }
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = build();
    return presets;
}

const FigurePreset& find_preset(const std::string& id) {
    for (const auto& p : figure_presets()) {
        if (p.id == id) return p;
    }
    throw UnknownLabel("unknown figure id '" + id + "'");
}

bool PresetOutcome::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PresetCheck& c) { return c.passed; });
}

PresetOutcome run_preset(const FigurePreset& preset, double tol, Exec exec) {
    RunOptions opt;
    opt.method = Method::Both;
    opt.tol = tol;
    opt.exec = exec;
    PresetOutcome out;
    out.trace = run_model(preset.spec, linear_grid(preset.t_start, preset.t_end, preset.samples), opt);
    out.checks.push_back(bound_check("route agreement", out.trace.max_route_deviation, kRouteTolerance));
    const auto bad = check_invariants(preset.spec, out.trace, tol);
    std::string detail;
    for (const auto& b : bad) detail += (detail.empty() ? "" : "; ") + b;
    out.checks.push_back({"invariants", bad.empty(), bad.empty() ? "all hold" : detail});
    family_checks(preset, out.trace, out.checks);
    return out;
}

std::pair<double, double> refine_peak(const ModelSpec& spec, const std::vector<double>& t, const std::vector<double>& c,
                                      double window_lo, double window_hi) {
    if (t.size() < 3 || t.size() != c.size()) throw InvalidModel("refine_peak needs at least three samples");
    std::size_t best = t.size();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (window_hi > window_lo && (t[i] < window_lo || t[i] > window_hi)) continue;
        if (best == t.size() || c[i] > c[best]) best = i;
    }
    if (best == t.size()) throw InvalidModel("refine_peak: empty search window");
    const double lo = t[best == 0 ? 0 : best - 1];
    const double hi = t[std::min(best + 1, t.size() - 1)];
    auto neg = [&](double x) { return -closed_form_complexity(spec, {x}, Exec::Serial).front(); };
    const auto r = boost::math::tools::brent_find_minima(neg, lo, hi, std::numeric_limits<double>::digits);
    return {r.first, -r.second};
}

QuadraticFit fit_quadratic(const std::vector<double>& t, const std::vector<double>& c, double t_lo, double t_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_lo && t[i] <= t_hi) idx.push_back(i);
    }
    if (idx.size() < 3) throw InvalidModel("fit_quadratic needs at least three samples in the window");
    Eigen::MatrixXd a(idx.size(), 3);
    Eigen::VectorXd y(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double x = t[idx[r]];
        a(r, 0) = 1.0;
        a(r, 1) = x;
        a(r, 2) = x * x;
        y[r] = c[idx[r]];
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd resid = y - a * coef;
    const double ss_res = resid.squaredNorm();
    const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
    return {coef[0], coef[1], coef[2], ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace krylov
