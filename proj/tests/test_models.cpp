#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "krylov/error.hpp"
#include "krylov/models.hpp"
#include "krylov/presets.hpp"
#include "test_util.hpp"

using namespace krylov;
using testutil::rel;

namespace {

ModelSpec make(Family f, std::map<std::string, double> p, int truncation = 0) {
    ModelSpec s;
    s.family = f;
    s.params = std::move(p);
    s.truncation = truncation;
    return s;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("complexity from Lambda_+") {
    CHECK(complexity_from_lambda(Group::SU2, 5.0, 0.0) == 0.0);
    CHECK(std::abs(complexity_from_lambda(Group::SU2, 5.0, 1.0) - 5.0) < 1e-15);
    CHECK(std::abs(complexity_from_lambda(Group::SU2, 5.0, INFINITY) - 10.0) < 1e-15);
    CHECK(std::abs(complexity_from_lambda(Group::H1, 0.0, 2.0) - 4.0) < 1e-15);
    CHECK(std::abs(complexity_from_lambda(Group::SU11, 0.5, 0.5) - 1.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS(complexity_from_lambda(Group::SU11, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(complexity_from_lambda(Group::SU3, 1.0, 0.5), DomainError);
    // A pole of Lambda_+ is representable as a pair.
    const ProjectivePair pole{1.0, 0.0, std::nullopt};
    CHECK(complexity_from_pair(Group::SU2, 2.5, pole) == 5.0);
}

TEST_CASE("complexity from a state") {
    Vector psi = Vector::Zero(3);
    psi << 1.0 / std::sqrt(2.0), 0.0, cplx(0.0, 1.0 / std::sqrt(2.0));
    CHECK(std::abs(complexity_from_state(psi) - 1.0) < 1e-15);
    CHECK(std::abs(complexity_from_state(psi, 2) - 2.0) < 1e-15);
    psi[0] = 1.0;
    CHECK_THROWS_AS(complexity_from_state(psi), NotNormalized);
}

TEST_CASE("names and parsing") {
    for (Family f : {Family::SU2Static, Family::SU2Driven, Family::SU2Damped, Family::SU2Kicked, Family::H1Driven,
                     Family::SU11TwoMode, Family::Quench, Family::SU3VConfig}) {
        CHECK(parse_family(family_name(f)) == f);
    }
    CHECK_THROWS_AS(parse_family("su4"), InvalidModel);
    CHECK(parse_method("both") == Method::Both);
    CHECK_THROWS_AS(parse_method("guess"), InvalidModel);
    CHECK(family_group(Family::Quench) == Group::SU11);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(make(Family::SU2Driven, {{"j", 5}, {"omega0", 4}, {"omega", 2}}).validate(), InvalidModel);
    CHECK_THROWS_AS(make(Family::SU2Driven, {{"j", 0.7}, {"omega0", 4}, {"omega", 2}, {"b0", 1}}).validate(),
                    InvalidWeight);
    CHECK_THROWS_AS(make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 2}, {"g", -1}}).validate(), InvalidModel);
    CHECK_THROWS_AS(make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 2}, {"g", 1}, {"h", 0.3}}).validate(),
                    InvalidWeight);
    CHECK_THROWS_AS(make(Family::SU2Damped, {{"j", 1}, {"omega0", 4}, {"omega", 2}, {"b0", 1}, {"eta", 0}}).validate(),
                    InvalidModel);
    CHECK_THROWS_AS(make(Family::SU2Kicked, {{"j", 1}, {"omega0", 1}, {"period", 0}, {"chi", 1}}).validate(),
                    InvalidModel);
    CHECK_THROWS_AS(make(Family::H1Driven, {{"omega0", 4}, {"omega", 2}, {"f0", NAN}}).validate(), InvalidModel);
    CHECK_THROWS_AS(make(Family::H1Driven, {{"omega0", 4}, {"omega", 2}, {"f0", 1}}, 8).validate(), InvalidModel);
    CHECK_NOTHROW(make(Family::Quench, {{"omega0", 1}, {"eta0", 0.5}, {"tau", 7.5}}).validate());
}

TEST_CASE("run_model on a resonant spin") {
    const ModelSpec s = make(Family::SU2Driven, {{"j", 5}, {"omega0", 4}, {"omega", 4}, {"b0", 2.1}});
    RunOptions opt;
    opt.method = Method::Both;
    opt.probabilities = true;
    const auto t = linear_grid(0.0, 3.0, 31);
    const ComplexityTrace tr = run_model(s, t, opt);
    CHECK(tr.levels == 11);
    CHECK(tr.max_route_deviation < 1e-8);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double expected = 10.0 * std::pow(std::sin(2.1 * t[i] / 2.0), 2);
        CHECK(std::abs(tr.C[i] - expected) < 1e-12);
        // Binomial level populations with mean C.
        double mean = 0.0, sum = 0.0;
        for (int n = 0; n < tr.levels; ++n) {
            mean += n * tr.p[i][n];
            sum += tr.p[i][n];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(std::abs(mean - tr.C[i]) < 1e-11);
    }
    CHECK(check_invariants(s, tr, 1e-8).empty());
}

TEST_CASE("SU2 level populations agree with the propagated state") {
    // Rotation of the lowest weight state is a spin coherent state, so the
    // binomial law holds exactly; compare with e^{-iHt} in the full representation.
    const double j = 3.0;
    const GeneratorSet g = build_su2(j);
    const Matrix h = assemble_constant(g, {{"J+", 0.6}, {"J-", 0.6}, {"J0", 0.8}})(0.0);
    Vector seed = Vector::Zero(g.dim);
    seed[0] = 1.0;
    const ModelSpec s = make(Family::SU2Static, {{"j", j}, {"alpha", 0.6}, {"gamma", 0.8}});
    RunOptions opt;
    opt.probabilities = true;
    const auto t = linear_grid(0.0, 5.0, 11);
    const ComplexityTrace tr = run_model(s, t, opt);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Vector psi = exponentiate(h, t[i], true) * seed;
        CHECK(std::abs(complexity_from_state(psi) - tr.C[i]) < 1e-10);
        for (int n = 0; n < g.dim; ++n) CHECK(std::abs(std::norm(psi[n]) - tr.p[i][n]) < 1e-10);
    }
}

TEST_CASE("photon and pumping populations against truncated Fock evolution") {
    // Coherent drive: H = w0 N + f0 (a + a+) at resonance in the rotating frame.
    const int n = 60;
    const GeneratorSet g = build_h1(n);
    const double f0 = 0.8;
    const Matrix h = assemble_constant(g, {{"a", f0}, {"a+", f0}})(0.0);
    Vector vac = Vector::Zero(n + 1);
    vac[0] = 1.0;
    const ModelSpec s = make(Family::H1Driven, {{"omega0", 4}, {"omega", 4}, {"f0", f0}});
    RunOptions opt;
    opt.probabilities = true;
    const auto t = linear_grid(0.0, 4.0, 9);
    const ComplexityTrace tr = run_model(s, t, opt);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Vector psi = exponentiate(h, t[i], true) * vac;
        CHECK(std::abs(complexity_from_state(psi) - tr.C[i]) < 1e-10);
        for (int k = 0; k < 10; ++k) CHECK(std::abs(std::norm(psi[k]) - tr.p[i][k]) < 1e-10);
    }
}

TEST_CASE("two-mode populations against the discrete series") {
    const int n = 200;
    const double gg = 0.7;
    const GeneratorSet g = build_su11(0.5, n);
    const Matrix h = assemble_constant(g, {{"K+", gg / 2.0}, {"K-", gg / 2.0}})(0.0);
    Vector vac = Vector::Zero(n + 1);
    vac[0] = 1.0;
    const ModelSpec s = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 4}, {"g", gg}});
    RunOptions opt;
    opt.probabilities = true;
    const auto t = linear_grid(0.0, 4.0, 9);
    const ComplexityTrace tr = run_model(s, t, opt);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Vector psi = exponentiate(h, t[i], true) * vac;
        CHECK(std::abs(complexity_from_state(psi) - tr.C[i]) < 1e-9);
        CHECK(std::abs(tr.C[i] - std::pow(std::sinh(gg * t[i] / 2.0), 2)) < 1e-12);
        for (int k = 0; k < 10; ++k) CHECK(std::abs(std::norm(psi[k]) - tr.p[i][k]) < 1e-10);
    }
}

TEST_CASE("su3 complexity") {
    CHECK(std::abs(su3_complexity_closed(4, 5, 2, 0.0)) < 1e-14);
    const Matrix h = su3_vconfig_hamiltonian(2.0, 3.0, 4.0);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    const ModelSpec s = make(Family::SU3VConfig, {{"omega", 2}, {"g1", 3}, {"g2", 4}});
    RunOptions opt;
    opt.method = Method::Both;
    opt.probabilities = true;
    const ComplexityTrace tr = run_model(s, linear_grid(0.0, 20.0, 401), opt);
    CHECK(tr.max_route_deviation < 1e-10);
    CHECK(tr.levels == 3);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        CHECK(std::abs(tr.p[i][1] + 2.0 * tr.p[i][2] - tr.C[i]) < 1e-10);
    }
    CHECK(check_invariants(s, tr, 1e-8).empty());
    RunOptions sq;
    sq.cost_exponent = 2;
    CHECK_THROWS_AS(run_model(s, {0.0, 1.0}, sq), InvalidModel);
    sq.method = Method::Numeric;
    CHECK_NOTHROW(run_model(s, {0.0, 1.0}, sq));
}

TEST_CASE("cost exponent 2 against the propagated state") {
    const ModelSpec s = make(Family::SU2Static, {{"j", 2}, {"alpha", 0.9}, {"gamma", 0.1}});
    RunOptions opt;
    opt.cost_exponent = 2;
    opt.method = Method::Both;
    const ComplexityTrace tr = run_model(s, linear_grid(0.0, 4.0, 41), opt);
    CHECK(tr.max_route_deviation < 1e-8);
    const GeneratorSet g = build_su2(2.0);
    const Matrix h = assemble_constant(g, {{"J+", 0.9}, {"J-", 0.9}, {"J0", 0.1}})(0.0);
    Vector seed = Vector::Zero(5);
    seed[0] = 1.0;
    for (std::size_t i = 0; i < tr.t.size(); i += 5) {
        CHECK(std::abs(complexity_from_state(exponentiate(h, tr.t[i], true) * seed, 2) - tr.C[i]) < 1e-10);
    }
}

TEST_CASE("run_model input errors") {
    const ModelSpec s = make(Family::H1Driven, {{"omega0", 4}, {"omega", 2}, {"f0", 3}});
    CHECK_THROWS_AS(run_model(s, {}), InvalidModel);
    CHECK_THROWS_AS(run_model(s, {0.0, 1.0, 1.0}), InvalidModel);
    RunOptions opt;
    opt.cost_exponent = 3;
    CHECK_THROWS_AS(run_model(s, {0.0, 1.0}, opt), InvalidModel);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), InvalidModel);
}

TEST_CASE("truncation policy") {
    CHECK(auto_truncation(Family::SU2Driven, 5.0, 3.0) == 0);
    CHECK(auto_truncation(Family::H1Driven, 0.0, 0.5) == 32);
    const int n = auto_truncation(Family::H1Driven, 0.0, 100.0);
    CHECK(tail_mass(Family::H1Driven, 0.0, 100.0, n) < 1e-12);
    CHECK(tail_mass(Family::H1Driven, 0.0, 100.0, n - 1) >= 1e-12);
    // Poisson tail oracle by direct summation.
    double head = 0.0, term = std::exp(-3.0);
    for (int k = 0; k <= 20; ++k) {
        head += term;
        term *= 3.0 / (k + 1);
    }
    CHECK(std::abs(tail_mass(Family::H1Driven, 0.0, 3.0, 20) - (1.0 - head)) < 1e-14);
    // Negative binomial with r = 1 is geometric: tail x^{N+1}, x = C/(1+C).
    const double c = 4.0, x = c / (1.0 + c);
    CHECK(rel(tail_mass(Family::SU11TwoMode, 0.5, c, 40), std::pow(x, 41)) < 1e-10);

    const ModelSpec big = make(Family::H1Driven, {{"omega0", 4}, {"omega", 4}, {"f0", 3}}, 16);
    CHECK_THROWS_AS(run_model(big, linear_grid(0.0, 5.0, 11)), TruncationOverflow);
    const ModelSpec huge = make(Family::H1Driven, {{"omega0", 4}, {"omega", 4}, {"f0", 3}});
    RunOptions opt;
    opt.probabilities = true;
    CHECK_THROWS_AS(run_model(huge, linear_grid(0.0, 20.0, 11), opt), TruncationOverflow);
    const ComplexityTrace ok = run_model(huge, linear_grid(0.0, 2.0, 11), opt);
    CHECK(ok.levels == auto_truncation(Family::H1Driven, 0.0, 36.0) + 1);
    CHECK(check_invariants(huge, ok, 1e-8).empty());
}

TEST_CASE("complexity guard on exponential pumping") {
    const ModelSpec s = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 2}, {"g", 2.1}});
    CHECK_NOTHROW(run_model(s, linear_grid(0.0, 20.0, 201)));
    CHECK_THROWS_AS(run_model(s, linear_grid(0.0, 200.0, 201)), ComplexityGuard);
    const ModelSpec ramp = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 4}, {"g", 2.1}, {"eta", -0.1}});
    CHECK_THROWS_AS(run_model(ramp, linear_grid(0.0, 20.0, 201)), ComplexityGuard);
    const ModelSpec damped = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 4}, {"g", 2.1}, {"eta", 0.1}});
    CHECK_NOTHROW(run_model(damped, linear_grid(0.0, 50.0, 201)));
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(1.0, 2.0) == Regime::Oscillatory);
    CHECK(classify_regime(1.0, -2.0) == Regime::Oscillatory);
    CHECK(classify_regime(0.5, 0.5) == Regime::Quadratic);
    CHECK(classify_regime(2.1, 2.0) == Regime::Exponential);
    CHECK(classify_regime(0.0, 0.0) == Regime::Quadratic);
    CHECK_THROWS_AS(classify_regime(-1.0, 0.0), DomainError);
}

TEST_CASE("invariant checks flag violations") {
    const ModelSpec s = make(Family::SU2Driven, {{"j", 1}, {"omega0", 4}, {"omega", 4}, {"b0", 1}});
    ComplexityTrace tr;
    tr.t = {0.0, 1.0};
    tr.C = {0.0, 2.5};
    CHECK(check_invariants(s, tr, 1e-8).size() == 1);
    tr.C = {-1e-3, 1.0};
    CHECK(check_invariants(s, tr, 1e-8).size() == 1);
    tr.C = {0.0, 1.0};
    tr.p = {{1.0, 0.0, 0.0}, {0.5, 0.4, 0.0}};
    CHECK(check_invariants(s, tr, 1e-8).size() == 1);
}

TEST_CASE("sweep") {
    const ModelSpec base = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 2}, {"g", 1}});
    const auto t = linear_grid(0.0, 5.0, 51);
    SUBCASE("single cell equals a direct run") {
        const SweepResult r = sweep(base, {"g", 1.3, 1.3, 1}, {"delta", 2.0, 2.0, 1}, t, SweepStat::CMax);
        REQUIRE(r.cells.size() == 1);
        const ComplexityTrace tr = run_model(with_param(base, "g", 1.3), t);
        CHECK(r.cells[0].value == max_of(tr.C));
        CHECK(r.cells[0].regime == Regime::Oscillatory);
        const SweepResult f = sweep(base, {"g", 1.3, 1.3, 1}, {"delta", 2.0, 2.0, 1}, t, SweepStat::CFinal);
        CHECK(f.cells[0].value == tr.C.back());
    }
    SUBCASE("the diagonal g = |delta| is quadratic") {
        const SweepResult r = sweep(base, {"g", 0.0, 3.0, 61}, {"delta", 0.0, 3.0, 61}, t, SweepStat::CFinal);
        REQUIRE(r.cells.size() == 61u * 61u);
        for (int i = 1; i < 61; ++i) {
            const SweepCell& c = r.cells[static_cast<std::size_t>(i) * 61 + i];
            CHECK(c.regime == Regime::Quadratic);
            CHECK(rel(c.value, c.x * c.x * 25.0 / 4.0) < 1e-10);
        }
        for (const auto& c : r.cells) CHECK(c.error.empty());
    }
    SUBCASE("failing cells carry the error") {
        ModelSpec tight = base;
        tight.truncation = 16;
        const SweepResult r = sweep(tight, {"g", 0.1, 3.0, 2}, {"delta", 0.0, 0.0, 1}, t, SweepStat::CMax);
        CHECK(r.cells[0].error.empty());
        CHECK(std::isnan(r.cells[1].value));
        CHECK(r.cells[1].error.rfind("TruncationOverflow", 0) == 0);
    }
    CHECK_THROWS_AS(sweep(base, {"g", 0, 1, 0}, {"delta", 0, 1, 1}, t, SweepStat::CMax), InvalidModel);
    CHECK_THROWS_AS(sweep(base, {"g", 0, 1, 2000}, {"delta", 0, 1, 1000}, t, SweepStat::CMax), InvalidModel);
}

TEST_CASE("with_param") {
    const ModelSpec base = make(Family::SU11TwoMode, {{"omega0", 4}, {"omega", 2}, {"g", 1}});
    CHECK(with_param(base, "delta", 0.5).get("omega") == 3.5);
    CHECK(with_param(base, "truncation", 40.0).truncation == 40);
    CHECK(with_param(base, "g", 2.0).get("g") == 2.0);
}

TEST_CASE("every figure preset passes its embedded checks") {
    for (const auto& p : figure_presets()) {
        INFO(p.id);
        const PresetOutcome o = run_preset(p, 1e-8);
        for (const auto& c : o.checks) {
            INFO(c.name << ": " << c.detail);
            CHECK(c.passed);
        }
    }
    CHECK_THROWS_AS(find_preset("fig99"), UnknownLabel);
    CHECK(figure_presets().size() == 25);
}

TEST_CASE("quadratic fit and peak refinement") {
    std::vector<double> t, c;
    for (int k = 0; k <= 50; ++k) {
        t.push_back(0.1 * k);
        c.push_back(1.0 - 2.0 * t.back() + 3.0 * t.back() * t.back());
    }
    const QuadraticFit q = fit_quadratic(t, c, 0.0, 5.0);
    CHECK(std::abs(q.c0 - 1.0) < 1e-10);
    CHECK(std::abs(q.c1 + 2.0) < 1e-10);
    CHECK(std::abs(q.c2 - 3.0) < 1e-10);
    CHECK(q.r_squared > 1.0 - 1e-12);

    const ModelSpec s = make(Family::SU2Driven, {{"j", 5}, {"omega0", 4}, {"omega", 2}, {"b0", 2.1}});
    const auto grid = linear_grid(0.0, 20.0, 201);
    const auto cc = closed_form_complexity(s, grid);
    const auto [tp, cp] = refine_peak(s, grid, cc);
    const double nu = std::sqrt(2.1 * 2.1 + 4.0) / 2.0;
    CHECK(std::abs(cp - 10.0 * 2.1 * 2.1 / (2.1 * 2.1 + 4.0)) < 1e-9);
    CHECK(std::abs(std::fmod(tp, std::numbers::pi / nu) - std::numbers::pi / (2 * nu)) < 1e-6);
}
