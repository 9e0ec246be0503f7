#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "krylov/evolution.hpp"

namespace krylov {

enum class Family { SU2Static, SU2Driven, SU2Damped, SU2Kicked, H1Driven, SU11TwoMode, Quench, SU3VConfig };

const char* family_name(Family f);  // CLI spelling, e.g. "su2-driven"
Family parse_family(const std::string& s);
Group family_group(Family f);

// Parameter names: j alpha gamma delta omega0 omega b0 eta f0 g h eta0 tau
// g1 g2 period chi k_max. truncation applies to H1/SU11/quench only
// (0 selects it automatically from the predicted tail mass).
struct ModelSpec {
    Family family = Family::SU2Driven;
    std::map<std::string, double> params;
    int truncation = 0;

    double get(const std::string& name) const;
    double get(const std::string& name, double fallback) const;
    void validate() const;
    // Cost weight of the top level (2j for SU2, 2h-scaled for SU11 uses h).
    double weight() const;
};

enum class Method { ClosedForm, Numeric, Both };
const char* method_name(Method m);
Method parse_method(const std::string& s);

struct RunOptions {
    Method method = Method::ClosedForm;
    double tol = 1e-8;
    bool probabilities = false;
    int cost_exponent = 1;
    Exec exec = Exec::Parallel;
    double integrator_tol = 1e-12;
};

struct ComplexityTrace {
    Family family = Family::SU2Driven;
    std::vector<double> t;
    std::vector<double> C;
    std::vector<double> dev;             // per-point route deviation (method = Both)
    std::vector<std::vector<double>> p;  // p[i][n], present when requested
    Method method = Method::ClosedForm;
    double max_route_deviation = 0.0;
    int levels = 0;  // number of probability columns
};

double complexity_from_lambda(Group group, double weight, double abs_lambda_plus);
double complexity_from_pair(Group group, double weight, const ProjectivePair& pair);
double complexity_from_state(const Vector& psi, int cost_exponent = 1);

ComplexityTrace run_model(const ModelSpec& spec, const std::vector<double>& t_grid, const RunOptions& opt = {});

// Per-point closed-form and numeric complexities (no probabilities).
std::vector<double> closed_form_complexity(const ModelSpec& spec, const std::vector<double>& t_grid,
                                           Exec exec = Exec::Parallel, int cost_exponent = 1);
std::vector<double> numeric_complexity(const ModelSpec& spec, const std::vector<double>& t_grid,
                                       double integrator_tol = 1e-12, Exec exec = Exec::Parallel,
                                       int cost_exponent = 1);

// Invariant violations of a trace, empty when all hold.
std::vector<std::string> check_invariants(const ModelSpec& spec, const ComplexityTrace& trace, double tol);

double su3_complexity_closed(double omega, double g1, double g2, double t);
Matrix su3_vconfig_hamiltonian(double omega, double g1, double g2);

enum class Regime { Oscillatory, Quadratic, Exponential };
const char* regime_name(Regime r);
Regime classify_regime(double g, double delta);

struct SweepAxis {
    std::string param;
    double lo = 0.0, hi = 0.0;
    int n = 1;
    double value(int i) const;
};

enum class SweepStat { CMax, CFinal };

struct SweepCell {
    double x = 0.0, y = 0.0;
    double value = 0.0;
    std::optional<Regime> regime;
    std::string error;  // empty on success
};

struct SweepResult {
    SweepAxis x, y;
    std::vector<SweepCell> cells;  // row-major, x outer
};

// "delta" on SU11 families means omega0 - omega and moves omega.
ModelSpec with_param(const ModelSpec& base, const std::string& name, double value);
SweepResult sweep(const ModelSpec& base, const SweepAxis& x, const SweepAxis& y, const std::vector<double>& t_grid,
                  SweepStat stat, const RunOptions& opt = {});

std::vector<double> linear_grid(double t0, double t1, int samples);

// Smallest truncation with predicted tail below 1e-12 for a given mean
// complexity, clamped to [32, 512].
int auto_truncation(Family family, double weight, double c_max);
double tail_mass(Family family, double weight, double c, int n_max);

}  // namespace krylov
