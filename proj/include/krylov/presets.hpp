#pragma once

#include <string>
#include <vector>

#include "krylov/models.hpp"

namespace krylov {

struct FigurePreset {
    std::string id;
    std::string caption;
    ModelSpec spec;
    double t_start = 0.0;
    double t_end = 1.0;
    int samples = 1001;
};

struct PresetCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

const std::vector<FigurePreset>& figure_presets();
// Throws UnknownLabel for an unknown id.
const FigurePreset& find_preset(const std::string& id);

// Route agreement is enforced on every preset at this level.
constexpr double kRouteTolerance = 1e-6;

// Evaluates the preset with both routes and the acceptance checks it embeds.
// The invariant tolerance is the CLI --tol value.
struct PresetOutcome {
    ComplexityTrace trace;
    std::vector<PresetCheck> checks;
    bool passed() const;
};
PresetOutcome run_preset(const FigurePreset& preset, double tol, Exec exec = Exec::Parallel);

// Peak of the closed-form trace refined by Brent iteration around the grid
// maximum; returns (t, C). If window_hi > window_lo only that range is searched.
std::pair<double, double> refine_peak(const ModelSpec& spec, const std::vector<double>& t, const std::vector<double>& c,
                                      double window_lo = 0.0, double window_hi = 0.0);

struct QuadraticFit {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double r_squared = 0.0;
};
QuadraticFit fit_quadratic(const std::vector<double>& t, const std::vector<double>& c, double t_lo, double t_hi);

}  // namespace krylov
