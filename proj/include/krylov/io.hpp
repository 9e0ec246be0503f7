#pragma once

#include <string>
#include <utility>
#include <vector>

#include "krylov/lanczos.hpp"
#include "krylov/models.hpp"

namespace krylov {

// %.17g, locale independent; non-finite values print as nan, inf, -inf.
std::string format_double(double x);

// Header t,C[,dev][,p0..pN]; one row per sample, '\n' line endings.
std::string trace_csv(const ComplexityTrace& tr);
std::string trace_json(const ModelSpec& spec, const ComplexityTrace& tr);

// Long format: <x>,<y>,value[,regime],error.
std::string sweep_csv(const SweepResult& r, bool with_regime);
std::string sweep_json(const ModelSpec& base, const SweepResult& r, bool with_regime);

std::string lanczos_json(const TridiagonalData& td, const std::string& method, bool with_basis);

struct Series {
    std::string name;
    std::vector<double> y;
};
// Minimal self-contained SVG line plot.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                     const std::vector<Series>& series);

// Cell colours scale with log10(1 + value); failed (nan) cells are grey.
std::string svg_heatmap(const std::string& title, const SweepAxis& x, const SweepAxis& y,
                        const std::vector<double>& values);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace krylov
