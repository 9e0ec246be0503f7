#include "krylov/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "krylov/error.hpp"

namespace krylov {

using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trace_csv(const ComplexityTrace& tr) {
    std::string out = "t,C";
    const bool dev = !tr.dev.empty();
    const bool prob = !tr.p.empty();
    if (dev) out += ",dev";
    if (prob) {
        for (int n = 0; n < tr.levels; ++n) out += ",p" + std::to_string(n);
    }
    out += '\n';
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        out += format_double(tr.t[i]);
        out += ',';
        out += format_double(tr.C[i]);
        if (dev) out += ',' + format_double(tr.dev[i]);
        if (prob) {
            for (int n = 0; n < tr.levels; ++n) {
                out += ',' + format_double(n < static_cast<int>(tr.p[i].size()) ? tr.p[i][n] : 0.0);
            }
        }
        out += '\n';
    }
    return out;
}

namespace {

json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

json numbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

json spec_json(const ModelSpec& spec) {
    json params = json::object();
    for (const auto& [k, v] : spec.params) params[k] = number(v);
    json j = {{"family", family_name(spec.family)}, {"params", params}};
    if (spec.truncation > 0) j["truncation"] = spec.truncation;
    return j;
}

}  // namespace

std::string trace_json(const ModelSpec& spec, const ComplexityTrace& tr) {
    json j = spec_json(spec);
    j["method"] = method_name(tr.method);
    j["t"] = numbers(tr.t);
    j["C"] = numbers(tr.C);
    if (!tr.dev.empty()) {
        j["dev"] = numbers(tr.dev);
        j["max_route_deviation"] = number(tr.max_route_deviation);
    }
    if (!tr.p.empty()) {
        json p = json::array();
        for (const auto& row : tr.p) p.push_back(numbers(row));
        j["p"] = p;
    }
    return j.dump(1) + "\n";
}

std::string sweep_csv(const SweepResult& r, bool with_regime) {
    std::string out = r.x.param + "," + r.y.param + ",value";
    if (with_regime) out += ",regime";
    out += ",error\n";
    for (const auto& c : r.cells) {
        out += format_double(c.x) + ',' + format_double(c.y) + ',' + format_double(c.value);
        if (with_regime) out += std::string(",") + (c.regime ? regime_name(*c.regime) : "");
        std::string err = c.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += ',' + err + '\n';
    }
    return out;
}

std::string sweep_json(const ModelSpec& base, const SweepResult& r, bool with_regime) {
    json j = spec_json(base);
    j["x"] = {{"param", r.x.param}, {"lo", r.x.lo}, {"hi", r.x.hi}, {"n", r.x.n}};
    j["y"] = {{"param", r.y.param}, {"lo", r.y.lo}, {"hi", r.y.hi}, {"n", r.y.n}};
    json cells = json::array();
    for (const auto& c : r.cells) {
        json cell = {{"x", c.x}, {"y", c.y}, {"value", number(c.value)}};
        if (with_regime && c.regime) cell["regime"] = regime_name(*c.regime);
        if (!c.error.empty()) cell["error"] = c.error;
        cells.push_back(cell);
    }
    j["cells"] = cells;
    return j.dump(1) + "\n";
}

std::string lanczos_json(const TridiagonalData& td, const std::string& method, bool with_basis) {
    json j = {{"method", method}, {"a", numbers(td.a)}, {"b", numbers(td.b)}};
    if (with_basis) {
        json basis = json::array();
        for (const auto& v : td.basis) {
            std::vector<double> re(v.size()), im(v.size());
            for (Eigen::Index k = 0; k < v.size(); ++k) {
                re[k] = v[k].real();
                im[k] = v[k].imag();
            }
            basis.push_back({{"re", numbers(re)}, {"im", numbers(im)}});
        }
        j["basis"] = basis;
    }
    return j.dump(1) + "\n";
}

namespace {

std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string svg_plot(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                     const std::vector<Series>& series) {
    constexpr double w = 720, h = 440, left = 80, right = 20, top = 40, bottom = 50;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    double x0 = x.empty() ? 0.0 : x.front(), x1 = x.empty() ? 1.0 : x.back();
    double y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (double v : s.y) {
            if (std::isfinite(v)) {
                y0 = std::min(y0, v);
                y1 = std::max(y1, v);
            }
        }
    }
    if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
    if (y1 - y0 < 1e-300) y1 = y0 + 1.0;
    if (x1 - x0 < 1e-300) x1 = x0 + 1.0;
    auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * (w - left - right); };
    auto py = [&](double v) { return h - bottom - (v - y0) / (y1 - y0) * (h - top - bottom); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << ' ' << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(title) << "</text>\n";
    os << "<path d=\"M" << left << ' ' << top << " V" << h - bottom << " H" << w - right
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
        os << "<text x=\"" << svg_num(px(xv)) << "\" y=\"" << h - bottom + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << svg_num(py(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(yv) << "</text>\n";
    }
    os << "<text x=\"" << w / 2 << "\" y=\"" << h - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(x_label) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % 5];
        os << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
        bool pen = false;
        for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
            const double v = series[s].y[i];
            if (!std::isfinite(v)) {
                pen = false;
                continue;
            }
            os << (pen ? " L" : " M") << svg_num(px(x[i])) << ' ' << svg_num(py(v));
            pen = true;
        }
        os << "\"/>\n";
        os << "<text x=\"" << w - right - 4 << "\" y=\"" << top + 14 + 16 * s << "\" text-anchor=\"end\" fill=\"" << color
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[s].name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_heatmap(const std::string& title, const SweepAxis& x, const SweepAxis& y,
                        const std::vector<double>& values) {
    constexpr double w = 560, h = 520, left = 80, top = 40, side = 420;
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values) {
        if (std::isfinite(v)) {
            const double s = std::log10(1.0 + std::max(v, 0.0));
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double cw = side / x.n, ch = side / y.n;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(title) << "</text>\n";
    for (int i = 0; i < x.n; ++i) {
        for (int j = 0; j < y.n; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * y.n + j;
            const double v = idx < values.size() ? values[idx] : NAN;
            std::string fill = "#999999";
            if (std::isfinite(v)) {
                const double s = (std::log10(1.0 + std::max(v, 0.0)) - lo) / (hi - lo);
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * s), 40, static_cast<int>(255 * (1 - s)));
                fill = buf;
            }
            os << "<rect x=\"" << svg_num(left + i * cw) << "\" y=\"" << svg_num(top + side - (j + 1) * ch) << "\" width=\""
               << svg_num(cw + 0.01) << "\" height=\"" << svg_num(ch + 0.01) << "\" fill=\"" << fill << "\"/>\n";
        }
    }
    os << "<text x=\"" << left + side / 2 << "\" y=\"" << top + side + 30
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(x.param) << " in [" << tick(x.lo)
       << ", " << tick(x.hi) << "]</text>\n";
    os << "<text x=\"20\" y=\"" << top + side / 2 << "\" font-family=\"sans-serif\" font-size=\"13\">" << escape(y.param)
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace krylov
