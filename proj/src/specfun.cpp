#include "krylov/specfun.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/float128.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "krylov/error.hpp"

namespace krylov {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kLogMax = 709.78;

// Lanczos approximation, g = 7, n = 9 (the coefficient set published by
// Godfrey and reproduced in Numerical Recipes-style references).
constexpr int kLanczosG = 7;
constexpr double kLanczosP[] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

bool is_integer(cplx z) { return z.imag() == 0.0 && z.real() == std::floor(z.real()); }

// log(sin(w)) without overflow for large |Im w|; branch is irrelevant to callers.
cplx log_sin(cplx w) {
    const cplx i(0.0, 1.0);
    if (w.imag() > 1.0) {
        return -i * w + std::log((std::exp(2.0 * i * w) - 1.0) / (2.0 * i));
    }
    if (w.imag() < -1.0) {
        return i * w + std::log((1.0 - std::exp(-2.0 * i * w)) / (2.0 * i));
    }
    return std::log(std::sin(w));
}

// Minimal complex arithmetic over an extended real type (binary128 or 100
// decimal digits). Series terms follow a rational recursion, so only the ring
// operations plus exp are needed.
template <class T>
struct Cx {
    T re, im;
};

template <class T>
Cx<T> operator+(const Cx<T>& a, const Cx<T>& b) {
    return {a.re + b.re, a.im + b.im};
}
template <class T>
Cx<T> operator-(const Cx<T>& a, const Cx<T>& b) {
    return {a.re - b.re, a.im - b.im};
}
template <class T>
Cx<T> operator*(const Cx<T>& a, const Cx<T>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class T>
Cx<T> operator/(const Cx<T>& a, const Cx<T>& b) {
    const T d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class T>
double mag(const Cx<T>& a) {
    return std::hypot(static_cast<double>(a.re), static_cast<double>(a.im));
}
template <class T>
Cx<T> cx_exp(const Cx<T>& z) {
    using std::cos;
    using std::exp;
    using std::sin;
    const T m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

template <class T>
struct SeriesSum {
    Cx<T> sum;
    double rel_err;  // rounding estimate relative to |sum|
};

// sum_k w^k / (k! (mu+1)_k) in T, stopping once a term drops below stop_tol
// relative to the sum.
template <class T>
SeriesSum<T> pochhammer_mp(const Cx<T>& mu, const Cx<T>& w, double stop_tol, const SeriesControl& ctl,
                           const std::string& name) {
    const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
    const double aw = mag(w);
    const cplx mu_d(static_cast<double>(mu.re), static_cast<double>(mu.im));
    Cx<T> term{T(1), T(0)};
    Cx<T> sum{T(1), T(0)};
    double max_term = 1.0;
    for (int k = 1; k <= ctl.max_terms; ++k) {
        const Cx<T> den{T(k) * (mu.re + k), T(k) * mu.im};
        term = term * w / den;
        sum = sum + term;
        const double at = mag(term);
        const double as = mag(sum);
        max_term = std::max(max_term, at);
        const double ratio = aw / (k * std::abs(mu_d + static_cast<double>(k)));
        if (ratio < 0.5 && at <= stop_tol * std::max(as, 1e-300)) {
            return {sum, eps * k * max_term / std::max(as, 1e-300)};
        }
    }
    throw NoConvergence(name + ": series did not converge within max_terms");
}

template <class T>
Cx<T> to_cx(cplx z) {
    return {T(z.real()), T(z.imag())};
}

// The plain series: binary128 first, 100 digits when the alternating terms
// cancel beyond binary128 (large |z| for J).
cplx pochhammer_series(cplx mu, cplx w, const SeriesControl& ctl, const char* name) {
    using boost::multiprecision::cpp_bin_float_100;
    using boost::multiprecision::float128;
    if (!(ctl.rel_tol > 0.0) || ctl.max_terms < 1) {
        throw DomainError(std::string(name) + ": invalid series control");
    }
    const double stop = 1e-4 * ctl.rel_tol;
    const SeriesSum<float128> q = pochhammer_mp(to_cx<float128>(mu), to_cx<float128>(w), stop, ctl, name);
    if (q.rel_err <= ctl.rel_tol) return {static_cast<double>(q.sum.re), static_cast<double>(q.sum.im)};
    const SeriesSum<cpp_bin_float_100> h =
        pochhammer_mp(to_cx<cpp_bin_float_100>(mu), to_cx<cpp_bin_float_100>(w), stop, ctl, name);
    if (h.rel_err > ctl.rel_tol) {
        throw NoConvergence(std::string(name) + ": cancellation exceeds working precision");
    }
    return {static_cast<double>(h.sum.re), static_cast<double>(h.sum.im)};
}

// The cross product and an absolute rounding estimate, formed entirely in T.
template <class T>
std::pair<cplx, double> cross_product(cplx mu_d, int n, double x, double y, const SeriesControl& ctl) {
    using std::cos;
    using std::cosh;
    using std::log;
    using std::sin;
    using std::sinh;
    const double eps = static_cast<double>(std::numeric_limits<T>::epsilon());
    const Cx<T> mu{T(mu_d.real()), T(mu_d.imag())};
    const Cx<T> neg{-mu.re, -mu.im};
    const Cx<T> nu{T(n) - mu.re, -mu.im};
    const Cx<T> nuneg{-nu.re, -nu.im};
    const T tx(x), ty(y);
    const Cx<T> wx{tx * tx / 4, T(0)}, wy{ty * ty / 4, T(0)};
    const double eps_t = eps;
    const SeriesSum<T> a1 = pochhammer_mp(mu, wx, eps_t, ctl, "bessel_i_cross");
    const SeriesSum<T> b1 = pochhammer_mp(nu, wy, eps_t, ctl, "bessel_i_cross");
    const SeriesSum<T> a2 = pochhammer_mp(neg, wx, eps_t, ctl, "bessel_i_cross");
    const SeriesSum<T> b2 = pochhammer_mp(nuneg, wy, eps_t, ctl, "bessel_i_cross");
    // (x/2)^mu (y/2)^(n-mu) = (y/2)^n (x/y)^mu for x, y of one sign.
    const T ell = log(tx / ty);
    Cx<T> t1 = cx_exp(Cx<T>{mu.re * ell, mu.im * ell}) * (a1.sum * b1.sum);
    Cx<T> t2 = cx_exp(Cx<T>{-mu.re * ell, -mu.im * ell}) * (a2.sum * b2.sum);
    if (n == 1) {
        // Gamma ratio between the two products is mu (1 - mu).
        const Cx<T> h{ty / 2, T(0)};
        t1 = t1 * h;
        t2 = t2 * (mu * Cx<T>{1 - mu.re, -mu.im}) / h;
    }
    // Common prefactor by reflection: 1/(Gamma(1+mu) Gamma(1-mu)) = sin(pi mu)/(pi mu),
    // and Gamma(2-mu) = (1-mu) Gamma(1-mu).
    const T pi = boost::math::constants::pi<T>();
    const Cx<T> sin_pm{sin(pi * mu.re) * cosh(pi * mu.im), cos(pi * mu.re) * sinh(pi * mu.im)};
    Cx<T> pref = sin_pm / Cx<T>{pi * mu.re, pi * mu.im};
    if (n == 1) pref = pref / Cx<T>{1 - mu.re, -mu.im};
    const Cx<T> value = pref * (t1 - t2);
    const double power_err = eps * (8.0 + std::abs(mu_d) * std::abs(static_cast<double>(ell)));
    const double err = mag(pref) * (mag(t1) * (a1.rel_err + b1.rel_err + power_err) +
                                    mag(t2) * (a2.rel_err + b2.rel_err + power_err));
    return {{static_cast<double>(value.re), static_cast<double>(value.im)}, err};
}

cplx scaled_series(cplx mu, cplx z, bool modified, const SeriesControl& ctl) {
    const char* name = modified ? "bessel_i" : "bessel_j";
    const cplx w = (modified ? 1.0 : -1.0) * z * z / 4.0;
    if (is_nonpositive_integer(mu) && mu.real() < 0.0) {
        // J_{-n} = (-1)^n J_n, I_{-n} = I_n
        const int n = static_cast<int>(-mu.real());
        const cplx half = z / 2.0;
        cplx p = std::pow(half, 2 * n);
        if (!modified && (n % 2)) p = -p;
        return p * rgamma(static_cast<double>(n) + 1.0) *
               pochhammer_series(static_cast<double>(n), w, ctl, name);
    }
    return rgamma(mu + 1.0) * pochhammer_series(mu, w, ctl, name);
}

cplx bessel_full(cplx mu, cplx z, bool modified, const SeriesControl& ctl) {
    const char* name = modified ? "bessel_i" : "bessel_j";
    if (z == cplx(0.0, 0.0)) {
        if (mu == cplx(0.0, 0.0)) return 1.0;
        if (mu.real() > 0.0 || (is_integer(mu) && mu.real() < 0.0)) return 0.0;
        throw DomainError(std::string(name) + ": z = 0 with Re(mu) <= 0");
    }
    const bool integral = is_integer(mu);
    if (!integral && z.imag() == 0.0 && z.real() < 0.0) {
        throw BranchError(std::string(name) + ": z on the negative real axis with non-integer order");
    }
    cplx power;
    if (integral) {
        power = std::pow(z / 2.0, static_cast<int>(mu.real()));
    } else {
        const cplx lp = mu * std::log(z / 2.0);
        if (lp.real() > kLogMax) throw OverflowError(std::string(name) + ": (z/2)^mu overflows");
        power = std::exp(lp);
    }
    const cplx value = power * scaled_series(mu, z, modified, ctl);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw OverflowError(std::string(name) + ": result not representable");
    }
    return value;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("complex_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        return std::log(kPi) - log_sin(kPi * z) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = kLanczosP[0];
    for (int i = 1; i < kLanczosG + 2; ++i) x += kLanczosP[i] / (z + static_cast<double>(i));
    const cplx t = z + static_cast<double>(kLanczosG) + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx complex_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw PoleError("complex_gamma: pole at non-positive integer");
    const cplx lg = log_gamma(z);
    if (lg.real() > kLogMax) throw OverflowError("complex_gamma: |Gamma(z)| exceeds double range");
    return std::exp(lg);
}

cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    const cplx lg = log_gamma(z);
    if (-lg.real() > kLogMax) throw OverflowError("rgamma: |1/Gamma(z)| exceeds double range");
    if (-lg.real() < -745.0) return 0.0;
    return std::exp(-lg);
}

cplx bessel_j_scaled(cplx mu, cplx z, const SeriesControl& ctl) { return scaled_series(mu, z, false, ctl); }

cplx bessel_i_scaled(cplx mu, cplx z, const SeriesControl& ctl) { return scaled_series(mu, z, true, ctl); }

cplx bessel_j(cplx mu, cplx z, const SeriesControl& ctl) { return bessel_full(mu, z, false, ctl); }

cplx bessel_i(cplx mu, cplx z, const SeriesControl& ctl) { return bessel_full(mu, z, true, ctl); }

BesselCross bessel_i_cross(cplx mu, int n, double x, double y, const SeriesControl& ctl, double abs_scale) {
    if (n != 0 && n != 1) throw DomainError("bessel_i_cross: n must be 0 or 1");
    if (!(x != 0.0 && y != 0.0 && (x > 0.0) == (y > 0.0)) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("bessel_i_cross: x and y must be finite, nonzero and of one sign");
    }
    if (!(ctl.rel_tol > 0.0) || ctl.max_terms < 1) throw DomainError("bessel_i_cross: invalid series control");
    const cplx nu = static_cast<double>(n) - mu;
    if (is_integer(mu) || is_integer(nu)) throw DomainError("bessel_i_cross: integer orders are not supported");
    constexpr double eps_d = std::numeric_limits<double>::epsilon();
    auto accept = [&](const std::pair<cplx, double>& r) {
        return r.second <= ctl.rel_tol * std::max(std::abs(r.first), abs_scale);
    };
    // binary128 covers moderate arguments; 100 digits absorb the e^{2 min(|x|,|y|)}
    // loss across the whole range of the ascending series.
    auto r = cross_product<boost::multiprecision::float128>(mu, n, x, y, ctl);
    if (!accept(r)) r = cross_product<boost::multiprecision::cpp_bin_float_100>(mu, n, x, y, ctl);
    if (!accept(r)) throw NoConvergence("bessel_i_cross: cancellation exceeds working precision");
    // Final rounding to double adds one ulp per component.
    const BesselCross out{r.first, r.second + 2.0 * eps_d * std::abs(r.first)};
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()) || !std::isfinite(out.error)) {
        throw OverflowError("bessel_i_cross: result not representable");
    }
    return out;
}

cplx phi1(cplx z) {
    if (std::abs(z) < 0.5) {
        cplx term = 1.0, sum = 1.0;
        for (int k = 2; k < 40; ++k) {
            term *= z / static_cast<double>(k);
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

}  // namespace krylov
