#pragma once

#include <complex>

namespace krylov {

using cplx = std::complex<double>;

struct SeriesControl {
    double rel_tol = 1e-12;
    int max_terms = 500;
};

// Principal-branch log Gamma (imaginary part is not continuous in z).
cplx log_gamma(cplx z);

cplx complex_gamma(cplx z);

// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
cplx rgamma(cplx z);

// J_mu(z) / (z/2)^mu and I_mu(z) / (z/2)^mu. Entire in z and free of
// branch cuts, so these are the building blocks of the damped-drive forms.
cplx bessel_j_scaled(cplx mu, cplx z, const SeriesControl& ctl = {});
cplx bessel_i_scaled(cplx mu, cplx z, const SeriesControl& ctl = {});

cplx bessel_j(cplx mu, cplx z, const SeriesControl& ctl = {});
cplx bessel_i(cplx mu, cplx z, const SeriesControl& ctl = {});

struct BesselCross {
    cplx value;
    double error;  // absolute rounding estimate
};

// I_mu(x) I_{n-mu}(y) - I_{-mu}(x) I_{mu-n}(y) for n in {0, 1}, x and y real,
// nonzero and of one sign, non-integer mu. Both products grow like
// e^{|x|+|y|} while the difference can be exponentially smaller, so the
// combination is formed in extended precision (binary128, then 100 digits)
// until error <= rel_tol * max(|value|, abs_scale); NoConvergence otherwise.
BesselCross bessel_i_cross(cplx mu, int n, double x, double y, const SeriesControl& ctl = {}, double abs_scale = 0.0);

// (e^z - 1) / z, accurate near z = 0.
cplx phi1(cplx z);

}  // namespace krylov
