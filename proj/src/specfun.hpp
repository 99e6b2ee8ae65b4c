#pragma once

// Special functions used by the secular-equation analysis and the lattice
// propagator: Gamma, Bessel J/Y of real order with complex argument, and the
// generalized hypergeometric series 2F3. Series-only implementations; every
// use in this codebase has |z| well inside the series regime.

#include <complex>

namespace specfun {

using cdouble = std::complex<double>;

// Truncation policy for all series in this module. Evaluation stops once
// |term|/|partial sum| < rel_tol, and fails if max_terms is exhausted first.
struct SeriesControl {
    int max_terms = 200;
    double rel_tol = 1e-14;
};

// Gamma(x), >= 12 significant digits on [-50, 170]. Reflection for x < 0.5.
// Throws std::domain_error at non-positive integers, std::overflow_error
// above the representable range.
double gamma_fn(double x);

// J_nu(z) by the ascending series, branch (z/2)^nu = exp(nu*Log(z/2)) with
// the principal logarithm. Requires |z| <= 30. Terms where 1/Gamma(nu+k+1)
// vanishes are skipped.
cdouble bessel_j(double nu, cdouble z, SeriesControl ctrl = {});

// Y_nu(z) = (cos(nu pi) J_nu(z) - J_{-nu}(z)) / sin(nu pi).
// nu must be at least 1e-6 away from any integer.
cdouble bessel_y(double nu, cdouble z, SeriesControl ctrl = {});

// Integer order via the series; J_{-n} = (-1)^n J_n.
cdouble bessel_j_int(int n, cdouble z, SeriesControl ctrl = {});

// 2F3(a1, a2; b1, b2, b3; z). Converges for all finite z.
cdouble hyp2f3(double a1, double a2, double b1, double b2, double b3,
               cdouble z, SeriesControl ctrl = {});

// Small-argument, large-order limits: J ~ (2 pi nu)^{-1/2} (e x / 2 nu)^nu,
// Y ~ (2/(pi nu))^{1/2} (e x / 2 nu)^{-nu}. Valid for x <= 0.2, nu >= 5.
double bessel_j_asymptotic(double nu, double x);
double bessel_y_asymptotic(double nu, double x);

} // namespace specfun
