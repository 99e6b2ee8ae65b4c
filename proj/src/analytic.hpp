#pragma once

// Closed-form spectrum of the five-site tilted ladder, the Bessel secular
// equation for arbitrary odd chain length, and the locator for the F/J ratio
// where two imaginary eigenvalues merge (the scale-free coalescence point).

#include <array>
#include <vector>

#include "types.hpp"

namespace analytic {

struct ClosedForm5 {
    double j = 0.0;
    double f = 0.0;
    cdouble delta{};                 // [(2J^2-3F^2)^2 - 12 J^2 F^2]^{1/2}
    std::array<cdouble, 5> values{}; // e_{++}, e_{+-}, 0, e_{-+}, e_{--}
    std::vector<cvec> vectors;       // filled on demand, same order
};

struct ScaleFreeScan {
    int n_sites = 0;
    std::vector<double> ratio_grid;
    std::vector<std::vector<double>> roots; // per ratio, ascending xi
    std::vector<double> merge_points;       // ratios with an adjacent gap < 1e-4
};

// Roots of the reduced pair (Bessel zero + 2F3 zero) solved simultaneously.
struct ReducedRoot {
    double ratio = 0.0;
    double xi = 0.0;
};

// e_{rho sigma} = rho * [(-5F^2 + 4J^2 + sigma*Delta)/2]^{1/2} with principal
// square roots, plus the persistent zero mode.
ClosedForm5 eigenvalues_n5(double j, double f);

// Component formulas (Theta_1..Theta_5), normalized to unit 2-norm. rho and
// sigma are +1/-1, or both 0 for the zero mode. Throws away from validity:
// |Delta| <= 1e-8 J^2 means the branch pair has collapsed and the formula
// degenerates.
cvec eigenvector_n5(double j, double f, int rho, int sigma);

// The two ratios where Delta vanishes: [(6 +- 3 sqrt 3)/2]^{-1/2}.
struct CriticalRatios {
    double c1 = 0.0;
    double c2 = 0.0;
};
CriticalRatios critical_ratios();

// J_{-xi}(2a) Y_{N+1-xi}(2a) - J_{N+1-xi}(2a) Y_{-xi}(2a), a = iJ/F.
// xi (and hence N+1-xi) must stay 1e-6 away from integers.
cdouble secular_f(double xi, double j, double f, int n);

// d(secular_f)/dxi, central difference h = 1e-5 with one Richardson step.
cdouble secular_df(double xi, double j, double f, int n);

// Pole-free equivalent sin(pi xi) * secular_f, expressed through J only:
// real along real xi for odd N once the constant phase is divided out.
// This is what the root scan brackets on.
double secular_rotated(double xi, double j, double f, int n);

// All real roots xi in (0, N+1), ascending. Grid step 0.02 per unit interval
// with brackets offset 1e-5 from the integers; for odd N the center root at
// (N+1)/2 is forced by the e -> -e symmetry and appended analytically (the
// sign scan cannot straddle an integer).
std::vector<double> scan_roots(double j, double f, int n,
                               double step = 0.02, double delta = 1e-5);

// scan_roots over a ratio grid at J = 1, flagging merge ratios.
ScaleFreeScan scale_free_scan(int n, const std::vector<double>& ratios);

// J_{-xi}(2a), the large-relative-tilt reduction of the secular equation.
// Requires |a| <= 0.7.
cdouble reduced_secular(double xi, double j, double f);

// 2F3(-xi, -xi+1/2; -xi+1, -xi+1, -2xi+1; -4a^2), the companion condition a
// double root must satisfy.
cdouble reduced_ep_condition(double xi, double j, double f);

// Largest F/J in [ratio_lo, ratio_hi] where two adjacent secular roots merge:
// descending coarse scan until a unit interval below the center holds two
// roots, then presence/absence bisection of that pair. The merge is confirmed
// by the root gap on the present side (< 1e-4) and by |secular_df| at the
// merge point falling below 1e-3 of its median scan magnitude. Throws if the
// window brackets no merge.
double find_scale_free_ep(int n, double ratio_lo = 1.3, double ratio_hi = 2.2);

// Simultaneous zero of reduced_secular and reduced_ep_condition at J = 1,
// tracking the 2F3 zero xi0(r) and bisecting the rotated Bessel value along
// it. Throws if no sign change falls inside the ratio window.
ReducedRoot find_scale_free_ep_reduced(double ratio_lo = 1.4,
                                       double ratio_hi = 1.8);

} // namespace analytic
