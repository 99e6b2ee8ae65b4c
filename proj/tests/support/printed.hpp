#pragma once
// Reference constants, transforms, and closed-form Dirac-norm curves used as
// frozen ground truth by the dynamics and acceptance tests.
#include <cmath>

#include "../../src/types.hpp"

namespace printed {

inline cdouble C(double re, double im = 0.0) { return {re, im}; }

// Positive tilt where the seven-site ladder collapses to a third-order
// defect: F* = sqrt(u) with u the real root of 18u^3 - 12u^2 + 5u - 2.
inline double ep3_tilt() {
    double u = 0.5354;
    for (int i = 0; i < 80; ++i) {
        const double p = ((18.0 * u - 12.0) * u + 5.0) * u - 2.0;
        const double dp = (54.0 * u - 24.0) * u + 5.0;
        u -= p / dp;
    }
    return std::sqrt(u);
}

// Similarity transform bringing the five-site ladder at F = c1 to block form.
inline cmat s_c1() {
    cmat s(5, 5);
    s << C(0.041, -0.329), C(0.494, -0.058), C(-0.436), C(0.041, 0.329), C(-0.494, -0.058),
        C(0.329, -0.376), C(0.705, 0.016), C(0.0, -0.368), C(-0.329, -0.376), C(0.705, -0.016),
        C(0.529), C(0.707), C(0.591), C(0.529), C(-0.707),
        C(0.329, 0.376), C(0.705, -0.016), C(0.0, 0.368), C(-0.329, 0.376), C(0.705, 0.016),
        C(0.041, 0.329), C(0.494, 0.058), C(-0.436), C(0.041, -0.329), C(-0.494, 0.058);
    return s;
}

// Same for F = c2 (imaginary doublets).
inline cmat s_c2() {
    cmat s(5, 5);
    s << C(0.0, -0.639), C(-0.117), C(-0.132), C(0.0, 0.015), C(-0.029),
        C(0.703), C(0.0, -0.768), C(0.0, -0.416), C(-0.079), C(0.0, -0.139),
        C(0.0, 0.303), C(0.454), C(0.787), C(0.0, -0.303), C(0.454),
        C(-0.079), C(0.0, 0.139), C(0.0, 0.416), C(0.703), C(0.0, 0.768),
        C(0.0, -0.015), C(-0.029), C(-0.132), C(0.0, 0.639), C(-0.117);
    return s;
}

// Seven-site transform at the cubic defect F = F*.
inline cmat s7() {
    cmat s(7, 7);
    s << C(-0.377, -0.318), C(0.377, -0.318), C(0.008, 0.004), C(0.0, 0.116), C(-0.173), C(0.0, -0.128), C(-0.008, 0.004),
        C(0.657), C(0.657), C(-0.007, 0.031), C(-0.254), C(0.0, -0.264), C(0.109), C(-0.007, -0.031),
        C(-0.293, 0.401), C(0.293, 0.401), C(-0.102, 0.009), C(0.0, -0.487), C(0.305), C(0.0, 0.024), C(0.102, 0.009),
        C(-0.116, -0.232), C(-0.116, 0.232), C(-0.116, -0.232), C(0.610), C(0.0), C(0.178), C(-0.116, 0.232),
        C(0.102, -0.009), C(-0.102, -0.009), C(0.293, -0.401), C(0.0, 0.487), C(0.305), C(0.0, -0.024), C(-0.293, -0.401),
        C(-0.007, 0.031), C(-0.007, -0.031), C(0.657), C(-0.254), C(0.0, 0.264), C(0.109), C(0.657),
        C(-0.008, -0.004), C(0.008, -0.004), C(0.377, 0.318), C(0.0, -0.116), C(-0.173), C(0.0, 0.128), C(-0.377, 0.318);
    return s;
}

// Seed state for the real-doublet quench (mode attached to the zero chain).
inline cvec psi0_real_doublet() {
    cvec v(5);
    v << C(-0.606), C(0.620), C(1.293), C(-0.606), C(-0.620);
    return v;
}

// Quadratic Dirac-norm law for the F = c1 quench.
inline double p_real_doublet(double t) { return 3.175 + 0.769 * t * t; }

// Mixed hyperbolic/power law for the F = c2 quench.
inline double p_imag_doublet(double t) {
    const double ch = std::cosh(4.109 * t);
    return 1.612 * ch * t * t - 1.128 * std::sinh(4.109 * t) * t + 1.810 * ch + 6.497;
}

// Quartic-plus-hyperbolic law for the seven-site cubic defect quench.
inline double p_cubic(double t) {
    const double t2 = t * t;
    return 8.162 * t2 * t2 + 29.627 * t2 + 1.940 * std::cosh(2.674 * t) + 32.916;
}

// The non-quartic part of p_cubic; subtracting it isolates the t^4 growth.
inline double p_cubic_background(double t) {
    return 29.627 * t * t + 1.940 * std::cosh(2.674 * t) + 32.916;
}

}  // namespace printed
