#pragma once

// Continuum model V(x) = gamma sin^2(omega pi x) + |b x|^a - i kappa x and
// its dense discretization on an odd, origin-centered grid. The kinetic part
// is a cosine-kernel sum over reciprocal points and depends only on n - n',
// so the assembled matrix is complex symmetric with a Toeplitz kinetic block.

#include <functional>
#include <iosfwd>
#include <vector>

#include "types.hpp"

namespace fgh {

struct ContinuousModel {
    double L = 3.0;      // box length; grid spans [-L/2, L/2]
    int n_grid = 201;    // odd number of grid points
    double gamma = 0.0;  // well depth
    int omega = 1;       // well-width control; N = 2*omega + 1 wells on [-1, 1]
    double b = 1.0;      // confinement scale, in (0, 1]
    int a = 2;           // confinement exponent, even and positive
    double kappa = 0.0;  // imaginary tilt strength
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const; // throws std::invalid_argument listing all violations
    int well_count() const { return 2 * omega + 1; }
};

struct GridSpec {
    double dx = 0.0;            // L / (n_grid - 1)
    double dk = 0.0;            // 2 pi / L
    std::vector<double> points; // x_n = -L/2 + n dx
    int tau = 0;                // (n_grid - 1) / 2
};

GridSpec make_grid(const ContinuousModel& model);

// gamma sin^2(omega pi x) + |b x|^a, the power term via exp(a ln|bx|) so that
// a = 200 does not accumulate multiplication error; exactly 0 at x = 0.
double potential_real(const ContinuousModel& model, double x);

// potential_real(x) - i kappa x.
cdouble potential_complex(const ContinuousModel& model, double x);

// T_l = 2 (hbar pi l / L)^2 / mass for 1 <= l <= tau.
double kinetic_coefficient(const ContinuousModel& model, int l);

// H_{nn'} = (2/(N'-1)) sum_{l=1}^{tau} cos(2 pi l (n-n')/(N'-1)) T_l
//           + V(x_n) delta_{nn'}.
// Kinetic kernel precomputed per diagonal offset, rows filled in parallel.
cmat build_hamiltonian(const ContinuousModel& model);

// Real symmetric assembly for kappa = 0 problems, with an optional potential
// override (used for the auxiliary single-well solves).
rmat build_real_hamiltonian(const ContinuousModel& model,
                            const std::function<double(double)>* vfun = nullptr);

// Two-section text dump for cross-implementation diffing:
// header "dim dx", then one "n n' re im" line per entry.
void dump_matrix(const cmat& m, double dx, std::ostream& os);

namespace ref {
// Brute-force double loop over the cosine sum, serial. Kept as the test
// oracle and as the baseline in the kernel benchmark.
cmat build_hamiltonian(const ContinuousModel& model);
} // namespace ref

} // namespace fgh
