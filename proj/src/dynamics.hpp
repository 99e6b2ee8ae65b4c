#pragma once

// Time evolution under i d/dt psi = h psi three ways: RK4 integration,
// Jordan-form closed solution (polynomial-times-exponential per block), and
// the Bessel formula for the propagator of the uniformly tilted chain.
// Plus the Dirac-probability diagnostics read off the evolved states.

#include <utility>
#include <vector>

#include "types.hpp"

namespace dynamics {

struct JordanDecomposition {
    cmat transform;                           // S, chain vectors as columns
    std::vector<std::pair<cdouble, int>> blocks; // (eigenvalue, size)
    double tolerance_used = 0.0;
};

struct EvolutionResult {
    std::vector<double> times;
    std::vector<cvec> states;
    std::vector<double> dirac_p; // squared 2-norm per state
};

enum class Axis { real, imaginary };

struct SpacingReport {
    double mean_gap = 0.0;
    double max_gap_dev = 0.0; // max |gap - mean_gap|
    Axis axis = Axis::real;
};

// Classic fixed-step RK4 with step <= min(1e-3, 0.1/|h|_inf), subdividing
// each requested interval. times must increase from 0; states[0] = psi0.
// Throws when the required step underflows (pathologically large |h|).
EvolutionResult evolve_ode(const cmat& h, const cvec& psi0,
                           const std::vector<double>& times);

// Eigenvalue clustering within degeneracy_tol (absolute), then per cluster:
// a spectral projector built as a polynomial filter over the complementary
// eigenvalues, and Jordan chains grown inside the projected subspace by
// minimum-norm least-squares solves of (h - eI) Phi_{k+1} = Phi_k from the
// null-space basis (rank cutoff 1e-8). Meant for small matrices (dim <= 20)
// at analytically known coalescence parameters; generic parameters should
// use diagonalization or the ODE route instead. Throws when the null-space
// dimension inside a cluster is ambiguous (neither full nor a single chain).
JordanDecomposition jordan_decompose(const cmat& h, double degeneracy_tol);
// Default tolerance 1e-6 * Frobenius norm.
JordanDecomposition jordan_decompose(const cmat& h);

// The block-bidiagonal matrix the decomposition reduces h to.
cmat jordan_matrix(const std::vector<std::pair<cdouble, int>>& blocks);

// S exp(-i J t) S^{-1} psi0, with the block exponential
// e^{-i e t} sum_{m<r} (-it)^m N^m / m!.
cvec evolve_jordan(const JordanDecomposition& dec, const cvec& psi0, double t);

// Propagator entry of the gain/loss-free tilted chain H = -i h_ladder:
// U_{n'n}(t) = J_{n'-n}[(4iJ/F) sin(Ft/2)] e^{i(n'-n)(pi-Ft)/2} e^{-i n F t},
// site indices counted from the chain center (the tilt's zero). The dynamical
// phase carries the source index n; full revival at t = 2 pi / F.
cdouble propagator_element(double j, double f, double t, int n_to, int n_from);

// Sum of |psi_n|^2.
double dirac_probability(const cvec& state);

// Least-squares slope of log P against log t over samples with
// t in [t_lo, t_hi]. Requires >= 3 samples and P > 0 there; throws a
// window-validity error when the local slope drifts by more than 20% of the
// fitted slope across the window.
double power_law_exponent(const EvolutionResult& result, double t_lo,
                          double t_hi);

// Sorts the values along the dominant axis (imaginary when the spectrum is
// predominantly imaginary) and reports the consecutive-gap statistics.
SpacingReport spacing_analysis(const std::vector<cdouble>& values);

} // namespace dynamics
