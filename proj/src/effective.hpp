#pragma once

// Wannier basis from single-well ground states, projection of the low-lying
// band onto it to extract the effective hopping and tilt, and the tilted
// tight-binding (Stark ladder) matrices the projection targets.

#include <vector>

#include "fgh.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace effective {

struct WannierBasis {
    rmat states;                 // columns chi_l, unit norm, on the model grid
    std::vector<double> centers; // k/omega for k = -omega..omega
    fgh::ContinuousModel source;
    bool interp_warning = false; // grid spacing above a tenth of the well width
};

struct StarkLadder {
    int size = 0;
    cdouble hopping{};
    cdouble tilt{};
};

struct Couplings {
    cdouble j_eff{};
    cdouble f_eff{};
    double per_l_spread = 0.0; // max relative deviation across site indices
};

struct LadderFit {
    double j = 0.0;
    double f = 0.0;
    double residual = 0.0; // rms per-level distance at the optimum
};

// Ground state of one sin^2 period boxed by hard walls: the confinement form
// rescaled so the walls sit at the period edges x = +-1/(2 omega), capped so
// the wall height stays finite on the grid. Solved at kappa = 0 and centered
// at x = 0. Fails if the well gap is under 10x the target band width.
rvec single_well_ground(const fgh::ContinuousModel& model);

// Translates the single-well ground state to each center k/omega by grid
// shifting with linear interpolation, renormalizing each copy.
WannierBasis wannier_basis(const fgh::ContinuousModel& model);

// J_eff from <chi_l| sum_n E_n |psi_n><psi-bar_n| |chi_{l+1}> averaged over l,
// F_eff from the diagonal elements divided by the site offset, averaged over
// the nonsingular sites. Energies are measured from the band mean (the zero
// of energy is a gauge choice; only |F/J| is compared anywhere). Throws if
// per_l_spread exceeds 0.2.
Couplings project_couplings(const spectral::LowLyingBand& band,
                            const WannierBasis& basis,
                            const cmat& left_vectors);

// Tridiagonal matrix with off-diagonal J and diagonal iF(-(N+1)/2 + j).
cmat build_stark_ladder(const StarkLadder& ladder);
cmat build_stark_ladder(int n, cdouble j, cdouble f);

// Least-squares (J, F) so the ladder spectrum matches the band eigenvalues
// as sorted multisets, modulo a global energy shift. Nelder-Mead with
// restarts over the initial tilt guess.
LadderFit fit_stark_ladder(const spectral::LowLyingBand& band);

} // namespace effective
