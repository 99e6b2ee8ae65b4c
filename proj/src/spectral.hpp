#pragma once

// Dense eigendecomposition with biorthogonal left/right pairs, low-lying band
// extraction, and coalescence detection through the modulus-overlap fidelity.
// All pairings here are bilinear (left^T right, no conjugation): for complex
// symmetric matrices the left eigenvectors are the unconjugated rights.

#include <vector>

#include "types.hpp"

namespace spectral {

struct EigenSystem {
    cvec values;
    cmat right;                       // columns are right eigenvectors
    cmat left;                        // columns pair bilinearly with right
    std::vector<double> residuals;    // ||M v - E v|| per pair
    std::vector<double> bi_condition; // |left^T right| per pair, pre-normalization
    std::vector<int> flagged;         // self-orthogonal pairs (near an EP)
    bool normalized = false;
};

struct LowLyingBand {
    int size = 0;
    cvec values;
    cmat vectors;
    cmat left_vectors;
    std::vector<int> ordering; // indices into the parent EigenSystem
    bool gap_warning = false;  // band/rest separation under 10x the band spread
};

struct EPReport {
    std::vector<std::vector<int>> clusters; // components with >= 2 members
    int order_estimate = 0;                 // largest cluster size, 0 if none
    double max_offdiag_fidelity = 0.0;
    double parameter_tag = 0.0;
};

// Full decomposition, dim <= 1000. For complex symmetric input the left
// vectors are the rights; otherwise they come from the transposed problem,
// matched by eigenvalue. Residuals satisfy ||M v - E v|| <= 1e-8 ||M||.
EigenSystem eig_general(const cmat& m);

// Scales pairs so left^T right = 1. Pairs whose pre-normalization pairing is
// below ep_threshold are flagged and left untouched (self-orthogonality).
EigenSystem biorthonormalize(EigenSystem sys, double ep_threshold = 1e-6);

// The n_band eigenvalues of smallest real part, reordered by imaginary part
// ascending (ties by real part).
LowLyingBand low_lying(const EigenSystem& sys, int n_band);

// f_{qq'} = sum_n |d_q(n)| |d_{q'}(n)| / (Omega_q Omega_{q'}). Symmetric,
// unit diagonal, entries in (0, 1].
rmat fidelity_matrix(const LowLyingBand& band);

// Connected components of the graph with edges f_{qq'} >= threshold.
EPReport detect_coalescence(const rmat& f, double threshold, double parameter_tag);

namespace ref {
// Serial fidelity evaluation, kept as the kernel benchmark baseline.
rmat fidelity_matrix(const LowLyingBand& band);
} // namespace ref

} // namespace spectral
