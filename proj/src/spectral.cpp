#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spectral {

namespace {

bool is_complex_symmetric(const cmat& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

} // namespace

EigenSystem eig_general(const cmat& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eig_general: matrix not square");
    if (m.rows() > 1000)
        throw std::invalid_argument("eig_general: dim > 1000 not supported");

    Eigen::ComplexEigenSolver<cmat> ces(m, /*computeEigenvectors=*/true);
    if (ces.info() != Eigen::Success)
        throw std::runtime_error("eig_general: eigensolver failed to converge (info=" +
                                 std::to_string(static_cast<int>(ces.info())) + ")");

    EigenSystem sys;
    sys.values = ces.eigenvalues();
    sys.right = ces.eigenvectors();

    if (is_complex_symmetric(m)) {
        sys.left = sys.right;
    } else {
        Eigen::ComplexEigenSolver<cmat> ces_t(m.transpose(), true);
        if (ces_t.info() != Eigen::Success)
            throw std::runtime_error("eig_general: transposed eigensolver failed");
        // Greedy eigenvalue matching; adequate away from degeneracies.
        const int n = static_cast<int>(m.rows());
        std::vector<bool> used(n, false);
        sys.left.resize(n, n);
        for (int i = 0; i < n; ++i) {
            int best = -1;
            double best_d = 0.0;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double d = std::abs(ces_t.eigenvalues()(j) - sys.values(i));
                if (best < 0 || d < best_d) { best = j; best_d = d; }
            }
            used[best] = true;
            sys.left.col(i) = ces_t.eigenvectors().col(best);
        }
    }

    const double mnorm = m.norm();
    const int n = static_cast<int>(m.rows());
    sys.residuals.resize(n);
    sys.bi_condition.resize(n);
    for (int i = 0; i < n; ++i) {
        sys.residuals[i] = (m * sys.right.col(i) - sys.values(i) * sys.right.col(i)).norm();
        sys.bi_condition[i] = std::abs((sys.left.col(i).transpose() * sys.right.col(i)).value());
        if (sys.residuals[i] > 1e-8 * std::max(mnorm, 1e-300))
            throw std::runtime_error("eig_general: residual contract violated at pair " +
                                     std::to_string(i));
    }
    return sys;
}

EigenSystem biorthonormalize(EigenSystem sys, double ep_threshold) {
    const int n = static_cast<int>(sys.values.size());
    sys.flagged.clear();
    for (int i = 0; i < n; ++i) {
        const cdouble pairing = sys.left.col(i).transpose() * sys.right.col(i);
        sys.bi_condition[i] = std::abs(pairing);
        if (std::abs(pairing) < ep_threshold) {
            sys.flagged.push_back(i);
            continue;
        }
        const cdouble s = 1.0 / std::sqrt(pairing);
        sys.right.col(i) *= s;
        sys.left.col(i) *= s;
    }
    sys.normalized = true;
    return sys;
}

LowLyingBand low_lying(const EigenSystem& sys, int n_band) {
    const int n = static_cast<int>(sys.values.size());
    if (n_band < 1 || n_band > n)
        throw std::invalid_argument("low_lying: n_band outside [1, dim]");

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        return sys.values(a).real() < sys.values(b).real();
    });

    std::vector<int> band(idx.begin(), idx.begin() + n_band);
    std::sort(band.begin(), band.end(), [&](int a, int b) {
        const cdouble va = sys.values(a), vb = sys.values(b);
        if (va.imag() != vb.imag()) return va.imag() < vb.imag();
        return va.real() < vb.real();
    });

    LowLyingBand out;
    out.size = n_band;
    out.values.resize(n_band);
    out.vectors.resize(sys.right.rows(), n_band);
    out.left_vectors.resize(sys.left.rows(), n_band);
    out.ordering = band;
    for (int i = 0; i < n_band; ++i) {
        out.values(i) = sys.values(band[i]);
        out.vectors.col(i) = sys.right.col(band[i]);
        out.left_vectors.col(i) = sys.left.col(band[i]);
    }

    if (n_band < n) {
        double band_max = -1e300, band_min = 1e300;
        for (int i = 0; i < n_band; ++i) {
            band_max = std::max(band_max, sys.values(idx[i]).real());
            band_min = std::min(band_min, sys.values(idx[i]).real());
        }
        const double next = sys.values(idx[n_band]).real();
        out.gap_warning = (next - band_max) < 10.0 * (band_max - band_min);
    }
    return out;
}

namespace {

rmat fidelity_impl(const LowLyingBand& band, bool parallel) {
    const int nb = band.size;
    const Eigen::Index dim = band.vectors.rows();
    rmat mods(dim, nb);
    for (int q = 0; q < nb; ++q) {
        const double norm = band.vectors.col(q).norm();
        if (norm == 0.0)
            throw std::domain_error("fidelity_matrix: zero eigenvector at index " +
                                    std::to_string(q));
        mods.col(q) = band.vectors.col(q).cwiseAbs() / norm;
    }
    rmat f(nb, nb);
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int q = 0; q < nb; ++q)
            for (int p = 0; p <= q; ++p)
                f(q, p) = f(p, q) = mods.col(q).dot(mods.col(p));
    } else {
        for (int q = 0; q < nb; ++q)
            for (int p = 0; p <= q; ++p)
                f(q, p) = f(p, q) = mods.col(q).dot(mods.col(p));
    }
    return f;
}

} // namespace

rmat fidelity_matrix(const LowLyingBand& band) { return fidelity_impl(band, true); }

namespace ref {
rmat fidelity_matrix(const LowLyingBand& band) { return fidelity_impl(band, false); }
} // namespace ref

EPReport detect_coalescence(const rmat& f, double threshold, double parameter_tag) {
    if (threshold < 0.9 || threshold >= 1.0)
        throw std::invalid_argument("detect_coalescence: threshold outside [0.9, 1)");
    const int n = static_cast<int>(f.rows());

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    EPReport rep;
    rep.parameter_tag = parameter_tag;
    for (int q = 0; q < n; ++q)
        for (int p = q + 1; p < n; ++p) {
            rep.max_offdiag_fidelity = std::max(rep.max_offdiag_fidelity, f(q, p));
            if (f(q, p) >= threshold) parent[find(q)] = find(p);
        }

    std::vector<std::vector<int>> comps(n);
    for (int q = 0; q < n; ++q) comps[find(q)].push_back(q);
    for (auto& c : comps)
        if (c.size() >= 2) {
            rep.order_estimate = std::max<int>(rep.order_estimate, static_cast<int>(c.size()));
            rep.clusters.push_back(std::move(c));
        }
    return rep;
}

} // namespace spectral
