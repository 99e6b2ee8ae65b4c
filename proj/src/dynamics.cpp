#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "specfun.hpp"

namespace dynamics {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cdouble kI{0.0, 1.0};

double inf_norm(const cmat& h) {
    return h.cwiseAbs().rowwise().sum().maxCoeff();
}

} // namespace

EvolutionResult evolve_ode(const cmat& h, const cvec& psi0,
                           const std::vector<double>& times) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("evolve_ode: matrix must be square");
    if (psi0.size() != h.rows())
        throw std::invalid_argument("evolve_ode: state dimension mismatch");
    if (times.empty() || times.front() != 0.0)
        throw std::invalid_argument("evolve_ode: times must start at 0");
    for (size_t k = 0; k + 1 < times.size(); ++k)
        if (times[k + 1] <= times[k])
            throw std::invalid_argument("evolve_ode: times must increase");

    const double norm = inf_norm(h);
    const double hmax = std::min(1e-3, norm > 0.0 ? 0.1 / norm : 1e-3);
    if (hmax < 1e-9)
        throw std::runtime_error("evolve_ode: required step underflows; "
                                 "matrix norm too large to integrate");

    EvolutionResult out;
    out.times = times;
    out.states.reserve(times.size());
    out.dirac_p.reserve(times.size());

    cvec psi = psi0;
    out.states.push_back(psi);
    out.dirac_p.push_back(psi.squaredNorm());

    const cmat rhs = -kI * h; // d psi / dt
    for (size_t k = 0; k + 1 < times.size(); ++k) {
        const double span = times[k + 1] - times[k];
        const int nsub = static_cast<int>(std::ceil(span / hmax));
        const double dt = span / nsub;
        for (int s = 0; s < nsub; ++s) {
            const cvec k1 = rhs * psi;
            const cvec k2 = rhs * (psi + 0.5 * dt * k1);
            const cvec k3 = rhs * (psi + 0.5 * dt * k2);
            const cvec k4 = rhs * (psi + dt * k3);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.states.push_back(psi);
        out.dirac_p.push_back(psi.squaredNorm());
    }
    return out;
}

namespace {

using Svd = Eigen::JacobiSVD<cmat>;

cmat pinv(const cmat& m, double rcond) {
    Svd svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = rcond * sv(0);
    cvec inv_sv = cvec::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv_sv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

} // namespace

JordanDecomposition jordan_decompose(const cmat& h, double degeneracy_tol) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("jordan_decompose: matrix must be square");
    const int n = static_cast<int>(h.rows());
    if (n > 20)
        throw std::invalid_argument(
            "jordan_decompose: meant for small matrices (dim <= 20)");

    Eigen::ComplexEigenSolver<cmat> es(h, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("jordan_decompose: eigensolver failed");
    const cvec lam = es.eigenvalues();

    std::vector<std::vector<int>> clusters;
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> grp{i};
        used[i] = true;
        for (int j = 0; j < n; ++j) {
            if (!used[j] && std::abs(lam(j) - lam(grp[0])) <= degeneracy_tol) {
                grp.push_back(j);
                used[j] = true;
            }
        }
        clusters.push_back(std::move(grp));
    }

    JordanDecomposition dec;
    dec.tolerance_used = degeneracy_tol;
    dec.transform.resize(n, n);
    int col = 0;

    for (const auto& grp : clusters) {
        const int m = static_cast<int>(grp.size());
        cdouble e = 0.0;
        for (int idx : grp) e += lam(idx);
        e /= static_cast<double>(m);

        if (m == 1) {
            Svd svd(h - lam(grp[0]) * cmat::Identity(n, n),
                    Eigen::ComputeFullU | Eigen::ComputeFullV);
            dec.transform.col(col++) = svd.matrixV().col(n - 1);
            dec.blocks.emplace_back(lam(grp[0]), 1);
            continue;
        }

        // Polynomial spectral filter: annihilates the complementary part of
        // the spectrum, acts as identity on the cluster to first order.
        cmat proj = cmat::Identity(n, n);
        for (int j = 0; j < n; ++j) {
            if (std::find(grp.begin(), grp.end(), j) != grp.end()) continue;
            proj = proj * (h - lam(j) * cmat::Identity(n, n)) / (e - lam(j));
        }
        Svd psvd(proj, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const cmat q = psvd.matrixU().leftCols(m);
        const cmat reduced = q.adjoint() * h * q - e * cmat::Identity(m, m);

        Svd msvd(reduced, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = msvd.singularValues();
        int null_dim = 0;
        // Grouping eigenvalues to degeneracy_tol declares structure below
        // that scale unresolvable, so the rank cut must sit there too: a
        // cluster split by s leaves a residual singular value ~ s^2 that
        // must read as zero.
        const double cutoff = std::max(degeneracy_tol, 1e-8 * sv(0));
        for (int i = 0; i < m; ++i)
            if (sv(i) < cutoff) ++null_dim;

        if (null_dim == m) {
            // Semisimple cluster: the subspace is already an eigenspace.
            for (int k = 0; k < m; ++k) {
                dec.transform.col(col++) = q.col(k);
                dec.blocks.emplace_back(e, 1);
            }
        } else if (null_dim == 1) {
            cmat chain(m, m);
            chain.col(0) = msvd.matrixV().col(m - 1);
            const cmat mp = pinv(reduced, 1e-8);
            for (int k = 1; k < m; ++k)
                chain.col(k) = mp * chain.col(k - 1);
            for (int k = 0; k < m; ++k)
                dec.transform.col(col++) = q * chain.col(k);
            dec.blocks.emplace_back(e, m);
        } else {
            throw std::runtime_error(
                "jordan_decompose: cluster of size " + std::to_string(m) +
                " near eigenvalue (" + std::to_string(e.real()) + "," +
                std::to_string(e.imag()) + ") has null-space dimension " +
                std::to_string(null_dim) +
                "; chain structure ambiguous at this tolerance");
        }
    }
    return dec;
}

JordanDecomposition jordan_decompose(const cmat& h) {
    return jordan_decompose(h, 1e-6 * h.norm());
}

cmat jordan_matrix(const std::vector<std::pair<cdouble, int>>& blocks) {
    int n = 0;
    for (const auto& b : blocks) n += b.second;
    cmat jf = cmat::Zero(n, n);
    int i = 0;
    for (const auto& [e, r] : blocks) {
        for (int k = 0; k < r; ++k) {
            jf(i + k, i + k) = e;
            if (k + 1 < r) jf(i + k, i + k + 1) = 1.0;
        }
        i += r;
    }
    return jf;
}

cvec evolve_jordan(const JordanDecomposition& dec, const cvec& psi0,
                   double t) {
    const int n = static_cast<int>(dec.transform.rows());
    if (psi0.size() != n)
        throw std::invalid_argument("evolve_jordan: state dimension mismatch");

    cmat block_exp = cmat::Zero(n, n);
    int i = 0;
    for (const auto& [e, r] : dec.blocks) {
        const cdouble phase = std::exp(-kI * e * t);
        cdouble nil_pow = 1.0; // (-it)^p / p!
        for (int p = 0; p < r; ++p) {
            for (int k = 0; k + p < r; ++k)
                block_exp(i + k, i + k + p) = phase * nil_pow;
            nil_pow *= (-kI * t) / static_cast<double>(p + 1);
        }
        i += r;
    }

    const cvec coeffs = dec.transform.partialPivLu().solve(psi0);
    return dec.transform * (block_exp * coeffs);
}

cdouble propagator_element(double j, double f, double t, int n_to,
                           int n_from) {
    if (f == 0.0)
        throw std::invalid_argument("propagator_element: F must be nonzero");
    const int off = n_to - n_from;
    const cdouble z = (4.0 * kI * j / f) * std::sin(f * t / 2.0);
    return specfun::bessel_j_int(off, z) *
           std::exp(kI * (off * (kPi - f * t) / 2.0) -
                    kI * (n_from * f * t));
}

double dirac_probability(const cvec& state) { return state.squaredNorm(); }

double power_law_exponent(const EvolutionResult& result, double t_lo,
                          double t_hi) {
    std::vector<double> lt, lp;
    for (size_t k = 0; k < result.times.size(); ++k) {
        const double t = result.times[k];
        if (t < t_lo || t > t_hi) continue;
        if (t <= 0.0)
            throw std::invalid_argument(
                "power_law_exponent: window must exclude t = 0");
        if (result.dirac_p[k] <= 0.0)
            throw std::invalid_argument(
                "power_law_exponent: P must be positive on the window");
        lt.push_back(std::log(t));
        lp.push_back(std::log(result.dirac_p[k]));
    }
    if (lt.size() < 3)
        throw std::invalid_argument(
            "power_law_exponent: need at least 3 samples inside the window");

    const size_t m = lt.size();
    double st = 0.0, sp = 0.0;
    for (size_t k = 0; k < m; ++k) {
        st += lt[k];
        sp += lp[k];
    }
    st /= m;
    sp /= m;
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < m; ++k) {
        num += (lt[k] - st) * (lp[k] - sp);
        den += (lt[k] - st) * (lt[k] - st);
    }
    const double slope = num / den;

    double lo_slope = 1e300, hi_slope = -1e300;
    for (size_t k = 0; k + 1 < m; ++k) {
        const double local = (lp[k + 1] - lp[k]) / (lt[k + 1] - lt[k]);
        lo_slope = std::min(lo_slope, local);
        hi_slope = std::max(hi_slope, local);
    }
    if (hi_slope - lo_slope > 0.2 * std::abs(slope))
        throw std::runtime_error(
            "power_law_exponent: local slope varies by " +
            std::to_string(hi_slope - lo_slope) +
            " across the window (over 20% of the fit " +
            std::to_string(slope) + "); window not in the power-law regime");
    return slope;
}

SpacingReport spacing_analysis(const std::vector<cdouble>& values) {
    if (values.size() < 3)
        throw std::invalid_argument("spacing_analysis: need at least 3 values");

    double re2 = 0.0, im2 = 0.0;
    for (const cdouble& v : values) {
        re2 += v.real() * v.real();
        im2 += v.imag() * v.imag();
    }
    SpacingReport rep;
    rep.axis = im2 > re2 ? Axis::imaginary : Axis::real;

    std::vector<double> coords;
    coords.reserve(values.size());
    for (const cdouble& v : values)
        coords.push_back(rep.axis == Axis::imaginary ? v.imag() : v.real());
    std::sort(coords.begin(), coords.end());

    std::vector<double> gaps;
    for (size_t k = 0; k + 1 < coords.size(); ++k)
        gaps.push_back(coords[k + 1] - coords[k]);
    double mean = 0.0;
    for (double g : gaps) mean += g;
    mean /= gaps.size();
    double dev = 0.0;
    for (double g : gaps) dev = std::max(dev, std::abs(g - mean));
    rep.mean_gap = mean;
    rep.max_gap_dev = dev;
    return rep;
}

} // namespace dynamics
