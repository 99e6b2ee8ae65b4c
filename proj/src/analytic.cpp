#include "analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "specfun.hpp"

namespace analytic {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cdouble kI{0.0, 1.0};

cdouble delta_of(double j, double f) {
    const double j2 = j * j, f2 = f * f;
    const cdouble inner = (2.0 * j2 - 3.0 * f2) * (2.0 * j2 - 3.0 * f2) -
                          12.0 * j2 * f2;
    return std::sqrt(inner);
}

cdouble branch_value(double j, double f, int rho, int sigma, cdouble delta) {
    const cdouble radicand =
        (-5.0 * f * f + 4.0 * j * j + static_cast<double>(sigma) * delta) / 2.0;
    return static_cast<double>(rho) * std::sqrt(radicand);
}

void require_odd_sites(int n, const char* who) {
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument(std::string(who) +
                                    ": site count must be odd and >= 3");
}

} // namespace

ClosedForm5 eigenvalues_n5(double j, double f) {
    if (j <= 0.0)
        throw std::invalid_argument("eigenvalues_n5: J must be positive");
    ClosedForm5 out;
    out.j = j;
    out.f = f;
    out.delta = delta_of(j, f);
    out.values = {branch_value(j, f, +1, +1, out.delta),
                  branch_value(j, f, +1, -1, out.delta),
                  cdouble{0.0, 0.0},
                  branch_value(j, f, -1, +1, out.delta),
                  branch_value(j, f, -1, -1, out.delta)};
    return out;
}

cvec eigenvector_n5(double j, double f, int rho, int sigma) {
    if (j <= 0.0)
        throw std::invalid_argument("eigenvector_n5: J must be positive");
    const bool zero_mode = (rho == 0 && sigma == 0);
    if (!zero_mode && (std::abs(rho) != 1 || std::abs(sigma) != 1))
        throw std::invalid_argument(
            "eigenvector_n5: branch labels must be +-1, or 0,0 for the zero mode");

    const cdouble delta = delta_of(j, f);
    // The zero mode is symmetry-protected and never degenerates; the +-
    // branches pair up when Delta vanishes. Rounding in a critical-ratio
    // input leaves |Delta| ~ sqrt(eps) J^2, so the guard must sit well above
    // that scale's square.
    if (!zero_mode && std::abs(delta) <= 1e-6 * j * j)
        throw std::runtime_error(
            "eigenvector_n5: branches coalesce here (|Delta| <= 1e-6 J^2); "
            "the component formulas degenerate");

    const cdouble e =
        zero_mode ? cdouble{0.0, 0.0} : branch_value(j, f, rho, sigma, delta);
    const cdouble xi = e + 2.0 * kI * f;
    const cdouble j2 = j * j, j3 = j * j * j;

    cvec v(5);
    v(0) = j3;
    v(1) = xi * j2;
    v(2) = xi * (xi - kI * f) * j - j3;
    v(3) = (xi - kI * f) * (e * xi - 2.0 * j2);
    // Last component from the fourth chain row: no division, so the
    // untilted limit and the zero mode stay finite.
    v(4) = ((e - kI * f) * v(3) - j * v(2)) / j;
    v /= v.norm();
    return v;
}

CriticalRatios critical_ratios() {
    const double s3 = std::sqrt(3.0);
    return {std::pow((6.0 + 3.0 * s3) / 2.0, -0.5),
            std::pow((6.0 - 3.0 * s3) / 2.0, -0.5)};
}

cdouble secular_f(double xi, double j, double f, int n) {
    const cdouble two_alpha = 2.0 * kI * j / f;
    return specfun::bessel_j(-xi, two_alpha) *
               specfun::bessel_y(n + 1 - xi, two_alpha) -
           specfun::bessel_j(n + 1 - xi, two_alpha) *
               specfun::bessel_y(-xi, two_alpha);
}

cdouble secular_df(double xi, double j, double f, int n) {
    const double h = 1e-5;
    auto central = [&](double step) {
        return (secular_f(xi + step, j, f, n) - secular_f(xi - step, j, f, n)) /
               (2.0 * step);
    };
    const cdouble d1 = central(h);
    const cdouble d2 = central(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

double secular_rotated(double xi, double j, double f, int n) {
    require_odd_sites(n, "secular_rotated");
    const cdouble two_alpha = 2.0 * kI * j / f;
    // sin(pi xi) absorbs the Y reflection denominators; what is left is a
    // cross product of J values alone, with no poles along real xi.
    const double sgn = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^(N+1)
    const cdouble v =
        sgn * specfun::bessel_j(-xi, two_alpha) *
            specfun::bessel_j(xi - n - 1, two_alpha) -
        specfun::bessel_j(xi, two_alpha) * specfun::bessel_j(n + 1 - xi, two_alpha);
    const double phase = (((n + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return phase * v.real();
}

std::vector<double> scan_roots(double j, double f, int n, double step,
                               double delta) {
    require_odd_sites(n, "scan_roots");
    if (j <= 0.0 || f <= 0.0)
        throw std::invalid_argument("scan_roots: J and F must be positive");

    std::vector<double> roots;
    for (int m0 = 0; m0 <= n; ++m0) {
        std::vector<double> xs;
        xs.push_back(m0 + delta);
        for (double x = m0 + step; x < m0 + 1 - step / 2; x += step)
            xs.push_back(x);
        xs.push_back(m0 + 1 - delta);

        std::vector<double> vals(xs.size());
        for (size_t i = 0; i < xs.size(); ++i)
            vals[i] = secular_rotated(xs[i], j, f, n);

        for (size_t i = 0; i + 1 < xs.size(); ++i) {
            if (vals[i] * vals[i + 1] < 0.0) {
                double a = xs[i], b = xs[i + 1], fa = vals[i];
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double fm = secular_rotated(mid, j, f, n);
                    if (fa * fm <= 0.0) {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                roots.push_back(0.5 * (a + b));
            }
        }
    }
    // e -> -e symmetry pins one eigenvalue at zero for odd N, i.e. a root at
    // the integer center where the sign scan is blind.
    roots.push_back((n + 1) / 2.0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

ScaleFreeScan scale_free_scan(int n, const std::vector<double>& ratios) {
    ScaleFreeScan scan;
    scan.n_sites = n;
    scan.ratio_grid = ratios;
    for (double r : ratios) {
        scan.roots.push_back(scan_roots(1.0, r, n));
        const auto& rs = scan.roots.back();
        for (size_t i = 0; i + 1 < rs.size(); ++i) {
            if (rs[i + 1] - rs[i] < 1e-4) {
                scan.merge_points.push_back(r);
                break;
            }
        }
    }
    return scan;
}

cdouble reduced_secular(double xi, double j, double f) {
    const cdouble alpha = kI * j / f;
    if (std::abs(alpha) > 0.7)
        throw std::invalid_argument(
            "reduced_secular: |alpha| > 0.7, outside the reduction regime");
    return specfun::bessel_j(-xi, 2.0 * alpha);
}

cdouble reduced_ep_condition(double xi, double j, double f) {
    const cdouble alpha = kI * j / f;
    const cdouble z = -4.0 * alpha * alpha; // 4 J^2 / F^2, real positive
    return specfun::hyp2f3(-xi, -xi + 0.5, -xi + 1.0, -xi + 1.0, -2.0 * xi + 1.0,
                           z);
}

namespace {

// Two roots live inside (lo, hi) iff the extremum of the sign-fixed scan
// value dips below zero; ternary search finds the dip.
struct PairProbe {
    bool present = false;
    double at = 0.0;
};

PairProbe pair_present(double f, int n, double lo, double hi) {
    const double s = secular_rotated(lo, 1.0, f, n) >= 0.0 ? 1.0 : -1.0;
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        const double f1 = s * secular_rotated(m1, 1.0, f, n);
        const double f2 = s * secular_rotated(m2, 1.0, f, n);
        if (f1 < 0.0 || f2 < 0.0)
            return {true, f1 < f2 ? m1 : m2};
        if (f1 < f2)
            b = m2;
        else
            a = m1;
        if (b - a < 1e-12) break;
    }
    const double x = 0.5 * (a + b);
    return {s * secular_rotated(x, 1.0, f, n) < 0.0, x};
}

double bisect_rotated(double f, int n, double a, double b) {
    double fa = secular_rotated(a, 1.0, f, n);
    for (int it = 0; it < 70; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = secular_rotated(m, 1.0, f, n);
        if (fa * fm <= 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double find_scale_free_ep(int n, double ratio_lo, double ratio_hi) {
    require_odd_sites(n, "find_scale_free_ep");
    if (!(ratio_lo > 0.0) || !(ratio_hi > ratio_lo))
        throw std::invalid_argument("find_scale_free_ep: bad ratio window");

    const double center = (n + 1) / 2.0;

    // Coarse descent: find a ratio where some unit interval below the center
    // already holds a cohabiting root pair.
    double r = ratio_hi;
    double pair_lo = 0.0, pair_hi = 0.0;
    bool found = false;
    while (r > ratio_lo && !found) {
        const std::vector<double> roots = scan_roots(1.0, r, n);
        std::vector<double> below;
        for (double x : roots)
            if (x < center - 0.05) below.push_back(x);
        for (size_t i = 0; i + 1 < below.size(); ++i) {
            if (std::floor(below[i]) == std::floor(below[i + 1]) &&
                below[i + 1] - below[i] < 0.9) {
                pair_lo = below[i];
                pair_hi = below[i + 1];
                found = true;
                break;
            }
        }
        if (!found) r -= 0.05;
    }
    if (!found)
        throw std::runtime_error(
            "find_scale_free_ep: no root pair appears anywhere in the window; "
            "it brackets no merge");

    auto window = [](double x) {
        const double m0 = std::floor(x);
        return std::pair<double, double>{std::max(m0 + 1e-3, x - 0.35),
                                         std::min(m0 + 1.0 - 1e-3, x + 0.35)};
    };

    double xi_star = 0.5 * (pair_lo + pair_hi);
    double a = ratio_lo, b = r; // a: pair absent, b: pair present
    {
        const auto [lo, hi] = window(xi_star);
        if (pair_present(ratio_lo, n, lo, hi).present)
            throw std::runtime_error(
                "find_scale_free_ep: pair still present at ratio_lo; the "
                "window brackets no merge");
    }
    for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        const auto [lo, hi] = window(xi_star);
        const PairProbe p = pair_present(m, n, lo, hi);
        if (p.present) {
            b = m;
            xi_star = p.at;
        } else {
            a = m;
        }
        if (b - a < 1e-10) break;
    }
    const double r_star = 0.5 * (a + b);

    // Merge confirmation 1: on the present side the two roots should sit
    // within 1e-4 of each other.
    {
        const auto [lo, hi] = window(xi_star);
        const PairProbe p = pair_present(b, n, lo, hi);
        if (!p.present)
            throw std::runtime_error("find_scale_free_ep: lost the pair at the "
                                     "claimed merge ratio");
        const double r1 = bisect_rotated(b, n, lo, p.at);
        const double r2 = bisect_rotated(b, n, p.at, hi);
        if (r2 - r1 >= 1e-4)
            throw std::runtime_error(
                "find_scale_free_ep: root gap " + std::to_string(r2 - r1) +
                " at the merge candidate exceeds 1e-4");
    }

    // Merge confirmation 2: the secular derivative collapses at a double
    // root. Compare against its median magnitude over the scan grid.
    {
        std::vector<double> mags;
        for (int m0 = 0; m0 <= n; ++m0)
            for (double x = m0 + 0.11; x < m0 + 1 - 0.05; x += 0.1)
                mags.push_back(std::abs(secular_df(x, 1.0, r_star, n)));
        std::nth_element(mags.begin(), mags.begin() + mags.size() / 2,
                         mags.end());
        const double median = mags[mags.size() / 2];
        const double at_merge = std::abs(secular_df(xi_star, 1.0, r_star, n));
        if (at_merge >= 1e-3 * median)
            throw std::runtime_error(
                "find_scale_free_ep: |d secular/d xi| at the merge point is "
                "not small against its scan median; merge unconfirmed");
    }

    return r_star;
}

namespace {

double reduced_pair_g1(double xi, double r) {
    // exp(i xi pi / 2) J_{-xi}(2i/r) is real: the imaginary-argument Bessel
    // rotated onto the modified-Bessel axis.
    const cdouble v = std::exp(kI * (xi * kPi / 2.0)) *
                      specfun::bessel_j(-xi, 2.0 * kI / r);
    return v.real();
}

double reduced_pair_g2(double xi, double r) {
    return specfun::hyp2f3(-xi, -xi + 0.5, -xi + 1.0, -xi + 1.0,
                           -2.0 * xi + 1.0, cdouble{4.0 / (r * r), 0.0})
        .real();
}

template <typename F>
double bisect_fn(F fn, double a, double b) {
    double fa = fn(a);
    for (int it = 0; it < 70; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = fn(m);
        if (fa * fm <= 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

// Zero of the 2F3 condition in xi at fixed ratio, or NaN when none is inside
// the tracked window.
double reduced_xi0(double r) {
    constexpr int kNodes = 46;
    double prev_x = 0.0, prev_v = 0.0;
    for (int i = 0; i < kNodes; ++i) {
        const double x = 1.05 + 0.9 * i / (kNodes - 1);
        const double v = reduced_pair_g2(x, r);
        if (i > 0 && prev_v * v < 0.0)
            return bisect_fn([&](double xx) { return reduced_pair_g2(xx, r); },
                             prev_x, x);
        prev_x = x;
        prev_v = v;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

ReducedRoot find_scale_free_ep_reduced(double ratio_lo, double ratio_hi) {
    if (!(ratio_lo > 0.0) || !(ratio_hi > ratio_lo))
        throw std::invalid_argument("find_scale_free_ep_reduced: bad window");

    auto along_track = [&](double r) {
        const double x = reduced_xi0(r);
        return std::isnan(x) ? std::numeric_limits<double>::quiet_NaN()
                             : reduced_pair_g1(x, r);
    };

    constexpr int kNodes = 17;
    double prev_r = 0.0, prev_v = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < kNodes; ++i) {
        const double r = ratio_lo + (ratio_hi - ratio_lo) * i / (kNodes - 1);
        const double v = along_track(r);
        if (std::isnan(v)) {
            prev_v = v;
            continue;
        }
        if (!std::isnan(prev_v) && prev_v * v < 0.0) {
            const double r_star = bisect_fn(along_track, prev_r, r);
            return {r_star, reduced_xi0(r_star)};
        }
        prev_r = r;
        prev_v = v;
    }
    throw std::runtime_error(
        "find_scale_free_ep_reduced: the Bessel value along the 2F3 zero "
        "track never changes sign in the window");
}

} // namespace analytic
