#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "../src/analytic.hpp"
#include "../src/effective.hpp"
#include "../src/spectral.hpp"
#include "doctest.h"
#include "support/polyroot.hpp"

namespace {

std::vector<cdouble> to_vector(const cvec& v) {
    return {v.data(), v.data() + v.size()};
}

std::vector<cdouble> closed_values(double j, double f) {
    const analytic::ClosedForm5 cf = analytic::eigenvalues_n5(j, f);
    return {cf.values.begin(), cf.values.end()};
}

}  // namespace

TEST_CASE("closed-form spectrum: untilted and critical anchors") {
    const std::vector<cdouble> flat = closed_values(1.0, 0.0);
    const double r3 = std::sqrt(3.0);
    CHECK(polyroot::multiset_distance(
              flat, {cdouble(r3), cdouble(1.0), cdouble(0.0), cdouble(-1.0),
                     cdouble(-r3)}) < 1e-12);

    const analytic::CriticalRatios cr = analytic::critical_ratios();
    const std::vector<cdouble> low = closed_values(1.0, cr.c1);
    std::vector<double> mods;
    for (const cdouble& e : low) mods.push_back(std::abs(e));
    std::sort(mods.begin(), mods.end());
    CHECK(mods[0] < 1e-9);
    for (int i = 1; i < 5; ++i) CHECK(mods[i] == doctest::Approx(1.246).epsilon(1e-3));
    for (const cdouble& e : low) CHECK(std::abs(e.imag()) < 1e-9);

    const std::vector<cdouble> high = closed_values(1.0, cr.c2);
    mods.clear();
    for (const cdouble& e : high) mods.push_back(std::abs(e));
    std::sort(mods.begin(), mods.end());
    CHECK(mods[0] < 1e-9);
    for (int i = 1; i < 5; ++i) CHECK(mods[i] == doctest::Approx(2.054).epsilon(1e-3));
    for (const cdouble& e : high) CHECK(std::abs(e.real()) < 1e-9);
}

TEST_CASE("closed-form spectrum: branch order and exact negation pairing") {
    const analytic::ClosedForm5 cf = analytic::eigenvalues_n5(1.3, 0.7);
    CHECK(cf.values[2] == cdouble(0.0, 0.0));
    CHECK(cf.values[3] == -cf.values[0]);
    CHECK(cf.values[4] == -cf.values[1]);
    // sigma = +1 branch carries the larger squared magnitude
    CHECK(std::abs(cf.values[0]) >= std::abs(cf.values[1]));
    CHECK_THROWS_AS(analytic::eigenvalues_n5(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(analytic::eigenvalues_n5(-1.0, 0.5), std::invalid_argument);
}

TEST_CASE("closed-form spectrum agrees with dense diagonalization") {
    std::mt19937 rng(24601);
    std::uniform_real_distribution<double> js(0.5, 2.0);
    std::uniform_real_distribution<double> rs(0.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double j = js(rng);
        const double f = rs(rng) * j;
        const spectral::EigenSystem sys =
            spectral::eig_general(effective::build_stark_ladder(5, j, f));
        CHECK(polyroot::multiset_distance(closed_values(j, f),
                                          to_vector(sys.values)) < 1e-9);
    }
}

TEST_CASE("critical ratios: values and the exact product") {
    const analytic::CriticalRatios cr = analytic::critical_ratios();
    CHECK(cr.c1 == doctest::Approx(0.423).epsilon(5e-4));
    CHECK(cr.c2 == doctest::Approx(1.577).epsilon(5e-4));
    // (6+3r3)(6-3r3) = 9, so c1 c2 = 2/3 exactly.
    CHECK(cr.c1 * cr.c2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    // Delta vanishes at the critical ratios; rounding the ratio to a double
    // leaves sqrt(eps)-scale residue.
    CHECK(std::abs(analytic::eigenvalues_n5(1.0, cr.c1).delta) < 1e-6);
    CHECK(std::abs(analytic::eigenvalues_n5(1.0, cr.c2).delta) < 1e-6);
}

TEST_CASE("closed-form eigenvectors: residuals against the matrix") {
    for (const auto& jf : {std::pair{1.0, 0.2}, {1.3, 2.5}, {0.7, 0.05}}) {
        const cmat h = effective::build_stark_ladder(5, jf.first, jf.second);
        const analytic::ClosedForm5 cf =
            analytic::eigenvalues_n5(jf.first, jf.second);
        const int rho[] = {1, 1, 0, -1, -1};
        const int sigma[] = {1, -1, 0, 1, -1};
        for (int b = 0; b < 5; ++b) {
            const cvec v = analytic::eigenvector_n5(jf.first, jf.second, rho[b],
                                                    sigma[b]);
            CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((h * v - cf.values[b] * v).norm() < 1e-9);
            // Theta_1 = J^3: the first component is branch-independent and
            // positive real after unit normalization.
            CHECK(std::abs(v(0).imag()) < 1e-12);
            CHECK(v(0).real() > 0.0);
        }
    }
}

TEST_CASE("closed-form eigenvectors: untilted limit is the particle-in-a-box") {
    const int rho[] = {1, 1, 0, -1, -1};
    const int sigma[] = {1, -1, 0, -1, 1};  // descending e: sqrt3,1,0,-1,-sqrt3
    for (int b = 0; b < 5; ++b) {
        const cvec v = analytic::eigenvector_n5(1.0, 0.0, rho[b], sigma[b]);
        cvec s(5);
        const int k = b + 1;
        for (int n = 0; n < 5; ++n) s(n) = std::sin((n + 1) * k * M_PI / 6.0);
        s /= s.norm();
        CHECK(std::abs((s.transpose() * v).value()) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("closed-form eigenvectors: guards") {
    const analytic::CriticalRatios cr = analytic::critical_ratios();
    CHECK_THROWS_AS(analytic::eigenvector_n5(1.0, cr.c1, 1, 1),
                    std::runtime_error);
    CHECK_THROWS_AS(analytic::eigenvector_n5(1.0, cr.c2, 1, -1),
                    std::runtime_error);
    CHECK_THROWS_AS(analytic::eigenvector_n5(1.0, 0.3, 2, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::eigenvector_n5(1.0, 0.3, 1, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::eigenvector_n5(-1.0, 0.3, 1, 1),
                    std::invalid_argument);
    // The zero mode survives at the critical tilts (it never pairs up).
    CHECK_NOTHROW(analytic::eigenvector_n5(1.0, cr.c1, 0, 0));
}

TEST_CASE("secular function: roots map to ladder eigenvalues") {
    const std::vector<double> roots = analytic::scan_roots(1.0, 3.0, 5);
    CHECK(roots.size() == 5);
    CHECK(std::is_sorted(roots.begin(), roots.end()));
    // the center root is forced by parity
    CHECK(std::find(roots.begin(), roots.end(), 3.0) != roots.end());
    // parity: xi and 6 - xi come in pairs
    for (std::size_t i = 0; i < roots.size(); ++i)
        CHECK(roots[i] + roots[roots.size() - 1 - i] ==
              doctest::Approx(6.0).epsilon(1e-9));

    std::vector<cdouble> from_roots;
    for (const double xi : roots) from_roots.push_back(cdouble(0.0, 3.0 * (xi - 3.0)));
    const spectral::EigenSystem sys =
        spectral::eig_general(effective::build_stark_ladder(5, 1.0, 3.0));
    CHECK(polyroot::multiset_distance(from_roots, to_vector(sys.values)) < 1e-6);
    CHECK(polyroot::multiset_distance(from_roots, closed_values(1.0, 3.0)) <
          1e-6);
}

TEST_CASE("secular function: deep-tilt roots approach the integers") {
    const std::vector<double> roots = analytic::scan_roots(1.0, 8.0, 5);
    REQUIRE(roots.size() == 5);
    for (int k = 1; k <= 5; ++k)
        CHECK(std::abs(roots[static_cast<std::size_t>(k - 1)] - k) < 0.02);
    // the inner doublet collapses onto the integers much faster
    CHECK(std::abs(roots[1] - 2.0) < 1e-3);
    CHECK(std::abs(roots[3] - 4.0) < 1e-3);
}

TEST_CASE("secular function: real root count drops through the two transitions") {
    CHECK(analytic::scan_roots(1.0, 3.0, 5).size() == 5);
    CHECK(analytic::scan_roots(1.0, 1.7, 5).size() == 5);
    // between the critical ratios both doublets are complex; only the
    // symmetry-protected center root stays on the real axis
    CHECK(analytic::scan_roots(1.0, 1.5, 5).size() == 1);
    CHECK(analytic::scan_roots(1.0, 0.3, 5).size() == 1);
    CHECK_THROWS_AS(analytic::scan_roots(1.0, -0.5, 5), std::invalid_argument);
}

TEST_CASE("secular function: integer-xi poles are rejected") {
    CHECK_THROWS_AS(analytic::secular_f(3.0, 1.0, 2.0, 5), std::domain_error);
    CHECK_THROWS_AS(analytic::secular_f(2.0 + 5e-7, 1.0, 2.0, 5),
                    std::domain_error);
    CHECK_NOTHROW(analytic::secular_f(3.01, 1.0, 2.0, 5));
}

TEST_CASE("rotated secular form: same zeros, constant phase, no poles") {
    // sin(pi xi) * secular_f / rotated must be one constant complex unit.
    auto phase_ratio = [](double xi, double f, int n) {
        const cdouble full = analytic::secular_f(xi, 1.0, f, n);
        const double rot = analytic::secular_rotated(xi, 1.0, f, n);
        return std::sin(M_PI * xi) * full / rot;
    };
    for (const int n : {5, 7}) {
        const cdouble r1 = phase_ratio(1.37, 1.9, n);
        const cdouble r2 = phase_ratio(2.63, 1.9, n);
        const cdouble r3 = phase_ratio(1.81, 1.9, n);
        CHECK(std::abs(std::abs(r1) - 1.0) < 1e-10);
        CHECK(std::abs(r1 - r2) < 1e-10);
        CHECK(std::abs(r1 - r3) < 1e-10);
    }
    // rotated form is finite and smooth straight through integer xi
    CHECK_NOTHROW(analytic::secular_rotated(2.0, 1.0, 1.9, 5));
    const double left = analytic::secular_rotated(2.0 - 1e-7, 1.0, 1.9, 5);
    const double right = analytic::secular_rotated(2.0 + 1e-7, 1.0, 1.9, 5);
    CHECK(std::abs(left - right) < 1e-5 * std::max(1.0, std::abs(left)));
}

TEST_CASE("secular derivative: matches a plain finite difference") {
    const double xi = 1.41, f = 1.9;
    const cdouble got = analytic::secular_df(xi, 1.0, f, 5);
    const double h = 1e-6;
    const cdouble fd = (analytic::secular_f(xi + h, 1.0, f, 5) -
                        analytic::secular_f(xi - h, 1.0, f, 5)) /
                       (2.0 * h);
    CHECK(std::abs(got - fd) <= 1e-5 * std::abs(fd));
    CHECK(std::abs(got) > 0.0);
}

TEST_CASE("reduced secular form: regime guard and agreement with the full one") {
    CHECK_THROWS_AS(analytic::reduced_secular(0.5, 1.0, 1.2),
                    std::invalid_argument);
    CHECK_NOTHROW(analytic::reduced_secular(0.5, 1.0, 1.5));

    // Smallest zero of the reduced form vs the smallest full-scan root at
    // N = 15, where the dropped Y-product correction is tiny.
    const double f = 1.6;
    auto rotated_reduced = [&](double xi) {
        const cdouble v = std::exp(cdouble(0.0, xi * M_PI / 2.0)) *
                          analytic::reduced_secular(xi, 1.0, f);
        return v.real();
    };
    double lo = 0.05, hi = 0.0;
    double prev = rotated_reduced(lo);
    for (double xi = 0.07; xi < 2.0; xi += 0.02) {
        const double cur = rotated_reduced(xi);
        if (prev * cur < 0.0) {
            hi = xi;
            lo = xi - 0.02;
            break;
        }
        prev = cur;
    }
    REQUIRE(hi > 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rotated_reduced(lo) * rotated_reduced(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double reduced_zero = 0.5 * (lo + hi);
    const std::vector<double> full = analytic::scan_roots(1.0, f, 15);
    REQUIRE(!full.empty());
    CHECK(std::abs(reduced_zero - full.front()) < 1e-3);
}

TEST_CASE("reduced secular form: no zeros at negative order") {
    // For xi < 0 the rotation gives a modified Bessel value, strictly positive.
    for (double xi = -6.0; xi < -0.05; xi += 0.1) {
        const cdouble v = std::exp(cdouble(0.0, xi * M_PI / 2.0)) *
                          analytic::reduced_secular(xi, 1.0, 1.6);
        CHECK(v.real() > 0.0);
        CHECK(std::abs(v.imag()) < 1e-10 * std::abs(v.real()));
    }
}

TEST_CASE("reduced secular form: leading zero pair annihilates below the merge ratio") {
    auto count_zeros = [](double f) {
        int count = 0;
        double prev = 0.0;
        bool have = false;
        for (double xi = 0.05; xi < 6.0; xi += 0.02) {
            const cdouble v = std::exp(cdouble(0.0, xi * M_PI / 2.0)) *
                              analytic::reduced_secular(xi, 1.0, f);
            if (have && prev * v.real() < 0.0) ++count;
            prev = v.real();
            have = true;
        }
        return count;
    };
    // Above the merge ratio the inventory is tilt-independent; crossing
    // 1.577 from above removes the coalescing pair.
    CHECK(count_zeros(1.6) == count_zeros(3.0));
    CHECK(count_zeros(1.45) == count_zeros(1.6) - 2);
}

TEST_CASE("reduced pair condition: unit limit at vanishing alpha, real values") {
    const cdouble far = analytic::reduced_ep_condition(0.7, 1.0, 1000.0);
    CHECK(std::abs(far - cdouble(1.0)) < 1e-3);
    const cdouble near = analytic::reduced_ep_condition(0.7, 1.0, 1.6);
    CHECK(std::abs(near.imag()) < 1e-12 * std::max(1.0, std::abs(near.real())));
}

TEST_CASE("scale-free merge ratio: five and seven sites agree to three decimals") {
    const double r5 = analytic::find_scale_free_ep(5);
    const double r7 = analytic::find_scale_free_ep(7);
    CHECK(r5 == doctest::Approx(1.57735).epsilon(5e-4));
    CHECK(r7 == doctest::Approx(1.57745).epsilon(5e-4));
    CHECK(std::abs(r5 - r7) < 5e-4);
}

TEST_CASE("scale-free merge ratio: window guards") {
    CHECK_THROWS_AS(analytic::find_scale_free_ep(5, 2.2, 1.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::find_scale_free_ep(5, 1.8, 2.2),
                    std::runtime_error);
    CHECK_THROWS_AS(analytic::find_scale_free_ep(5, 1.3, 1.5),
                    std::runtime_error);
    CHECK_THROWS_AS(analytic::find_scale_free_ep(4), std::invalid_argument);
}

TEST_CASE("scale-free scan: root inventory per ratio") {
    const analytic::ScaleFreeScan scan =
        analytic::scale_free_scan(5, {1.5, 1.65, 3.0});
    CHECK(scan.n_sites == 5);
    CHECK(scan.ratio_grid == std::vector<double>{1.5, 1.65, 3.0});
    CHECK(scan.roots.size() == 3);
    CHECK(scan.roots[0].size() == 1);
    CHECK(scan.roots[1].size() == 5);
    CHECK(scan.roots[2].size() == 5);
    CHECK(scan.merge_points.empty());
}

TEST_CASE("reduced simultaneous root: frozen location") {
    const analytic::ReducedRoot root = analytic::find_scale_free_ep_reduced();
    CHECK(root.ratio == doctest::Approx(1.5774501567).epsilon(1e-6));
    CHECK(root.xi == doctest::Approx(1.6975236773).epsilon(1e-6));
    CHECK_THROWS_AS(analytic::find_scale_free_ep_reduced(1.8, 1.4),
                    std::invalid_argument);
    CHECK_THROWS_AS(analytic::find_scale_free_ep_reduced(1.40, 1.48),
                    std::runtime_error);
}
