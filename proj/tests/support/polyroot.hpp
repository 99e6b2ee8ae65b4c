#pragma once
// Small-matrix eigenvalue oracle that shares no code path with the library:
// Faddeev-LeVerrier characteristic polynomial + Durand-Kerner root iteration.
#include <cstddef>
#include <vector>

#include "../../src/types.hpp"

namespace polyroot {

// Coefficients of det(xI - A), highest power first, c[0] = 1.
inline std::vector<cdouble> char_poly(const cmat& a) {
    const long n = a.rows();
    std::vector<cdouble> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    cmat m = cmat::Zero(n, n);
    for (long k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(k - 1)] * cmat::Identity(n, n);
        c[static_cast<std::size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

inline std::vector<cdouble> roots(const std::vector<cdouble>& coef) {
    const std::size_t n = coef.size() - 1;
    auto eval = [&coef](cdouble x) {
        cdouble v = 0.0;
        for (const cdouble& c : coef) v = v * x + c;
        return v;
    };
    // Non-real, non-unit-modulus seeds avoid symmetric stalls.
    std::vector<cdouble> x(n);
    const cdouble seed(0.4, 0.9);
    cdouble p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        p *= seed;
        x[i] = p;
    }
    for (int it = 0; it < 500; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cdouble denom = coef[0];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= x[i] - x[j];
            const cdouble step = eval(x[i]) / denom;
            x[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return x;
}

inline std::vector<cdouble> eigenvalues(const cmat& a) { return roots(char_poly(a)); }

// Greedy multiset match: largest distance after pairing each value of `a`
// with its nearest unused value of `b`.
inline double multiset_distance(std::vector<cdouble> a, std::vector<cdouble> b) {
    double worst = 0.0;
    for (const cdouble& v : a) {
        std::size_t best = 0;
        double d = 1e300;
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double dj = std::abs(v - b[j]);
            if (dj < d) {
                d = dj;
                best = j;
            }
        }
        worst = std::max(worst, d);
        b.erase(b.begin() + static_cast<long>(best));
    }
    return worst;
}

}  // namespace polyroot
