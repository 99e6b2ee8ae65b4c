// Times the parallel kernels against their serial reference implementations
// and checks they agree: Hamiltonian assembly at N' = 401 and the fidelity
// matrix of the corresponding low-lying band.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "../src/fgh.hpp"
#include "../src/spectral.hpp"

namespace {

template <typename F>
double time_ms(F fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(
            best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main() {
    fgh::ContinuousModel model;
    model.L = 2.3;
    model.n_grid = 401;
    model.gamma = 7000.0;
    model.omega = 7;
    model.b = 0.935;
    model.a = 200;
    model.kappa = 0.3440;

    std::printf("threads: %d\n\n", omp_get_max_threads());
    std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial", "parallel",
                "speedup", "max diff");

    cmat h_par, h_ser;
    const double t_ser =
        time_ms([&] { h_ser = fgh::ref::build_hamiltonian(model); }, 3);
    const double t_par =
        time_ms([&] { h_par = fgh::build_hamiltonian(model); }, 3);
    const double h_diff = (h_par - h_ser).cwiseAbs().maxCoeff();
    std::printf("%-28s %8.1fms %8.1fms %7.2fx %10.2e\n",
                "build_hamiltonian (401)", t_ser, t_par, t_ser / t_par,
                h_diff);

    const spectral::EigenSystem sys = spectral::eig_general(h_par);
    const spectral::LowLyingBand band =
        spectral::low_lying(sys, model.well_count());
    rmat f_par, f_ser;
    const double f_ser_ms =
        time_ms([&] { f_ser = spectral::ref::fidelity_matrix(band); }, 5);
    const double f_par_ms =
        time_ms([&] { f_par = spectral::fidelity_matrix(band); }, 5);
    const double f_diff = (f_par - f_ser).cwiseAbs().maxCoeff();
    std::printf("%-28s %8.1fms %8.1fms %7.2fx %10.2e\n",
                "fidelity_matrix (15 band)", f_ser_ms, f_par_ms,
                f_ser_ms / f_par_ms, f_diff);

    const bool ok = h_diff < 1e-12 && f_diff < 1e-12;
    std::printf("\nagreement: %s\n", ok ? "ok" : "MISMATCH");
    return ok ? 0 : 1;
}
