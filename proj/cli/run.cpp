#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <omp.h>

#include "json.hpp"

#include "../src/analytic.hpp"
#include "../src/dynamics.hpp"
#include "../src/effective.hpp"
#include "../src/fgh.hpp"
#include "../src/spectral.hpp"

namespace cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * i / (n - 1);
    return xs;
}

std::vector<cdouble> sorted_values(const cvec& v) {
    std::vector<cdouble> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), [](const cdouble& a, const cdouble& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

spectral::LowLyingBand continuum_band(const fgh::ContinuousModel& model) {
    const cmat h = fgh::build_hamiltonian(model);
    const spectral::EigenSystem sys = spectral::eig_general(h);
    return spectral::low_lying(sys, model.well_count());
}

std::string run_spectrum_sweep(const RunConfig& cfg) {
    const std::vector<double> grid =
        linspace(cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.steps);
    const int levels = cfg.sweep.parameter == "kappa"
                           ? cfg.model.well_count()
                           : cfg.ladder.n;

    std::ostringstream head;
    head << "param";
    for (int k = 1; k <= levels; ++k)
        head << ",re_e" << k << ",im_e" << k;
    head << "\n";

    std::vector<std::string> rows(grid.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
        try {
            std::vector<cdouble> vals;
            if (cfg.sweep.parameter == "kappa") {
                fgh::ContinuousModel m = cfg.model;
                m.kappa = grid[i];
                const spectral::LowLyingBand band = continuum_band(m);
                vals.assign(band.values.data(), band.values.data() + band.size);
            } else {
                const cmat h = effective::build_stark_ladder(
                    cfg.ladder.n, cfg.ladder.j, grid[i]);
                vals = sorted_values(spectral::eig_general(h).values);
            }
            std::ostringstream os;
            os << fmt(grid[i]);
            for (const cdouble& e : vals)
                os << "," << fmt(e.real()) << "," << fmt(e.imag());
            os << "\n";
            rows[i] = os.str();
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    std::string body = head.str();
    for (const auto& r : rows) body += r;
    return body;
}

std::string run_fidelity(const RunConfig& cfg) {
    const spectral::LowLyingBand band = continuum_band(cfg.model);
    const rmat f = spectral::fidelity_matrix(band);
    std::string body = "q,qprime,value\n";
    for (int q = 0; q < f.rows(); ++q)
        for (int p = 0; p < f.cols(); ++p)
            body += std::to_string(q + 1) + "," + std::to_string(p + 1) + "," +
                    fmt(f(q, p)) + "\n";
    return body;
}

std::string run_effective_couplings(const RunConfig& cfg) {
    std::vector<double> kappas;
    if (cfg.sweep.present)
        kappas = linspace(cfg.sweep.lo, cfg.sweep.hi, cfg.sweep.steps);
    else
        kappas = {cfg.model.kappa};

    std::vector<std::string> rows(kappas.size());
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(kappas.size()); ++i) {
        try {
            fgh::ContinuousModel m = cfg.model;
            m.kappa = kappas[i];
            const spectral::LowLyingBand band = continuum_band(m);
            const effective::WannierBasis basis = effective::wannier_basis(m);
            const effective::Couplings cp =
                effective::project_couplings(band, basis, band.left_vectors);
            std::ostringstream os;
            os << fmt(kappas[i]) << "," << fmt(cp.j_eff.real()) << ","
               << fmt(cp.j_eff.imag()) << "," << fmt(cp.f_eff.real()) << ","
               << fmt(cp.f_eff.imag()) << ","
               << fmt(std::abs(cp.f_eff) / std::abs(cp.j_eff)) << ","
               << fmt(cp.per_l_spread) << "\n";
            rows[i] = os.str();
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);

    std::string body =
        "kappa,re_j,im_j,re_f,im_f,ratio,per_l_spread\n";
    for (const auto& r : rows) body += r;
    return body;
}

std::string run_scale_free(const RunConfig& cfg) {
    const auto& ns = cfg.scan.n_list;
    std::vector<std::string> rows(ns.size());
    // Exceptions may not escape the parallel region; carry the first one out.
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(ns.size()); ++i) {
        try {
            const double merge = analytic::find_scale_free_ep(
                ns[i], cfg.scan.ratio_lo, cfg.scan.ratio_hi);
            rows[i] = std::to_string(ns[i]) + "," + fmt(merge) + "\n";
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    std::string body = "n,f_over_j_merge\n";
    for (const auto& r : rows) body += r;
    return body;
}

std::string run_evolve(const RunConfig& cfg) {
    const int n = cfg.ladder.n;
    cmat h = effective::build_stark_ladder(n, cfg.ladder.j, cfg.ladder.f);
    if (cfg.evolution.generator == "lossy") h = cdouble(0.0, -1.0) * h;

    cvec psi0;
    if (cfg.evolution.initial == "center") {
        psi0 = cvec::Zero(n);
        psi0((n - 1) / 2) = 1.0;
    } else {
        psi0 = cvec::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    }

    const dynamics::EvolutionResult res = dynamics::evolve_ode(
        h, psi0, linspace(0.0, cfg.evolution.t_max, cfg.evolution.samples));

    std::ostringstream head;
    head << "t";
    for (int k = 1; k <= n; ++k) head << ",re_psi_" << k;
    for (int k = 1; k <= n; ++k) head << ",im_psi_" << k;
    head << ",P\n";

    std::string body = head.str();
    for (size_t k = 0; k < res.times.size(); ++k) {
        std::ostringstream os;
        os << fmt(res.times[k]);
        for (int s = 0; s < n; ++s) os << "," << fmt(res.states[k](s).real());
        for (int s = 0; s < n; ++s) os << "," << fmt(res.states[k](s).imag());
        os << "," << fmt(res.dirac_p[k]) << "\n";
        body += os.str();
    }
    return body;
}

std::string run_propagator(const RunConfig& cfg) {
    const std::vector<double> ts =
        linspace(0.0, cfg.propagation.t_max, cfg.propagation.samples);
    std::string body = "t,n,re_u,im_u\n";
    for (double t : ts) {
        for (int n = -cfg.propagation.radius; n <= cfg.propagation.radius;
             ++n) {
            const cdouble u = dynamics::propagator_element(
                cfg.ladder.j, cfg.ladder.f, t, n, cfg.propagation.source);
            body += fmt(t) + "," + std::to_string(n) + "," + fmt(u.real()) +
                    "," + fmt(u.imag()) + "\n";
        }
    }
    return body;
}

std::string run_spacing(const RunConfig& cfg) {
    const cmat h =
        effective::build_stark_ladder(cfg.ladder.n, cfg.ladder.j, cfg.ladder.f);
    const cvec vals = spectral::eig_general(h).values;
    const dynamics::SpacingReport rep = dynamics::spacing_analysis(
        std::vector<cdouble>(vals.data(), vals.data() + vals.size()));
    std::string body = "mean_gap,max_gap_dev,axis\n";
    body += fmt(rep.mean_gap) + "," + fmt(rep.max_gap_dev) + "," +
            (rep.axis == dynamics::Axis::imaginary ? "imaginary" : "real") +
            "\n";
    return body;
}

} // namespace

int run(const RunConfig& cfg, int jobs) {
    if (jobs > 0) omp_set_num_threads(jobs);

    const std::filesystem::path csv_path = cfg.output_path;
    const std::filesystem::path meta_path = cfg.output_path + ".meta.json";

    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::string body;
        if (cfg.mode == "spectrum-sweep") body = run_spectrum_sweep(cfg);
        else if (cfg.mode == "fidelity") body = run_fidelity(cfg);
        else if (cfg.mode == "effective-couplings") body = run_effective_couplings(cfg);
        else if (cfg.mode == "scale-free") body = run_scale_free(cfg);
        else if (cfg.mode == "evolve") body = run_evolve(cfg);
        else if (cfg.mode == "propagator") body = run_propagator(cfg);
        else if (cfg.mode == "spacing") body = run_spacing(cfg);
        else throw ConfigError("unknown mode \"" + cfg.mode + "\"");

        if (csv_path.has_parent_path())
            std::filesystem::create_directories(csv_path.parent_path());
        {
            std::ofstream os(csv_path, std::ios::binary);
            if (!os) throw std::runtime_error("cannot open " + csv_path.string());
            os << body;
        }

        const double wall_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - t0)
                .count();
        nlohmann::ordered_json meta;
        meta["config"] = nlohmann::ordered_json::parse(emit_config(cfg));
        meta["tool_version"] = kToolVersion;
        meta["wall_ms"] = wall_ms;
        std::ofstream ms(meta_path, std::ios::binary);
        if (!ms) throw std::runtime_error("cannot open " + meta_path.string());
        ms << meta.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::error_code ec;
        std::filesystem::remove(csv_path, ec);
        std::filesystem::remove(meta_path, ec);
        std::cerr << "error: " << e.what() << "\n";
        const bool validation = dynamic_cast<const ConfigError*>(&e) ||
                                dynamic_cast<const std::invalid_argument*>(&e);
        return validation ? 2 : 3;
    }
}

} // namespace cli
