#include "fgh.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fgh {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ContinuousModel::validate() const {
    std::string err;
    if (L <= 0.0) err += "L must be positive; ";
    if (n_grid < 3 || n_grid % 2 == 0) err += "n_grid must be odd and >= 3; ";
    if (gamma < 0.0) err += "gamma must be >= 0; ";
    if (omega < 1) err += "omega must be a positive integer; ";
    if (b <= 0.0 || b > 1.0) err += "b must lie in (0, 1]; ";
    if (a < 2 || a % 2 != 0) err += "a must be even and positive; ";
    if (kappa < 0.0) err += "kappa must be >= 0; ";
    if (!err.empty()) throw std::invalid_argument("ContinuousModel: " + err);
}

GridSpec make_grid(const ContinuousModel& model) {
    model.validate();
    GridSpec g;
    g.dx = model.L / (model.n_grid - 1);
    g.dk = 2.0 * kPi / model.L;
    g.tau = (model.n_grid - 1) / 2;
    g.points.resize(model.n_grid);
    for (int n = 0; n < model.n_grid; ++n)
        g.points[n] = -0.5 * model.L + n * g.dx;
    return g;
}

double potential_real(const ContinuousModel& model, double x) {
    const double s = std::sin(model.omega * kPi * x);
    const double bx = std::abs(model.b * x);
    const double confinement = (bx == 0.0) ? 0.0 : std::exp(model.a * std::log(bx));
    return model.gamma * s * s + confinement;
}

cdouble potential_complex(const ContinuousModel& model, double x) {
    return {potential_real(model, x), -model.kappa * x};
}

double kinetic_coefficient(const ContinuousModel& model, int l) {
    const int tau = (model.n_grid - 1) / 2;
    if (l < 1 || l > tau)
        throw std::out_of_range("kinetic_coefficient: l = " + std::to_string(l) +
                                " outside [1, " + std::to_string(tau) + "]");
    const double w = model.hbar * kPi * l / model.L;
    return 2.0 * w * w / model.mass;
}

namespace {

// Kinetic kernel per diagonal offset d = |n - n'|; cos is even in d.
std::vector<double> kinetic_kernel(const ContinuousModel& model) {
    const int np = model.n_grid;
    const int tau = (np - 1) / 2;
    std::vector<double> tl(tau + 1, 0.0);
    for (int l = 1; l <= tau; ++l) tl[l] = kinetic_coefficient(model, l);

    std::vector<double> kernel(np, 0.0);
#pragma omp parallel for schedule(static)
    for (int d = 0; d < np; ++d) {
        double acc = 0.0;
        for (int l = 1; l <= tau; ++l)
            acc += std::cos(2.0 * kPi * l * d / (np - 1)) * tl[l];
        kernel[d] = 2.0 / (np - 1) * acc;
    }
    return kernel;
}

} // namespace

rmat build_real_hamiltonian(const ContinuousModel& model,
                            const std::function<double(double)>* vfun) {
    const GridSpec g = make_grid(model);
    const int np = model.n_grid;
    const std::vector<double> kernel = kinetic_kernel(model);

    rmat h(np, np);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < np; ++n)
        for (int m = 0; m < np; ++m)
            h(n, m) = kernel[std::abs(n - m)];
    for (int n = 0; n < np; ++n)
        h(n, n) += vfun ? (*vfun)(g.points[n]) : potential_real(model, g.points[n]);
    return h;
}

cmat build_hamiltonian(const ContinuousModel& model) {
    const GridSpec g = make_grid(model);
    cmat h = build_real_hamiltonian(model).cast<cdouble>();
    for (int n = 0; n < model.n_grid; ++n)
        h(n, n) += cdouble(0.0, -model.kappa * g.points[n]);
    return h;
}

void dump_matrix(const cmat& m, double dx, std::ostream& os) {
    os << m.rows() << " " << dx << "\n";
    char line[128];
    for (Eigen::Index n = 0; n < m.rows(); ++n)
        for (Eigen::Index np = 0; np < m.cols(); ++np) {
            std::snprintf(line, sizeof line, "%lld %lld %.16e %.16e\n",
                          static_cast<long long>(n), static_cast<long long>(np),
                          m(n, np).real(), m(n, np).imag());
            os << line;
        }
}

namespace ref {

cmat build_hamiltonian(const ContinuousModel& model) {
    const GridSpec g = make_grid(model);
    const int np = model.n_grid;
    const int tau = g.tau;
    cmat h(np, np);
    for (int n = 0; n < np; ++n) {
        for (int m = 0; m < np; ++m) {
            double acc = 0.0;
            for (int l = 1; l <= tau; ++l)
                acc += std::cos(2.0 * kPi * l * (n - m) / (np - 1)) *
                       kinetic_coefficient(model, l);
            h(n, m) = 2.0 / (np - 1) * acc;
        }
        h(n, n) += potential_complex(model, g.points[n]);
    }
    return h;
}

} // namespace ref

} // namespace fgh
