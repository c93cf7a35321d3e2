#include "semisep/floquet.hpp"

#include "semisep/log.hpp"

#include <algorithm>

namespace semisep {
namespace floquet {

namespace {
const Complex kI(0.0, 1.0);
}

PeriodicPotential::PeriodicPotential(std::function<Complex(double)> V, double omega,
                                     std::vector<double> jumps)
    : callback_(std::move(V)), omega_(omega), jumps_(std::move(jumps)) {
    if (!(omega_ > 0.0)) throw std::invalid_argument("PeriodicPotential: omega must be > 0");
    std::sort(jumps_.begin(), jumps_.end());
}

PeriodicPotential PeriodicPotential::cosine(Complex amplitude, double wavenumber, double omega) {
    return PeriodicPotential(
        [amplitude, wavenumber](double x) { return amplitude * std::cos(wavenumber * x); },
        omega);
}

PeriodicPotential PeriodicPotential::constant(Complex c, double omega) {
    return PeriodicPotential([c](double) { return c; }, omega);
}

Complex PeriodicPotential::value(double x) const {
    const double scale = std::max(1.0, std::abs(x));
    for (double j : jumps_) {
        if (std::abs(x - j) <= 1e-11 * scale) {
            const double d = 1e-9 * std::max(1.0, std::abs(j));
            return 0.5 * (callback_(j - d) + callback_(j + d));
        }
    }
    return callback_(x);
}

Complex PeriodicPotential::u(double x) const {
    const Complex V = value(x);
    const double a = std::abs(V);
    if (a == 0.0) return Complex(0, 0);
    return std::sqrt(a) * std::exp(kI * std::arg(V));
}

double PeriodicPotential::v(double x) const { return std::sqrt(std::abs(value(x))); }

Grid PeriodicPotential::make_grid(int n) const {
    return Grid::trapezoid_with_breakpoints(0.0, omega_, n, jumps_);
}

MonodromyResult monodromy(const PeriodicPotential& pot, const schrodinger::SpectralPoint& zp,
                          int steps) {
    if (steps < 8) throw std::invalid_argument("monodromy: too few RK4 steps");
    const Complex z = zp.z;

    // integration pieces split at breakpoints; V evaluated one-sidedly inside
    std::vector<double> edges{0.0, pot.omega()};
    for (double j : pot.breakpoints())
        if (j > 0.0 && j < pot.omega()) edges.push_back(j);
    std::sort(edges.begin(), edges.end());

    Eigen::Matrix2cd Phi = Eigen::Matrix2cd::Identity();
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double lo = edges[s], hi = edges[s + 1];
        const int n = std::max(2, static_cast<int>(std::lround(steps * (hi - lo) / pot.omega())));
        const double h = (hi - lo) / n;
        const double nudge = 1e-9 * std::max(1.0, hi - lo);
        auto Vin = [&](double x) {
            return pot.value(std::min(std::max(x, lo + nudge), hi - nudge));
        };
        auto deriv = [&](double x, const Eigen::Matrix2cd& Y) {
            Eigen::Matrix2cd M;
            M << 0.0, 1.0, Vin(x) - z, 0.0;
            return Eigen::Matrix2cd(M * Y);
        };
        double x = lo;
        for (int k = 0; k < n; ++k) {
            const Eigen::Matrix2cd k1 = deriv(x, Phi);
            const Eigen::Matrix2cd k2 = deriv(x + h / 2, Phi + (h / 2) * k1);
            const Eigen::Matrix2cd k3 = deriv(x + h / 2, Phi + (h / 2) * k2);
            const Eigen::Matrix2cd k4 = deriv(x + h, Phi + h * k3);
            Phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            x += h;
        }
    }
    MonodromyResult out;
    out.monodromy = Phi;
    out.delta = 0.5 * (Phi(0, 0) + Phi(1, 1));
    out.wronskian_defect = std::abs(Phi.determinant() - Complex(1, 0));
    return out;
}

double spectral_denominator(const PeriodicPotential& pot, const FloquetParams& params) {
    return std::abs(std::cos(params.zp.sqrt_z * pot.omega()) - std::cos(params.theta));
}

SemiSeparableKernel build_Ktheta_kernel(const PeriodicPotential& pot,
                                        const FloquetParams& params, double denominator_guard) {
    if (spectral_denominator(pot, params) <= denominator_guard)
        throw std::domain_error(
            "build_Ktheta_kernel: z collides with spec(H0_theta) (denominator guard)");
    const Complex zs = params.zp.sqrt_z;
    const double w = pot.omega();
    const Complex Ep = std::exp(kI * params.theta) * std::exp(-kI * zs * w);
    const Complex Em = std::exp(-kI * params.theta) * std::exp(-kI * zs * w);
    const Complex Dp = Ep - 1.0, Dm = Em - 1.0;
    const Complex c = kI / (2.0 * zs);

    // f1 = f2 = f; the degeneracy is kept as written, one evaluator shared.
    MatrixFn f = [pot, zs](double x) {
        Matrix v(1, 2);
        v(0, 0) = -pot.u(x) * std::exp(kI * zs * x);
        v(0, 1) = -pot.u(x) * std::exp(-kI * zs * x);
        return v;
    };
    MatrixFn g1 = [pot, zs, c, Ep, Dp, Dm](double x) {
        Matrix v(2, 1);
        v(0, 0) = c * pot.v(x) * Ep * std::exp(-kI * zs * x) / Dp;
        v(1, 0) = c * pot.v(x) * std::exp(kI * zs * x) / Dm;
        return v;
    };
    MatrixFn g2 = [pot, zs, c, Em, Dp, Dm](double x) {
        Matrix v(2, 1);
        v(0, 0) = c * pot.v(x) * std::exp(-kI * zs * x) / Dp;
        v(1, 0) = c * pot.v(x) * Em * std::exp(kI * zs * x) / Dm;
        return v;
    };
    return SemiSeparableKernel(1, 2, 2, f, g1, f, g2, Interval::finite(0.0, w));
}

FloquetSolutions floquet_solutions(const PeriodicPotential& pot,
                                   const schrodinger::SpectralPoint& zp, const Grid& grid) {
    check_oscillation_resolution(grid, std::abs(zp.sqrt_z));
    const Complex zs = zp.sqrt_z;
    std::vector<Complex> V(grid.size());
    for (int k = 0; k < grid.size(); ++k) V[k] = pot.value(grid.nodes()[k]);

    using schrodinger::detail::sweep_backward;
    using schrodinger::detail::sweep_forward;
    FloquetSolutions out;
    out.phi_plus = sweep_forward(grid, zs, V, [zs](double x) { return std::exp(kI * zs * x); }).y;
    out.phi_minus =
        sweep_forward(grid, zs, V, [zs](double x) { return std::exp(-kI * zs * x); }).y;
    out.psi_plus = sweep_backward(grid, zs, V, [zs](double x) { return std::exp(kI * zs * x); }).y;
    out.psi_minus =
        sweep_backward(grid, zs, V, [zs](double x) { return std::exp(-kI * zs * x); }).y;
    return out;
}

KthetaReport det_Ktheta(const PeriodicPotential& pot, const FloquetParams& params,
                        const Grid& grid, const Tolerances& tol, int monodromy_steps) {
    const Complex zs = params.zp.sqrt_z;
    const double w = pot.omega();
    const Complex Ep = std::exp(kI * params.theta) * std::exp(-kI * zs * w);
    const Complex Em = std::exp(-kI * params.theta) * std::exp(-kI * zs * w);
    const Complex Dp = Ep - 1.0, Dm = Em - 1.0;
    const Complex c = kI / (2.0 * zs);

    KthetaReport rep;
    rep.det_report = fredholm_det(build_Ktheta_kernel(pot, params), Complex(1, 0), grid, tol);
    rep.det_route = rep.det_report.det();

    const auto sol = floquet_solutions(pot, params.zp, grid);
    auto moment = [&](const std::vector<Complex>& y, int sign) {
        Complex acc(0, 0);
        for (int k = 0; k < grid.size(); ++k) {
            const double xk = grid.nodes()[k];
            acc += grid.weights()[k] * std::exp(double(sign) * kI * zs * xk) * pot.value(xk) *
                   y[k];
        }
        return acc;
    };

    rep.rep_psi = (1.0 + c * (Ep / Dp) * moment(sol.psi_plus, -1)) *
                      (1.0 + c * (1.0 / Dm) * moment(sol.psi_minus, +1)) +
                  (1.0 / (4.0 * params.zp.z)) * (Ep / (Dp * Dm)) * moment(sol.psi_plus, +1) *
                      moment(sol.psi_minus, -1);
    rep.rep_phi = (1.0 + c * (1.0 / Dp) * moment(sol.phi_plus, -1)) *
                      (1.0 + c * (Em / Dm) * moment(sol.phi_minus, +1)) +
                  (1.0 / (4.0 * params.zp.z)) * (Em / (Dp * Dm)) * moment(sol.phi_plus, +1) *
                      moment(sol.phi_minus, -1);

    const double scale = std::max(1.0, std::abs(rep.det_route));
    rep.route_spread = std::max({std::abs(rep.det_route - rep.rep_psi),
                                 std::abs(rep.det_route - rep.rep_phi),
                                 std::abs(rep.rep_psi - rep.rep_phi)}) /
                       scale;

    const Complex denom = std::cos(zs * w) - std::cos(params.theta);
    rep.delta_recovered = std::cos(params.theta) + rep.det_route * denom;
    rep.delta_monodromy = monodromy(pot, params.zp, monodromy_steps).delta;
    rep.delta_error = std::abs(rep.delta_recovered - rep.delta_monodromy) /
                      std::max(1.0, std::abs(rep.delta_monodromy));

    rep.flagged = rep.route_spread > tol.route * 10.0 || rep.delta_error > tol.route * 10.0 ||
                  rep.det_report.flagged;
    if (rep.flagged) log_warn("det_Ktheta: route spread or discriminant mismatch beyond tolerance");
    return rep;
}

}  // namespace floquet
}  // namespace semisep
