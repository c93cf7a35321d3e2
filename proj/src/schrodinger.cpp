#include "semisep/schrodinger.hpp"

#include "semisep/log.hpp"

#include <algorithm>

namespace semisep {
namespace schrodinger {

namespace {
const Complex kI(0.0, 1.0);
}

SpectralPoint::SpectralPoint(Complex z_value, double z_min) : z(z_value) {
    if (std::abs(z) < z_min)
        throw std::domain_error("SpectralPoint: |z| below the z_min guard (z=0 is excluded)");
    sqrt_z = std::sqrt(z);
    if (sqrt_z.imag() < 0.0) sqrt_z = -sqrt_z;
}

Potential::Potential(std::function<Complex(double)> V, double support_bound, Side side,
                     std::vector<double> jumps)
    : callback_(std::move(V)), support_bound_(support_bound), side_(side),
      jumps_(std::move(jumps)) {
    if (support_bound_ < 0.0) throw std::invalid_argument("Potential: negative support bound");
    std::sort(jumps_.begin(), jumps_.end());
}

Potential Potential::square_well(Complex depth, double x0, double x1, Side side) {
    if (!(x0 < x1)) throw std::invalid_argument("square_well: need x0 < x1");
    auto fn = [depth, x0, x1](double x) {
        return (x > x0 && x < x1) ? depth : Complex(0.0, 0.0);
    };
    const double bound = std::max(std::abs(x0), std::abs(x1));
    return Potential(fn, bound, side, {x0, x1});
}

Potential Potential::zero(Side side) {
    return Potential([](double) { return Complex(0.0, 0.0); }, 0.0, side, {});
}

Potential Potential::tabulated(std::vector<double> xs, std::vector<Complex> values, Side side) {
    if (xs.size() != values.size() || xs.size() < 2)
        throw std::invalid_argument("tabulated: need matching x/V samples, at least two");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw std::invalid_argument("tabulated: abscissae must be strictly increasing");
    const double bound = std::max(std::abs(xs.front()), std::abs(xs.back()));
    // nonzero boundary samples make the zero extension jump at the table edges
    std::vector<double> jumps;
    if (std::abs(values.front()) > 0.0) jumps.push_back(xs.front());
    if (std::abs(values.back()) > 0.0) jumps.push_back(xs.back());
    auto fn = [xs = std::move(xs), values = std::move(values)](double x) -> Complex {
        if (x <= xs.front() || x >= xs.back()) {
            // zero outside; table endpoints themselves interpolate
            if (x < xs.front() || x > xs.back()) return Complex(0.0, 0.0);
        }
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t hi = std::min<std::size_t>(it - xs.begin(), xs.size() - 1);
        const std::size_t lo = hi == 0 ? 0 : hi - 1;
        if (hi == lo) return values[lo];
        const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return values[lo] + t * (values[hi] - values[lo]);
    };
    return Potential(fn, bound, side, std::move(jumps));
}

Potential Potential::with_truncated_tail(std::function<Complex(double)> V, Side side,
                                         double tail_tol, double max_radius) {
    // window integrals of |V| over [R, 2R] by 64-point trapezoid; stop once a
    // window and its geometric continuation estimate drop below the tolerance
    auto window = [&V](double lo, double hi) {
        const int n = 64;
        const double h = (hi - lo) / n;
        double acc = 0.5 * (std::abs(V(lo)) + std::abs(V(hi)));
        for (int k = 1; k < n; ++k) acc += std::abs(V(lo + k * h));
        return acc * h;
    };
    double R = 1.0;
    double prev = window(0.0, 1.0);
    while (R < max_radius) {
        const double cur = window(R, 2.0 * R);
        if (cur < tail_tol / 2.0 && cur < prev) {
            // geometric-decay estimate of everything past 2R
            const double ratio = prev > 0.0 ? std::min(0.9, cur / prev) : 0.0;
            if (cur * ratio / std::max(1e-300, 1.0 - ratio) < tail_tol / 2.0) break;
        }
        prev = cur;
        R *= 2.0;
    }
    const double bound = std::min(2.0 * R, max_radius);
    if (bound >= max_radius)
        log_warn("with_truncated_tail: tail tolerance not reached before max_radius");
    return Potential(std::move(V), bound, side, {});
}

Complex Potential::value(double x) const {
    const double scale = std::max(1.0, std::abs(x));
    for (double j : jumps_) {
        if (std::abs(x - j) <= 1e-11 * scale) {
            const double d = 1e-9 * std::max(1.0, std::abs(j));
            return 0.5 * (callback_(j - d) + callback_(j + d));
        }
    }
    return callback_(x);
}

Complex Potential::u(double x) const {
    const Complex V = value(x);
    const double a = std::abs(V);
    if (a == 0.0) return Complex(0.0, 0.0);
    return std::sqrt(a) * std::exp(kI * std::arg(V));
}

double Potential::v(double x) const { return std::sqrt(std::abs(value(x))); }

double Potential::domain_lo() const {
    return side_ == Side::HalfLine ? 0.0 : -(support_bound_ + 1.0);
}

double Potential::domain_hi() const { return support_bound_ + 1.0; }

Grid Potential::make_grid(int n) const { return make_grid(n, domain_lo(), domain_hi()); }

Grid Potential::make_grid(int n, double lo, double hi) const {
    return Grid::trapezoid_with_breakpoints(lo, hi, n, jumps_);
}

namespace detail {

// Self term vanishes identically (g0(x,x) = 0), so the update is explicit;
// the node's own contribution still enters the stored moments.
SweepResult sweep_forward(const Grid& grid, Complex zs, const std::vector<Complex>& V,
                          const std::function<Complex(double)>& inhom) {
    const auto& x = grid.nodes();
    const int N = grid.size();
    SweepResult r;
    r.y.resize(N);
    r.int_cos.assign(N, Complex(0, 0));
    r.int_sin.assign(N, Complex(0, 0));
    r.y[0] = inhom(x[0]);
    Complex IC(0, 0), IS(0, 0);
    Complex c_prev = std::cos(zs * x[0]) * V[0] * r.y[0];
    Complex s_prev = std::sin(zs * x[0]) * V[0] * r.y[0];
    for (int k = 1; k < N; ++k) {
        const double h = x[k] - x[k - 1];
        const Complex pC = IC + (h / 2.0) * c_prev;
        const Complex pS = IS + (h / 2.0) * s_prev;
        const Complex ck = std::cos(zs * x[k]);
        const Complex sk = std::sin(zs * x[k]);
        r.y[k] = inhom(x[k]) + (sk * pC - ck * pS) / zs;
        c_prev = ck * V[k] * r.y[k];
        s_prev = sk * V[k] * r.y[k];
        IC = pC + (h / 2.0) * c_prev;
        IS = pS + (h / 2.0) * s_prev;
        r.int_cos[k] = IC;
        r.int_sin[k] = IS;
    }
    return r;
}

SweepResult sweep_backward(const Grid& grid, Complex zs, const std::vector<Complex>& V,
                           const std::function<Complex(double)>& inhom) {
    const auto& x = grid.nodes();
    const int N = grid.size();
    SweepResult r;
    r.y.resize(N);
    r.int_cos.assign(N, Complex(0, 0));
    r.int_sin.assign(N, Complex(0, 0));
    r.y[N - 1] = inhom(x[N - 1]);
    Complex IC(0, 0), IS(0, 0);
    Complex c_prev = std::cos(zs * x[N - 1]) * V[N - 1] * r.y[N - 1];
    Complex s_prev = std::sin(zs * x[N - 1]) * V[N - 1] * r.y[N - 1];
    for (int k = N - 2; k >= 0; --k) {
        const double h = x[k + 1] - x[k];
        const Complex pC = IC + (h / 2.0) * c_prev;
        const Complex pS = IS + (h / 2.0) * s_prev;
        const Complex ck = std::cos(zs * x[k]);
        const Complex sk = std::sin(zs * x[k]);
        r.y[k] = inhom(x[k]) - (sk * pC - ck * pS) / zs;
        c_prev = ck * V[k] * r.y[k];
        s_prev = sk * V[k] * r.y[k];
        IC = pC + (h / 2.0) * c_prev;
        IS = pS + (h / 2.0) * s_prev;
        r.int_cos[k] = IC;
        r.int_sin[k] = IS;
    }
    return r;
}

}  // namespace detail

namespace {

std::vector<Complex> sample_potential(const Potential& pot, const Grid& grid) {
    std::vector<Complex> V(grid.size());
    for (int k = 0; k < grid.size(); ++k) V[k] = pot.value(grid.nodes()[k]);
    return V;
}

void warn_resolution(const Grid& grid, const SpectralPoint& zp) {
    check_oscillation_resolution(grid, std::abs(zp.sqrt_z));
}

}  // namespace

SolutionSamples jost_solution_halfline(const Potential& pot, const SpectralPoint& zp,
                                       const Grid& grid) {
    if (pot.side() != Side::HalfLine)
        throw std::invalid_argument("jost_solution_halfline: half-line potential required");
    warn_resolution(grid, zp);
    const Complex zs = zp.sqrt_z;
    const auto V = sample_potential(pot, grid);
    const auto sw = detail::sweep_backward(grid, zs, V,
                                           [zs](double x) { return std::exp(kI * zs * x); });
    SolutionSamples out;
    out.y = sw.y;
    out.dy.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const double xk = grid.nodes()[k];
        out.dy[k] = kI * zs * std::exp(kI * zs * xk) -
                    (std::cos(zs * xk) * sw.int_cos[k] + std::sin(zs * xk) * sw.int_sin[k]);
    }
    return out;
}

SolutionSamples regular_solution_halfline(const Potential& pot, const SpectralPoint& zp,
                                          const Grid& grid) {
    if (pot.side() != Side::HalfLine)
        throw std::invalid_argument("regular_solution_halfline: half-line potential required");
    warn_resolution(grid, zp);
    const Complex zs = zp.sqrt_z;
    const auto V = sample_potential(pot, grid);
    const auto sw = detail::sweep_forward(grid, zs, V,
                                          [zs](double x) { return std::sin(zs * x) / zs; });
    SolutionSamples out;
    out.y = sw.y;
    out.dy.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const double xk = grid.nodes()[k];
        out.dy[k] = std::cos(zs * xk) +
                    (std::cos(zs * xk) * sw.int_cos[k] + std::sin(zs * xk) * sw.int_sin[k]);
    }
    return out;
}

JostFunctionReport jost_function_halfline(const Potential& pot, const SpectralPoint& zp,
                                          const Grid& grid, const Tolerances& tol) {
    const Complex zs = zp.sqrt_z;
    const auto V = sample_potential(pot, grid);
    const auto f = jost_solution_halfline(pot, zp, grid);
    const auto phi = regular_solution_halfline(pot, zp, grid);

    Complex int_f(0, 0), int_phi(0, 0);
    for (int k = 0; k < grid.size(); ++k) {
        const double xk = grid.nodes()[k];
        const double w = grid.weights()[k];
        int_f += w * std::sin(zs * xk) * V[k] * f.y[k];
        int_phi += w * std::exp(kI * zs * xk) * V[k] * phi.y[k];
    }
    JostFunctionReport rep;
    rep.value = f.y[grid.nearest_node(0.0)];
    rep.integral_f = 1.0 + int_f / zs;
    rep.integral_phi = 1.0 + int_phi;
    const double scale = std::max(1.0, std::abs(rep.value));
    rep.route_spread = std::max(std::abs(rep.value - rep.integral_f),
                                std::abs(rep.value - rep.integral_phi)) /
                       scale;
    rep.flagged = rep.route_spread > tol.route;
    if (rep.flagged) log_warn("jost_function_halfline: representation routes disagree");
    return rep;
}

SemiSeparableKernel build_halfline_kernel(const Potential& pot, const SpectralPoint& zp) {
    if (pot.side() != Side::HalfLine)
        throw std::invalid_argument("build_halfline_kernel: half-line potential required");
    const Complex zs = zp.sqrt_z;
    const Interval iv = Interval::truncated(0.0, kInfinity, 0.0, pot.domain_hi());
    return make_scalar_kernel(
        [pot, zs](double x) { return -pot.u(x) * std::exp(kI * zs * x); },
        [pot, zs](double x) { return pot.v(x) * std::sin(zs * x) / zs; },
        [pot, zs](double x) { return -pot.u(x) * std::sin(zs * x) / zs; },
        [pot, zs](double x) { return pot.v(x) * std::exp(kI * zs * x); }, iv);
}

LineSolutions line_jost_solutions(const Potential& pot, const SpectralPoint& zp,
                                  const Grid& grid) {
    if (pot.side() != Side::FullLine)
        throw std::invalid_argument("line_jost_solutions: full-line potential required");
    warn_resolution(grid, zp);
    const Complex zs = zp.sqrt_z;
    const auto V = sample_potential(pot, grid);
    const auto swp = detail::sweep_backward(grid, zs, V,
                                            [zs](double x) { return std::exp(kI * zs * x); });
    const auto swm = detail::sweep_forward(grid, zs, V,
                                           [zs](double x) { return std::exp(-kI * zs * x); });
    LineSolutions out;
    out.f_plus = swp.y;
    out.f_minus = swm.y;
    out.df_plus.resize(grid.size());
    out.df_minus.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
        const double xk = grid.nodes()[k];
        const Complex ck = std::cos(zs * xk), sk = std::sin(zs * xk);
        out.df_plus[k] =
            kI * zs * std::exp(kI * zs * xk) - (ck * swp.int_cos[k] + sk * swp.int_sin[k]);
        out.df_minus[k] =
            -kI * zs * std::exp(-kI * zs * xk) + (ck * swm.int_cos[k] + sk * swm.int_sin[k]);
    }
    return out;
}

Complex wronskian(const SolutionSamples& a, const SolutionSamples& b, int k) {
    return a.y[k] * b.dy[k] - a.dy[k] * b.y[k];
}

SemiSeparableKernel build_line_kernel(const Potential& pot, const SpectralPoint& zp) {
    if (pot.side() != Side::FullLine)
        throw std::invalid_argument("build_line_kernel: full-line potential required");
    const Complex zs = zp.sqrt_z;
    const Interval iv =
        Interval::truncated(-kInfinity, kInfinity, pot.domain_lo(), pot.domain_hi());
    const Complex c = kI / (2.0 * zs);
    return make_scalar_kernel(
        [pot, zs](double x) { return -pot.u(x) * std::exp(kI * zs * x); },
        [pot, zs, c](double x) { return c * pot.v(x) * std::exp(-kI * zs * x); },
        [pot, zs](double x) { return -pot.u(x) * std::exp(-kI * zs * x); },
        [pot, zs, c](double x) { return c * pot.v(x) * std::exp(kI * zs * x); }, iv);
}

LineJostReport jost_function_line(const Potential& pot, const SpectralPoint& zp,
                                  const Grid& grid, const Tolerances& tol) {
    const Complex zs = zp.sqrt_z;
    const auto V = sample_potential(pot, grid);
    const auto sol = line_jost_solutions(pot, zp, grid);

    const int k0 = grid.nearest_node(0.0);
    const Complex W = sol.f_minus[k0] * sol.df_plus[k0] - sol.df_minus[k0] * sol.f_plus[k0];

    Complex int_p(0, 0), int_m(0, 0);
    for (int k = 0; k < grid.size(); ++k) {
        const double xk = grid.nodes()[k];
        const double w = grid.weights()[k];
        int_p += w * std::exp(-kI * zs * xk) * V[k] * sol.f_plus[k];
        int_m += w * std::exp(kI * zs * xk) * V[k] * sol.f_minus[k];
    }

    LineJostReport rep;
    rep.wronskian = W / (2.0 * kI * zs);
    rep.integral_plus = 1.0 - int_p / (2.0 * kI * zs);
    rep.integral_minus = 1.0 - int_m / (2.0 * kI * zs);
    rep.det_route = fredholm_det(build_line_kernel(pot, zp), Complex(1.0, 0.0), grid, tol).det();
    const double scale = std::max(1.0, std::abs(rep.wronskian));
    rep.route_spread = std::max({std::abs(rep.wronskian - rep.integral_plus),
                                 std::abs(rep.wronskian - rep.integral_minus),
                                 std::abs(rep.wronskian - rep.det_route)}) /
                       scale;
    rep.flagged = rep.route_spread > tol.route * 10.0;
    if (rep.flagged) log_warn("jost_function_line: routes disagree");
    return rep;
}

SemiSeparableKernel build_system_kernel(const Potential& pot, const SpectralPoint& zp) {
    if (pot.side() != Side::FullLine)
        throw std::invalid_argument("build_system_kernel: full-line potential required");
    const Complex zs = zp.sqrt_z;
    const Interval iv =
        Interval::truncated(-kInfinity, kInfinity, pot.domain_lo(), pot.domain_hi());
    const Complex c = kI / (2.0 * zs);
    auto f1 = [pot, zs](double x) {
        Matrix v(2, 1);
        const Complex e = std::exp(kI * zs * x);
        v(0, 0) = -pot.u(x) * e;
        v(1, 0) = -pot.u(x) * kI * zs * e;
        return v;
    };
    auto g1 = [pot, zs, c](double x) {
        Matrix v(1, 2);
        v(0, 0) = c * pot.v(x) * std::exp(-kI * zs * x);
        v(0, 1) = Complex(0, 0);
        return v;
    };
    auto f2 = [pot, zs](double x) {
        Matrix v(2, 1);
        const Complex e = std::exp(-kI * zs * x);
        v(0, 0) = -pot.u(x) * e;
        v(1, 0) = pot.u(x) * kI * zs * e;
        return v;
    };
    auto g2 = [pot, zs, c](double x) {
        Matrix v(1, 2);
        v(0, 0) = c * pot.v(x) * std::exp(kI * zs * x);
        v(0, 1) = Complex(0, 0);
        return v;
    };
    return SemiSeparableKernel(2, 1, 1, f1, g1, f2, g2, iv);
}

SystemDet2Report first_order_system_det2(const Potential& pot, const SpectralPoint& zp,
                                         const Grid& grid, const Tolerances& tol) {
    const Complex zs = zp.sqrt_z;
    const auto system_rep = fredholm_det2(build_system_kernel(pot, zp), Complex(1, 0), grid, tol);
    const auto scalar_rep = fredholm_det2(build_line_kernel(pot, zp), Complex(1, 0), grid, tol);
    const auto jost = jost_function_line(pot, zp, grid, tol);

    Complex intV(0, 0);
    for (int k = 0; k < grid.size(); ++k)
        intV += grid.weights()[k] * pot.value(grid.nodes()[k]);

    SystemDet2Report rep;
    rep.det2 = system_rep.det2();
    rep.jost_identity_rhs = jost.wronskian * std::exp(-kI * intV / (2.0 * zs));
    rep.det2_scalar = scalar_rep.det2();
    const double scale = std::max(1.0, std::abs(rep.det2));
    rep.max_identity_error = std::max(std::abs(rep.det2 - rep.jost_identity_rhs),
                                      std::abs(rep.det2 - rep.det2_scalar)) /
                             scale;
    rep.flagged = rep.max_identity_error > tol.route * 10.0 || system_rep.flagged;
    if (rep.flagged) log_warn("first_order_system_det2: identity violated beyond tolerance");
    return rep;
}

double system_reduction_residual(const Potential& pot, const SpectralPoint& zp, double x) {
    const Complex zs = zp.sqrt_z;
    const Complex V = pot.value(x);
    Eigen::Matrix2cd T;
    T << 1.0, 1.0, kI * zs, -kI * zs;
    Eigen::Matrix2cd M;
    M << 0.0, 1.0, V - zp.z, 0.0;
    Eigen::Matrix2cd diag;
    diag << kI * zs, 0.0, 0.0, -kI * zs;
    Eigen::Matrix2cd rank1;
    rank1 << 1.0, 1.0, -1.0, -1.0;
    const Eigen::Matrix2cd lhs = T.inverse() * M * T;
    const Eigen::Matrix2cd rhs = diag - (kI / (2.0 * zs)) * V * rank1;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace schrodinger
}  // namespace semisep
