#pragma once

#include "semisep/determinants.hpp"

namespace semisep {
namespace schrodinger {

enum class Side { HalfLine, FullLine };

/// Spectral parameter z with its principal square root, branch Im(z^{1/2}) >= 0.
/// On the positive real axis this is the limit from above. z = 0 is excluded
/// (the free Green's function carries z^{-1/2} factors); |z| below z_min is
/// rejected.
struct SpectralPoint {
    Complex z;
    Complex sqrt_z;

    explicit SpectralPoint(Complex z_value, double z_min = 1e-6);
};

/// Scalar potential with compact-support metadata. Evaluation averages the
/// one-sided limits at registered jump abscissae, and the u,v factorization
/// V = u v (u = |V|^{1/2} e^{i arg V}, v = |V|^{1/2}) is applied to the
/// averaged value, which keeps every u(x)v(x)-paired quadrature second order
/// across potential discontinuities.
class Potential {
public:
    Potential(std::function<Complex(double)> V, double support_bound, Side side,
              std::vector<double> jumps = {});

    static Potential square_well(Complex depth, double x0, double x1, Side side);
    static Potential zero(Side side);
    /// Piecewise-linear interpolant of tabulated samples; zero outside the table.
    static Potential tabulated(std::vector<double> xs, std::vector<Complex> values, Side side);

    /// Integrable-tail mode: scans |V| outward in doubling windows and picks
    /// the truncation radius R where the remaining tail integral estimate
    /// falls below tail_tol. Intended for decaying (not compact) potentials.
    static Potential with_truncated_tail(std::function<Complex(double)> V, Side side,
                                         double tail_tol = 1e-10, double max_radius = 128.0);

    Complex value(double x) const;  // jump-averaged
    Complex u(double x) const;
    double v(double x) const;
    Complex raw(double x) const { return callback_(x); }

    double support_bound() const { return support_bound_; }
    Side side() const { return side_; }
    const std::vector<double>& breakpoints() const { return jumps_; }

    /// Default computational domain: [0, R+1] on the half-line,
    /// [-R-1, R+1] on the line (the kernel factors vanish beyond the support).
    double domain_lo() const;
    double domain_hi() const;

    /// Composite-trapezoid grid on the default (or given) domain with nodes
    /// on every potential breakpoint.
    Grid make_grid(int n) const;
    Grid make_grid(int n, double lo, double hi) const;

private:
    std::function<Complex(double)> callback_;
    double support_bound_;
    Side side_;
    std::vector<double> jumps_;
};

struct SolutionSamples {
    std::vector<Complex> y;   // solution on the grid
    std::vector<Complex> dy;  // x-derivative on the grid
};

/// Jost solution f(z,x) of the half-line equation, normalized
/// f(z,x) = e^{i z^{1/2} x} past the support of V (backward Volterra sweep).
SolutionSamples jost_solution_halfline(const Potential& pot, const SpectralPoint& zp,
                                       const Grid& grid);

/// Regular solution phi(z,x) with phi(z,0) = 0, phi'(z,0) = 1 (forward sweep).
SolutionSamples regular_solution_halfline(const Potential& pot, const SpectralPoint& zp,
                                          const Grid& grid);

struct JostFunctionReport {
    Complex value;         // f(z,0)
    Complex integral_f;    // 1 + z^{-1/2} int sin(z^{1/2}x) V f dx
    Complex integral_phi;  // 1 + int e^{i z^{1/2} x} V phi dx
    double route_spread;
    bool flagged;
};

JostFunctionReport jost_function_halfline(const Potential& pot, const SpectralPoint& zp,
                                          const Grid& grid, const Tolerances& tol = {});

/// Semi-separable kernel of -u (H0_+ - z)^{-1} v on (0, infinity),
/// m = n1 = n2 = 1.
SemiSeparableKernel build_halfline_kernel(const Potential& pot, const SpectralPoint& zp);

/// Jost solutions f±(z,x) on the line together with their derivatives.
struct LineSolutions {
    std::vector<Complex> f_plus, df_plus;
    std::vector<Complex> f_minus, df_minus;
};
LineSolutions line_jost_solutions(const Potential& pot, const SpectralPoint& zp,
                                  const Grid& grid);

/// Wronskian of two sampled solutions at node k.
Complex wronskian(const SolutionSamples& a, const SolutionSamples& b, int k);

struct LineJostReport {
    Complex wronskian;       // W(f-, f+) / (2 i z^{1/2})
    Complex integral_plus;   // 1 - (2 i z^{1/2})^{-1} int e^{-i z^{1/2} x} V f+ dx
    Complex integral_minus;  // same with e^{+i z^{1/2} x} and f-
    Complex det_route;       // det(I - K(z)) via the semi-separable route
    double route_spread;
    bool flagged;
};

LineJostReport jost_function_line(const Potential& pot, const SpectralPoint& zp,
                                  const Grid& grid, const Tolerances& tol = {});

/// Semi-separable kernel of -u (H0 - z)^{-1} v on the line, m = n1 = n2 = 1.
SemiSeparableKernel build_line_kernel(const Potential& pot, const SpectralPoint& zp);

/// 2x2 first-order-system kernel (m = 2, n1 = n2 = 1) whose 2-modified
/// determinant matches the scalar line problem.
SemiSeparableKernel build_system_kernel(const Potential& pot, const SpectralPoint& zp);

struct SystemDet2Report {
    Complex det2;               // det2(I - Ktilde) via the U route
    Complex jost_identity_rhs;  // F(z) exp(-i int V / (2 z^{1/2}))
    Complex det2_scalar;        // det2(I - K) of the scalar line kernel
    double max_identity_error;
    bool flagged;
};

SystemDet2Report first_order_system_det2(const Potential& pot, const SpectralPoint& zp,
                                         const Grid& grid, const Tolerances& tol = {});

/// Max-abs residual of the similarity reduction of the first-order system
/// matrix at x: T^{-1} [[0,1],[V-z,0]] T vs the diagonalized form.
double system_reduction_residual(const Potential& pot, const SpectralPoint& zp, double x);

namespace detail {

/// Shared scalar Volterra sweeps with kernel g0(z,x,x') V(x'),
/// g0 = z^{-1/2} sin(z^{1/2}(x-x')). Forward solves
/// y = inhom + int_{x0}^x g0 V y; backward solves y = inhom - int_x^{x1} g0 V y.
/// int_cos[k], int_sin[k] hold the cumulative moments int cos(z^{1/2}x')V y
/// and int sin(z^{1/2}x')V y from the sweep origin through node k.
struct SweepResult {
    std::vector<Complex> y;
    std::vector<Complex> int_cos;
    std::vector<Complex> int_sin;
};

SweepResult sweep_forward(const Grid& grid, Complex sqrt_z, const std::vector<Complex>& V,
                          const std::function<Complex(double)>& inhom);
SweepResult sweep_backward(const Grid& grid, Complex sqrt_z, const std::vector<Complex>& V,
                           const std::function<Complex(double)>& inhom);

}  // namespace detail

}  // namespace schrodinger
}  // namespace semisep
