#pragma once

#include "semisep/determinants.hpp"
#include "semisep/schrodinger.hpp"

namespace semisep {
namespace floquet {

/// Potential restricted to one period [0, omega]. Jump-averaged evaluation and
/// the u,v split follow the same conventions as schrodinger::Potential.
class PeriodicPotential {
public:
    PeriodicPotential(std::function<Complex(double)> V, double omega,
                      std::vector<double> jumps = {});

    static PeriodicPotential cosine(Complex amplitude, double wavenumber, double omega);
    static PeriodicPotential constant(Complex c, double omega);

    Complex value(double x) const;
    Complex u(double x) const;
    double v(double x) const;
    double omega() const { return omega_; }
    const std::vector<double>& breakpoints() const { return jumps_; }
    Grid make_grid(int n) const;

private:
    std::function<Complex(double)> callback_;
    double omega_;
    std::vector<double> jumps_;
};

struct FloquetParams {
    double theta;  // quasi-momentum in [0, 2pi)
    schrodinger::SpectralPoint zp;
};

struct MonodromyResult {
    Eigen::Matrix2cd monodromy;  // fundamental matrix over one period
    Complex delta;               // half the trace
    double wronskian_defect;     // |det - 1|
};

/// Fixed-step RK4 integration of the fundamental system c(z,.), s(z,.) with
/// c(z,0) = s'(z,0) = 1, c'(z,0) = s(z,0) = 0; integration splits at
/// potential breakpoints.
MonodromyResult monodromy(const PeriodicPotential& pot, const schrodinger::SpectralPoint& zp,
                          int steps = 8192);

/// |cos(z^{1/2} omega) - cos(theta)|: distance of z from spec(H0_theta) as
/// seen by the ratio formula's denominator.
double spectral_denominator(const PeriodicPotential& pot, const FloquetParams& params);

/// Semi-separable kernel of -u (H0_theta - z)^{-1} v on (0, omega);
/// m = 1, n1 = n2 = 2, with f1 = f2. Throws when the spectral denominator
/// falls below the guard.
SemiSeparableKernel build_Ktheta_kernel(const PeriodicPotential& pot,
                                        const FloquetParams& params,
                                        double denominator_guard = 1e-8);

struct FloquetSolutions {
    std::vector<Complex> phi_plus, phi_minus;  // forward solutions, value 1 at x = 0
    std::vector<Complex> psi_plus, psi_minus;  // backward solutions, e^{+-i z^{1/2} w} at w
};

FloquetSolutions floquet_solutions(const PeriodicPotential& pot,
                                   const schrodinger::SpectralPoint& zp, const Grid& grid);

struct KthetaReport {
    DeterminantReport det_report;  // endpoint routes on the theta kernel
    Complex det_route;             // canonical det(I - K_theta(z))
    Complex rep_psi;               // psi-based product representation
    Complex rep_phi;               // phi-based product representation
    double route_spread;
    Complex delta_recovered;  // cos(theta) + det * (cos(z^{1/2} w) - cos(theta))
    Complex delta_monodromy;
    double delta_error;
    bool flagged;
};

KthetaReport det_Ktheta(const PeriodicPotential& pot, const FloquetParams& params,
                        const Grid& grid, const Tolerances& tol = {},
                        int monodromy_steps = 8192);

}  // namespace floquet
}  // namespace semisep
