#pragma once

#include "semisep/kernel.hpp"

namespace semisep {

/// Discrete solutions of the two Volterra integral equations attached to a
/// semi-separable kernel:
///   fhat1(x) = f1(x) - alpha int_x^b  H(x,x') fhat1(x') dx'   (backward sweep)
///   fhat2(x) = f2(x) + alpha int_a^x  H(x,x') fhat2(x') dx'   (forward sweep)
struct VolterraSolution {
    Grid grid;
    Complex alpha;
    std::vector<Matrix> fhat1;  // m x n1 per node
    std::vector<Matrix> fhat2;  // m x n2 per node
};

std::vector<Matrix> solve_fhat1(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid);
std::vector<Matrix> solve_fhat2(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid);
VolterraSolution solve_volterra(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid);

/// Sampled fundamental solution U(x, alpha) of U' = alpha A U, built from the
/// Volterra solutions by cumulative quadrature. Block layout:
///   U11 = I_{n1} - alpha int_x^b g1 fhat1     U12 = alpha int_a^x g1 fhat2
///   U21 =          alpha int_x^b g2 fhat1     U22 = I_{n2} - alpha int_a^x g2 fhat2
/// so U11(b*) = I, U22(a*) = I, U21(b*) = 0, U12(a*) = 0 exactly.
struct FundamentalSolution {
    Grid grid;
    Complex alpha;
    int n1 = 0, n2 = 0;
    std::vector<Matrix> U;  // n x n per node

    const Matrix& at_first() const { return U.front(); }
    const Matrix& at_last() const { return U.back(); }
    Matrix U11(int k) const { return U[k].topLeftCorner(n1, n1); }
    Matrix U12(int k) const { return U[k].topRightCorner(n1, n2); }
    Matrix U21(int k) const { return U[k].bottomLeftCorner(n2, n1); }
    Matrix U22(int k) const { return U[k].bottomRightCorner(n2, n2); }
};

FundamentalSolution assemble_U(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid,
                               const std::vector<Matrix>& fhat1,
                               const std::vector<Matrix>& fhat2);

/// Convenience: both sweeps followed by assembly.
FundamentalSolution fundamental_solution(const SemiSeparableKernel& kern, Complex alpha,
                                         const Grid& grid);

/// Verifies (I - alpha H_a)(I + alpha J_a) = I on the grid with
/// J(x,x') = C(x) U(x) U(x')^{-1} B(x'); returns the max entrywise residual.
double volterra_resolvent_check(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid);

/// Emits a resolution warning when the grid cannot resolve oscillations of
/// wavenumber |k|; returns false in that case. Rule: max spacing <= (2pi/|k|)/16.
bool check_oscillation_resolution(const Grid& grid, double wavenumber);

}  // namespace semisep
