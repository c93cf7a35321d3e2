#pragma once

#include "semisep/kernel.hpp"

namespace semisep {

/// Diagonal sampling rule for the dense discretization. LowerLimit matches
/// the kernel's own convention K(x,x) = f1(x) g1(x); Average uses
/// (f1 g1 + f2 g2)/2, which restores O(h^2) for kernels with a diagonal jump.
enum class DiagonalRule { LowerLimit, Average };

/// Dense Nystrom discretization: block (i,j) = w_i^{1/2} K(x_i, x_j) w_j^{1/2}.
/// Deliberately a different code path from the Volterra route (plain dense LU,
/// no semi-separable structure) so it can serve as an independent oracle.
struct DenseDiscretization {
    Matrix matrix;  // (N*m) x (N*m)
    Grid grid;
    int m = 1;
};

DenseDiscretization discretize(const SemiSeparableKernel& kern, const Grid& grid,
                               DiagonalRule diag = DiagonalRule::LowerLimit);

/// det(I - alpha * matrix) by LU.
Complex oracle_det(const DenseDiscretization& disc, Complex alpha);

/// det(I - alpha * matrix) * exp(alpha * tr(matrix)); the finite-matrix
/// 2-modified determinant.
Complex oracle_det2(const DenseDiscretization& disc, Complex alpha);

}  // namespace semisep
