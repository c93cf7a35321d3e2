#include "semisep/volterra.hpp"

#include "semisep/log.hpp"

#include <sstream>

namespace semisep {

// Product trapezoid with an implicit diagonal step. At node x_k the history
// integral is accumulated through the semi-separable split
//   int H(x_k, x') fhat(x') dx' = C(x_k) * int B(x') fhat(x') dx'
// so each sweep is O(N) matrix work; the weight-(h/2) self term is folded
// into a small m x m solve.
std::vector<Matrix> solve_fhat2(const SemiSeparableKernel& kern, Complex alpha,
                                const Grid& grid) {
    const auto s = kern.samples(grid);
    const auto& x = grid.nodes();
    const int N = grid.size();
    const int m = kern.m();
    const Matrix Im = Matrix::Identity(m, m);

    std::vector<Matrix> fh(N);
    fh[0] = s->f2[0];
    Matrix S = Matrix::Zero(kern.n(), kern.n2());
    for (int k = 1; k < N; ++k) {
        const double h = x[k] - x[k - 1];
        const Matrix phi_prev = s->B[k - 1] * fh[k - 1];
        const Matrix rhs = s->f2[k] + alpha * (s->C[k] * (S + (h / 2.0) * phi_prev));
        const Matrix lhs = Im - alpha * (h / 2.0) * (s->C[k] * s->B[k]);
        fh[k] = lhs.partialPivLu().solve(rhs);
        S += (h / 2.0) * (phi_prev + s->B[k] * fh[k]);
    }
    return fh;
}

std::vector<Matrix> solve_fhat1(const SemiSeparableKernel& kern, Complex alpha,
                                const Grid& grid) {
    const auto s = kern.samples(grid);
    const auto& x = grid.nodes();
    const int N = grid.size();
    const int m = kern.m();
    const Matrix Im = Matrix::Identity(m, m);

    std::vector<Matrix> fh(N);
    fh[N - 1] = s->f1[N - 1];
    Matrix S = Matrix::Zero(kern.n(), kern.n1());
    for (int k = N - 2; k >= 0; --k) {
        const double h = x[k + 1] - x[k];
        const Matrix phi_next = s->B[k + 1] * fh[k + 1];
        const Matrix rhs = s->f1[k] - alpha * (s->C[k] * (S + (h / 2.0) * phi_next));
        const Matrix lhs = Im + alpha * (h / 2.0) * (s->C[k] * s->B[k]);
        fh[k] = lhs.partialPivLu().solve(rhs);
        S += (h / 2.0) * (phi_next + s->B[k] * fh[k]);
    }
    return fh;
}

VolterraSolution solve_volterra(const SemiSeparableKernel& kern, Complex alpha,
                                const Grid& grid) {
    return VolterraSolution{grid, alpha, solve_fhat1(kern, alpha, grid),
                            solve_fhat2(kern, alpha, grid)};
}

FundamentalSolution assemble_U(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid,
                               const std::vector<Matrix>& fhat1,
                               const std::vector<Matrix>& fhat2) {
    const auto s = kern.samples(grid);
    const int N = grid.size();
    const int n1 = kern.n1(), n2 = kern.n2();

    std::vector<Matrix> g1f1(N), g2f1(N), g1f2(N), g2f2(N);
    for (int k = 0; k < N; ++k) {
        g1f1[k] = s->g1[k] * fhat1[k];
        g2f1[k] = s->g2[k] * fhat1[k];
        g1f2[k] = s->g1[k] * fhat2[k];
        g2f2[k] = s->g2[k] * fhat2[k];
    }
    const auto L12 = cumulative_trapezoid(grid, g1f2);  // int_a^x g1 fhat2
    const auto L22 = cumulative_trapezoid(grid, g2f2);
    auto R11 = cumulative_trapezoid(grid, g1f1);        // turned into int_x^b below
    auto R21 = cumulative_trapezoid(grid, g2f1);
    const Matrix R11_total = R11.back(), R21_total = R21.back();

    FundamentalSolution out{grid, alpha, n1, n2, {}};
    out.U.resize(N);
    const Matrix I1 = Matrix::Identity(n1, n1);
    const Matrix I2 = Matrix::Identity(n2, n2);
    for (int k = 0; k < N; ++k) {
        Matrix U(n1 + n2, n1 + n2);
        U.topLeftCorner(n1, n1) = I1 - alpha * (R11_total - R11[k]);
        U.topRightCorner(n1, n2) = alpha * L12[k];
        U.bottomLeftCorner(n2, n1) = alpha * (R21_total - R21[k]);
        U.bottomRightCorner(n2, n2) = I2 - alpha * L22[k];
        out.U[k] = std::move(U);
    }
    return out;
}

FundamentalSolution fundamental_solution(const SemiSeparableKernel& kern, Complex alpha,
                                         const Grid& grid) {
    const auto vs = solve_volterra(kern, alpha, grid);
    return assemble_U(kern, alpha, grid, vs.fhat1, vs.fhat2);
}

double volterra_resolvent_check(const SemiSeparableKernel& kern, Complex alpha,
                                const Grid& grid) {
    const auto s = kern.samples(grid);
    const int N = grid.size();
    const int m = kern.m();
    const Eigen::Index dim = static_cast<Eigen::Index>(N) * m;
    if (dim > 6000) throw std::length_error("volterra_resolvent_check: N*m > 6000");

    const auto F = fundamental_solution(kern, alpha, grid);

    // U(x')^{-1} B(x') per node, with a conditioning warning when U degenerates.
    double max_abs_det = 0.0, min_abs_det = kInfinity;
    std::vector<Matrix> UinvB(N);
    for (int j = 0; j < N; ++j) {
        const Eigen::PartialPivLU<Matrix> lu(F.U[j]);
        const double adet = std::abs(lu.determinant());
        max_abs_det = std::max(max_abs_det, adet);
        min_abs_det = std::min(min_abs_det, adet);
        UinvB[j] = lu.solve(s->B[j]);
    }
    if (min_abs_det < 1e-12 * std::max(1.0, max_abs_det)) {
        std::ostringstream os;
        os << "volterra_resolvent_check: U(x) nearly singular (|det| down to " << min_abs_det
           << "); resolvent residual may be unreliable";
        log_warn(os.str());
    }

    const auto& x = grid.nodes();
    // Row-wise local trapezoid weights over [a, x_i].
    Eigen::MatrixXcd MH = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd MJ = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < N; ++i) {
        const Matrix CU = s->C[i] * F.U[i];
        for (int j = 0; j <= i; ++j) {
            double w;
            if (i == 0) {
                w = 0.0;
            } else if (j == 0) {
                w = (x[1] - x[0]) / 2.0;
            } else if (j == i) {
                w = (x[i] - x[i - 1]) / 2.0;
            } else {
                w = (x[j + 1] - x[j - 1]) / 2.0;
            }
            if (w == 0.0) continue;
            MH.block(i * m, j * m, m, m) = w * (s->C[i] * s->B[j]);
            MJ.block(i * m, j * m, m, m) = w * (CU * UinvB[j]);
        }
    }
    const Eigen::MatrixXcd resid =
        (Eigen::MatrixXcd::Identity(dim, dim) - alpha * MH) *
            (Eigen::MatrixXcd::Identity(dim, dim) + alpha * MJ) -
        Eigen::MatrixXcd::Identity(dim, dim);
    return resid.cwiseAbs().maxCoeff();
}

bool check_oscillation_resolution(const Grid& grid, double wavenumber) {
    if (wavenumber <= 0.0) return true;
    const double limit = (2.0 * M_PI / wavenumber) / 16.0;
    if (grid.max_spacing() <= limit) return true;
    std::ostringstream os;
    os << "grid spacing " << grid.max_spacing() << " exceeds oscillation limit " << limit
       << " for wavenumber " << wavenumber;
    log_warn(os.str());
    return false;
}

}  // namespace semisep
