#include "semisep/nystrom.hpp"

namespace semisep {

DenseDiscretization discretize(const SemiSeparableKernel& kern, const Grid& grid,
                               DiagonalRule diag) {
    const int N = grid.size();
    const int m = kern.m();
    const Eigen::Index dim = static_cast<Eigen::Index>(N) * m;
    if (dim > 6000) throw std::length_error("discretize: N*m exceeds the 6000 size guard");

    const auto s = kern.samples(grid);
    std::vector<double> sqw(N);
    for (int k = 0; k < N; ++k) sqw[k] = std::sqrt(grid.weights()[k]);

    Matrix M(dim, dim);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            Matrix block;
            if (j < i) {
                block = s->f1[i] * s->g1[j];
            } else if (j > i) {
                block = s->f2[i] * s->g2[j];
            } else if (diag == DiagonalRule::LowerLimit) {
                block = s->f1[i] * s->g1[i];
            } else {
                block = 0.5 * (s->f1[i] * s->g1[i] + s->f2[i] * s->g2[i]);
            }
            M.block(i * m, j * m, m, m) = (sqw[i] * sqw[j]) * block;
        }
    }
    if (!all_finite(M)) throw std::runtime_error("discretize: non-finite kernel samples");
    return DenseDiscretization{std::move(M), grid, m};
}

Complex oracle_det(const DenseDiscretization& disc, Complex alpha) {
    const Eigen::Index dim = disc.matrix.rows();
    const Matrix A = Matrix::Identity(dim, dim) - alpha * disc.matrix;
    return Eigen::PartialPivLU<Matrix>(A).determinant();
}

Complex oracle_det2(const DenseDiscretization& disc, Complex alpha) {
    return oracle_det(disc, alpha) * std::exp(alpha * disc.matrix.trace());
}

}  // namespace semisep
