#include "semisep/kernel.hpp"

#include <sstream>

namespace semisep {

SemiSeparableKernel::SemiSeparableKernel(int m, int n1, int n2, MatrixFn f1, MatrixFn g1,
                                         MatrixFn f2, MatrixFn g2, Interval interval)
    : m_(m),
      n1_(n1),
      n2_(n2),
      f1_(std::move(f1)),
      g1_(std::move(g1)),
      f2_(std::move(f2)),
      g2_(std::move(g2)),
      interval_(interval) {
    if (m < 1 || n1 < 0 || n2 < 0 || n1 + n2 < 1)
        throw std::invalid_argument("SemiSeparableKernel: need m >= 1 and n1+n2 >= 1");
}

void SemiSeparableKernel::require_inside(double x) const {
    // The admissible region is the full interval (a,b); finite endpoints are
    // tolerated since grids sample them.
    const double slack = 1e-12 * std::max(1.0, interval_.b_trunc - interval_.a_trunc);
    if (!(x > interval_.a - slack) || !(x < interval_.b + slack)) {
        std::ostringstream os;
        os << "kernel evaluation at x=" << x << " outside (" << interval_.a << ", "
           << interval_.b << ")";
        throw std::domain_error(os.str());
    }
}

Matrix SemiSeparableKernel::checked(const MatrixFn& fn, double x, Eigen::Index rows,
                                    Eigen::Index cols, const char* name) const {
    Matrix v = fn(x);
    if (v.rows() != rows || v.cols() != cols) {
        std::ostringstream os;
        os << "kernel factor " << name << " returned " << v.rows() << "x" << v.cols()
           << " at x=" << x << ", expected " << rows << "x" << cols;
        throw std::invalid_argument(os.str());
    }
    if (!all_finite(v)) {
        std::ostringstream os;
        os << "kernel factor " << name << " is not finite at x=" << x;
        throw std::invalid_argument(os.str());
    }
    return v;
}

Matrix SemiSeparableKernel::eval_K(double x, double xp) const {
    require_inside(x);
    require_inside(xp);
    if (xp <= x) return f1(x) * g1(xp);
    return f2(x) * g2(xp);
}

Matrix SemiSeparableKernel::eval_H(double x, double xp) const {
    require_inside(x);
    require_inside(xp);
    return f1(x) * g1(xp) - f2(x) * g2(xp);
}

Matrix SemiSeparableKernel::eval_A(double x) const {
    require_inside(x);
    const Matrix F1 = f1(x), G1 = g1(x), F2 = f2(x), G2 = g2(x);
    Matrix A(n(), n());
    A.topLeftCorner(n1_, n1_) = G1 * F1;
    A.topRightCorner(n1_, n2_) = G1 * F2;
    A.bottomLeftCorner(n2_, n1_) = -G2 * F1;
    A.bottomRightCorner(n2_, n2_) = -G2 * F2;
    return A;
}

Matrix SemiSeparableKernel::eval_B(double x) const {
    require_inside(x);
    Matrix B(n(), m_);
    B.topRows(n1_) = g1(x);
    B.bottomRows(n2_) = -g2(x);
    return B;
}

Matrix SemiSeparableKernel::eval_C(double x) const {
    require_inside(x);
    Matrix C(m_, n());
    C.leftCols(n1_) = f1(x);
    C.rightCols(n2_) = f2(x);
    return C;
}

std::shared_ptr<const KernelSamples> SemiSeparableKernel::samples(const Grid& grid) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (cache_->samples && cache_->samples->grid.same_layout(grid)) return cache_->samples;
    }
    auto out = std::make_shared<KernelSamples>(KernelSamples{grid, {}, {}, {}, {}, {}, {}});
    const int N = grid.size();
    out->f1.reserve(N);
    out->g1.reserve(N);
    out->f2.reserve(N);
    out->g2.reserve(N);
    out->B.reserve(N);
    out->C.reserve(N);
    for (double x : grid.nodes()) {
        out->f1.push_back(f1(x));
        out->g1.push_back(g1(x));
        out->f2.push_back(f2(x));
        out->g2.push_back(g2(x));
        Matrix B(n(), m_), C(m_, n());
        B.topRows(n1_) = out->g1.back();
        B.bottomRows(n2_) = -out->g2.back();
        C.leftCols(n1_) = out->f1.back();
        C.rightCols(n2_) = out->f2.back();
        out->B.push_back(std::move(B));
        out->C.push_back(std::move(C));
    }
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->samples = out;
    return out;
}

SemiSeparableKernel make_scalar_kernel(std::function<Complex(double)> f1,
                                       std::function<Complex(double)> g1,
                                       std::function<Complex(double)> f2,
                                       std::function<Complex(double)> g2, Interval interval) {
    auto wrap = [](std::function<Complex(double)> fn) {
        return MatrixFn([fn = std::move(fn)](double x) {
            Matrix v(1, 1);
            v(0, 0) = fn(x);
            return v;
        });
    };
    return SemiSeparableKernel(1, 1, 1, wrap(std::move(f1)), wrap(std::move(g1)),
                               wrap(std::move(f2)), wrap(std::move(g2)), interval);
}

}  // namespace semisep
