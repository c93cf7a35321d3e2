#pragma once

#include "semisep/types.hpp"

#include <functional>
#include <memory>
#include <mutex>

namespace semisep {

using MatrixFn = std::function<Matrix(double)>;

/// Per-grid samples of the four kernel factors, plus the stacked factor
/// matrices C(x) = (f1 f2) and B(x) = (g1; -g2) used by the Volterra sweeps.
struct KernelSamples {
    Grid grid;
    std::vector<Matrix> f1, g1, f2, g2;  // shapes m x n1, n1 x m, m x n2, n2 x m
    std::vector<Matrix> B;               // n x m
    std::vector<Matrix> C;               // m x n
};

/// Semi-separable kernel K(x,x') = f1(x) g1(x') below the diagonal and
/// f2(x) g2(x') above it, with matrix-valued factors on an interval.
///
/// On the diagonal the lower-triangular limit f1(x) g1(x) is used. Factor
/// callbacks are sampled once per grid and cached; the cache is shared
/// between copies and guarded for concurrent readers.
class SemiSeparableKernel {
public:
    SemiSeparableKernel(int m, int n1, int n2, MatrixFn f1, MatrixFn g1, MatrixFn f2,
                        MatrixFn g2, Interval interval);

    int m() const { return m_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int n() const { return n1_ + n2_; }
    const Interval& interval() const { return interval_; }

    Matrix f1(double x) const { return checked(f1_, x, m_, n1_, "f1"); }
    Matrix g1(double x) const { return checked(g1_, x, n1_, m_, "g1"); }
    Matrix f2(double x) const { return checked(f2_, x, m_, n2_, "f2"); }
    Matrix g2(double x) const { return checked(g2_, x, n2_, m_, "g2"); }

    /// K(x,x'): f1(x) g1(x') for x' <= x, f2(x) g2(x') for x < x'.
    Matrix eval_K(double x, double xp) const;

    /// H(x,x') = f1(x) g1(x') - f2(x) g2(x').
    Matrix eval_H(double x, double xp) const;

    /// The n x n block matrix A(x) = [[g1 f1, g1 f2], [-g2 f1, -g2 f2]](x);
    /// equals B(x) C(x).
    Matrix eval_A(double x) const;

    Matrix eval_B(double x) const;  // n x m, (g1; -g2)
    Matrix eval_C(double x) const;  // m x n, (f1  f2)

    /// Sample all factors on the grid (cached; re-sampled only on grid change).
    std::shared_ptr<const KernelSamples> samples(const Grid& grid) const;

private:
    Matrix checked(const MatrixFn& fn, double x, Eigen::Index rows, Eigen::Index cols,
                   const char* name) const;
    void require_inside(double x) const;

    int m_, n1_, n2_;
    MatrixFn f1_, g1_, f2_, g2_;
    Interval interval_;

    struct CacheSlot {
        std::mutex mutex;
        std::shared_ptr<const KernelSamples> samples;
    };
    std::shared_ptr<CacheSlot> cache_ = std::make_shared<CacheSlot>();
};

/// Scalar kernel helper: wraps scalar callbacks as 1x1 matrix factors.
SemiSeparableKernel make_scalar_kernel(std::function<Complex(double)> f1,
                                       std::function<Complex(double)> g1,
                                       std::function<Complex(double)> f2,
                                       std::function<Complex(double)> g2, Interval interval);

}  // namespace semisep
