#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace semisep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Determinant via LU with partial pivoting. Empty matrices have determinant 1.
inline Complex det_lu(const Matrix& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("det_lu: matrix not square");
    if (M.rows() == 0) return Complex(1.0, 0.0);
    return Eigen::PartialPivLU<Matrix>(M).determinant();
}

inline bool all_finite(const Matrix& M) {
    return M.allFinite();
}

/// Interval (a,b) with a finite computational truncation [a*, b*].
/// For a finite interval the truncation coincides with (a,b).
struct Interval {
    double a = 0.0;
    double b = 1.0;
    double a_trunc = 0.0;
    double b_trunc = 1.0;

    static Interval finite(double a, double b) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("Interval::finite: need finite a < b");
        return Interval{a, b, a, b};
    }

    static Interval truncated(double a, double b, double a_trunc, double b_trunc) {
        if (!(a < b)) throw std::invalid_argument("Interval: need a < b");
        if (std::isfinite(a) && std::isfinite(b) && (a != a_trunc || b != b_trunc))
            throw std::invalid_argument("Interval: finite interval must use its own endpoints");
        if (!(a_trunc < b_trunc) || !std::isfinite(a_trunc) || !std::isfinite(b_trunc))
            throw std::invalid_argument("Interval: truncation must be a finite sub-interval");
        if (a_trunc < a || b_trunc > b)
            throw std::invalid_argument("Interval: truncation exceeds (a,b)");
        return Interval{a, b, a_trunc, b_trunc};
    }

    bool contains(double x) const { return x > a && x < b; }
    double length() const { return b_trunc - a_trunc; }
};

enum class QuadratureRule { Trapezoid, GaussLegendrePanels };

/// Quadrature grid on [a*, b*]: strictly increasing nodes with positive weights
/// summing to the interval length.
class Grid {
public:
    /// Composite trapezoid with n uniformly spaced nodes.
    static Grid trapezoid(double a, double b, int n);

    /// Composite trapezoid with nodes placed on every breakpoint; cells are
    /// distributed across segments proportionally to their length.
    static Grid trapezoid_with_breakpoints(double a, double b, int n,
                                           const std::vector<double>& breakpoints);

    /// Panelized Gauss-Legendre rule (for smooth integrands).
    static Grid gauss_legendre(double a, double b, int panels, int nodes_per_panel = 8);

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    QuadratureRule rule() const { return rule_; }
    int size() const { return static_cast<int>(nodes_.size()); }
    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }
    double max_spacing() const;

    /// Index of the node closest to x.
    int nearest_node(double x) const;

    bool same_layout(const Grid& other) const;

private:
    Grid(std::vector<double> nodes, std::vector<double> weights, QuadratureRule rule,
         double lo, double hi);

    std::vector<double> nodes_;
    std::vector<double> weights_;
    QuadratureRule rule_;
};

inline Complex zero_like(const Complex&) { return Complex(0.0, 0.0); }
inline Matrix zero_like(const Matrix& m) { return Matrix::Zero(m.rows(), m.cols()); }

/// Weighted sum of per-node samples: approximates the integral over [a*, b*].
template <class T>
T integrate(const Grid& grid, const std::vector<T>& samples) {
    if (static_cast<int>(samples.size()) != grid.size())
        throw std::invalid_argument("integrate: sample count does not match grid");
    T acc = zero_like(samples.front());
    for (int k = 0; k < grid.size(); ++k) acc += grid.weights()[k] * samples[k];
    return acc;
}

/// Cumulative trapezoid over the node sequence; out[0] = 0, out[k] = int_{x0}^{xk}.
template <class T>
std::vector<T> cumulative_trapezoid(const Grid& grid, const std::vector<T>& samples) {
    if (static_cast<int>(samples.size()) != grid.size())
        throw std::invalid_argument("cumulative_trapezoid: sample count does not match grid");
    std::vector<T> out(samples.size(), zero_like(samples.front()));
    const auto& x = grid.nodes();
    for (std::size_t k = 1; k < samples.size(); ++k) {
        const double h = x[k] - x[k - 1];
        out[k] = out[k - 1] + (h / 2.0) * (samples[k - 1] + samples[k]);
    }
    return out;
}

}  // namespace semisep
