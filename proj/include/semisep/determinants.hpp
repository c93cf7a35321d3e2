#pragma once

#include "semisep/volterra.hpp"

namespace semisep {

struct Tolerances {
    double route = 1e-7;        // endpoint-route agreement
    double invariant = 1e-9;    // structural identities
    double oracle = 1e-4;       // Nystrom comparisons (lower order)
    double trace_class = 1e-6;  // trace-route agreement below which K is treated as trace class
};

/// Everything the two endpoint routes produce for one (kernel, alpha, grid).
///
/// det_a  = det U(a*, alpha), det_b = det U(b*, alpha)       (Fredholm det routes)
/// det2_a = det_a * exp(alpha int tr(f1 g1)),
/// det2_b = det_b * exp(alpha int tr(f2 g2))                 (2-modified routes)
///
/// Both routes are always computed and reported. The Fredholm routes agree
/// only when K is trace class (the two trace integrals then coincide); the
/// 2-modified routes agree for any Hilbert-Schmidt input. The report flags
/// accordingly instead of throwing.
struct DeterminantReport {
    Complex det_a{1.0, 0.0};
    Complex det_b{1.0, 0.0};
    Complex det2_a{1.0, 0.0};
    Complex det2_b{1.0, 0.0};
    Complex trace_f1g1{0.0, 0.0};  // int tr(f1 g1) = int tr(g1 f1)
    Complex trace_f2g2{0.0, 0.0};
    Complex exp_factor_1{1.0, 0.0};  // exp(alpha int tr(f1 g1))
    Complex exp_factor_2{1.0, 0.0};
    double route_discrepancy = 0.0;       // |det_a - det_b| / max(1, |det_a|)
    double det2_route_discrepancy = 0.0;  // same for the 2-modified routes
    double trace_route_difference = 0.0;  // |trace_f1g1 - trace_f2g2| / max(1, |trace_f1g1|)
    bool trace_class_consistent = true;
    bool flagged = false;
    int n1 = 0, n2 = 0;

    /// Canonical Fredholm value: the vanishing-rank side when the kernel is
    /// purely Volterra (that route is exact), otherwise the b-side.
    Complex det() const { return n2 == 0 ? det_b : (n1 == 0 ? det_a : det_b); }
    Complex det2() const { return n2 == 0 ? det2_b : (n1 == 0 ? det2_a : det2_b); }
};

struct TraceReport {
    Complex route_f1g1{0.0, 0.0};
    Complex route_f2g2{0.0, 0.0};
    double difference = 0.0;
    bool trace_class_consistent = true;
};

/// Both trace expressions int tr(g1 f1) dx and int tr(g2 f2) dx. They agree
/// exactly when K is trace class; a mismatch beyond tolerance is reported
/// (and warned) rather than raised.
TraceReport trace_report(const SemiSeparableKernel& kern, const Grid& grid,
                         const Tolerances& tol = {});

/// Convenience accessor for the f1 g1 trace route.
Complex trace_K(const SemiSeparableKernel& kern, const Grid& grid);

/// Full determinant report; fredholm_det and fredholm_det2 share this
/// computation and differ only in which flag drives `flagged`.
DeterminantReport fredholm_det(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid,
                               const Tolerances& tol = {});
DeterminantReport fredholm_det2(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid,
                                const Tolerances& tol = {});

/// Resolvent kernel L(x, x', alpha) with (I - alpha K)^{-1} = I + alpha L:
///   L = C(x) U(x) (I - P0) U(x')^{-1} B(x')  for x' < x,
///   L = -C(x) U(x) P0 U(x')^{-1} B(x')       for x < x'
/// where P0 projects onto the lower block. Evaluation snaps to grid nodes.
Matrix resolvent_kernel(const SemiSeparableKernel& kern, Complex alpha, const Grid& grid,
                        double x, double xp, const Tolerances& tol = {});

/// Same but reusing a precomputed fundamental solution.
Matrix resolvent_kernel(const SemiSeparableKernel& kern, const FundamentalSolution& fund,
                        double x, double xp, const Tolerances& tol = {});

}  // namespace semisep
