#pragma once

#include "semisep/kernel.hpp"

namespace semisep {
namespace wienerhopf {

/// Truncated Wiener-Hopf convolution kernel on (0, tau) with rational symbol:
///   k(t) = sum_l alpha_l e^{-lambda_l t}  (t > 0),
///   k(t) = sum_m beta_m  e^{ mu_m t}      (t < 0),
/// with Re(lambda_l) > 0, Re(mu_m) > 0, exponents pairwise distinct
/// (simple-pole mode).
class RationalSymbolKernel {
public:
    RationalSymbolKernel(std::vector<Complex> alphas, std::vector<Complex> lambdas,
                         std::vector<Complex> betas, std::vector<Complex> mus, double tau);

    int L() const { return static_cast<int>(alphas_.size()); }
    int M() const { return static_cast<int>(betas_.size()); }
    int N() const { return L() + M(); }
    double tau() const { return tau_; }
    const std::vector<Complex>& alphas() const { return alphas_; }
    const std::vector<Complex>& lambdas() const { return lambdas_; }
    const std::vector<Complex>& betas() const { return betas_; }
    const std::vector<Complex>& mus() const { return mus_; }

    /// k(t) for t != 0. The one-sided limits are exposed separately.
    Complex eval(double t) const;
    Complex k0_plus() const;   // sum of alphas
    Complex k0_minus() const;  // sum of betas

    /// Rational symbol: the Fourier transform of k at frequency xi.
    Complex symbol(double xi) const;

    /// 1 - H(zeta) with H the Laplace-side rational function.
    Complex one_minus_H(Complex zeta) const;

    /// Semi-separable view on (0, tau): f1/g1 carry the lambda modes (L of
    /// them), f2/g2 the mu modes.
    SemiSeparableKernel semiseparable() const;

    /// Same kernel with (alpha,lambda) and (beta,mu) swapped: the transpose
    /// integral operator.
    RationalSymbolKernel transposed() const;

private:
    std::vector<Complex> alphas_, lambdas_, betas_, mus_;
    double tau_;
};

/// Roots of the numerator of 1 - H and the residues of (1 - H)^{-1}.
/// izeta stores the values i*zeta_n directly, avoiding factor-of-i
/// bookkeeping: 1 - H(zeta) = prod_n (zeta + izeta_n) / denominator.
struct SymbolRoots {
    std::vector<Complex> izeta;
    std::vector<Complex> gamma;
};

/// Companion-matrix root finding with Newton polishing. gamma_n is defined as
/// the residue of (1 - H(zeta))^{-1} at zeta = -izeta_n (partial fractions),
/// which is the quantity the downstream identities consume; the literal
/// printed product form differs by a factor (-1)^{N-1} and is available via
/// gamma_product_form as a diagnostic. Throws on root multiplicity.
SymbolRoots find_roots(const RationalSymbolKernel& k);

/// The literal product expression for gamma_n (diagnostic only; see find_roots).
std::vector<Complex> gamma_product_form(const RationalSymbolKernel& k, const SymbolRoots& roots);

/// M x M matrix G = int_0^tau g2(x) fhat2(x) dx in closed form:
/// G_{m,m'} = delta + e^{-mu_m tau} beta_m' sum_n gamma_n e^{-izeta_n tau}
///            (mu_m + izeta_n)^{-1} (mu_m' + izeta_n)^{-1}.
Matrix g_matrix(const RationalSymbolKernel& k, const SymbolRoots& roots);

/// det2(I - K) = det(I_M - G) exp(tau k(0-)); equals 1 when M = 0.
Complex det2_via_G(const RationalSymbolKernel& k, const SymbolRoots& roots);

enum class DaySide { A, B };

/// Explicit subset-sum determinant formulas (the truncated Wiener-Hopf analog
/// of Day's formula). Side A sums over L-subsets of the root set, side B over
/// M-subsets; both evaluate det2(I - K). Guarded to N <= 24.
Complex day_formula(const RationalSymbolKernel& k, const SymbolRoots& roots, DaySide side);

/// Residual diagnostics for the Cauchy-matrix machinery backing the subset
/// formulas: the diagonal factorization of I_M - G, the rank-structured split
/// of Gamma, the explicit Cauchy inverse on sampled column subsets, and the
/// Cauchy-Binet expansion of det Gamma. Returns the max relative residual.
double cauchy_factorization_check(const RationalSymbolKernel& k, const SymbolRoots& roots);

}  // namespace wienerhopf
}  // namespace semisep
