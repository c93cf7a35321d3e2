#include "semisep/wienerhopf.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>
#include <thread>

namespace semisep {
namespace wienerhopf {

namespace {

const Complex kI(0.0, 1.0);

// polynomial coefficients in ascending order
using Poly = std::vector<Complex>;

Poly poly_from_roots(const std::vector<Complex>& roots) {
    Poly p{Complex(1, 0)};
    for (const Complex& r : roots) {
        Poly q(p.size() + 1, Complex(0, 0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i] += -r * p[i];
            q[i + 1] += p[i];
        }
        p = std::move(q);
    }
    return p;
}

Complex poly_eval(const Poly& p, Complex x) {
    Complex acc(0, 0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return Poly{Complex(0, 0)};
    Poly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = double(i) * p[i];
    return d;
}

void poly_add_scaled(Poly& p, const Poly& q, Complex c) {
    if (q.size() > p.size()) p.resize(q.size(), Complex(0, 0));
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += c * q[i];
}

std::vector<Complex> companion_roots(const Poly& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    Matrix C = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -monic[i];
    Eigen::ComplexEigenSolver<Matrix> es(C, /*computeEigenvectors=*/false);
    std::vector<Complex> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// lexicographic unranking of a k-combination of {0..n-1}
std::vector<int> unrank_combination(std::uint64_t rank, int n, int k) {
    std::vector<int> c(k);
    int v = 0;
    for (int i = 0; i < k; ++i) {
        while (true) {
            const std::uint64_t block = binomial(n - v - 1, k - i - 1);
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        c[i] = v++;
    }
    return c;
}

double max_param_scale(const RationalSymbolKernel& k) {
    double s = 1.0;
    for (const auto* vec : {&k.alphas(), &k.lambdas(), &k.betas(), &k.mus()})
        for (const Complex& c : *vec) s = std::max(s, std::abs(c));
    return s;
}

}  // namespace

RationalSymbolKernel::RationalSymbolKernel(std::vector<Complex> alphas,
                                           std::vector<Complex> lambdas,
                                           std::vector<Complex> betas, std::vector<Complex> mus,
                                           double tau)
    : alphas_(std::move(alphas)),
      lambdas_(std::move(lambdas)),
      betas_(std::move(betas)),
      mus_(std::move(mus)),
      tau_(tau) {
    if (alphas_.size() != lambdas_.size() || betas_.size() != mus_.size())
        throw std::invalid_argument("RationalSymbolKernel: coefficient/exponent count mismatch");
    if (N() < 1) throw std::invalid_argument("RationalSymbolKernel: need L + M >= 1");
    if (!(tau_ > 0.0)) throw std::invalid_argument("RationalSymbolKernel: tau must be > 0");
    for (const Complex& l : lambdas_)
        if (!(l.real() > 0.0))
            throw std::invalid_argument("RationalSymbolKernel: Re(lambda) must be > 0");
    for (const Complex& m : mus_)
        if (!(m.real() > 0.0))
            throw std::invalid_argument("RationalSymbolKernel: Re(mu) must be > 0");
    auto check_distinct = [](const std::vector<Complex>& v, const char* what) {
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j)
                if (std::abs(v[i] - v[j]) < 1e-12)
                    throw std::invalid_argument(std::string("RationalSymbolKernel: ") + what +
                                                " must be pairwise distinct");
    };
    check_distinct(lambdas_, "lambdas");
    check_distinct(mus_, "mus");
}

Complex RationalSymbolKernel::eval(double t) const {
    if (t == 0.0)
        throw std::invalid_argument("RationalSymbolKernel::eval: use k0_plus/k0_minus at t=0");
    Complex acc(0, 0);
    if (t > 0.0) {
        for (int l = 0; l < L(); ++l) acc += alphas_[l] * std::exp(-lambdas_[l] * t);
    } else {
        for (int m = 0; m < M(); ++m) acc += betas_[m] * std::exp(mus_[m] * t);
    }
    return acc;
}

Complex RationalSymbolKernel::k0_plus() const {
    return std::accumulate(alphas_.begin(), alphas_.end(), Complex(0, 0));
}

Complex RationalSymbolKernel::k0_minus() const {
    return std::accumulate(betas_.begin(), betas_.end(), Complex(0, 0));
}

Complex RationalSymbolKernel::symbol(double xi) const {
    Complex acc(0, 0);
    for (int l = 0; l < L(); ++l) acc += alphas_[l] / (lambdas_[l] - kI * xi);
    for (int m = 0; m < M(); ++m) acc += betas_[m] / (mus_[m] + kI * xi);
    return acc;
}

Complex RationalSymbolKernel::one_minus_H(Complex zeta) const {
    Complex acc(1, 0);
    for (int l = 0; l < L(); ++l) acc -= alphas_[l] / (zeta + lambdas_[l]);
    for (int m = 0; m < M(); ++m) acc += betas_[m] / (zeta - mus_[m]);
    return acc;
}

SemiSeparableKernel RationalSymbolKernel::semiseparable() const {
    auto f1 = [a = alphas_, l = lambdas_](double x) {
        Matrix v(1, a.size());
        for (std::size_t i = 0; i < a.size(); ++i) v(0, i) = a[i] * std::exp(-l[i] * x);
        return v;
    };
    auto g1 = [l = lambdas_](double x) {
        Matrix v(l.size(), 1);
        for (std::size_t i = 0; i < l.size(); ++i) v(i, 0) = std::exp(l[i] * x);
        return v;
    };
    auto f2 = [b = betas_, m = mus_](double x) {
        Matrix v(1, b.size());
        for (std::size_t i = 0; i < b.size(); ++i) v(0, i) = b[i] * std::exp(m[i] * x);
        return v;
    };
    auto g2 = [m = mus_](double x) {
        Matrix v(m.size(), 1);
        for (std::size_t i = 0; i < m.size(); ++i) v(i, 0) = std::exp(-m[i] * x);
        return v;
    };
    return SemiSeparableKernel(1, L(), M(), f1, g1, f2, g2, Interval::finite(0.0, tau_));
}

RationalSymbolKernel RationalSymbolKernel::transposed() const {
    return RationalSymbolKernel(betas_, mus_, alphas_, lambdas_, tau_);
}

SymbolRoots find_roots(const RationalSymbolKernel& k) {
    const int L = k.L(), M = k.M(), N = k.N();

    // denominator roots of 1 - H: zeta = -lambda_l and zeta = +mu_m
    std::vector<Complex> denom_roots;
    for (const Complex& l : k.lambdas()) denom_roots.push_back(-l);
    for (const Complex& m : k.mus()) denom_roots.push_back(m);
    const Poly D = poly_from_roots(denom_roots);

    // numerator: D - sum_l alpha_l D/(zeta+lambda_l) + sum_m beta_m D/(zeta-mu_m)
    Poly num = D;
    for (int l = 0; l < L; ++l) {
        std::vector<Complex> rest;
        for (int j = 0; j < L; ++j)
            if (j != l) rest.push_back(-k.lambdas()[j]);
        for (const Complex& m : k.mus()) rest.push_back(m);
        poly_add_scaled(num, poly_from_roots(rest), -k.alphas()[l]);
    }
    for (int m = 0; m < M; ++m) {
        std::vector<Complex> rest;
        for (const Complex& l : k.lambdas()) rest.push_back(-l);
        for (int j = 0; j < M; ++j)
            if (j != m) rest.push_back(k.mus()[j]);
        poly_add_scaled(num, poly_from_roots(rest), k.betas()[m]);
    }
    // monic by construction up to rounding
    const Complex lead = num.back();
    for (Complex& c : num) c /= lead;

    std::vector<Complex> roots = companion_roots(num);
    const Poly dnum = poly_derivative(num);
    for (Complex& r : roots)
        for (int it = 0; it < 3; ++it) {
            const Complex dp = poly_eval(dnum, r);
            if (std::abs(dp) == 0.0) break;
            r -= poly_eval(num, r) / dp;
        }

    const double scale = max_param_scale(k);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8 * scale)
                throw std::domain_error("find_roots: degenerate symbol (multiple zeta root)");

    SymbolRoots out;
    out.izeta.resize(N);
    out.gamma.resize(N);
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (roots[a].real() != roots[b].real()) return roots[a].real() < roots[b].real();
        return roots[a].imag() < roots[b].imag();
    });
    for (int i = 0; i < N; ++i) {
        const Complex r = roots[order[i]];
        out.izeta[i] = -r;
        out.gamma[i] = poly_eval(D, r) / poly_eval(dnum, r);  // residue of D/num at r
    }

    // spot-check the factored identities at random probe points
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    int checked = 0;
    while (checked < 10) {
        const Complex zeta = 2.0 * scale * Complex(uni(rng), uni(rng));
        double nearest = kInfinity;
        for (const Complex& p : denom_roots) nearest = std::min(nearest, std::abs(zeta - p));
        for (const Complex& s : out.izeta) nearest = std::min(nearest, std::abs(zeta + s));
        if (nearest < 0.05 * scale) continue;
        ++checked;

        const Complex direct = k.one_minus_H(zeta);
        Complex prod(1, 0);
        for (const Complex& s : out.izeta) prod *= (zeta + s);
        for (const Complex& p : denom_roots) prod /= (zeta - p);
        Complex pf(1, 0);
        for (int n = 0; n < N; ++n) pf += out.gamma[n] / (zeta + out.izeta[n]);
        if (std::abs(direct - prod) > 1e-8 * std::max(1.0, std::abs(direct)) ||
            std::abs(pf - 1.0 / direct) > 1e-8 * std::max(1.0, std::abs(1.0 / direct)))
            throw std::runtime_error("find_roots: factorization self-check failed");
    }
    for (const Complex& mu : k.mus()) {
        Complex s(1, 0);
        for (int n = 0; n < N; ++n) s += out.gamma[n] / (out.izeta[n] + mu);
        if (std::abs(s) > 1e-8 * std::max(1.0, scale))
            throw std::runtime_error("find_roots: residue cancellation identity failed");
    }
    return out;
}

std::vector<Complex> gamma_product_form(const RationalSymbolKernel& k, const SymbolRoots& roots) {
    const int N = k.N();
    std::vector<Complex> out(N);
    for (int n = 0; n < N; ++n) {
        Complex val(1, 0);
        for (int j = 0; j < N; ++j)
            if (j != n) val /= (roots.izeta[n] - roots.izeta[j]);
        for (const Complex& l : k.lambdas()) val *= (l - roots.izeta[n]);
        for (const Complex& m : k.mus()) val *= (-roots.izeta[n] - m);
        out[n] = val;
    }
    return out;
}

Matrix g_matrix(const RationalSymbolKernel& k, const SymbolRoots& roots) {
    const int M = k.M(), N = k.N();
    Matrix G = Matrix::Identity(M, M);
    for (int m = 0; m < M; ++m) {
        for (int mp = 0; mp < M; ++mp) {
            Complex s(0, 0);
            for (int n = 0; n < N; ++n)
                s += roots.gamma[n] * std::exp(-roots.izeta[n] * k.tau()) /
                     ((k.mus()[m] + roots.izeta[n]) * (k.mus()[mp] + roots.izeta[n]));
            G(m, mp) += std::exp(-k.mus()[m] * k.tau()) * k.betas()[mp] * s;
        }
    }
    return G;
}

Complex det2_via_G(const RationalSymbolKernel& k, const SymbolRoots& roots) {
    if (k.M() == 0) return Complex(1, 0);
    const Matrix G = g_matrix(k, roots);
    const Matrix IG = Matrix::Identity(k.M(), k.M()) - G;
    return det_lu(IG) * std::exp(k.tau() * k.k0_minus());
}

Complex day_formula(const RationalSymbolKernel& k, const SymbolRoots& roots, DaySide side) {
    const int L = k.L(), M = k.M(), N = k.N();
    if (N > 24) throw std::length_error("day_formula: L + M > 24 (subset enumeration guard)");
    const double scale = max_param_scale(k);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (std::abs(roots.izeta[i] - roots.izeta[j]) < 1e-10 * scale)
                throw std::domain_error("day_formula: near-coincident zeta roots");

    const double tau = k.tau();
    const auto& s = roots.izeta;

    // per-root factors shared by both subset expansions
    std::vector<Complex> Pl(N, Complex(1, 0)), Pm(N, Complex(1, 0));
    for (int n = 0; n < N; ++n) {
        for (const Complex& l : k.lambdas()) Pl[n] *= (l - s[n]);
        for (const Complex& m : k.mus()) Pm[n] *= (m + s[n]);
    }
    Complex invLM(1, 0);
    for (const Complex& l : k.lambdas())
        for (const Complex& m : k.mus()) invLM /= (m + l);

    // Side A: subsets of size L; term numerator prod_{n in comp} Pl[n] e^{-tau s_n}
    // times prod_{j in subset} Pm[j], divided by prod (s_subset - s_comp).
    // Side B: subsets of size M with the roles of Pl/Pm swapped, weight
    // e^{+tau s} over the complement, divisor prod (s_comp - s_subset).
    const int subset_size = (side == DaySide::A) ? L : M;
    std::vector<Complex> wA(N), wB(N);
    for (int n = 0; n < N; ++n) {
        wA[n] = Pl[n] * std::exp(-tau * s[n]);
        wB[n] = Pm[n] * std::exp(tau * s[n]);
    }

    auto term = [&](const std::vector<int>& subset) {
        std::vector<char> in(N, 0);
        for (int idx : subset) in[idx] = 1;
        Complex val = invLM;
        if (side == DaySide::A) {
            for (int n = 0; n < N; ++n)
                if (!in[n]) val *= wA[n];
            for (int j : subset) val *= Pm[j];
            for (int j : subset)
                for (int n = 0; n < N; ++n)
                    if (!in[n]) val /= (s[j] - s[n]);
        } else {
            for (int n : subset) val *= Pl[n];
            for (int j = 0; j < N; ++j)
                if (!in[j]) val *= wB[j];
            for (int j = 0; j < N; ++j)
                if (!in[j])
                    for (int n : subset) val /= (s[j] - s[n]);
        }
        return val;
    };

    const std::uint64_t total = binomial(N, subset_size);
    Complex sum(0, 0);
    if (total < 200000) {
        std::vector<int> comb(subset_size);
        std::iota(comb.begin(), comb.end(), 0);
        if (subset_size == 0) {
            sum = term(comb);
        } else {
            do {
                sum += term(comb);
            } while (next_combination(comb, N));
        }
    } else {
        // chunked evaluation with a pairwise-tree reduction so the result is
        // independent of thread scheduling
        const std::uint64_t chunk = 65536;
        const std::uint64_t nchunks = (total + chunk - 1) / chunk;
        std::vector<Complex> partial(nchunks, Complex(0, 0));
        std::atomic<std::uint64_t> next{0};
        const unsigned pool =
            std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                               static_cast<unsigned>(nchunks));
        auto worker = [&] {
            for (;;) {
                const std::uint64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                const std::uint64_t lo = c * chunk;
                const std::uint64_t hi = std::min(total, lo + chunk);
                std::vector<int> comb = unrank_combination(lo, N, subset_size);
                Complex acc(0, 0);
                for (std::uint64_t r = lo; r < hi; ++r) {
                    acc += term(comb);
                    if (r + 1 < hi) next_combination(comb, N);
                }
                partial[c] = acc;
            }
        };
        std::vector<std::thread> threads;
        for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        for (std::uint64_t width = 1; width < nchunks; width *= 2)
            for (std::uint64_t i = 0; i + width < nchunks; i += 2 * width)
                partial[i] += partial[i + width];
        sum = partial[0];
    }

    Complex pref;
    if (side == DaySide::A) {
        Complex mu_sum(0, 0);
        for (const Complex& m : k.mus()) mu_sum += m;
        pref = std::exp(tau * k.k0_minus() - tau * mu_sum);
    } else {
        Complex la_sum(0, 0);
        for (const Complex& l : k.lambdas()) la_sum += l;
        pref = std::exp(tau * k.k0_plus() - tau * la_sum);
    }
    return pref * sum;
}

double cauchy_factorization_check(const RationalSymbolKernel& k, const SymbolRoots& roots) {
    const int M = k.M(), N = k.N();
    if (N > 24) throw std::length_error("cauchy_factorization_check: L + M > 24");
    if (M == 0) return 0.0;
    const double tau = k.tau();
    const auto& s = roots.izeta;

    const Matrix G = g_matrix(k, roots);
    Matrix Gamma(M, M);
    for (int m = 0; m < M; ++m)
        for (int mp = 0; mp < M; ++mp) {
            Complex acc(0, 0);
            for (int n = 0; n < N; ++n)
                acc -= roots.gamma[n] * std::exp(-s[n] * tau) /
                       ((k.mus()[m] + s[n]) * (k.mus()[mp] + s[n]));
            Gamma(m, mp) = acc;
        }

    // (i) I_M - G = diag(e^{-mu tau}) Gamma diag(beta)
    Matrix lhs = Matrix::Identity(M, M) - G;
    Matrix rhs(M, M);
    for (int m = 0; m < M; ++m)
        for (int mp = 0; mp < M; ++mp)
            rhs(m, mp) = std::exp(-k.mus()[m] * tau) * Gamma(m, mp) * k.betas()[mp];
    double r1 = (lhs - rhs).cwiseAbs().maxCoeff() /
                std::max(1.0, lhs.cwiseAbs().maxCoeff());

    // (ii) Gamma = A diag(gamma e^{-izeta tau}) B with Cauchy-type A, B = -A^T
    Matrix A(M, N), B(N, M);
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < N; ++n) {
            A(m, n) = 1.0 / (k.mus()[m] + s[n]);
            B(n, m) = -A(m, n);
        }
    Vector dmid(N);
    for (int n = 0; n < N; ++n) dmid(n) = roots.gamma[n] * std::exp(-s[n] * tau);
    const Matrix Gamma2 = A * dmid.asDiagonal() * B;
    double r2 = (Gamma - Gamma2).cwiseAbs().maxCoeff() /
                std::max(1.0, Gamma.cwiseAbs().maxCoeff());

    // (iii) explicit Cauchy inverse on 3 sampled column subsets
    std::mt19937 rng(12345);
    double r3 = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> idx(N);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<int> psi(idx.begin(), idx.begin() + M);
        std::sort(psi.begin(), psi.end());

        Matrix Apsi(M, M);
        for (int m = 0; m < M; ++m)
            for (int j = 0; j < M; ++j) Apsi(m, j) = 1.0 / (k.mus()[m] + s[psi[j]]);
        Vector D1(M), D2(M);
        for (int m = 0; m < M; ++m) {
            Complex d1(1, 0), d2(1, 0);
            for (int mp = 0; mp < M; ++mp) d1 *= (k.mus()[mp] + s[psi[m]]);
            for (int mpp = 0; mpp < M; ++mpp)
                if (mpp != m) d1 /= (-s[psi[mpp]] + s[psi[m]]);
            for (int mp = 0; mp < M; ++mp) d2 *= (k.mus()[m] + s[psi[mp]]);
            for (int mpp = 0; mpp < M; ++mpp)
                if (mpp != m) d2 /= (k.mus()[m] - k.mus()[mpp]);
            D1(m) = d1;
            D2(m) = d2;
        }
        const Matrix inv_direct = Apsi.partialPivLu().solve(Matrix::Identity(M, M));
        const Matrix inv_cauchy = D1.asDiagonal() * Apsi.transpose() * D2.asDiagonal();
        r3 = std::max(r3, (inv_direct - inv_cauchy).cwiseAbs().maxCoeff() /
                              std::max(1.0, inv_direct.cwiseAbs().maxCoeff()));
    }

    // (iv) Cauchy-Binet: det Gamma = sum over column subsets
    Complex cb(0, 0);
    std::vector<int> comb(M);
    std::iota(comb.begin(), comb.end(), 0);
    do {
        Matrix Apsi(M, M), Bpsi(M, M);
        Complex mid(1, 0);
        for (int j = 0; j < M; ++j) {
            for (int m = 0; m < M; ++m) {
                Apsi(m, j) = 1.0 / (k.mus()[m] + s[comb[j]]);
                Bpsi(j, m) = -Apsi(m, j);
            }
            mid *= roots.gamma[comb[j]] * std::exp(-s[comb[j]] * tau);
        }
        cb += det_lu(Apsi) * det_lu(Bpsi) * mid;
    } while (next_combination(comb, N));
    const Complex detGamma = det_lu(Gamma);
    const double r4 = std::abs(cb - detGamma) / std::max(1.0, std::abs(detGamma));

    return std::max({r1, r2, r3, r4});
}

}  // namespace wienerhopf
}  // namespace semisep
