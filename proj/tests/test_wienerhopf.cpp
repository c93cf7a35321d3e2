#include "semisep/wienerhopf.hpp"
#include "semisep/determinants.hpp"
#include "semisep/nystrom.hpp"

#include <doctest.h>

#include <random>

using namespace semisep;
using namespace semisep::wienerhopf;

namespace {

RationalSymbolKernel exp_abs_kernel(double tau) {
    // k(t) = e^{-|t|}
    return RationalSymbolKernel({Complex(1, 0)}, {Complex(1, 0)}, {Complex(1, 0)},
                                {Complex(1, 0)}, tau);
}

// fixed-seed L = 2, M = 2 symbol used across the suite
RationalSymbolKernel seeded_l2m2(double tau) {
    return RationalSymbolKernel({Complex(0.8, 0.3), Complex(-0.5, 0.1)},
                                {Complex(1.2, 0.4), Complex(0.9, -0.2)},
                                {Complex(0.6, -0.2), Complex(1.1, 0.5)},
                                {Complex(1.5, 0.1), Complex(0.8, 0.6)}, tau);
}

}  // namespace

TEST_CASE("kernel_eval and symbol") {
    const auto k = exp_abs_kernel(1.0);
    CHECK(std::abs(k.eval(0.7) - std::exp(-0.7)) < 1e-15);
    CHECK(std::abs(k.eval(-0.4) - std::exp(-0.4)) < 1e-15);
    CHECK(std::abs(k.k0_plus() - 1.0) == 0.0);
    CHECK(std::abs(k.k0_minus() - 1.0) == 0.0);
    CHECK_THROWS_AS((void)k.eval(0.0), std::invalid_argument);

    const RationalSymbolKernel one_sided({Complex(1, 0)}, {Complex(1, 0)}, {}, {}, 1.0);
    CHECK(std::abs(one_sided.eval(-0.5)) == 0.0);

    // Fourier transform at xi = 0: sum alpha/lambda + sum beta/mu
    const auto s = seeded_l2m2(1.0);
    Complex expected(0, 0);
    for (int l = 0; l < s.L(); ++l) expected += s.alphas()[l] / s.lambdas()[l];
    for (int m = 0; m < s.M(); ++m) expected += s.betas()[m] / s.mus()[m];
    CHECK(std::abs(s.symbol(0.0) - expected) < 1e-14);
}

TEST_CASE("find_roots") {
    SUBCASE("alpha = beta = lambda = mu = 1: izeta = {-i, i} with gamma = {i, -i}") {
        const auto roots = find_roots(exp_abs_kernel(1.0));
        REQUIRE(roots.izeta.size() == 2);
        // sorted by real part then imaginary part of the numerator roots
        std::vector<Complex> iz = roots.izeta;
        std::sort(iz.begin(), iz.end(),
                  [](Complex a, Complex b) { return a.imag() < b.imag(); });
        CHECK(std::abs(iz[0] - Complex(0, -1)) < 1e-12);
        CHECK(std::abs(iz[1] - Complex(0, 1)) < 1e-12);
        for (std::size_t n = 0; n < roots.izeta.size(); ++n) {
            const Complex expect =
                roots.izeta[n].imag() < 0 ? Complex(0, 1) : Complex(0, -1);
            CHECK(std::abs(roots.gamma[n] - expect) < 1e-12);
        }
    }
    SUBCASE("L = 1, M = 0, alpha = lambda = 1: single root at zero") {
        const RationalSymbolKernel k({Complex(1, 0)}, {Complex(1, 0)}, {}, {}, 1.0);
        const auto roots = find_roots(k);
        REQUIRE(roots.izeta.size() == 1);
        CHECK(std::abs(roots.izeta[0]) < 1e-12);
    }
    SUBCASE("beta reconstruction from the roots") {
        const auto k = seeded_l2m2(1.0);
        const auto roots = find_roots(k);
        for (int m = 0; m < k.M(); ++m) {
            Complex val(1, 0);
            for (const Complex& l : k.lambdas()) val /= (k.mus()[m] + l);
            for (int mp = 0; mp < k.M(); ++mp)
                if (mp != m) val /= (k.mus()[m] - k.mus()[mp]);
            for (const Complex& s : roots.izeta) val *= (k.mus()[m] + s);
            CHECK(std::abs(val - k.betas()[m]) / std::abs(k.betas()[m]) < 1e-9);
        }
    }
    SUBCASE("partial-fraction identities at random probes") {
        const auto k = seeded_l2m2(1.0);
        const auto roots = find_roots(k);
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> uni(-2.0, 2.0);
        int done = 0;
        while (done < 10) {
            const Complex zeta(uni(rng), uni(rng));
            const Complex direct = k.one_minus_H(zeta);
            if (std::abs(direct) < 0.05 || std::abs(direct) > 20.0) continue;
            ++done;
            Complex prod(1, 0);
            for (const Complex& s : roots.izeta) prod *= (zeta + s);
            for (const Complex& l : k.lambdas()) prod /= (zeta + l);
            for (const Complex& m : k.mus()) prod /= (zeta - m);
            CHECK(std::abs(prod - direct) / std::abs(direct) < 1e-10);
            Complex pf(1, 0);
            for (std::size_t n = 0; n < roots.izeta.size(); ++n)
                pf += roots.gamma[n] / (zeta + roots.izeta[n]);
            CHECK(std::abs(pf - 1.0 / direct) * std::abs(direct) < 1e-10);
        }
        for (const Complex& mu : k.mus()) {
            Complex s(1, 0);
            for (std::size_t n = 0; n < roots.izeta.size(); ++n)
                s += roots.gamma[n] / (roots.izeta[n] + mu);
            CHECK(std::abs(s) < 1e-10);
        }
    }
    SUBCASE("the printed product form of gamma differs by (-1)^{N-1}") {
        const auto k = seeded_l2m2(1.0);
        const auto roots = find_roots(k);
        const auto lit = gamma_product_form(k, roots);
        const double sign = (k.N() % 2 == 0) ? -1.0 : 1.0;  // (-1)^{N-1}
        for (int n = 0; n < k.N(); ++n)
            CHECK(std::abs(lit[n] - sign * roots.gamma[n]) / std::abs(roots.gamma[n]) < 1e-9);
    }
    SUBCASE("degenerate symbols are rejected") {
        // lambda = mu = 1, alpha = beta = 1/2 makes the numerator zeta^2
        const RationalSymbolKernel k({Complex(0.5, 0)}, {Complex(1, 0)}, {Complex(0.5, 0)},
                                     {Complex(1, 0)}, 1.0);
        CHECK_THROWS_AS((void)find_roots(k), std::domain_error);
    }
}

TEST_CASE("g_matrix") {
    SUBCASE("scalar case: G = 1 - e^{-tau} cos(tau)") {
        for (double tau : {0.5, 1.0, 2.0}) {
            const auto k = exp_abs_kernel(tau);
            const Matrix G = g_matrix(k, find_roots(k));
            CHECK(std::abs(G(0, 0) - (1.0 - std::exp(-tau) * std::cos(tau))) < 1e-12);
        }
    }
    SUBCASE("small-tau limit: the residue cancellation kills G") {
        // sum_n gamma_n (mu_m + izeta_n)^{-1} (mu_m' + izeta_n)^{-1} equals
        // -delta_{mm'} / beta_m', so G = int_0^tau g2 fhat2 -> 0 as tau -> 0
        const auto k = seeded_l2m2(1e-6);
        const auto roots = find_roots(k);
        for (int m = 0; m < k.M(); ++m)
            for (int mp = 0; mp < k.M(); ++mp) {
                Complex s(0, 0);
                for (int n = 0; n < k.N(); ++n)
                    s += roots.gamma[n] /
                         ((k.mus()[m] + roots.izeta[n]) * (k.mus()[mp] + roots.izeta[n]));
                const Complex expect = (m == mp) ? -1.0 / k.betas()[mp] : Complex(0, 0);
                CHECK(std::abs(s - expect) < 1e-9 * std::abs(1.0 / k.betas()[mp]));
            }
        const Matrix G = g_matrix(k, roots);
        CHECK(G.cwiseAbs().maxCoeff() < 1e-5);
    }
    SUBCASE("closed form matches the direct Volterra integral of g2 fhat2") {
        const auto k = seeded_l2m2(0.8);
        const Matrix G = g_matrix(k, find_roots(k));
        const auto kern = k.semiseparable();
        const Grid grid = Grid::trapezoid(0.0, 0.8, 3001);
        const auto fhat2 = solve_fhat2(kern, Complex(1, 0), grid);
        const auto s = kern.samples(grid);
        Matrix direct = Matrix::Zero(2, 2);
        for (int j = 0; j < grid.size(); ++j)
            direct += grid.weights()[j] * (s->g2[j] * fhat2[j]);
        CHECK((G - direct).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("det2_via_G") {
    SUBCASE("k(t) = e^{-|t|}: det2(I - K) = cos(tau)") {
        for (double tau : {0.5, 1.0, 2.0}) {
            const auto k = exp_abs_kernel(tau);
            CHECK(std::abs(det2_via_G(k, find_roots(k)) - std::cos(tau)) < 1e-12);
        }
    }
    SUBCASE("M = 0 gives 1 (Volterra case)") {
        const RationalSymbolKernel k({Complex(1, 0), Complex(0.4, 0.2)},
                                     {Complex(1, 0), Complex(2, 0.3)}, {}, {}, 1.0);
        CHECK(std::abs(det2_via_G(k, find_roots(k)) - 1.0) == 0.0);
    }
    SUBCASE("tau -> 0: det2 -> 1") {
        const auto k = exp_abs_kernel(1e-8);
        CHECK(std::abs(det2_via_G(k, find_roots(k)) - 1.0) < 1e-6);
    }
    SUBCASE("oracle agreement for e^{-|t|}") {
        const auto k = exp_abs_kernel(1.0);
        const auto disc = discretize(k.semiseparable(), Grid::trapezoid(0.0, 1.0, 2000),
                                     DiagonalRule::Average);
        CHECK(std::abs(oracle_det2(disc, Complex(1, 0)) - std::cos(1.0)) < 1e-3);
    }
}

TEST_CASE("day_formula") {
    SUBCASE("L = 0 collapses to 1") {
        const RationalSymbolKernel k({}, {}, {Complex(0.7, 0.1), Complex(1.2, -0.3)},
                                     {Complex(1.0, 0.2), Complex(1.7, 0)}, 0.9);
        const auto roots = find_roots(k);
        CHECK(std::abs(day_formula(k, roots, DaySide::A) - 1.0) < 1e-12);
        CHECK(std::abs(day_formula(k, roots, DaySide::B) - 1.0) < 1e-12);
    }
    SUBCASE("k(t) = e^{-|t|}: both sides equal cos(tau)") {
        for (double tau : {0.5, 1.0, 2.0}) {
            const auto k = exp_abs_kernel(tau);
            const auto roots = find_roots(k);
            const Complex a = day_formula(k, roots, DaySide::A);
            const Complex b = day_formula(k, roots, DaySide::B);
            CHECK(std::abs(a - std::cos(tau)) < 1e-12);
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
    SUBCASE("seeded L = 2, M = 2: four-way agreement") {
        const auto k = seeded_l2m2(1.0);
        const auto roots = find_roots(k);
        const Complex a = day_formula(k, roots, DaySide::A);
        const Complex b = day_formula(k, roots, DaySide::B);
        const Complex g = det2_via_G(k, roots);
        CHECK(std::abs(a - b) < 1e-10);
        CHECK(std::abs(a - g) < 1e-10);
        const auto disc = discretize(k.semiseparable(), Grid::trapezoid(0.0, 1.0, 2000),
                                     DiagonalRule::Average);
        const Complex oracle = oracle_det2(disc, Complex(1, 0));
        CHECK(std::abs(oracle - a) < 1e-3);
    }
    SUBCASE("odd-parity subset counts (L = 1, M = 2 and L = 2, M = 1)") {
        const RationalSymbolKernel k12({Complex(0.7, 0)}, {Complex(1.1, 0)},
                                       {Complex(0.4, 0.1), Complex(0.9, -0.3)},
                                       {Complex(1.3, 0.2), Complex(0.7, 0)}, 0.9);
        const auto r12 = find_roots(k12);
        CHECK(std::abs(day_formula(k12, r12, DaySide::A) - det2_via_G(k12, r12)) < 1e-12);
        CHECK(std::abs(day_formula(k12, r12, DaySide::B) - det2_via_G(k12, r12)) < 1e-12);

        const RationalSymbolKernel k21({Complex(0.5, 0.2), Complex(0.3, -0.4)},
                                       {Complex(0.8, 0.1), Complex(1.6, -0.3)},
                                       {Complex(0.9, 0)}, {Complex(1.0, 0.4)}, 0.9);
        const auto r21 = find_roots(k21);
        CHECK(std::abs(day_formula(k21, r21, DaySide::A) - det2_via_G(k21, r21)) < 1e-12);
        CHECK(std::abs(day_formula(k21, r21, DaySide::B) - det2_via_G(k21, r21)) < 1e-12);
    }
    SUBCASE("subset-size guard at N > 24") {
        std::vector<Complex> alphas(13), lambdas(13), betas(12), mus(12);
        for (int i = 0; i < 13; ++i) {
            alphas[i] = Complex(0.1 + 0.01 * i, 0.02 * i);
            lambdas[i] = Complex(1.0 + 0.1 * i, 0.05 * i);
        }
        for (int i = 0; i < 12; ++i) {
            betas[i] = Complex(0.2 + 0.01 * i, -0.015 * i);
            mus[i] = Complex(1.2 + 0.1 * i, -0.04 * i);
        }
        const RationalSymbolKernel k(alphas, lambdas, betas, mus, 0.5);
        const SymbolRoots dummy{};
        CHECK_THROWS_AS((void)day_formula(k, dummy, DaySide::A), std::length_error);
    }
}

TEST_CASE("det2 route through the semi-separable machinery matches Day") {
    const auto k = exp_abs_kernel(1.0);
    const Grid grid = Grid::trapezoid(0.0, 1.0, 2000);
    const auto rep = fredholm_det2(k.semiseparable(), Complex(1, 0), grid);
    CHECK(std::abs(rep.det2() - std::cos(1.0)) < 1e-7);
    CHECK(rep.det2_route_discrepancy < 1e-10);
}

TEST_CASE("cauchy_factorization_check") {
    SUBCASE("M = 1 symbols: Cauchy-Binet degenerates to a plain sum") {
        const RationalSymbolKernel k({Complex(0.5, 0.2), Complex(0.3, -0.4)},
                                     {Complex(0.8, 0.1), Complex(1.6, -0.3)},
                                     {Complex(0.9, 0)}, {Complex(1.0, 0.4)}, 0.9);
        CHECK(cauchy_factorization_check(k, find_roots(k)) < 1e-12);
    }
    SUBCASE("scalar exp kernel: factorization route equals the LU determinant") {
        const auto k = exp_abs_kernel(1.0);
        const auto roots = find_roots(k);
        CHECK(cauchy_factorization_check(k, roots) < 1e-12);
    }
    SUBCASE("seeded L = 2, M = 2 symbol") {
        const auto k = seeded_l2m2(1.0);
        CHECK(cauchy_factorization_check(k, find_roots(k)) < 1e-10);
    }
}

TEST_CASE("transpose symmetry: det2(I - K^T) = det2(I - K)") {
    const auto k = seeded_l2m2(1.0);
    const auto kt = k.transposed();
    const Complex d = det2_via_G(k, find_roots(k));
    const Complex dt = det2_via_G(kt, find_roots(kt));
    CHECK(std::abs(d - dt) / std::abs(d) < 1e-10);
}

TEST_CASE("continuity at zero bridges det2 to the plain determinant") {
    // k(0+) = k(0-) makes K trace class; det(I - K) = det2 * exp(-tau k(0))
    const RationalSymbolKernel k({Complex(0.3, 0), Complex(0.7, 0)},
                                 {Complex(1.0, 0), Complex(2.0, 0)}, {Complex(1.0, 0)},
                                 {Complex(1.3, 0)}, 1.0);
    REQUIRE(std::abs(k.k0_plus() - k.k0_minus()) < 1e-14);
    const auto roots = find_roots(k);
    const Complex det = det2_via_G(k, roots) * std::exp(-k.tau() * k.k0_plus());
    const auto disc = discretize(k.semiseparable(), Grid::trapezoid(0.0, 1.0, 2000),
                                 DiagonalRule::Average);
    CHECK(std::abs(oracle_det(disc, Complex(1, 0)) - det) < 1e-3);
}

TEST_CASE("invalid symbols are rejected") {
    CHECK_THROWS_AS(RationalSymbolKernel({Complex(1, 0)}, {Complex(-1, 0)}, {}, {}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(RationalSymbolKernel({Complex(1, 0), Complex(2, 0)},
                                         {Complex(1, 0), Complex(1, 0)}, {}, {}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(RationalSymbolKernel({}, {}, {}, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RationalSymbolKernel({Complex(1, 0)}, {Complex(1, 0)}, {}, {}, -1.0),
                    std::invalid_argument);
}
