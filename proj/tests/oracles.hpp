// Test-only reference machinery: fixed-step RK4 shooting for the scalar
// Schroedinger equation and a bisection helper. Deliberately independent of
// the Volterra code paths it checks.
#pragma once

#include "semisep/schrodinger.hpp"

#include <algorithm>
#include <functional>

namespace oracles {

using semisep::Complex;
using semisep::schrodinger::Potential;

struct ShotState {
    Complex psi;
    Complex dpsi;
};

// psi'' = (V - z) psi integrated from `from` to `to` (either direction),
// split at potential breakpoints; V is evaluated strictly inside each piece.
inline ShotState rk4_shoot(const Potential& pot, Complex z, double from, double to,
                           ShotState s, double step_hint) {
    const double dir = (to > from) ? 1.0 : -1.0;
    std::vector<double> edges{from, to};
    if (dir < 0) std::swap(edges[0], edges[1]);
    for (double b : pot.breakpoints())
        if (b > edges[0] + 1e-14 && b < edges[1] - 1e-14) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    if (dir < 0) std::reverse(edges.begin(), edges.end());

    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        const double len = std::abs(hi - lo);
        if (len < 1e-15) continue;
        const int n = std::max(2, static_cast<int>(std::ceil(len / step_hint)));
        const double h = (hi - lo) / n;
        const double in0 = std::min(lo, hi) + 1e-9 * std::max(1.0, len);
        const double in1 = std::max(lo, hi) - 1e-9 * std::max(1.0, len);
        auto V = [&](double x) { return pot.raw(std::clamp(x, in0, in1)); };
        auto f = [&](double x, ShotState y) {
            return ShotState{y.dpsi, (V(x) - z) * y.psi};
        };
        double x = lo;
        for (int k = 0; k < n; ++k) {
            const ShotState k1 = f(x, s);
            const ShotState k2 =
                f(x + h / 2, {s.psi + (h / 2) * k1.psi, s.dpsi + (h / 2) * k1.dpsi});
            const ShotState k3 =
                f(x + h / 2, {s.psi + (h / 2) * k2.psi, s.dpsi + (h / 2) * k2.dpsi});
            const ShotState k4 = f(x + h, {s.psi + h * k3.psi, s.dpsi + h * k3.dpsi});
            s.psi += (h / 6) * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
            s.dpsi += (h / 6) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
            x += h;
        }
    }
    return s;
}

// Jost function F(z) = f(z,0) for a compactly supported half-line potential:
// shoot backward from the support edge where f = e^{i z^{1/2} x} exactly.
inline Complex shoot_jost_halfline(const Potential& pot, Complex z, double step_hint) {
    semisep::schrodinger::SpectralPoint zp(z);
    const double R = pot.support_bound();
    const Complex e = std::exp(Complex(0, 1) * zp.sqrt_z * R);
    const ShotState end{e, Complex(0, 1) * zp.sqrt_z * e};
    return rk4_shoot(pot, z, R, 0.0, end, step_hint).psi;
}

// Line Jost function via the Wronskian of f- and f+ shot from the two
// support edges and matched at x = 0.
inline Complex shoot_jost_line(const Potential& pot, Complex z, double step_hint) {
    semisep::schrodinger::SpectralPoint zp(z);
    const Complex i(0, 1);
    const double R = pot.support_bound();
    const Complex ep = std::exp(i * zp.sqrt_z * R);
    const ShotState fp = rk4_shoot(pot, z, R, 0.0, {ep, i * zp.sqrt_z * ep}, step_hint);
    const Complex em = std::exp(i * zp.sqrt_z * R);  // e^{-i zs (-R)}
    const ShotState fm = rk4_shoot(pot, z, -R, 0.0, {em, -i * zp.sqrt_z * em}, step_hint);
    const Complex W = fm.psi * fp.dpsi - fm.dpsi * fp.psi;
    return W / (2.0 * i * zp.sqrt_z);
}

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("bisect: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracles
