// Kerr background: params, charts, metrics, Christoffel symbols, tortoise and
// Kruskal functions. The component forms are templated on the scalar type so
// the same expressions can be evaluated on numbers or on truncated Taylor
// jets; every derivative in the toolkit comes from the latter.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include "kerrteuk/jet.hpp"

namespace ktk {

struct KerrParams {
    double M = 1.0;
    double a = 0.0;

    KerrParams() = default;
    KerrParams(double M_, double a_) : M(M_), a(a_) {
        if (!(M > 0.0)) throw std::invalid_argument("KerrParams: M must be positive");
        if (!(std::abs(a) < M)) throw std::invalid_argument("KerrParams: subextreme requires |a| < M");
    }
    double r_plus() const { return M + std::sqrt(M * M - a * a); }
    double r_minus() const { return M - std::sqrt(M * M - a * a); }
    double kappa_plus() const {
        double rp = r_plus();
        return (r_plus() - r_minus()) / (2.0 * (rp * rp + a * a));
    }
    double kappa_minus() const {
        double rm = r_minus();
        return (r_plus() - r_minus()) / (2.0 * (rm * rm + a * a));
    }
    double omega_plus() const {
        double rp = r_plus();
        return a / (rp * rp + a * a);
    }
    double Delta(double r) const { return r * r - 2.0 * M * r + a * a; }
};

enum class Chart { BL, KerrStar, StarKerr, Kruskal, Conformal };

std::string chart_name(Chart c);

struct ChartPoint {
    Chart chart = Chart::BL;
    std::array<double, 4> x{};  // BL/K*/*K: (t,r,th,phi[*]); Kruskal: (U,V,th,phi+); Conformal: (t*,x,th,phi*)
};

using Mat4 = std::array<std::array<double, 4>, 4>;

struct MetricData {
    Mat4 g{};
    Mat4 g_inv{};
    double sqrt_det = 0.0;  // sqrt(-det g)
};

struct HorizonData0 {
    double r_minus, r_plus, kappa_minus, kappa_plus, omega_plus;
};

HorizonData0 horizons(const KerrParams& par);

struct TortoiseTwist {
    double r_star;
    double twist;  // A(r)
};

// closed-form partial fractions; r and r0 must lie in the same block
TortoiseTwist tortoise_and_twist(const KerrParams& par, double r, double r0);
double default_r0(const KerrParams& par, double r);  // 3M outside, (r+ + r-)/2 inside
double r_of_rstar(const KerrParams& par, double rstar, double r0);  // exterior inverse

// G(r) = -e^{-2 kappa_+ r} (r - r_-)^{r_-/r_+}, and the implicit radius r(UV)
double kruskal_G(const KerrParams& par, double r);
double kruskal_radius(const KerrParams& par, double UV);

ChartPoint chart_transform(const KerrParams& par, const ChartPoint& p, Chart target,
                           std::optional<double> r0 = std::nullopt);

MetricData metric(const KerrParams& par, const ChartPoint& p);

using Christoffel = std::array<std::array<std::array<double, 4>, 4>, 4>;  // [mu][nu][rho]

Christoffel christoffels(const KerrParams& par, const ChartPoint& p);

// residual max_{mu,nu,rho} |nabla_rho g_{mu nu}| at p
double metric_compatibility_residual(const KerrParams& par, const ChartPoint& p);

// Ricci scalar of the conformally rescaled metric, R = -(6/rho^2)(2 Delta - r Delta')
double conformal_ricci(const KerrParams& par, const ChartPoint& p);

// ---------------------------------------------------------------------------
// Templated component forms (S = cplx or Jet2<K>)
// ---------------------------------------------------------------------------

template <class S>
using Mat4S = std::array<std::array<S, 4>, 4>;

template <class S>
struct KruskalAux {
    S r;        // r(UV)
    S G;        // G(r)
};

namespace geo {

template <class S>
S kruskal_G_of(const KerrParams& par, const S& r) {
    const double rp = par.r_plus(), rm = par.r_minus(), kp = par.kappa_plus();
    using ktk::exp;
    using ktk::pow_real;
    return -exp(S(-2.0 * kp) * r) * pow_real(r - cplx(rm), rm / rp);
}
inline cplx kruskal_G_of(const KerrParams& par, const cplx& r) {
    const double rp = par.r_plus(), rm = par.r_minus(), kp = par.kappa_plus();
    return -std::exp(-2.0 * kp * r) * std::pow(r - rm, rm / rp);
}

// r(UV) as a jet: scalar bracketed solve for the value, Newton in jet arithmetic
template <int K>
Jet2<K> kruskal_r_of(const KerrParams& par, const Jet2<K>& w) {
    double w0 = w.val().real();
    double r0 = kruskal_radius(par, w0);
    Jet2<K> r{cplx(r0)};
    for (int it = 0; it < K + 3; ++it) {
        auto G = kruskal_G_of(par, r);
        auto F = (r - cplx(par.r_plus())) - w * G;
        auto dG = G * (Jet2<K>(cplx(-2.0 * par.kappa_plus())) +
                       Jet2<K>(cplx(par.r_minus() / par.r_plus())) / (r - cplx(par.r_minus())));
        auto dF = Jet2<K>(cplx(1.0)) - w * dG;
        r = r - F / dF;
    }
    return r;
}

template <class S>
Mat4S<S> metric_components(const KerrParams& par, Chart chart, const std::array<S, 4>& X) {
    using std::sin;   // enable ADL for Jet2 overloads
    using std::cos;
    const double M = par.M, a = par.a;
    Mat4S<S> g;
    for (auto& row : g)
        for (auto& e : row) e = S(0.0);

    auto bl_block = [&](const S& r, const S& th, S& gtt, S& gtp, S& gpp, S& gthth, S& rho2, S& Delta) {
        S c = cos(th), s = sin(th);
        Delta = r * r - 2.0 * M * r + cplx(a * a);
        rho2 = r * r + cplx(a * a) * c * c;
        S sig2 = (r * r + cplx(a * a)) * (r * r + cplx(a * a)) - cplx(a * a) * s * s * Delta;
        gtt = (Delta - cplx(a * a) * s * s) / rho2;
        gtp = cplx(2.0 * M * a) * r * s * s / rho2;
        gpp = S(0.0) - sig2 * s * s / rho2;
        gthth = S(0.0) - rho2;
    };

    switch (chart) {
        case Chart::BL: {
            S gtt, gtp, gpp, gthth, rho2, Delta;
            bl_block(X[1], X[2], gtt, gtp, gpp, gthth, rho2, Delta);
            g[0][0] = gtt;
            g[0][3] = g[3][0] = gtp;
            g[1][1] = S(0.0) - rho2 / Delta;
            g[2][2] = gthth;
            g[3][3] = gpp;
            break;
        }
        case Chart::KerrStar:
        case Chart::StarKerr: {
            // g = g_tt dt*^2 + 2 g_tphi dt* dphi* + g_phiphi dphi*^2 - rho^2 dth^2
            //     - 2 dt* dr + 2 a sin^2 th dphi* dr   (signs flip for *K)
            S gtt, gtp, gpp, gthth, rho2, Delta;
            bl_block(X[1], X[2], gtt, gtp, gpp, gthth, rho2, Delta);
            const double sgn = (chart == Chart::KerrStar) ? 1.0 : -1.0;
            S s = sin(X[2]);
            g[0][0] = gtt;
            g[0][3] = g[3][0] = gtp;
            g[2][2] = gthth;
            g[3][3] = gpp;
            g[0][1] = g[1][0] = cplx(-sgn);
            g[3][1] = g[1][3] = cplx(sgn * a) * s * s;
            break;
        }
        case Chart::Kruskal: {
            const double rp = par.r_plus(), rm = par.r_minus(), kp = par.kappa_plus();
            const S& U = X[0];
            const S& V = X[1];
            S th = X[2];
            S c = cos(th), s = sin(th);
            S w = U * V;
            S r;
            if constexpr (std::is_same_v<S, cplx>) {
                r = cplx(kruskal_radius(par, w.real()));
            } else {
                r = kruskal_r_of(par, w);
            }
            S G = kruskal_G_of(par, r);
            S rho2 = r * r + cplx(a * a) * c * c;
            S rho2p = cplx(rp * rp) + cplx(a * a) * c * c;
            S r2a2 = r * r + cplx(a * a);
            const double rp2a2 = rp * rp + a * a;
            S g1 = G * G * cplx(a * a) * s * s / (cplx(4.0 * kp * kp) * rho2) * (r - cplx(rm)) *
                   (r + cplx(rp)) / (r2a2 * cplx(rp2a2)) * (rho2 / r2a2 + rho2p / cplx(rp2a2));
            S g2 = G * (r - cplx(rm)) / (cplx(2.0 * kp * kp) * rho2) *
                   (rho2 * rho2 / (r2a2 * r2a2) + rho2p * rho2p / cplx(rp2a2 * rp2a2));
            S g3 = G * G * cplx(a * a) * s * s / (cplx(4.0 * kp * kp) * rho2) * (r + cplx(rp)) *
                   (r + cplx(rp)) / cplx(rp2a2 * rp2a2);
            // single power of kappa_+ here (the quadratic-in-dt blocks carry two);
            // pinned by the isometric embedding, see the pullback test
            S g4 = G * cplx(a) * s * s / (cplx(kp) * rho2 * cplx(rp2a2)) *
                   (rho2p * (r - cplx(rm)) + r2a2 * (r + cplx(rp)));
            S sig2 = r2a2 * r2a2 - cplx(a * a) * s * s * (r * r - 2.0 * M * r + cplx(a * a));
            S gpp = S(0.0) - sig2 * s * s / rho2;
            // -g1 (U^2 dV^2 + V^2 dU^2) - g2 dU dV - g3 (U dV - V dU)^2
            // - g4 (U dV - V dU) dphi+ - rho^2 dth^2 + g_phiphi dphi+^2
            g[0][0] = S(0.0) - g1 * V * V - g3 * V * V;                  // dU^2
            g[1][1] = S(0.0) - g1 * U * U - g3 * U * U;                  // dV^2
            g[0][1] = g[1][0] = S(0.0) - 0.5 * g2 + g3 * U * V;          // dU dV
            g[1][3] = g[3][1] = S(0.0) - 0.5 * g4 * U;                   // dV dphi+
            g[0][3] = g[3][0] = 0.5 * g4 * V;                            // dU dphi+
            g[2][2] = S(0.0) - rho2;
            g[3][3] = gpp;
            break;
        }
        case Chart::Conformal: {
            // valid for x < 1/(4M)
            const S& xx = X[1];
            S th = X[2];
            S c = cos(th), s = sin(th);
            S rhox2 = cplx(1.0) + cplx(a * a) * xx * xx * c * c;
            g[0][0] = xx * xx - cplx(2.0 * M) * xx * xx * xx / rhox2;
            g[0][3] = g[3][0] = cplx(2.0 * M * a) * xx * xx * xx * s * s / rhox2;
            g[0][1] = g[1][0] = cplx(1.0);
            g[3][1] = g[1][3] = S(0.0) - cplx(a) * s * s;
            g[3][3] = S(0.0) - s * s * (cplx(1.0) + cplx(a * a) * xx * xx +
                                        cplx(2.0 * M * a * a) * xx * xx * xx * s * s / rhox2);
            g[2][2] = S(0.0) - rhox2;
            break;
        }
    }
    return g;
}

template <class S>
Mat4S<S> invert4(const Mat4S<S>& g) {
    // cofactor inversion; S must support field arithmetic
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return g[r0][c0] * (g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]) -
               g[r0][c1] * (g[r1][c0] * g[r2][c2] - g[r1][c2] * g[r2][c0]) +
               g[r0][c2] * (g[r1][c0] * g[r2][c1] - g[r1][c1] * g[r2][c0]);
    };
    const int rows[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    Mat4S<S> inv;
    S det = S(0.0);
    for (int j = 0; j < 4; ++j) {
        S c = det3(rows[0][0], rows[0][1], rows[0][2], rows[j][0], rows[j][1], rows[j][2]);
        if (j % 2 == 1) c = S(0.0) - c;
        inv[j][0] = c;  // transpose of cofactor matrix column
        det += g[0][j] * c;
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            S c = det3(rows[i][0], rows[i][1], rows[i][2], rows[j][0], rows[j][1], rows[j][2]);
            if ((i + j) % 2 == 1) c = S(0.0) - c;
            inv[j][i] = c / det;
        }
    return inv;
}

template <class S>
S det4(const Mat4S<S>& g) {
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return g[r0][c0] * (g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1]) -
               g[r0][c1] * (g[r1][c0] * g[r2][c2] - g[r1][c2] * g[r2][c0]) +
               g[r0][c2] * (g[r1][c0] * g[r2][c1] - g[r1][c1] * g[r2][c0]);
    };
    S det = S(0.0);
    const int rows[3] = {1, 2, 3};
    const int cols[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    double sgn = 1.0;
    for (int j = 0; j < 4; ++j) {
        det += cplx(sgn) * g[0][j] * det3(rows[0], rows[1], rows[2], cols[j][0], cols[j][1], cols[j][2]);
        sgn = -sgn;
    }
    return det;
}

}  // namespace geo
}  // namespace ktk
