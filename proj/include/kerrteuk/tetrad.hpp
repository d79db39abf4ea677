// Principal null tetrads in the scalings used on the exterior, the horizon,
// and at null infinity; numerically computed GHP spin coefficients and the
// connection/Teukolsky potentials. Everything is assembled from covariant
// derivatives of the analytic frame fields, evaluated on jets.
#pragma once

#include <array>
#include <complex>
#include <functional>

#include "kerrteuk/geometry.hpp"

namespace ktk {

inline constexpr double kAxisEps = 1e-8;  // m is singular on the rotation axis

enum class Scaling { Kinnersley, KruskalBoost, ConformalRescale, BoostDelta };

std::string scaling_name(Scaling s);

struct Tetrad {
    Chart chart = Chart::BL;
    Scaling scaling = Scaling::Kinnersley;
    std::array<cplx, 4> l{}, n{}, m{};
};

struct FrameReport {
    double max_residual = 0.0;
    std::array<double, 10> residuals{};  // ln-1, mmb+1, ll, nn, mm, lm, lmb, nm, nmb, mbmb
    double orientation = 0.0;            // sign of the induced real frame volume
};

struct SpinCoeffs {
    cplx rho, tau, rho_prime, tau_prime;
    cplx psi2;
};

// Pointwise pack of every frame scalar the mode machinery needs. All values
// are exact to machine precision (jet-differentiated analytic components).
struct GeoPoint {
    std::array<cplx, 4> l{}, n{}, m{}, mb{};
    std::array<cplx, 4> l_low{}, n_low{}, m_low{}, mb_low{};
    std::array<cplx, 4> w{}, wb{};            // connection form and conjugate
    std::array<cplx, 4> Gamma{}, Gammab{};    // Gamma_a = B_a - w_a (one-form)
    cplx rho{}, tau{}, rho_prime{}, tau_prime{};
    cplx zeta{}, zetab{};
    double Delta{}, rho2{}, r{}, theta{};
    cplx lw{}, lwb{}, nw{}, nwb{}, mw{}, mwb{}, mbw{}, mbwb{};
};

Tetrad tetrad_build(const KerrParams& par, const ChartPoint& p, Scaling scaling);
FrameReport frame_check(const KerrParams& par, const Tetrad& t, const ChartPoint& p);
GeoPoint geo_point(const KerrParams& par, const ChartPoint& p, Scaling scaling);
SpinCoeffs spin_coefficients(const KerrParams& par, const ChartPoint& p, Scaling scaling);
cplx connection_form(const KerrParams& par, const ChartPoint& p, Scaling scaling,
                     const std::array<double, 4>& direction);
cplx teukolsky_potential(const KerrParams& par, const ChartPoint& p, Scaling scaling,
                         const std::array<double, 4>& direction);

// ---------------------------------------------------------------------------
// Templated tetrad components (contravariant, chart coordinates)
// ---------------------------------------------------------------------------

namespace geo {

template <class S>
struct TetradS {
    std::array<S, 4> l, n, m, mb;
};

// mbar is built structurally (i -> -i), valid as an analytic function
template <class S>
TetradS<S> tetrad_components(const KerrParams& par, Chart chart, Scaling scaling,
                             const std::array<S, 4>& X) {
    using std::sin;
    using std::cos;
    const double a = par.a, M = par.M;
    const cplx I(0.0, 1.0);
    const double sq2 = std::sqrt(2.0);
    TetradS<S> T;
    for (int i = 0; i < 4; ++i) T.l[i] = T.n[i] = T.m[i] = T.mb[i] = S(0.0);

    auto m_bl_parts = [&](const S& r, const S& th, std::array<S, 4>& m, std::array<S, 4>& mb) {
        S c = cos(th), s = sin(th);
        S p = r + cplx(0.0, a) * c;    // r + i a cos
        S z = r - cplx(0.0, a) * c;    // r - i a cos
        m[0] = I * cplx(a) * s / (cplx(sq2) * p);
        m[2] = cplx(1.0) / (cplx(sq2) * p);
        m[3] = I / (cplx(sq2) * p * s);
        mb[0] = -I * cplx(a) * s / (cplx(sq2) * z);
        mb[2] = cplx(1.0) / (cplx(sq2) * z);
        mb[3] = -I / (cplx(sq2) * z * s);
    };

    switch (chart) {
        case Chart::BL: {
            const S& r = X[1];
            S th = X[2];
            S c = cos(th);
            S Delta = r * r - 2.0 * M * r + cplx(a * a);
            S rho2 = r * r + cplx(a * a) * c * c;
            T.l = {(r * r + cplx(a * a)) / Delta, S(1.0), S(0.0), cplx(a) / Delta};
            T.n = {(r * r + cplx(a * a)) / (2.0 * rho2), S(0.0) - Delta / (2.0 * rho2), S(0.0),
                   cplx(a) / (2.0 * rho2)};
            m_bl_parts(r, th, T.m, T.mb);
            if (scaling == Scaling::BoostDelta) {
                for (auto& e : T.l) e = e * Delta;
                for (auto& e : T.n) e = e / Delta;
            }
            break;
        }
        case Chart::KerrStar: {
            const S& r = X[1];
            S th = X[2];
            S c = cos(th);
            S Delta = r * r - 2.0 * M * r + cplx(a * a);
            S rho2 = r * r + cplx(a * a) * c * c;
            T.l = {2.0 * (r * r + cplx(a * a)) / Delta, S(1.0), S(0.0), cplx(2.0 * a) / Delta};
            T.n = {S(0.0), S(0.0) - Delta / (2.0 * rho2), S(0.0), S(0.0)};
            m_bl_parts(r, th, T.m, T.mb);
            break;
        }
        case Chart::StarKerr: {
            const S& r = X[1];
            S th = X[2];
            S c = cos(th);
            S Delta = r * r - 2.0 * M * r + cplx(a * a);
            S rho2 = r * r + cplx(a * a) * c * c;
            T.l = {S(0.0), S(1.0), S(0.0), S(0.0)};
            T.n = {(r * r + cplx(a * a)) / rho2, S(0.0) - Delta / (2.0 * rho2), S(0.0),
                   cplx(a) / rho2};
            m_bl_parts(r, th, T.m, T.mb);
            break;
        }
        case Chart::Kruskal: {
            const double rp = par.r_plus(), rm = par.r_minus();
            const double kp = par.kappa_plus(), Op = par.omega_plus();
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
            S r2a2 = r * r + cplx(a * a);
            const double rp2a2 = rp * rp + a * a;
            S p = r + cplx(0.0, a) * c;
            S z = r - cplx(0.0, a) * c;
            S mt = I * cplx(a) * s / (cplx(sq2) * p);        // BL m^t
            S mph = I / (cplx(sq2) * p * s);                 // BL m^phi
            S mth = cplx(1.0) / (cplx(sq2) * p);
            if (scaling == Scaling::KruskalBoost) {
                T.l = {S(0.0), cplx(-2.0 * kp) * r2a2 / ((r - cplx(rm)) * G), S(0.0),
                       cplx(a) * U * (r + cplx(rp)) / ((r - cplx(rm)) * cplx(rp2a2))};
                T.n = {cplx(kp) * r2a2 / rho2, S(0.0), S(0.0),
                       cplx(a) * V * (r + cplx(rp)) * G / (2.0 * rho2 * cplx(rp2a2))};
            } else {
                // Kinnersley in KBL coordinates (not smooth at the horizons)
                S Delta = r * r - 2.0 * M * r + cplx(a * a);
                S fac = cplx(a) * (cplx(1.0) - r2a2 / cplx(rp2a2));
                T.l = {S(0.0), cplx(2.0 * kp) * r2a2 * V / Delta, S(0.0), fac / Delta};
                T.n = {cplx(-kp) * r2a2 * U / rho2, S(0.0), S(0.0), fac / (2.0 * rho2)};
            }
            T.m = {cplx(-kp) * U * mt, cplx(kp) * V * mt, mth, mph - cplx(Op) * mt};
            S mtb = -I * cplx(a) * s / (cplx(sq2) * z);
            S mphb = -I / (cplx(sq2) * z * s);
            S mthb = cplx(1.0) / (cplx(sq2) * z);
            T.mb = {cplx(-kp) * U * mtb, cplx(kp) * V * mtb, mthb, mphb - cplx(Op) * mtb};
            break;
        }
        case Chart::Conformal: {
            const S& x = X[1];
            S th = X[2];
            S c = cos(th), s = sin(th);
            S rhox2 = cplx(1.0) + cplx(a * a) * x * x * c * c;
            S Deltax = cplx(1.0) - 2.0 * M * x + cplx(a * a) * x * x;
            S px = cplx(1.0) + cplx(0.0, a) * x * c;
            S zx = cplx(1.0) - cplx(0.0, a) * x * c;
            // breve l = l, breve n = x^{-2} n, breve m = x^{-1} m
            T.l = {2.0 * (cplx(1.0) + cplx(a * a) * x * x) / Deltax, S(0.0) - x * x, S(0.0),
                   cplx(2.0 * a) * x * x / Deltax};
            T.n = {S(0.0), Deltax / (2.0 * rhox2), S(0.0), S(0.0)};
            T.m = {I * cplx(a) * s / (cplx(sq2) * px), S(0.0), cplx(1.0) / (cplx(sq2) * px),
                   I / (cplx(sq2) * px * s)};
            T.mb = {-I * cplx(a) * s / (cplx(sq2) * zx), S(0.0), cplx(1.0) / (cplx(sq2) * zx),
                    -I / (cplx(sq2) * zx * s)};
            break;
        }
    }
    return T;
}

// Full scalar pack as bivariate jets in (r,theta), Kinnersley/BL only; this is
// what the separated mode operators are assembled from.
template <int K>
struct GeoSeries {
    using J = Jet2<K>;
    std::array<J, 4> l, n, m, mb;
    J lw, lwb, nw, nwb, mw, mwb, mbw, mbwb;
    J rho, rhob, tau, taub, rhop, rhopb, taup, taupb;
    J zeta, zetab, Delta, rho2, Psi2, Psi2b, sinth, costh, rr;
};

template <int K>
GeoSeries<K> geo_series_bl(const KerrParams& par, cplx r0, double th0) {
    using J = Jet2<K>;
    const double a = par.a, M = par.M;
    GeoSeries<K> G;
    J r = J::var_u(r0);
    J th = J::var_v(cplx(th0));
    J c = cos(th), s = sin(th);
    G.rr = r;
    G.sinth = s;
    G.costh = c;
    G.Delta = r * r - 2.0 * M * r + cplx(a * a);
    G.zeta = r - cplx(0.0, a) * c;
    G.zetab = r + cplx(0.0, a) * c;
    G.rho2 = G.zeta * G.zetab;
    G.Psi2 = cplx(-M) / (G.zeta * G.zeta * G.zeta);
    G.Psi2b = cplx(-M) / (G.zetab * G.zetab * G.zetab);

    std::array<J, 4> X{J(cplx(0.0)), r, th, J(cplx(0.0))};
    auto g = metric_components<J>(par, Chart::BL, X);
    auto T = tetrad_components<J>(par, Chart::BL, Scaling::Kinnersley, X);
    G.l = T.l;
    G.n = T.n;
    G.m = T.m;
    G.mb = T.mb;

    auto gi = invert4<J>(g);
    // christoffels (coords t,r,th,ph; only d/dr = du, d/dth = dv nonzero)
    auto pd = [&](const J& f, int k) -> J {
        if (k == 1) return f.du();
        if (k == 2) return f.dv();
        return J(cplx(0.0));
    };
    std::array<std::array<std::array<J, 4>, 4>, 4> gam;  // [mu][nu][rh]
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            for (int rh = 0; rh < 4; ++rh) {
                J ssum(cplx(0.0));
                for (int sg = 0; sg < 4; ++sg)
                    ssum += gi[mu][sg] * (pd(g[sg][nu], rh) + pd(g[sg][rh], nu) - pd(g[nu][rh], sg));
                gam[mu][nu][rh] = 0.5 * ssum;
            }
    auto lower = [&](const std::array<J, 4>& V) {
        std::array<J, 4> out;
        for (int i = 0; i < 4; ++i) {
            out[i] = J(cplx(0.0));
            for (int j = 0; j < 4; ++j) out[i] += g[i][j] * V[j];
        }
        return out;
    };
    auto covlow = [&](const std::array<J, 4>& Vlow) {
        std::array<std::array<J, 4>, 4> D;  // D[a][b] = nabla_a V_b
        for (int A = 0; A < 4; ++A)
            for (int B = 0; B < 4; ++B) {
                J t_ = pd(Vlow[B], A);
                for (int C = 0; C < 4; ++C) t_ -= gam[C][A][B] * Vlow[C];
                D[A][B] = t_;
            }
        return D;
    };
    auto l_low = lower(G.l), n_low = lower(G.n), m_low = lower(G.m), mb_low = lower(G.mb);
    auto Dl = covlow(l_low), Dn = covlow(n_low), Dm = covlow(m_low), Dmb = covlow(mb_low);
    auto ctr = [&](const std::array<J, 4>& A, const std::array<J, 4>& B,
                   const std::array<std::array<J, 4>, 4>& D) {
        J s_(cplx(0.0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s_ += A[i] * B[j] * D[j][i];
        return s_;
    };
    G.rho = ctr(G.m, G.mb, Dl);
    G.tau = ctr(G.m, G.n, Dl);
    G.rhop = ctr(G.mb, G.m, Dn);
    G.taup = ctr(G.mb, G.l, Dn);
    // conjugate scalars as analytic functions (swap m <-> mb)
    G.rhob = ctr(G.mb, G.m, Dl);
    G.taub = ctr(G.mb, G.n, Dl);
    G.rhopb = ctr(G.m, G.mb, Dn);
    G.taupb = ctr(G.m, G.l, Dn);
    std::array<J, 4> w, wb;
    for (int A = 0; A < 4; ++A) {
        J s1(cplx(0.0)), s2(cplx(0.0)), s1b(cplx(0.0)), s2b(cplx(0.0));
        for (int b = 0; b < 4; ++b) {
            s1 += G.n[b] * Dl[A][b];
            s2 += G.m[b] * Dmb[A][b];
            s1b += G.n[b] * Dl[A][b];
            s2b += G.mb[b] * Dm[A][b];
        }
        w[A] = 0.5 * (s1 + s2);
        wb[A] = 0.5 * (s1b + s2b);
    }
    auto dot = [&](const std::array<J, 4>& V, const std::array<J, 4>& form) {
        J s_(cplx(0.0));
        for (int i = 0; i < 4; ++i) s_ += V[i] * form[i];
        return s_;
    };
    G.lw = dot(G.l, w);
    G.lwb = dot(G.l, wb);
    G.nw = dot(G.n, w);
    G.nwb = dot(G.n, wb);
    G.mw = dot(G.m, w);
    G.mwb = dot(G.m, wb);
    G.mbw = dot(G.mb, w);
    G.mbwb = dot(G.mb, wb);
    return G;
}

}  // namespace geo
}  // namespace ktk
