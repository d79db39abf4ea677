#include "kerrteuk/tetrad.hpp"

#include <cmath>

namespace ktk {

std::string scaling_name(Scaling s) {
    switch (s) {
        case Scaling::Kinnersley: return "Kinnersley";
        case Scaling::KruskalBoost: return "Kruskal";
        case Scaling::ConformalRescale: return "Conformal";
        case Scaling::BoostDelta: return "BoostDelta";
    }
    return "?";
}

namespace {

void check_domain(const KerrParams& par, const ChartPoint& p, Scaling scaling) {
    double sinth = std::sin(p.x[2]);
    if (!(std::abs(sinth) > kAxisEps))
        throw std::domain_error("tetrad: point too close to the rotation axis");
    if (scaling == Scaling::KruskalBoost && p.chart != Chart::Kruskal)
        throw std::invalid_argument("tetrad: Kruskal scaling requires the Kruskal chart");
    if (scaling == Scaling::ConformalRescale && p.chart != Chart::Conformal)
        throw std::invalid_argument("tetrad: conformal scaling requires the Conformal chart");
    if (scaling == Scaling::BoostDelta && p.chart != Chart::BL)
        throw std::invalid_argument("tetrad: Delta-boost scaling implemented in BL only");
    (void)par;
}

int n_active(Chart c) { return c == Chart::Kruskal ? 3 : 2; }
int active_coord(Chart c, int pass) {
    if (c == Chart::Kruskal) return pass;  // U, V, theta
    return pass + 1;                       // r(x), theta
}

}  // namespace

Tetrad tetrad_build(const KerrParams& par, const ChartPoint& p, Scaling scaling) {
    check_domain(par, p, scaling);
    std::array<cplx, 4> X;
    for (int i = 0; i < 4; ++i) X[i] = cplx(p.x[i]);
    auto T = geo::tetrad_components<cplx>(par, p.chart, scaling, X);
    return Tetrad{p.chart, scaling, T.l, T.n, T.m};
}

FrameReport frame_check(const KerrParams& par, const Tetrad& t, const ChartPoint& p) {
    auto md = metric(par, p);
    auto ip = [&](const std::array<cplx, 4>& A, const std::array<cplx, 4>& B) {
        cplx s = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += md.g[i][j] * A[i] * B[j];
        return s;
    };
    std::array<cplx, 4> mb;
    for (int i = 0; i < 4; ++i) mb[i] = std::conj(t.m[i]);
    FrameReport rep;
    rep.residuals = {std::abs(ip(t.l, t.n) - 1.0), std::abs(ip(t.m, mb) + 1.0),
                     std::abs(ip(t.l, t.l)),       std::abs(ip(t.n, t.n)),
                     std::abs(ip(t.m, t.m)),       std::abs(ip(t.l, t.m)),
                     std::abs(ip(t.l, mb)),        std::abs(ip(t.n, t.m)),
                     std::abs(ip(t.n, mb)),        std::abs(ip(mb, mb))};
    rep.max_residual = 0.0;
    for (double r : rep.residuals) rep.max_residual = std::max(rep.max_residual, r);
    // orientation of (2^{-1/2}(n+l), Re m, -Im m, 2^{-1/2}(l-n))
    double e0[4], e1[4], e2[4], e3[4];
    for (int i = 0; i < 4; ++i) {
        e0[i] = (t.n[i].real() + t.l[i].real()) / std::sqrt(2.0);
        e1[i] = t.m[i].real();
        e2[i] = -t.m[i].imag();
        e3[i] = (t.l[i].real() - t.n[i].real()) / std::sqrt(2.0);
    }
    double det = 0.0;
    int idxs[4];
    auto perm_det = [&](auto&& self, int depth, int used, double sign) -> void {
        if (depth == 4) {
            double term = e0[idxs[0]] * e1[idxs[1]] * e2[idxs[2]] * e3[idxs[3]];
            det += sign * term;
            return;
        }
        for (int k = 0; k < 4; ++k) {
            if (used & (1 << k)) continue;
            int inv = 0;
            for (int j = 0; j < depth; ++j)
                if (idxs[j] > k) ++inv;
            idxs[depth] = k;
            self(self, depth + 1, used | (1 << k), sign * ((inv % 2) ? -1.0 : 1.0));
        }
    };
    perm_det(perm_det, 0, 0, 1.0);
    rep.orientation = (det * md.sqrt_det >= 0.0) ? 1.0 : -1.0;
    return rep;
}

GeoPoint geo_point(const KerrParams& par, const ChartPoint& p, Scaling scaling) {
    check_domain(par, p, scaling);
    const int nact = n_active(p.chart);

    Mat4S<cplx> g{}, gi{};
    std::array<Mat4S<cplx>, 4> dg{};
    geo::TetradS<cplx> tv;
    std::array<geo::TetradS<cplx>, 4> dT{};
    for (auto& m : dg)
        for (auto& row : m) row.fill(0.0);
    for (int pass = 0; pass < nact; ++pass) {
        int c = active_coord(p.chart, pass);
        std::array<Jet, 4> X;
        for (int i = 0; i < 4; ++i) X[i] = Jet(cplx(p.x[i]));
        X[c] = Jet::var_u(cplx(p.x[c]));
        auto gj = geo::metric_components<Jet>(par, p.chart, X);
        auto Tj = geo::tetrad_components<Jet>(par, p.chart, scaling, X);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                dg[c][i][j] = gj[i][j].du().val();
                if (pass == 0) g[i][j] = gj[i][j].val();
            }
        for (int i = 0; i < 4; ++i) {
            dT[c].l[i] = Tj.l[i].du().val();
            dT[c].n[i] = Tj.n[i].du().val();
            dT[c].m[i] = Tj.m[i].du().val();
            dT[c].mb[i] = Tj.mb[i].du().val();
            if (pass == 0) {
                tv.l[i] = Tj.l[i].val();
                tv.n[i] = Tj.n[i].val();
                tv.m[i] = Tj.m[i].val();
                tv.mb[i] = Tj.mb[i].val();
            }
        }
    }
    gi = geo::invert4<cplx>(g);

    std::array<std::array<std::array<cplx, 4>, 4>, 4> gam{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            for (int rh = 0; rh < 4; ++rh) {
                cplx s = 0.0;
                for (int sg = 0; sg < 4; ++sg)
                    s += gi[mu][sg] * (dg[rh][sg][nu] + dg[nu][sg][rh] - dg[sg][nu][rh]);
                gam[mu][nu][rh] = 0.5 * s;
            }

    auto lower = [&](const std::array<cplx, 4>& V) {
        std::array<cplx, 4> o{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) o[i] += g[i][j] * V[j];
        return o;
    };
    // nabla_a V_b with lowered components
    auto covlow = [&](const std::array<cplx, 4>& V, const std::array<cplx, 4>& Vlow,
                      const std::array<cplx, 4> dV[4]) {
        std::array<std::array<cplx, 4>, 4> D{};
        for (int A = 0; A < 4; ++A)
            for (int B = 0; B < 4; ++B) {
                cplx t_ = 0.0;
                for (int C = 0; C < 4; ++C)
                    t_ += dg[A][B][C] * V[C] + g[B][C] * dV[A][C];
                for (int C = 0; C < 4; ++C) t_ -= gam[C][A][B] * Vlow[C];
                D[A][B] = t_;
            }
        return D;
    };
    std::array<cplx, 4> dl[4], dn[4], dm[4], dmb[4];
    for (int c = 0; c < 4; ++c) {
        dl[c] = dT[c].l;
        dn[c] = dT[c].n;
        dm[c] = dT[c].m;
        dmb[c] = dT[c].mb;
    }

    GeoPoint G;
    G.l = tv.l;
    G.n = tv.n;
    G.m = tv.m;
    G.mb = tv.mb;
    G.l_low = lower(tv.l);
    G.n_low = lower(tv.n);
    G.m_low = lower(tv.m);
    G.mb_low = lower(tv.mb);
    auto Dl = covlow(tv.l, G.l_low, dl);
    auto Dn = covlow(tv.n, G.n_low, dn);
    auto Dm = covlow(tv.m, G.m_low, dm);
    auto Dmb = covlow(tv.mb, G.mb_low, dmb);

    auto ctr = [&](const std::array<cplx, 4>& A, const std::array<cplx, 4>& B,
                   const std::array<std::array<cplx, 4>, 4>& D) {
        cplx s = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s += A[i] * B[j] * D[j][i];
        return s;
    };
    G.rho = ctr(tv.m, tv.mb, Dl);
    G.tau = ctr(tv.m, tv.n, Dl);
    G.rho_prime = ctr(tv.mb, tv.m, Dn);
    G.tau_prime = ctr(tv.mb, tv.l, Dn);

    for (int A = 0; A < 4; ++A) {
        cplx s1 = 0.0, s2 = 0.0, s2b = 0.0;
        for (int b = 0; b < 4; ++b) {
            s1 += tv.n[b] * Dl[A][b];
            s2 += tv.m[b] * Dmb[A][b];
            s2b += tv.mb[b] * Dm[A][b];
        }
        G.w[A] = 0.5 * (s1 + s2);
        G.wb[A] = 0.5 * (s1 + s2b);
    }
    cplx taub = ctr(tv.mb, tv.n, Dl);
    cplx rhob = ctr(tv.mb, tv.m, Dl);
    for (int A = 0; A < 4; ++A) {
        G.Gamma[A] = G.tau * G.mb_low[A] - G.rho * G.n_low[A] - G.w[A];
        G.Gammab[A] = taub * G.m_low[A] - rhob * G.n_low[A] - G.wb[A];
    }

    double r = (p.chart == Chart::Conformal) ? 1.0 / p.x[1]
               : (p.chart == Chart::Kruskal) ? kruskal_radius(par, p.x[0] * p.x[1])
                                             : p.x[1];
    G.r = r;
    G.theta = p.x[2];
    G.Delta = par.Delta(r);
    G.zeta = cplx(r, -par.a * std::cos(p.x[2]));
    G.zetab = std::conj(G.zeta);
    G.rho2 = std::norm(G.zeta);

    auto dot = [&](const std::array<cplx, 4>& V, const std::array<cplx, 4>& f) {
        cplx s = 0.0;
        for (int i = 0; i < 4; ++i) s += V[i] * f[i];
        return s;
    };
    G.lw = dot(tv.l, G.w);
    G.lwb = dot(tv.l, G.wb);
    G.nw = dot(tv.n, G.w);
    G.nwb = dot(tv.n, G.wb);
    G.mw = dot(tv.m, G.w);
    G.mwb = dot(tv.m, G.wb);
    G.mbw = dot(tv.mb, G.w);
    G.mbwb = dot(tv.mb, G.wb);
    return G;
}

SpinCoeffs spin_coefficients(const KerrParams& par, const ChartPoint& p, Scaling scaling) {
    auto G = geo_point(par, p, scaling);
    SpinCoeffs sc;
    sc.rho = G.rho;
    sc.tau = G.tau;
    sc.rho_prime = G.rho_prime;
    sc.tau_prime = G.tau_prime;
    sc.psi2 = -par.M / (G.zeta * G.zeta * G.zeta);
    return sc;
}

cplx connection_form(const KerrParams& par, const ChartPoint& p, Scaling scaling,
                     const std::array<double, 4>& direction) {
    auto G = geo_point(par, p, scaling);
    cplx s = 0.0;
    for (int i = 0; i < 4; ++i) s += direction[i] * G.w[i];
    return s;
}

cplx teukolsky_potential(const KerrParams& par, const ChartPoint& p, Scaling scaling,
                         const std::array<double, 4>& direction) {
    auto G = geo_point(par, p, scaling);
    cplx s = 0.0;
    for (int i = 0; i < 4; ++i) s += direction[i] * G.Gamma[i];
    return s;
}

}  // namespace ktk
