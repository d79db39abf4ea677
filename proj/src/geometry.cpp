#include "kerrteuk/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ktk {

std::string chart_name(Chart c) {
    switch (c) {
        case Chart::BL: return "BL";
        case Chart::KerrStar: return "KerrStar";
        case Chart::StarKerr: return "StarKerr";
        case Chart::Kruskal: return "Kruskal";
        case Chart::Conformal: return "Conformal";
    }
    return "?";
}

HorizonData0 horizons(const KerrParams& par) {
    return {par.r_minus(), par.r_plus(), par.kappa_minus(), par.kappa_plus(), par.omega_plus()};
}

namespace {
int block_of(const KerrParams& par, double r) {
    if (r > par.r_plus()) return 1;
    if (r > par.r_minus()) return 2;
    return 3;
}
}  // namespace

TortoiseTwist tortoise_and_twist(const KerrParams& par, double r, double r0) {
    if (block_of(par, r) != block_of(par, r0) || block_of(par, r) == 3)
        throw std::domain_error("tortoise_and_twist: r and r0 must lie in the same block");
    const double rp = par.r_plus(), rm = par.r_minus();
    const double kp = par.kappa_plus(), km = par.kappa_minus();
    auto rstar = [&](double rr) {
        return rr + std::log(std::abs(rr - rp)) / (2.0 * kp) - std::log(std::abs(rr - rm)) / (2.0 * km);
    };
    auto twist = [&](double rr) {
        return par.a / (rp - rm) * std::log(std::abs((rr - rp) / (rr - rm)));
    };
    return {rstar(r) - rstar(r0), twist(r) - twist(r0)};
}

double default_r0(const KerrParams& par, double r) {
    return (r > par.r_plus()) ? 3.0 * par.M : 0.5 * (par.r_plus() + par.r_minus());
}

double r_of_rstar(const KerrParams& par, double rstar, double r0) {
    // exterior inverse by monotone bisection + Newton
    auto f = [&](double r) { return tortoise_and_twist(par, r, r0).r_star - rstar; };
    double lo = par.r_plus() * (1.0 + 1e-14), hi = std::max(r0 * 2.0, 4.0 * par.M);
    while (f(hi) < 0.0) hi *= 2.0;
    // f(lo) -> -inf
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        double drstar = (r * r + par.a * par.a) / par.Delta(r);
        r -= f(r) / drstar;
        r = std::clamp(r, lo, hi);
    }
    return r;
}

double kruskal_G(const KerrParams& par, double r) {
    const double rp = par.r_plus(), rm = par.r_minus(), kp = par.kappa_plus();
    return -std::exp(-2.0 * kp * r) * std::pow(r - rm, rm / rp);
}

double kruskal_radius(const KerrParams& par, double UV) {
    const double rp = par.r_plus(), rm = par.r_minus();
    if (UV == 0.0) return rp;
    auto H = [&](double r) { return (r - rp) / kruskal_G(par, r); };  // decreasing in r
    double lo, hi;
    if (UV < 0.0) {
        lo = rp;
        hi = rp + 1.0;
        int guard = 0;
        while (H(hi) > UV) {
            hi = rp + (hi - rp) * 2.0;
            if (++guard > 400) throw std::domain_error("kruskal_radius: UV outside admissible range");
        }
    } else {
        lo = rm + (rp - rm) * 1e-15;
        hi = rp;
        if (H(lo) < UV) throw std::domain_error("kruskal_radius: UV outside admissible range");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (H(mid) > UV) lo = mid; else hi = mid;
    }
    double r = 0.5 * (lo + hi);
    // Newton polish on F(r) = (r - rp) - UV*G(r)
    for (int it = 0; it < 6; ++it) {
        double G = kruskal_G(par, r);
        double dG = G * (-2.0 * par.kappa_plus() + (rm / rp) / (r - rm));
        double F = (r - rp) - UV * G;
        double dF = 1.0 - UV * dG;
        double step = F / dF;
        r -= step;
        if (!(r > rm)) r = 0.5 * (lo + hi);
    }
    return r;
}

namespace {

// canonical tortoise used by the Kruskal embedding (constant fixed so that
// U V = -(r-r_+)/(-G(r)) matches exp(2 kappa_+ r_*) on the exterior)
double rstar_kruskal(const KerrParams& par, double r) {
    const double rp = par.r_plus(), rm = par.r_minus();
    const double kp = par.kappa_plus(), km = par.kappa_minus();
    return r + std::log(std::abs(r - rp)) / (2.0 * kp) - std::log(std::abs(r - rm)) / (2.0 * km);
}

struct BLPoint {
    double t, r, th, ph;
};

BLPoint to_bl(const KerrParams& par, const ChartPoint& p, double r0) {
    switch (p.chart) {
        case Chart::BL:
            return {p.x[0], p.x[1], p.x[2], p.x[3]};
        case Chart::KerrStar: {
            auto tt = tortoise_and_twist(par, p.x[1], r0);
            return {p.x[0] - tt.r_star, p.x[1], p.x[2], p.x[3] - tt.twist};
        }
        case Chart::StarKerr: {
            auto tt = tortoise_and_twist(par, p.x[1], r0);
            return {p.x[0] + tt.r_star, p.x[1], p.x[2], p.x[3] + tt.twist};
        }
        case Chart::Conformal: {
            double r = 1.0 / p.x[1];
            auto tt = tortoise_and_twist(par, r, r0);
            return {p.x[0] - tt.r_star, r, p.x[2], p.x[3] - tt.twist};
        }
        case Chart::Kruskal: {
            const double U = p.x[0], V = p.x[1], kp = par.kappa_plus();
            if (U == 0.0 || V == 0.0)
                throw std::domain_error("chart_transform: Kruskal point on a horizon has no BL image");
            double r = kruskal_radius(par, U * V);
            double tstar, tstark;  // t*, *t
            if (U < 0.0 && V > 0.0) {        // exterior
                tstar = std::log(V) / kp;
                tstark = -std::log(-U) / kp;
            } else if (U > 0.0 && V > 0.0) {  // interior
                tstar = std::log(V) / kp;
                tstark = -std::log(U) / kp;
            } else {
                throw std::domain_error("chart_transform: Kruskal point outside the covered regions");
            }
            double t = 0.5 * (tstar + tstark);
            double ph = p.x[3] + par.omega_plus() * t;
            return {t, r, p.x[2], ph};
        }
    }
    throw std::logic_error("unreachable");
}

ChartPoint from_bl(const KerrParams& par, const BLPoint& b, Chart target, double r0) {
    switch (target) {
        case Chart::BL:
            return {Chart::BL, {b.t, b.r, b.th, b.ph}};
        case Chart::KerrStar: {
            auto tt = tortoise_and_twist(par, b.r, r0);
            return {Chart::KerrStar, {b.t + tt.r_star, b.r, b.th, b.ph + tt.twist}};
        }
        case Chart::StarKerr: {
            auto tt = tortoise_and_twist(par, b.r, r0);
            return {Chart::StarKerr, {b.t - tt.r_star, b.r, b.th, b.ph - tt.twist}};
        }
        case Chart::Conformal: {
            auto tt = tortoise_and_twist(par, b.r, r0);
            return {Chart::Conformal, {b.t + tt.r_star, 1.0 / b.r, b.th, b.ph + tt.twist}};
        }
        case Chart::Kruskal: {
            const double kp = par.kappa_plus();
            double rs = rstar_kruskal(par, b.r);
            double tstar = b.t + rs, tstark = b.t - rs;
            double U, V = std::exp(kp * tstar);
            if (b.r > par.r_plus()) U = -std::exp(-kp * tstark);
            else if (b.r > par.r_minus()) U = std::exp(-kp * tstark);
            else throw std::domain_error("chart_transform: r < r_- not covered");
            double php = b.ph - par.omega_plus() * b.t;
            return {Chart::Kruskal, {U, V, b.th, php}};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

ChartPoint chart_transform(const KerrParams& par, const ChartPoint& p, Chart target,
                           std::optional<double> r0_opt) {
    if (p.chart == target) return p;
    double rref;
    if (r0_opt) {
        rref = *r0_opt;
    } else {
        // pick the default base point of the block containing the point
        double r;
        if (p.chart == Chart::Kruskal) r = kruskal_radius(par, p.x[0] * p.x[1]);
        else if (p.chart == Chart::Conformal) r = 1.0 / p.x[1];
        else r = p.x[1];
        rref = default_r0(par, r);
    }
    return from_bl(par, to_bl(par, p, rref), target, rref);
}

namespace {

std::array<int, 3> active_coords(Chart c, int& n) {
    if (c == Chart::Kruskal) {
        n = 3;
        return {0, 1, 2};
    }
    n = 2;
    return {1, 2, -1};
}

// dg[c][a][b] = partial_c g_ab for the active coordinates, zero otherwise
void metric_derivs(const KerrParams& par, const ChartPoint& p, Mat4& gval,
                   std::array<Mat4, 4>& dg) {
    for (auto& m : dg)
        for (auto& row : m) row.fill(0.0);
    int nact = 0;
    auto act = active_coords(p.chart, nact);
    std::array<Jet, 4> X;
    for (int pass = 0; pass < nact; ++pass) {
        int c = act[pass];
        for (int i = 0; i < 4; ++i) X[i] = Jet(cplx(p.x[i]));
        X[c] = Jet::var_u(cplx(p.x[c]));
        auto g = geo::metric_components<Jet>(par, p.chart, X);
        for (int aI = 0; aI < 4; ++aI)
            for (int bI = 0; bI < 4; ++bI) {
                dg[c][aI][bI] = g[aI][bI].du().val().real();
                if (pass == 0) gval[aI][bI] = g[aI][bI].val().real();
            }
    }
}

}  // namespace

MetricData metric(const KerrParams& par, const ChartPoint& p) {
    if (p.chart == Chart::Conformal && !(p.x[1] < 1.0 / (4.0 * par.M) && p.x[1] >= 0.0))
        throw std::domain_error("metric: Conformal chart closed forms require 0 <= x < 1/(4M)");
    if (p.chart != Chart::Kruskal && p.chart != Chart::Conformal && !(p.x[1] > par.r_minus()))
        throw std::domain_error("metric: r must exceed r_-");
    std::array<cplx, 4> X;
    for (int i = 0; i < 4; ++i) X[i] = cplx(p.x[i]);
    auto gc = geo::metric_components<cplx>(par, p.chart, X);
    MetricData out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.g[i][j] = gc[i][j].real();

    const double r = (p.chart == Chart::Conformal) ? 1.0 / p.x[1]
                     : (p.chart == Chart::Kruskal) ? kruskal_radius(par, p.x[0] * p.x[1])
                                                   : p.x[1];
    const double th = p.x[2];
    const double rho2 = r * r + par.a * par.a * std::cos(th) * std::cos(th);

    bool closed_inverse = false;
    if (p.chart == Chart::KerrStar || p.chart == Chart::StarKerr) {
        const double sgn = (p.chart == Chart::KerrStar) ? 1.0 : -1.0;
        const double a = par.a, s = std::sin(th);
        Mat4 gi{};
        gi[0][0] = -a * a * s * s / rho2;
        gi[0][1] = gi[1][0] = -sgn * (r * r + a * a) / rho2;
        gi[1][1] = -par.Delta(r) / rho2;
        gi[0][3] = gi[3][0] = -a / rho2;
        gi[1][3] = gi[3][1] = -sgn * a / rho2;
        gi[3][3] = -1.0 / (rho2 * s * s);
        gi[2][2] = -1.0 / rho2;
        out.g_inv = gi;
        closed_inverse = true;
    } else if (p.chart == Chart::Conformal) {
        const double a = par.a, x = p.x[1], s = std::sin(th), c = std::cos(th);
        const double rhox2 = 1.0 + a * a * x * x * c * c;
        const double Deltax = 1.0 - 2.0 * par.M * x + a * a * x * x;
        Mat4 gi{};
        gi[0][0] = -a * a * s * s / rhox2;
        gi[0][1] = gi[1][0] = (1.0 + a * a * x * x) / rhox2;
        gi[0][3] = gi[3][0] = -a / rhox2;
        gi[1][1] = -x * x * Deltax / rhox2;
        gi[1][3] = gi[3][1] = x * x * a / rhox2;
        gi[2][2] = -1.0 / rhox2;
        gi[3][3] = -1.0 / (rhox2 * s * s);
        out.g_inv = gi;
        closed_inverse = true;
    }
    if (!closed_inverse) {
        auto gi = geo::invert4<cplx>(gc);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) out.g_inv[i][j] = gi[i][j].real();
    }

    if (p.chart == Chart::Kruskal) {
        out.sqrt_det = std::sqrt(-geo::det4<cplx>(gc).real());
    } else if (p.chart == Chart::Conformal) {
        const double c = std::cos(th);
        out.sqrt_det = (1.0 + par.a * par.a * p.x[1] * p.x[1] * c * c) * std::sin(th);
    } else {
        out.sqrt_det = rho2 * std::sin(th);
    }
    return out;
}

Christoffel christoffels(const KerrParams& par, const ChartPoint& p) {
    Mat4 g{};
    std::array<Mat4, 4> dg;
    metric_derivs(par, p, g, dg);
    auto md = metric(par, p);
    Christoffel gam{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            for (int rh = 0; rh < 4; ++rh) {
                double s = 0.0;
                for (int sg = 0; sg < 4; ++sg)
                    s += md.g_inv[mu][sg] * (dg[rh][sg][nu] + dg[nu][sg][rh] - dg[sg][nu][rh]);
                gam[mu][nu][rh] = 0.5 * s;
            }
    return gam;
}

double metric_compatibility_residual(const KerrParams& par, const ChartPoint& p) {
    Mat4 g{};
    std::array<Mat4, 4> dg;
    metric_derivs(par, p, g, dg);
    auto gam = christoffels(par, p);
    double worst = 0.0;
    for (int rh = 0; rh < 4; ++rh)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                double v = dg[rh][mu][nu];
                for (int sg = 0; sg < 4; ++sg)
                    v -= gam[sg][rh][mu] * g[sg][nu] + gam[sg][rh][nu] * g[mu][sg];
                worst = std::max(worst, std::abs(v));
            }
    return worst;
}

double conformal_ricci(const KerrParams& par, const ChartPoint& p) {
    if (p.chart != Chart::Conformal)
        throw std::domain_error("conformal_ricci: expects a Conformal chart point");
    const double r = 1.0 / p.x[1];
    const double c = std::cos(p.x[2]);
    const double rho2 = r * r + par.a * par.a * c * c;
    const double Delta = par.Delta(r);
    const double dDelta = 2.0 * r - 2.0 * par.M;
    return -6.0 / rho2 * (2.0 * Delta - r * dDelta);
}

}  // namespace ktk
