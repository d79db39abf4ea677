#include "kerrteuk/modefield.hpp"

#include <cmath>
#include <stdexcept>

namespace ktk {

namespace {
double r_of_rstar_local(const KerrParams& par, double rstar, double r0) {
    return r_of_rstar(par, rstar, r0);
}
}  // namespace

RTGrid::RTGrid(const KerrParams& par_, double ra, double rb, int rdegree, int ntheta)
    : par(par_), xgrid(0.0, 1.0, rdegree), tgrid(ntheta) {
    if (!(ra > par.r_plus())) throw std::invalid_argument("RTGrid: exterior grids only");
    const double r0 = default_r0(par, ra);
    double xa = tortoise_and_twist(par, ra, r0).r_star;
    double xb = tortoise_and_twist(par, rb, r0).r_star;
    xgrid = ChebGrid(xa, xb, rdegree);
    rnodes.resize(xgrid.size());
    dxdr.resize(xgrid.size());
    for (std::size_t i = 0; i < xgrid.size(); ++i) {
        double r = r_of_rstar_local(par, xgrid.x[i], r0);
        rnodes[i] = r;
        dxdr[i] = (r * r + par.a * par.a) / par.Delta(r);
    }
    rnodes.front() = ra;
    rnodes.back() = rb;
    pack.reserve(nr() * nt());
    for (std::size_t ir = 0; ir < nr(); ++ir)
        for (std::size_t jt = 0; jt < nt(); ++jt) {
            ChartPoint p{Chart::BL, {0.0, rnodes[ir], tgrid.theta[jt], 0.0}};
            pack.push_back(geo_point(par, p, Scaling::Kinnersley));
        }
}

std::vector<cplx> RTGrid::radial_derivative(const std::vector<cplx>& line) const {
    auto d = cheb_derivative(xgrid, line, 1e-13);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] *= dxdr[i];
    return d;
}

ModeField::ModeField(RTGridPtr g, int s_, int w_, double omega_, int m_)
    : grid(std::move(g)), s(s_), w(w_), omega(omega_), m(m_), v(grid->nr() * grid->nt(), cplx(0.0)) {}

double ModeField::max_abs() const {
    double mx = 0.0;
    for (const auto& z : v) mx = std::max(mx, std::abs(z));
    return mx;
}

namespace {

// contraction operator V^a Theta_a at mode level; V is one of the frame fields
template <typename GetV, typename GetW, typename GetWb>
ModeField contract_op(const ModeField& f, GetV getv, GetW getw, GetWb getwb, int ds, int dw,
                      bool needs_dr, bool needs_dth) {
    const auto& G = *f.grid;
    ModeField out(f.grid, f.s + ds, f.w + dw, f.omega, f.m);
    const std::size_t nr = G.nr(), nt = G.nt();

    std::vector<cplx> fr(f.v.size(), 0.0);
    if (needs_dr) {
        std::vector<cplx> col(nr);
        for (std::size_t jt = 0; jt < nt; ++jt) {
            for (std::size_t ir = 0; ir < nr; ++ir) col[ir] = f.at(ir, jt);
            auto d = G.radial_derivative(col);
            for (std::size_t ir = 0; ir < nr; ++ir) fr[ir * nt + jt] = d[ir];
        }
    }
    std::vector<cplx> fth(f.v.size(), 0.0);
    if (needs_dth) {
        ThetaFun row(f.parity(), G.tgrid.n);
        for (std::size_t ir = 0; ir < nr; ++ir) {
            for (std::size_t jt = 0; jt < nt; ++jt) row.v[jt] = f.at(ir, jt);
            auto d = theta_derivative(G.tgrid, row);
            for (std::size_t jt = 0; jt < nt; ++jt) fth[ir * nt + jt] = d.v[jt];
        }
    }
    const cplx it(0.0, 1.0);
    for (std::size_t ir = 0; ir < nr; ++ir)
        for (std::size_t jt = 0; jt < nt; ++jt) {
            const GeoPoint& gp = G.at(ir, jt);
            const auto V = getv(gp);
            std::size_t k = ir * nt + jt;
            cplx val = V[0] * (-it * f.omega) * f.v[k] + V[3] * (it * double(f.m)) * f.v[k];
            if (needs_dr) val += V[1] * fr[k];
            if (needs_dth) val += V[2] * fth[k];
            val -= (double(f.w + f.s) * getw(gp) + double(f.w - f.s) * getwb(gp)) * f.v[k];
            out.v[k] = val;
        }
    return out;
}

}  // namespace

ModeField tho_apply(const ModeField& f) {
    return contract_op(
        f, [](const GeoPoint& g) { return g.l; }, [](const GeoPoint& g) { return g.lw; },
        [](const GeoPoint& g) { return g.lwb; }, 0, +1, true, false);
}

ModeField thop_apply(const ModeField& f) {
    return contract_op(
        f, [](const GeoPoint& g) { return g.n; }, [](const GeoPoint& g) { return g.nw; },
        [](const GeoPoint& g) { return g.nwb; }, 0, -1, true, false);
}

ModeField edth_apply(const ModeField& f) {
    return contract_op(
        f, [](const GeoPoint& g) { return g.m; }, [](const GeoPoint& g) { return g.mw; },
        [](const GeoPoint& g) { return g.mwb; }, +1, 0, false, true);
}

ModeField edthp_apply(const ModeField& f) {
    return contract_op(
        f, [](const GeoPoint& g) { return g.mb; }, [](const GeoPoint& g) { return g.mbw; },
        [](const GeoPoint& g) { return g.mbwb; }, -1, 0, false, true);
}

ModeField lxi_apply(const ModeField& f) {
    ModeField out = f;
    const cplx fac(0.0, -f.omega);
    for (auto& z : out.v) z *= fac;
    return out;
}

ModeField zeta_pow_mult(const ModeField& f, int k) {
    ModeField out = f;  // zeta carries no weight
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt)
            out.at(ir, jt) *= std::pow(f.grid->at(ir, jt).zeta, k);
    return out;
}

ModeField zetab_pow_mult(const ModeField& f, int k) {
    ModeField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt)
            out.at(ir, jt) *= std::pow(f.grid->at(ir, jt).zetab, k);
    return out;
}

ModeField radial_mult(const ModeField& f, const std::vector<cplx>& fac) {
    if (fac.size() != f.grid->nr()) throw std::invalid_argument("radial_mult: size mismatch");
    ModeField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) out.at(ir, jt) *= fac[ir];
    return out;
}

ModeField add(const ModeField& a, const ModeField& b, cplx ca, cplx cb) {
    if (a.s != b.s || a.w != b.w || a.m != b.m || a.omega != b.omega)
        throw std::invalid_argument("ModeField add: weight or mode mismatch");
    ModeField out = a;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = ca * a.v[k] + cb * b.v[k];
    return out;
}

ModeField flip_mode_map(const ModeField& f) {
    ModeField out(f.grid, -f.s, -f.w, -f.omega, -f.m);
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir) {
        double Delta = f.grid->par.Delta(f.grid->rnodes[ir]);
        cplx fac = std::pow(cplx(0.5 * Delta), f.s);
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) out.at(ir, jt) = fac * f.at(ir, jt);
    }
    return out;
}

double teukolsky_mode_residual(const ModeField& f, double lambda_S, double r_trim) {
    if (f.w != f.s) throw std::invalid_argument("teukolsky_mode_residual: expects weights (s,s)");
    const auto& G = *f.grid;
    const int s = f.s;
    // R_s f = rho^2 (tho - rho - rhobar)(thop - 2 s rho') f + (2s-1)/2 (zeta+zetab) Lxi f
    ModeField t1 = thop_apply(f);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt)
            t1.at(ir, jt) -= 2.0 * double(s) * G.at(ir, jt).rho_prime * f.at(ir, jt);
    ModeField t2 = tho_apply(t1);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            cplx rho = G.at(ir, jt).rho;
            t2.at(ir, jt) -= (rho + std::conj(rho)) * t1.at(ir, jt);
        }
    double num = 0.0, den = 0.0;
    for (std::size_t ir = 0; ir < G.nr(); ++ir) {
        double r = G.rnodes[ir];
        if (r < G.r_lo() + r_trim || r > G.r_hi() - r_trim) continue;
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            const GeoPoint& gp = G.at(ir, jt);
            cplx Rsf = gp.rho2 * t2.at(ir, jt) +
                       0.5 * double(2 * s - 1) * (gp.zeta + gp.zetab) * cplx(0.0, -f.omega) * f.at(ir, jt);
            num += std::norm(Rsf - lambda_S * f.at(ir, jt));
            den += std::norm(Rsf) + std::norm(lambda_S * f.at(ir, jt));
        }
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace ktk

namespace ktk {

ReducedField::ReducedField(RTGridPtr g, std::shared_ptr<const RadialBasis> b, int s_, int w_,
                           double omega_, int m_)
    : grid(std::move(g)), basis(std::move(b)), s(s_), w(w_), omega(omega_), m(m_) {
    A.assign(grid->nr() * grid->nt(), cplx(0.0));
    B.assign(grid->nr() * grid->nt(), cplx(0.0));
}

ModeField ReducedField::evaluate() const {
    ModeField out(grid, s, w, omega, m);
    const std::size_t nt = grid->nt();
    for (std::size_t ir = 0; ir < grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < nt; ++jt)
            out.v[ir * nt + jt] =
                A[ir * nt + jt] * basis->R[ir] + B[ir * nt + jt] * basis->Rp[ir];
    return out;
}

namespace {

void coeff_dr(const RTGrid& G, const std::vector<cplx>& f, std::vector<cplx>& out) {
    out.assign(f.size(), cplx(0.0));
    std::vector<cplx> col(G.nr());
    for (std::size_t jt = 0; jt < G.nt(); ++jt) {
        for (std::size_t ir = 0; ir < G.nr(); ++ir) col[ir] = f[ir * G.nt() + jt];
        auto d = G.radial_derivative(col);
        for (std::size_t ir = 0; ir < G.nr(); ++ir) out[ir * G.nt() + jt] = d[ir];
    }
}

void coeff_dth(const RTGrid& G, const std::vector<cplx>& f, int parity, std::vector<cplx>& out) {
    out.assign(f.size(), cplx(0.0));
    ThetaFun row(parity, G.tgrid.n);
    for (std::size_t ir = 0; ir < G.nr(); ++ir) {
        for (std::size_t jt = 0; jt < G.nt(); ++jt) row.v[jt] = f[ir * G.nt() + jt];
        auto d = theta_derivative(G.tgrid, row);
        for (std::size_t jt = 0; jt < G.nt(); ++jt) out[ir * G.nt() + jt] = d.v[jt];
    }
}

template <typename GetV, typename GetW, typename GetWb>
ReducedField rf_contract(const ReducedField& f, GetV getv, GetW getw, GetWb getwb, int ds, int dw,
                         bool needs_dr, bool needs_dth) {
    const auto& G = *f.grid;
    ReducedField out(f.grid, f.basis, f.s + ds, f.w + dw, f.omega, f.m);
    const std::size_t nt = G.nt();
    std::vector<cplx> Ar, Br, Ath, Bth;
    if (needs_dr) {
        coeff_dr(G, f.A, Ar);
        coeff_dr(G, f.B, Br);
    }
    if (needs_dth) {
        coeff_dth(G, f.A, f.parity(), Ath);
        coeff_dth(G, f.B, f.parity(), Bth);
    }
    const cplx it(0.0, 1.0);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < nt; ++jt) {
            const GeoPoint& gp = G.at(ir, jt);
            const auto V = getv(gp);
            std::size_t k = ir * nt + jt;
            cplx mult = V[0] * (-it * f.omega) + V[3] * (it * double(f.m)) -
                        (double(f.w + f.s) * getw(gp) + double(f.w - f.s) * getwb(gp));
            cplx nA = mult * f.A[k], nB = mult * f.B[k];
            if (needs_dr) {
                // d/dr (A R + B R') = (A_r + B d0) R + (A + B_r + B d1) R'
                nA += V[1] * (Ar[k] + f.B[k] * f.basis->d0[ir]);
                nB += V[1] * (f.A[k] + Br[k] + f.B[k] * f.basis->d1[ir]);
            }
            if (needs_dth) {
                nA += V[2] * Ath[k];
                nB += V[2] * Bth[k];
            }
            out.A[k] = nA;
            out.B[k] = nB;
        }
    return out;
}

}  // namespace

ReducedField rf_tho(const ReducedField& f) {
    return rf_contract(
        f, [](const GeoPoint& g) { return g.l; }, [](const GeoPoint& g) { return g.lw; },
        [](const GeoPoint& g) { return g.lwb; }, 0, +1, true, false);
}
ReducedField rf_thop(const ReducedField& f) {
    return rf_contract(
        f, [](const GeoPoint& g) { return g.n; }, [](const GeoPoint& g) { return g.nw; },
        [](const GeoPoint& g) { return g.nwb; }, 0, -1, true, false);
}
ReducedField rf_edth(const ReducedField& f) {
    return rf_contract(
        f, [](const GeoPoint& g) { return g.m; }, [](const GeoPoint& g) { return g.mw; },
        [](const GeoPoint& g) { return g.mwb; }, +1, 0, false, true);
}
ReducedField rf_edthp(const ReducedField& f) {
    return rf_contract(
        f, [](const GeoPoint& g) { return g.mb; }, [](const GeoPoint& g) { return g.mbw; },
        [](const GeoPoint& g) { return g.mbwb; }, -1, 0, false, true);
}

ReducedField rf_lxi(const ReducedField& f) {
    ReducedField out = f;
    const cplx fac(0.0, -f.omega);
    for (auto& z : out.A) z *= fac;
    for (auto& z : out.B) z *= fac;
    return out;
}

ReducedField rf_zeta_pow(const ReducedField& f, int k) {
    ReducedField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) {
            cplx z = std::pow(f.grid->at(ir, jt).zeta, k);
            out.A[ir * f.grid->nt() + jt] *= z;
            out.B[ir * f.grid->nt() + jt] *= z;
        }
    return out;
}

ReducedField rf_zetab_pow(const ReducedField& f, int k) {
    ReducedField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) {
            cplx z = std::pow(f.grid->at(ir, jt).zetab, k);
            out.A[ir * f.grid->nt() + jt] *= z;
            out.B[ir * f.grid->nt() + jt] *= z;
        }
    return out;
}

ReducedField rf_add(const ReducedField& a, const ReducedField& b, cplx ca, cplx cb) {
    if (a.s != b.s || a.w != b.w || a.m != b.m || a.omega != b.omega ||
        a.basis.get() != b.basis.get())
        throw std::invalid_argument("rf_add: incompatible fields");
    ReducedField out = a;
    for (std::size_t k = 0; k < out.A.size(); ++k) {
        out.A[k] = ca * a.A[k] + cb * b.A[k];
        out.B[k] = ca * a.B[k] + cb * b.B[k];
    }
    return out;
}

ReducedField rf_dr(const ReducedField& f) {
    const auto& G = *f.grid;
    ReducedField out(f.grid, f.basis, f.s, f.w, f.omega, f.m);
    std::vector<cplx> Ar, Br;
    coeff_dr(G, f.A, Ar);
    coeff_dr(G, f.B, Br);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            std::size_t k = ir * G.nt() + jt;
            out.A[k] = Ar[k] + f.B[k] * f.basis->d0[ir];
            out.B[k] = f.A[k] + Br[k] + f.B[k] * f.basis->d1[ir];
        }
    return out;
}

ReducedField rf_conj(const ReducedField& f) {
    auto basis = std::make_shared<RadialBasis>();
    basis->R.resize(f.basis->R.size());
    basis->Rp.resize(f.basis->Rp.size());
    basis->d0.resize(f.basis->d0.size());
    basis->d1.resize(f.basis->d1.size());
    for (std::size_t i = 0; i < basis->R.size(); ++i) {
        basis->R[i] = std::conj(f.basis->R[i]);
        basis->Rp[i] = std::conj(f.basis->Rp[i]);
        basis->d0[i] = std::conj(f.basis->d0[i]);
        basis->d1[i] = std::conj(f.basis->d1[i]);
    }
    ReducedField out(f.grid, basis, -f.s, f.w, -f.omega, -f.m);
    for (std::size_t k = 0; k < out.A.size(); ++k) {
        out.A[k] = std::conj(f.A[k]);
        out.B[k] = std::conj(f.B[k]);
    }
    return out;
}

}  // namespace ktk
