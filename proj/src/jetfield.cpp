#include "kerrteuk/jetfield.hpp"

namespace ktk {

namespace {

// closed-form frame scalars as radial jets at (r0, theta); the tetrad suite
// pins these against the covariant-derivative route
struct NodeScalars {
    Jet1 lt, lr, lph;         // l components (l.w = l.wb = 0 in this scaling)
    Jet1 nt, nr, nph, nw, nwb;
    Jet1 mt, mth, mph, mw, mwb;
    Jet1 mbt, mbth, mbph, mbw, mbwb;
    Jet1 zeta, zetab;
};

NodeScalars node_scalars(const KerrParams& par, double r0, double th) {
    NodeScalars S;
    const double a = par.a, M = par.M;
    const double st = std::sin(th), ct = std::cos(th);
    const double cot = ct / st;
    const cplx I(0.0, 1.0);
    const double sq2 = std::sqrt(2.0);
    Jet1 r = Jet1::var(cplx(r0));
    Jet1 Delta = r * r - r * cplx(2.0 * M) + Jet1(cplx(a * a));
    S.zeta = r - Jet1(cplx(0.0, a * ct));
    S.zetab = r + Jet1(cplx(0.0, a * ct));
    Jet1 rho2 = S.zeta * S.zetab;
    Jet1 w2 = r * r + Jet1(cplx(a * a));
    Jet1 invD = Delta.reciprocal();
    Jet1 invr2 = rho2.reciprocal();
    Jet1 iz = S.zeta.reciprocal();
    Jet1 izb = S.zetab.reciprocal();
    S.lt = w2 * invD;
    S.lr = Jet1(cplx(1.0));
    S.lph = invD * cplx(a);
    S.nt = w2 * invr2 * cplx(0.5);
    S.nr = Delta * invr2 * cplx(-0.5);
    S.nph = invr2 * cplx(0.5 * a);
    S.nw = (r - Jet1(cplx(M))) * invr2 * cplx(0.5) - Delta * iz * iz * izb * cplx(0.5);
    S.nwb = (r - Jet1(cplx(M))) * invr2 * cplx(0.5) - Delta * izb * izb * iz * cplx(0.5);
    S.mt = izb * (I * a * st / sq2);
    S.mth = izb * cplx(1.0 / sq2);
    S.mph = izb * (I / (sq2 * st));
    S.mw = izb * cplx(cot / (2.0 * sq2));
    S.mwb = izb * cplx(-cot / (2.0 * sq2)) + izb * izb * (-I * a * st / sq2);
    S.mbt = iz * (-I * a * st / sq2);
    S.mbth = iz * cplx(1.0 / sq2);
    S.mbph = iz * (-I / (sq2 * st));
    S.mbw = iz * cplx(-cot / (2.0 * sq2)) + iz * iz * (I * a * st / sq2);
    S.mbwb = iz * cplx(cot / (2.0 * sq2));
    return S;
}

}  // namespace

JetField::JetField(RTGridPtr g, int s_, int w_, double omega_, int m_)
    : grid(std::move(g)), s(s_), w(w_), omega(omega_), m(m_) {
    F.assign(grid->nr() * grid->nt(), Jet1());
}

ModeField JetField::evaluate() const {
    ModeField out(grid, s, w, omega, m);
    for (std::size_t k = 0; k < F.size(); ++k) out.v[k] = F[k].val();
    return out;
}

ModeField JetField::evaluate_derivative() const {
    ModeField out(grid, s, w, omega, m);
    for (std::size_t k = 0; k < F.size(); ++k) out.v[k] = F[k].c[1];
    return out;
}

JetField jet_field_from_mode(const RTGridPtr& grid, const ModeSpec& spec,
                             const std::vector<cplx>& R, const std::vector<cplx>& Rp,
                             const ThetaFun& profile) {
    JetField out(grid, spec.s, spec.s, spec.omega, spec.m);
    const KerrParams& par = spec.params;
    const double lam_bpt = -2.0 * spec.lambda_S - 2.0 * spec.s;
    const cplx I(0.0, 1.0);
    for (std::size_t ir = 0; ir < grid->nr(); ++ir) {
        const double r0 = grid->rnodes[ir];
        Jet1 r = Jet1::var(cplx(r0));
        Jet1 Delta = r * r - r * cplx(2.0 * par.M) + Jet1(cplx(par.a * par.a));
        Jet1 K = (r * r + Jet1(cplx(par.a * par.a))) * cplx(spec.omega) - Jet1(cplx(par.a * spec.m));
        Jet1 c2 = Delta;
        Jet1 c1 = (r * cplx(2.0) - Jet1(cplx(2.0 * par.M))) * cplx(double(spec.s + 1));
        Jet1 c0 = (K * K - (r - Jet1(cplx(par.M))) * K * (2.0 * I * double(spec.s))) / Delta +
                  r * (4.0 * I * double(spec.s) * spec.omega) - Jet1(cplx(lam_bpt));
        Jet1 d0 = Jet1(cplx(0.0)) - c0 / c2;
        Jet1 d1 = Jet1(cplx(0.0)) - c1 / c2;
        Jet1 Rj;
        Rj.c[0] = R[ir];
        Rj.c[1] = Rp[ir];
        for (int k = 0; k + 2 <= kJetOrder; ++k) {
            cplx acc = 0.0;
            for (int j = 0; j <= k; ++j)
                acc += d0.c[k - j] * Rj.c[j] + d1.c[k - j] * double(j + 1) * Rj.c[j + 1];
            Rj.c[k + 2] = acc / double((k + 1) * (k + 2));
        }
        for (std::size_t jt = 0; jt < grid->nt(); ++jt)
            out.F[ir * grid->nt() + jt] = Rj * profile.v[jt];
    }
    return out;
}

namespace {

enum class Dir { L, N };

JetField contract_radial(const JetField& f, Dir dir, int dw) {
    const auto& G = *f.grid;
    JetField out(f.grid, f.s, f.w + dw, f.omega, f.m);
    const cplx I(0.0, 1.0);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            std::size_t k = ir * G.nt() + jt;
            NodeScalars S = node_scalars(G.par, G.rnodes[ir], G.tgrid.theta[jt]);
            const Jet1& vt = (dir == Dir::L) ? S.lt : S.nt;
            const Jet1& vr = (dir == Dir::L) ? S.lr : S.nr;
            const Jet1& vph = (dir == Dir::L) ? S.lph : S.nph;
            Jet1 wterm;
            if (dir == Dir::N)
                wterm = S.nw * cplx(double(f.w + f.s)) + S.nwb * cplx(double(f.w - f.s));
            out.F[k] = vt * (-I * f.omega) * f.F[k] + vr * f.F[k].derivative() +
                       vph * (I * double(f.m)) * f.F[k] - wterm * f.F[k];
        }
    return out;
}

JetField contract_angular(const JetField& f, bool bar) {
    const auto& G = *f.grid;
    JetField out(f.grid, f.s + (bar ? -1 : +1), f.w, f.omega, f.m);
    const cplx I(0.0, 1.0);
    // theta derivative order-by-order (band-limited rows)
    std::vector<Jet1> Fth(f.F.size());
    {
        ThetaFun row(f.parity(), G.tgrid.n);
        for (std::size_t ir = 0; ir < G.nr(); ++ir)
            for (int ord = 0; ord <= kJetOrder; ++ord) {
                for (std::size_t jt = 0; jt < G.nt(); ++jt)
                    row.v[jt] = f.F[ir * G.nt() + jt].c[std::size_t(ord)];
                auto d = theta_derivative(G.tgrid, row);
                for (std::size_t jt = 0; jt < G.nt(); ++jt)
                    Fth[ir * G.nt() + jt].c[std::size_t(ord)] = d.v[jt];
            }
    }
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            std::size_t k = ir * G.nt() + jt;
            NodeScalars S = node_scalars(G.par, G.rnodes[ir], G.tgrid.theta[jt]);
            const Jet1& vt = bar ? S.mbt : S.mt;
            const Jet1& vth = bar ? S.mbth : S.mth;
            const Jet1& vph = bar ? S.mbph : S.mph;
            const Jet1& vw = bar ? S.mbw : S.mw;
            const Jet1& vwb = bar ? S.mbwb : S.mwb;
            out.F[k] = vt * (-I * f.omega) * f.F[k] + vth * Fth[k] +
                       vph * (I * double(f.m)) * f.F[k] -
                       (vw * cplx(double(f.w + f.s)) + vwb * cplx(double(f.w - f.s))) * f.F[k];
        }
    return out;
}

}  // namespace

JetField jf_tho(const JetField& f) { return contract_radial(f, Dir::L, +1); }
JetField jf_thop(const JetField& f) { return contract_radial(f, Dir::N, -1); }
JetField jf_edth(const JetField& f) { return contract_angular(f, false); }
JetField jf_edthp(const JetField& f) { return contract_angular(f, true); }

JetField jf_lxi(const JetField& f) {
    JetField out = f;
    const cplx fac(0.0, -f.omega);
    for (auto& j : out.F) j = j * fac;
    return out;
}

JetField jf_zeta_pow(const JetField& f, int k) {
    JetField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) {
            NodeScalars S = node_scalars(f.grid->par, f.grid->rnodes[ir], f.grid->tgrid.theta[jt]);
            std::size_t idx = ir * f.grid->nt() + jt;
            out.F[idx] = out.F[idx] * S.zeta.pow_int(k);
        }
    return out;
}

JetField jf_zetab_pow(const JetField& f, int k) {
    JetField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) {
            NodeScalars S = node_scalars(f.grid->par, f.grid->rnodes[ir], f.grid->tgrid.theta[jt]);
            std::size_t idx = ir * f.grid->nt() + jt;
            out.F[idx] = out.F[idx] * S.zetab.pow_int(k);
        }
    return out;
}

JetField jf_add(const JetField& a, const JetField& b, cplx ca, cplx cb) {
    if (a.s != b.s || a.w != b.w || a.m != b.m || a.omega != b.omega)
        throw std::invalid_argument("jf_add: incompatible fields");
    JetField out = a;
    for (std::size_t k = 0; k < out.F.size(); ++k) out.F[k] = a.F[k] * ca + b.F[k] * cb;
    return out;
}

JetField jf_scale(JetField f, cplx fac) {
    for (auto& j : f.F) j = j * fac;
    return f;
}

JetField jf_conj(const JetField& f) {
    JetField out(f.grid, -f.s, f.w, -f.omega, -f.m);
    for (std::size_t k = 0; k < f.F.size(); ++k) out.F[k] = f.F[k].conj_coeffs();
    return out;
}

JetField jf_dr(const JetField& f) {
    JetField out = f;
    for (auto& j : out.F) j = j.derivative();
    return out;
}

JetField jf_tho_pow(JetField f, int k) {
    for (int i = 0; i < k; ++i) f = jf_tho(f);
    return f;
}
JetField jf_thop_pow(JetField f, int k) {
    for (int i = 0; i < k; ++i) f = jf_thop(f);
    return f;
}
JetField jf_edth_pow(JetField f, int k) {
    for (int i = 0; i < k; ++i) f = jf_edth(f);
    return f;
}
JetField jf_edthp_pow(JetField f, int k) {
    for (int i = 0; i < k; ++i) f = jf_edthp(f);
    return f;
}

namespace {

// ---- long-double engine for the angular chains ----------------------------
// White rounding noise injected at each angular rung is amplified by the
// later rungs; carrying the chain in extended precision keeps an eighth-order
// ladder at ~1e-9 instead of ~1e-4.
using lcplx = std::complex<long double>;

struct JetL {
    std::array<lcplx, kJetOrder + 1> c{};
    JetL() { c.fill(lcplx(0)); }
};

JetL to_ld(const Jet1& j) {
    JetL o;
    for (int k = 0; k <= kJetOrder; ++k) o.c[k] = lcplx(j.c[k].real(), j.c[k].imag());
    return o;
}
Jet1 from_ld(const JetL& j) {
    Jet1 o;
    for (int k = 0; k <= kJetOrder; ++k) o.c[k] = cplx(double(j.c[k].real()), double(j.c[k].imag()));
    return o;
}
JetL jl_mul(const JetL& a, const JetL& b) {
    JetL r;
    for (int i = 0; i <= kJetOrder; ++i) {
        if (a.c[i] == lcplx(0)) continue;
        for (int j = 0; i + j <= kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}
JetL jl_axpy(const JetL& a, const lcplx& s, JetL r) {
    for (int k = 0; k <= kJetOrder; ++k) r.c[k] += s * a.c[k];
    return r;
}
JetL jl_scale(JetL a, const lcplx& s) {
    for (auto& z : a.c) z *= s;
    return a;
}
JetL jl_recip(const JetL& a) {
    JetL x;
    x.c[0] = lcplx(1) / a.c[0];
    for (int it = 0; it < 5; ++it) {
        JetL t = jl_mul(a, x);
        for (auto& z : t.c) z = -z;
        t.c[0] += lcplx(2);
        x = jl_mul(x, t);
    }
    return x;
}
JetL jl_pow(const JetL& a, int n) {
    if (n < 0) return jl_recip(jl_pow(a, -n));
    JetL r;
    r.c[0] = 1;
    JetL b = a;
    while (n) {
        if (n & 1) r = jl_mul(r, b);
        b = jl_mul(b, b);
        n >>= 1;
    }
    return r;
}

struct LdField {
    RTGridPtr grid;
    int s, w, m;
    double omega;
    std::vector<JetL> F;
};

struct LdScalars {
    JetL zeta, zetab, mt, mth, mph, mw, mwb, mbt, mbth, mbph, mbw, mbwb;
};

LdScalars ld_scalars(const KerrParams& par, double r0, double th) {
    LdScalars S;
    const long double a = par.a;
    const long double st = sinl((long double)th), ct = cosl((long double)th);
    const long double cot = ct / st;
    const lcplx I(0.0L, 1.0L);
    const long double sq2 = sqrtl(2.0L);
    JetL r;
    r.c[0] = lcplx((long double)r0);
    r.c[1] = 1;
    S.zeta = r;
    S.zeta.c[0] -= I * a * ct;
    S.zetab = r;
    S.zetab.c[0] += I * a * ct;
    JetL iz = jl_recip(S.zeta), izb = jl_recip(S.zetab);
    S.mt = jl_scale(izb, I * a * st / sq2);
    S.mth = jl_scale(izb, lcplx(1.0L / sq2));
    S.mph = jl_scale(izb, I / (sq2 * st));
    S.mw = jl_scale(izb, lcplx(cot / (2.0L * sq2)));
    S.mwb = jl_axpy(jl_mul(izb, izb), -I * a * st / sq2, jl_scale(izb, lcplx(-cot / (2.0L * sq2))));
    S.mbt = jl_scale(iz, -I * a * st / sq2);
    S.mbth = jl_scale(iz, lcplx(1.0L / sq2));
    S.mbph = jl_scale(iz, -I / (sq2 * st));
    S.mbw = jl_axpy(jl_mul(iz, iz), I * a * st / sq2, jl_scale(iz, lcplx(-cot / (2.0L * sq2))));
    S.mbwb = jl_scale(iz, lcplx(cot / (2.0L * sq2)));
    return S;
}

void ld_theta_derivative(const RTGrid& G, int parity, std::vector<JetL>& F,
                         std::vector<JetL>& out) {
    const int n = G.tgrid.n;
    out.assign(F.size(), JetL());
    std::vector<lcplx> row(std::size_t(2 * n));
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (int ord = 0; ord <= kJetOrder; ++ord) {
            for (int j = 0; j < n; ++j) {
                row[std::size_t(j)] = F[ir * G.nt() + std::size_t(j)].c[ord];
                row[std::size_t(2 * n - 1 - j)] = (long double)parity * row[std::size_t(j)];
            }
            fft_inplace_t(row, -1);
            long double fmax = 0;
            for (auto& z : row) fmax = std::max(fmax, std::abs(z));
            const lcplx I(0.0L, 1.0L);
            for (int q = 0; q < 2 * n; ++q) {
                int k = (q <= n) ? q : q - 2 * n;
                if (q == n) k = 0;
                if (std::abs(row[std::size_t(q)]) < 1e-17L * fmax) row[std::size_t(q)] = 0;
                row[std::size_t(q)] *= I * (long double)k;
            }
            fft_inplace_t(row, +1);
            for (int j = 0; j < n; ++j)
                out[ir * G.nt() + std::size_t(j)].c[ord] = row[std::size_t(j)] / (long double)(2 * n);
        }
}

LdField ld_contract_angular(const LdField& f, bool bar) {
    const auto& G = *f.grid;
    LdField out{f.grid, f.s + (bar ? -1 : +1), f.w, f.m, f.omega, {}};
    out.F.assign(f.F.size(), JetL());
    const lcplx I(0.0L, 1.0L);
    std::vector<JetL> Fth;
    auto Fcopy = f.F;
    ld_theta_derivative(G, mode_parity(f.s, f.m), Fcopy, Fth);
    for (std::size_t ir = 0; ir < G.nr(); ++ir)
        for (std::size_t jt = 0; jt < G.nt(); ++jt) {
            std::size_t k = ir * G.nt() + jt;
            LdScalars S = ld_scalars(G.par, G.rnodes[ir], G.tgrid.theta[jt]);
            const JetL& vt = bar ? S.mbt : S.mt;
            const JetL& vth = bar ? S.mbth : S.mth;
            const JetL& vph = bar ? S.mbph : S.mph;
            const JetL& vw = bar ? S.mbw : S.mw;
            const JetL& vwb = bar ? S.mbwb : S.mwb;
            JetL acc = jl_mul(jl_scale(vt, -I * (long double)f.omega), f.F[k]);
            acc = jl_axpy(jl_mul(vth, Fth[k]), lcplx(1), acc);
            acc = jl_axpy(jl_mul(jl_scale(vph, I * (long double)f.m), f.F[k]), lcplx(1), acc);
            JetL wt = jl_axpy(jl_scale(vwb, lcplx((long double)(f.w - f.s))), lcplx(1),
                              jl_scale(vw, lcplx((long double)(f.w + f.s))));
            acc = jl_axpy(jl_mul(wt, f.F[k]), lcplx(-1), acc);
            out.F[k] = acc;
        }
    return out;
}

LdField ld_zeta_pow(const LdField& f, int kpow, bool bar) {
    LdField out = f;
    for (std::size_t ir = 0; ir < f.grid->nr(); ++ir)
        for (std::size_t jt = 0; jt < f.grid->nt(); ++jt) {
            LdScalars S = ld_scalars(f.grid->par, f.grid->rnodes[ir], f.grid->tgrid.theta[jt]);
            std::size_t idx = ir * f.grid->nt() + jt;
            out.F[idx] = jl_mul(out.F[idx], jl_pow(bar ? S.zetab : S.zeta, kpow));
        }
    return out;
}

LdField ld_of(const JetField& f) {
    LdField o{f.grid, f.s, f.w, f.m, f.omega, {}};
    o.F.resize(f.F.size());
    for (std::size_t k = 0; k < f.F.size(); ++k) o.F[k] = to_ld(f.F[k]);
    return o;
}
JetField ld_back(const LdField& f) {
    JetField o(f.grid, f.s, f.w, f.omega, f.m);
    for (std::size_t k = 0; k < f.F.size(); ++k) o.F[k] = from_ld(f.F[k]);
    return o;
}

}  // namespace

// extended-precision interpreter for the angular operator chains
JetField jf_angular_sequence(const JetField& f, const std::vector<AngularStep>& steps) {
    LdField x = ld_of(f);
    for (const auto& st : steps) {
        switch (st.kind) {
            case AngularStep::EdthP:
                for (int i = 0; i < st.count; ++i) x = ld_contract_angular(x, true);
                break;
            case AngularStep::Edth:
                for (int i = 0; i < st.count; ++i) x = ld_contract_angular(x, false);
                break;
            case AngularStep::ZetaPow:
                x = ld_zeta_pow(x, st.count, false);
                break;
            case AngularStep::ZetabPow:
                x = ld_zeta_pow(x, st.count, true);
                break;
        }
    }
    return ld_back(x);
}

}  // namespace ktk
