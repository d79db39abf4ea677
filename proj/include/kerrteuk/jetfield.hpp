// Mode fields as per-node radial Taylor jets. The generating radial solution
// is continued to a full Taylor polynomial at every node through the ODE
// recurrence, after which every thorn / thorn' rung is exact jet algebra (one
// order consumed per derivative) and no spectral differentiation happens
// along r. Frame scalars enter as jets of closed forms that the tetrad suite
// pins against the covariant-derivative route.
#pragma once

#include "kerrteuk/modefield.hpp"
#include "kerrteuk/radial.hpp"

namespace ktk {

constexpr int kJetOrder = 13;

struct Jet1 {
    std::array<cplx, kJetOrder + 1> c{};

    Jet1() { c.fill(cplx(0.0)); }
    explicit Jet1(cplx v) {
        c.fill(cplx(0.0));
        c[0] = v;
    }
    static Jet1 var(cplx v) {
        Jet1 j(v);
        j.c[1] = 1.0;
        return j;
    }
    cplx val() const { return c[0]; }
    friend Jet1 operator+(const Jet1& a, const Jet1& b) {
        Jet1 r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) {
        Jet1 r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        Jet1 r;
        for (int i = 0; i <= kJetOrder; ++i) {
            if (a.c[i] == 0.0) continue;
            for (int j = 0; i + j <= kJetOrder; ++j) r.c[i + j] += a.c[i] * b.c[j];
        }
        return r;
    }
    friend Jet1 operator*(const Jet1& a, cplx s) {
        Jet1 r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] * s;
        return r;
    }
    friend Jet1 operator*(cplx s, const Jet1& a) { return a * s; }
    Jet1 reciprocal() const {
        Jet1 x(1.0 / c[0]);
        for (int it = 0; it < 5; ++it) x = x * (Jet1(2.0) - (*this) * x);
        return x;
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) { return a * b.reciprocal(); }
    Jet1 derivative() const {
        Jet1 r;
        for (int k = 1; k <= kJetOrder; ++k) r.c[k - 1] = double(k) * c[k];
        return r;
    }
    Jet1 conj_coeffs() const {
        Jet1 r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = std::conj(c[k]);
        return r;
    }
    Jet1 pow_int(int n) const {
        if (n < 0) return pow_int(-n).reciprocal();
        Jet1 r(1.0), b = *this;
        while (n) {
            if (n & 1) r = r * b;
            b = b * b;
            n >>= 1;
        }
        return r;
    }
};

struct JetField {
    RTGridPtr grid;
    int s = 0, w = 0;
    double omega = 0.0;
    int m = 0;
    std::vector<Jet1> F;  // Taylor jets of the field at each node, [ir*nt + jt]

    JetField() = default;
    JetField(RTGridPtr g, int s_, int w_, double omega_, int m_);
    int parity() const { return mode_parity(s, m); }
    ModeField evaluate() const;
    ModeField evaluate_derivative() const;
};

// continue a radial solution to Taylor jets via the ODE recurrence and build
// the separated field  profile(theta) * R(r)
JetField jet_field_from_mode(const RTGridPtr& grid, const ModeSpec& spec,
                             const std::vector<cplx>& R, const std::vector<cplx>& Rp,
                             const ThetaFun& profile);

JetField jf_tho(const JetField& f);
JetField jf_thop(const JetField& f);
JetField jf_edth(const JetField& f);
JetField jf_edthp(const JetField& f);
JetField jf_lxi(const JetField& f);
JetField jf_zeta_pow(const JetField& f, int k);
JetField jf_zetab_pow(const JetField& f, int k);
JetField jf_add(const JetField& a, const JetField& b, cplx ca = 1.0, cplx cb = 1.0);
JetField jf_scale(JetField f, cplx fac);
JetField jf_conj(const JetField& f);
JetField jf_dr(const JetField& f);

// angular chains run in extended precision internally; the sequence runs
// left to right (first entry applied first)
struct AngularStep {
    enum Kind { EdthP, Edth, ZetaPow, ZetabPow };
    Kind kind;
    int count;
};
JetField jf_angular_sequence(const JetField& f, const std::vector<AngularStep>& steps);

JetField jf_tho_pow(JetField f, int k);
JetField jf_thop_pow(JetField f, int k);
JetField jf_edth_pow(JetField f, int k);
JetField jf_edthp_pow(JetField f, int k);

}  // namespace ktk
