// Separated Teukolsky mode fields on an (r,theta) product grid, with the GHP
// operators acting at mode level in the Kinnersley/BL trivialization. Radial
// derivatives are Chebyshev-spectral, angular ones band-limited; the
// connection terms come from the tetrad pack, never hand-transcribed.
#pragma once

#include <memory>
#include <vector>

#include "kerrteuk/cheb.hpp"
#include "kerrteuk/tetrad.hpp"
#include "kerrteuk/thetagrid.hpp"

namespace ktk {

struct RTGrid {
    KerrParams par;
    ChebGrid xgrid;               // Chebyshev in the tortoise coordinate
    std::vector<double> rnodes;   // r(x_i), increasing
    std::vector<double> dxdr;     // d r_*/dr = (r^2+a^2)/Delta at the nodes
    ThetaGrid tgrid;
    std::vector<GeoPoint> pack;   // [ir * ntheta + jt]

    RTGrid(const KerrParams& par_, double ra, double rb, int rdegree, int ntheta);
    std::size_t nr() const { return rnodes.size(); }
    std::size_t nt() const { return std::size_t(tgrid.n); }
    double r_lo() const { return rnodes.front(); }
    double r_hi() const { return rnodes.back(); }
    const GeoPoint& at(std::size_t ir, std::size_t jt) const { return pack[ir * nt() + jt]; }
    // d/dr of a radial line sampled on the nodes (spectral in r_*, chain rule)
    std::vector<cplx> radial_derivative(const std::vector<cplx>& line) const;
};

using RTGridPtr = std::shared_ptr<const RTGrid>;

// weighted mode field: value array of e^{-i w t + i m phi} profile on the grid
struct ModeField {
    RTGridPtr grid;
    int s = 0, w = 0;  // spin and boost weight
    double omega = 0.0;
    int m = 0;
    std::vector<cplx> v;  // [ir * ntheta + jt]

    ModeField() = default;
    ModeField(RTGridPtr g, int s_, int w_, double omega_, int m_);
    cplx& at(std::size_t ir, std::size_t jt) { return v[ir * grid->nt() + jt]; }
    cplx at(std::size_t ir, std::size_t jt) const { return v[ir * grid->nt() + jt]; }
    int parity() const { return mode_parity(s, m); }
    double max_abs() const;
};

ModeField tho_apply(const ModeField& f);    // (s, w+1)
ModeField thop_apply(const ModeField& f);   // (s, w-1)
ModeField edth_apply(const ModeField& f);   // (s+1, w)
ModeField edthp_apply(const ModeField& f);  // (s-1, w)
ModeField lxi_apply(const ModeField& f);    // -i omega f
ModeField zeta_pow_mult(const ModeField& f, int k);
ModeField zetab_pow_mult(const ModeField& f, int k);
ModeField radial_mult(const ModeField& f, const std::vector<cplx>& fac);  // fac over r nodes

ModeField add(const ModeField& a, const ModeField& b, cplx ca = 1.0, cplx cb = 1.0);

// time-reversal flip of a T_s mode scalar: (s, omega, m, W) -> (-s, -omega, -m, (Delta/2)^s W);
// composing the tetrad phase z^{-2s} with the zeta^{2s} factor of the primed-operator relation
ModeField flip_mode_map(const ModeField& f);

// residual of the separated Teukolsky equation R_s f = lambda_S f (grid norm,
// relative to the local operator magnitude); f must carry weights (s,s)
double teukolsky_mode_residual(const ModeField& f, double lambda_S, double r_trim = 0.0);

// ---------------------------------------------------------------------------
// ODE-reduced representation F = A(r,th) R(r) + B(r,th) R'(r). The radial
// factor solves a second-order ODE, so every radial derivative closes on
// (R, R') and the spectral derivatives only ever act on the smooth
// coefficient fields A and B. This keeps the 2s-fold operator powers of the
// Teukolsky-Starobinsky identities at full accuracy.
struct RadialBasis {
    std::vector<cplx> R, Rp;    // samples on the r nodes
    std::vector<cplx> d0, d1;   // closure R'' = d0 R + d1 R'
};

struct ReducedField {
    RTGridPtr grid;
    std::shared_ptr<const RadialBasis> basis;
    int s = 0, w = 0;
    double omega = 0.0;
    int m = 0;
    std::vector<cplx> A, B;  // coefficient fields, [ir*nt + jt]

    ReducedField() = default;
    ReducedField(RTGridPtr g, std::shared_ptr<const RadialBasis> b, int s_, int w_, double omega_,
                 int m_);
    ModeField evaluate() const;
    int parity() const { return mode_parity(s, m); }
};

ReducedField rf_tho(const ReducedField& f);
ReducedField rf_thop(const ReducedField& f);
ReducedField rf_edth(const ReducedField& f);
ReducedField rf_edthp(const ReducedField& f);
ReducedField rf_lxi(const ReducedField& f);
ReducedField rf_zeta_pow(const ReducedField& f, int k);
ReducedField rf_zetab_pow(const ReducedField& f, int k);
ReducedField rf_add(const ReducedField& a, const ReducedField& b, cplx ca = 1.0, cplx cb = 1.0);
ReducedField rf_conj(const ReducedField& f);  // conj: (s,w) -> (-s,w), (omega,m) -> (-omega,-m)
// plain radial derivative, closed through R'' = d0 R + d1 R'
ReducedField rf_dr(const ReducedField& f);

}  // namespace ktk
