// Teukolsky-Starobinsky machinery at mode level: the B_s map, the fourth- and
// eighth-order angular operators A_s / A~_s as grid operators, residual checks
// of the decoupled identities, Hertz-potential reconstruction, and physical
// pair construction. All 2s-fold operator powers track the intermediate boost
// weights through the field weight bookkeeping.
#pragma once

#include <memory>

#include "kerrteuk/jetfield.hpp"
#include "kerrteuk/radial.hpp"

namespace ktk {

ModeField conj_field(const ModeField& f);

ModeField tho_pow(const ModeField& f, int k);
ModeField thop_pow(const ModeField& f, int k);
ModeField edth_pow(const ModeField& f, int k);
ModeField edthp_pow(const ModeField& f, int k);

// B_s phi_s = zetabar^{2s} thop^{2s} zeta^{2s} phi_s : (s,s) -> (s,-s)
ModeField b_s_apply(const ModeField& phi_s);
JetField jf_b_s_apply(const JetField& phi_s);

// A_s f = [zetabar^{2s} edth^{2s} zeta^{2s} edthp^{2s} - 9 d_{s,2} M^2 Lxi^2] f on (s,-s)
ModeField a_s_apply_field(const ModeField& f, int s);
JetField jf_a_s_apply(const JetField& f, int s);
// A~_s f = [edth^{2s} zetabar^{2s} edthp^{2s} zeta^{2s} - 9 d_{s,2} M^2 Lxi^2] f on (s,s)
ModeField atilde_s_apply_field(const ModeField& f, int s);
JetField jf_atilde_s_apply(const JetField& f, int s);

struct PhysicalModePair {
    ModePair pair;
    std::shared_ptr<const JetField> psibar;  // generating T_{-s}-bar solution
    enum class Source { FromHertz, FromPsi } source = Source::FromPsi;
    double bs_residual = 0.0;
    double exchange_residual = 0.0;
};

// psibar_{-s} (weights (s,-s)) |-> (tho^{2s} psibar, A_s psibar)
PhysicalModePair physical_pair(const ModeSpec& spec_plus, const JetField& psibar);

// Hertz route: Phi_IRG solves T_{-s} at (-omega,-m); phi_s = 2^{-s} tho^{2s} conj(Phi)
PhysicalModePair hertz_reconstruct(const ModeSpec& spec_plus, const JetField& Phi_IRG);

struct TSResidualReport {
    double ts_plus = 0.0;  // tho^{2s} phibar_{-s} vs A~_s phi_s
    double bs_consistency = 0.0;
    double exchange = 0.0;
    double hertz_rel2 = 0.0;
};
TSResidualReport ts_residuals(const PhysicalModePair& p);

// solve the T_{-s} Hertz mode on the grid and return it as a jet field
JetField hertz_potential_solve(const RTGridPtr& grid, const KerrParams& par, int s,
                               double omega, int m, int ell, double tol = 1e-11,
                               RadialBc bc = RadialBc::HorizonIngoing);

PhysicalModePair build_pair_from_hertz(const RTGridPtr& grid, const KerrParams& par, int s,
                                       double omega, int m, int ell, double tol = 1e-11);

// psibar with a prescribed radial profile times the mode's spheroidal harmonic
ModeField single_harmonic_psibar(const RTGridPtr& grid, const ModeSpec& spec_plus,
                                 const std::vector<cplx>& radial_profile);

double field_rel_diff(const ModeField& a, const ModeField& b, double trim_frac = 0.12);

// radial derivative of both pair components via the ODE closure (for flux work)
ModePair pair_derivative(const PhysicalModePair& p);

}  // namespace ktk
