// Separated radial Teukolsky operators built compositionally from the mode
// machinery, horizon Frobenius data, adaptive mode integration, and the
// conservation diagnostics (Wronskian, sphere-integrated current flux).
#pragma once

#include <utility>
#include <vector>

#include "kerrteuk/angular.hpp"
#include "kerrteuk/modefield.hpp"

namespace ktk {

struct ModeSpec {
    KerrParams params;
    int s = 0;
    double omega = 0.0;
    int m = 0;
    int ell = 0;
    double lambda_S = 0.0;    // separation constant of the angular symmetry operator
    double lambda_bar = 0.0;  // eigenvalue entering the TS constants
};

ModeSpec make_mode_spec(const KerrParams& par, int s, double omega, int m, int ell);

// angular profile of the mode as a real theta-function (negative spin handled
// through the conjugate spheroidal family)
ThetaFun mode_angular_profile(const ThetaGrid& g, const ModeSpec& spec);

// second-order ODE c2 R'' + c1 R' + c0 R = 0 for the radial mode profile,
// extracted pointwise (valid at complex r) from the assembled operator
struct RadialODE {
    KerrParams par;
    int s = 0;
    double omega = 0.0;
    int m = 0;
    double lambda_S = 0.0;

    explicit RadialODE(const ModeSpec& spec)
        : par(spec.params), s(spec.s), omega(spec.omega), m(spec.m), lambda_S(spec.lambda_S) {}
    void coeffs(cplx r, cplx& c0, cplx& c1, cplx& c2) const;
};

// hand-transcribed standard Teukolsky radial coefficients (docs appendix);
// the assembled operator must equal -1/2 of this with lambda = -2 lambda_S - 2s
void bpt_reference_coeffs(const KerrParams& par, int s, double omega, int m, double lambda_bpt,
                          double r, cplx& c0, cplx& c1, cplx& c2);

enum class RadialBc { HorizonIngoing, HorizonOutgoing };

struct IndicialData {
    cplx alpha_ingoing, alpha_outgoing;
    bool resonant = false;  // exponents separated by (near-)integer
};
IndicialData indicial_exponents(const RadialODE& ode);

struct FrobeniusData {
    cplx alpha;
    std::vector<cplx> series;  // a_0..a_{n-1}
    cplx R, dR;                // at r = r_+ (1 + eps)
    double truncation_estimate = 0.0;
    bool resonant = false;
};
FrobeniusData horizon_frobenius(const RadialODE& ode, RadialBc bc, double eps, int nterms = 6);

// far-field expansion R = e^{i sigma w r} r^rho (1 + b1/r + b2/r^2 + b3/r^3),
// exponents and coefficients fitted against the built ODE near r_match
struct InfinitySeries {
    int sigma = +1;
    cplx rho;
    std::array<cplx, 3> b{};
    double fit_residual = 0.0;
};
InfinitySeries infinity_series(const RadialODE& ode, int sigma, double r_match);

struct RadialSolution {
    ModeSpec mode;
    RadialBc bc = RadialBc::HorizonIngoing;
    std::vector<double> r;
    std::vector<cplx> value, deriv;
    double ode_residual = 0.0;  // spectral spot-check on a diagnostic subgrid
};

std::vector<double> default_output_grid(const KerrParams& par, double r_lo, double r_hi,
                                        int n = 2000);

RadialSolution integrate_mode(const ModeSpec& spec, RadialBc bc,
                              std::pair<double, double> r_range, double tol,
                              const std::vector<double>& output_r, double frobenius_eps = 1e-5);

// diagnostics: max relative residual of value samples on Chebyshev grids
double radial_residual_cheb(const RadialODE& ode, const ChebGrid& g,
                            const std::vector<cplx>& values);
double radial_residual_rstar(const RadialODE& ode, const ChebGrid& xg,
                             const std::vector<double>& rnodes, const std::vector<cplx>& values);

cplx wronskian(const RadialODE& ode, const RadialSolution& s1, const RadialSolution& s2, double r,
               double r_ref);

// physical mode pair data living on an (r,theta) grid
struct ModePair {
    ModeSpec mode;
    ModeField phi_s;         // weights (s, s)
    ModeField phibar_ms;     // conj of the spin -s component, weights (s, -s)
};

struct FluxReport {
    std::vector<double> radii;
    std::vector<cplx> flux;
    double max_rel_drift = 0.0;
};

FluxReport mode_flux(const ModePair& f, const ModePair& h, const std::vector<double>& radii,
                     const ModePair* df = nullptr, const ModePair* dh = nullptr);

struct CurrentContractions {
    cplx lJ, nJ;
};
// l^a J_a and n^a J_a at a grid node, BL/Kinnersley
CurrentContractions mode_current_contraction(const ModePair& f, const ModePair& h, std::size_t ir,
                                             std::size_t jt);
// same current computed in the conformally rescaled picture (breve fields and
// tetrad); expect lJ_breve = x^{-2} lJ and nJ_breve = x^{-4} nJ
CurrentContractions conformal_current_contraction(const ModePair& f, const ModePair& h,
                                                  std::size_t ir, std::size_t jt);

void export_solution_csv(const RadialSolution& sol, const std::string& path);

}  // namespace ktk
