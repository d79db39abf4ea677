// Spin-weighted spherical/spheroidal harmonics, the angular Teukolsky
// operators assembled from GHP pieces, Teukolsky-Starobinsky eigenvalues with
// their brute-force ladder-product oracle, and spin-weighted Sobolev norms.
#pragma once

#include <vector>

#include "kerrteuk/geometry.hpp"
#include "kerrteuk/swsh.hpp"
#include "kerrteuk/thetagrid.hpp"

namespace ktk {

struct SpinWeightedField {
    int s = 0;
    int lmax = 0;
    std::vector<cplx> c;  // dense over m in [-lmax,lmax], l in [lmin(m)..lmax]

    SpinWeightedField() = default;
    SpinWeightedField(int s_, int lmax_);
    int lmin(int m) const { return std::max(std::abs(m), std::abs(s)); }
    bool valid_index(int l, int m) const {
        return std::abs(m) <= lmax && l >= lmin(m) && l <= lmax;
    }
    cplx& at(int l, int m);
    cplx at(int l, int m) const;
    double norm() const;  // l2 coefficient norm
};

struct SpheroidalMode {
    int s = 0, m = 0, ell = 0;
    double c = 0.0;          // spheroidicity a*omega
    double lambda_bar = 0.0; // eigenvalue of the conjugated angular symmetry operator
    double lambda_S = 0.0;   // eigenvalue of S_s, the radial separation constant
    int lmin = 0;
    std::vector<double> coeffs;  // in sY_{s,l,m}, l = lmin .. lmin+size-1
    double residual = 0.0;       // grid residual of the eigen-equation
    bool label_ambiguous = false;  // eigenvalue gap < 1e-10 along the deformation
};

struct TSEigenvalue {
    int s = 0, m = 0, ell = 0;
    double omega = 0.0;
    double N = 0.0;
    double bound_margin = 0.0;  // N - 0 (s=1) or N - 9 M^2 w^2 (s=2)
};

// ---- mode-level GHP angular operators in the Kinnersley trivialization ----
// edth_{(s,w)}  = 2^{-1/2} [ zetabar^{-1} L^+_{-s} + (w-s) (d/dth zetabar^{-1}) ]
// edth'_{(s,w)} = 2^{-1/2} [ zeta^{-1}    L^-_{ s} + (w+s) (d/dth zeta^{-1}) ]
ThetaFun edth_mode(const ThetaGrid& g, const ThetaFun& f, int s, int w, double r, double a,
                   double a_omega, int m);
ThetaFun edthp_mode(const ThetaGrid& g, const ThetaFun& f, int s, int w, double r, double a,
                    double a_omega, int m);

// angular symmetry operator S_sigma at azimuthal mode (omega,m) applied on the grid
ThetaFun S_op_apply(const ThetaGrid& g, const ThetaFun& f, int sigma, double r, double a,
                    double omega, int m);
// conjugated operator acting on the opposite-boost component
ThetaFun Sbar_op_apply(const ThetaGrid& g, const ThetaFun& f, int s, double r, double a,
                       double omega, int m);

ThetaFun synthesize_m(const ThetaGrid& g, const SpinWeightedField& f, int m);
// projection with truncation report: fraction of L2 power beyond lmax
struct ProjectionResult {
    std::vector<cplx> coeffs;  // l = lmin..lmax
    double truncation_tail = 0.0;
};
ProjectionResult project_onto_swsh(const ThetaGrid& g, const ThetaFun& f, int s, int m, int lmax);

struct LpmApplyResult {
    ThetaFun samples;
    double truncation_tail = 0.0;  // power beyond the field's lmax after application
};
LpmApplyResult lpm_apply(const ThetaGrid& g, const SpinWeightedField& f, int m, int n, int sign,
                         double a_omega);

// deform_step: spheroidicity increment for the eigenvector tracking walk;
// labels are only meaningful with fine steps, the (vector, eigenvalue) pairs
// are label-independent
std::vector<SpheroidalMode> spheroidal_solve(int s, int m, double c, int lmax, int ntheta = 256,
                                             double deform_step = 0.1);

TSEigenvalue ts_eigenvalue(const KerrParams& par, int s, double omega, int m, int ell);

// the TS constant as a function of the angular eigenvalue (shared polynomial)
double ts_constant_from_lambda(const KerrParams& par, int s, double omega, int m,
                               double lambda_bar);

struct TSOracleResult {
    double N = 0.0;
    double projection_residual = 0.0;
};
TSOracleResult ts_oracle(const KerrParams& par, int s, double omega, int m, int ell,
                         int ntheta = 1024);

// coefficient-wise division by N(s,omega,m,l) in the spheroidal basis at a*omega
SpinWeightedField a_s_inverse(const KerrParams& par, const SpinWeightedField& f, int s,
                              double omega);
SpinWeightedField a_s_apply(const KerrParams& par, const SpinWeightedField& f, int s,
                            double omega);

double sobolev_norm(const SpinWeightedField& f, int order);

}  // namespace ktk
