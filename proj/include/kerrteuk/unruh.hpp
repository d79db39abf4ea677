// Boundary data on the long horizon and past null infinity, the thermal
// kernels, the Unruh two-point functions w^pm, boundary symplectic forms,
// Killing translations, and the KMS / ground-state verification battery.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "kerrteuk/angular.hpp"

namespace ktk {

// chi_pm(x) = pm x / (1 - e^{mp 2 pi x / kappa}); continuous value kappa/(2pi) at x = 0
double chi_kernel(double x, double kappa_plus, int sign);
// X_pm(x) = pm 1_{R_pm}(x) x
double X_kernel(double x, int sign);

struct BoundaryGrid1D {
    double x0 = 0.0, dx = 0.0;
    int n = 0;  // power of two
    double node(int j) const { return x0 + j * dx; }
};

struct BoundaryComp {
    int l = 0, m = 0;
    std::vector<cplx> v;
};

using ProfileFn = std::function<cplx(double)>;

struct ProfileSpec {
    int l = 0, m = 0;
    ProfileFn f;
};

struct HorizonData {
    KerrParams par;
    int s = 0;
    BoundaryGrid1D grid;                 // U
    std::vector<BoundaryComp> primary;   // phi_s^U (Kruskal trivialization)
    std::vector<BoundaryComp> derived;   // phibar_{-s} = (r_+ - M)^{2s} dU^{2s} phi_s
    double endpoint_violation = 0.0;
    double norm2 = 0.0;  // L2 norm^2 of the primary (with the measure factor)
};

struct ScriData {
    KerrParams par;
    int s = 0;
    BoundaryGrid1D grid;                 // frak t
    std::vector<BoundaryComp> primary;   // psibar_{-s} (conformal Kinnersley trivialization)
    std::vector<BoundaryComp> derived;   // phi_s = (2 d_t)^{2s} A_s^{-1} psibar per bin
    double endpoint_violation = 0.0;
    double norm2 = 0.0;
};

// spheroidal eigendecomposition per (m, frequency bin), shared across a data family
class ScriKernelTable {
public:
    ScriKernelTable(const KerrParams& par, int s, int lmax) : par_(par), s_(s), lmax_(lmax) {}
    struct Entry {
        std::vector<std::vector<double>> vecs;  // [mode][l-lmin]
        std::vector<double> N;
        int lmin = 0;
    };
    const Entry& get(int m, double k) const;
    int lmax() const { return lmax_; }

private:
    KerrParams par_;
    int s_, lmax_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, long long>, Entry> cache_;
};

HorizonData horizon_data_build(const KerrParams& par, int s, const BoundaryGrid1D& grid,
                               const std::vector<ProfileSpec>& profiles);
ScriData scri_data_build(const KerrParams& par, int s, const BoundaryGrid1D& grid,
                         const std::vector<ProfileSpec>& profiles, const ScriKernelTable& table);

struct TwoPointResult {
    cplx value;
    double positivity_margin = 0.0;  // Re(value) + 1e-10 * norm product (diagonal use)
    double aliasing_tail = 0.0;
    double quadrature_error = 0.0;   // resolution-doubling estimate
};

TwoPointResult w_horizon(const HorizonData& A, const HorizonData& B, int sign);
TwoPointResult w_scri(const ScriData& A, const ScriData& B, int sign,
                      const ScriKernelTable& table);

cplx sigma_horizon(const HorizonData& A, const HorizonData& B);
cplx sigma_scri(const ScriData& A, const ScriData& B);

ScriData killing_translate_scri(const ScriData& d, double b);

// horizon data in the *t representation on H^- = {U < 0}, for the KMS battery
struct HorizonTData {
    KerrParams par;
    int s = 0;
    BoundaryGrid1D grid;                // *t
    std::vector<BoundaryComp> primary;  // phi_s(U(*t)), Kruskal trivialization
};
HorizonTData horizon_tdata_build(const KerrParams& par, int s, const BoundaryGrid1D& grid,
                                 const std::vector<ProfileSpec>& profiles);
HorizonTData killing_translate_tdata(const HorizonTData& d, double b);

cplx w_horizon_tform(const HorizonTData& A, const HorizonTData& B, int sign);
// w^pm(A, Y_b B) as a function of b, evaluated on a b-grid in one pass
std::vector<cplx> w_horizon_tform_translated(const HorizonTData& A, const HorizonTData& B,
                                             int sign, const std::vector<double>& bgrid,
                                             double beta_shift_imag = 0.0);
std::vector<cplx> w_scri_translated(const ScriData& A, const ScriData& B, int sign,
                                    const std::vector<double>& bgrid,
                                    const ScriKernelTable& table);

struct StatePropertyReport {
    double kms_residual_plus = 0.0;   // | int f^(b) w^+ - int f^(b+i beta) w^- | / scale
    double kms_residual_minus = 0.0;
    double beta_best = 0.0;           // residual-minimizing beta' on the scan grid
    double beta_true = 0.0;
    double beta_step = 0.0;
    double gs_residual_plus = 0.0;    // scri ground state, f supported in R_+^*
    double gs_residual_minus = 0.0;
    double invariance_h = 0.0;
    double invariance_i = 0.0;
};

// Gaussian test profiles with analytic transforms: a centered one for the
// KMS identity, a one-sided one (x0 >> sigma) for the ground-state integrals
StatePropertyReport verify_state_properties(const HorizonTData& hA, const HorizonTData& hB,
                                            const ScriData& sA, const ScriData& sB,
                                            const ScriKernelTable& table, double gs_x0,
                                            double gs_sigma, double kms_sigma = 0.2);

// seeded random physical data for the verification batteries
HorizonData random_horizon_data(const KerrParams& par, int s, const BoundaryGrid1D& grid,
                                int lmax, std::mt19937_64& rng);
ScriData random_scri_data(const KerrParams& par, int s, const BoundaryGrid1D& grid, int lmax,
                          std::mt19937_64& rng, const ScriKernelTable& table);
HorizonTData random_horizon_tdata(const KerrParams& par, int s, const BoundaryGrid1D& grid,
                                  int lmax, std::mt19937_64& rng);

}  // namespace ktk
