// Uniform interior theta grid with band-limited operations. Integer-spin mode
// fields extend to smooth periodic functions on the doubled circle with parity
// (-1)^{m+s}; derivatives are exact Fourier multipliers there, and the
// trigonometric factors of the L^pm ladder operators act pointwise.
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "kerrteuk/fft.hpp"

namespace ktk {

struct ThetaGrid {
    int n = 0;  // number of interior nodes (power of two)
    std::vector<double> theta, sinth, costh;

    explicit ThetaGrid(int n_);
    double node(int j) const { return theta[j]; }
};

struct ThetaFun {
    int parity = +1;  // f(2pi - th) = parity * f(th)
    std::vector<std::complex<double>> v;

    ThetaFun() = default;
    ThetaFun(int par, std::size_t n) : parity(par), v(n, 0.0) {}
};

// parity of a spin-s, azimuthal-m mode component on the doubled circle
inline int mode_parity(int s, int m) { return ((s + m) % 2 == 0) ? +1 : -1; }

ThetaFun theta_derivative(const ThetaGrid& g, const ThetaFun& f);

// integral over [0,pi] (exact for band-limited integrands)
std::complex<double> theta_integral(const ThetaGrid& g, const ThetaFun& f);

// L^pm_n = d/dth + sign*(a w sin th - m / sin th) + n cot th  (flips parity)
ThetaFun lpm_apply_grid(const ThetaGrid& g, const ThetaFun& f, int n, int sign, double a_omega,
                        int m);

// pointwise multiply by a complex field sampled on the grid (caller sets parity factor)
ThetaFun theta_mult(const ThetaGrid& g, const ThetaFun& f,
                    const std::vector<std::complex<double>>& factor, int factor_parity);

// fraction of spectral power in the top quarter of the doubled band (aliasing probe)
double theta_tail_fraction(const ThetaGrid& g, const ThetaFun& f);

}  // namespace ktk
