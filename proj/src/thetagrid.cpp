#include "kerrteuk/thetagrid.hpp"

#include <cmath>
#include <stdexcept>

namespace ktk {

ThetaGrid::ThetaGrid(int n_) : n(n_) {
    if (!is_pow2(std::size_t(n)) || n < 8)
        throw std::invalid_argument("ThetaGrid: n must be a power of two >= 8");
    theta.resize(n);
    sinth.resize(n);
    costh.resize(n);
    for (int j = 0; j < n; ++j) {
        theta[j] = (j + 0.5) * M_PI / n;
        sinth[j] = std::sin(theta[j]);
        costh[j] = std::cos(theta[j]);
    }
}

namespace {

std::vector<std::complex<double>> doubled(const ThetaGrid& g, const ThetaFun& f) {
    const int n = g.n;
    std::vector<std::complex<double>> F(2 * n);
    for (int j = 0; j < n; ++j) {
        F[j] = f.v[j];
        F[2 * n - 1 - j] = double(f.parity) * f.v[j];
    }
    return F;
}

}  // namespace

ThetaFun theta_derivative(const ThetaGrid& g, const ThetaFun& f) {
    const int n = g.n;
    auto F = doubled(g, f);
    fft_inplace(F, -1);
    double fmax = 0.0;
    for (const auto& z : F) fmax = std::max(fmax, std::abs(z));
    const std::complex<double> I(0.0, 1.0);
    for (int q = 0; q < 2 * n; ++q) {
        int k = (q <= n) ? q : q - 2 * n;
        if (q == n) k = 0;  // drop the unmatched Nyquist mode
        // truncate the roundoff plateau before amplifying by k
        if (std::abs(F[q]) < 1e-14 * fmax) F[q] = 0.0;
        F[q] *= I * double(k);
    }
    fft_inplace(F, +1);
    ThetaFun out(-f.parity, n);
    for (int j = 0; j < n; ++j) out.v[j] = F[j] / double(2 * n);
    return out;
}

std::complex<double> theta_integral(const ThetaGrid& g, const ThetaFun& f) {
    const int n = g.n;
    auto F = doubled(g, f);
    fft_inplace(F, -1);
    // c_k = F_k e^{-i k h/2} / (2n), integral over [0,pi]: c_0*pi + sum_{k odd} c_k * 2i/k
    const double h = M_PI / n;
    std::complex<double> acc = F[0] / double(2 * n) * M_PI;
    const std::complex<double> I(0.0, 1.0);
    for (int q = 1; q < 2 * n; ++q) {
        int k = (q <= n) ? q : q - 2 * n;
        if (q == n) continue;
        if ((std::abs(k) % 2) == 0) continue;
        auto ck = F[q] * std::exp(-I * double(k) * 0.5 * h) / double(2 * n);
        acc += ck * (2.0 * I / double(k));
    }
    return acc;
}

ThetaFun lpm_apply_grid(const ThetaGrid& g, const ThetaFun& f, int nlad, int sign,
                        double a_omega, int m) {
    ThetaFun out = theta_derivative(g, f);
    for (int j = 0; j < g.n; ++j) {
        double Q = a_omega * g.sinth[j] - double(m) / g.sinth[j];
        out.v[j] += (double(sign) * Q + double(nlad) * g.costh[j] / g.sinth[j]) * f.v[j];
    }
    return out;
}

ThetaFun theta_mult(const ThetaGrid& g, const ThetaFun& f,
                    const std::vector<std::complex<double>>& factor, int factor_parity) {
    ThetaFun out(f.parity * factor_parity, g.n);
    for (int j = 0; j < g.n; ++j) out.v[j] = f.v[j] * factor[j];
    return out;
}

double theta_tail_fraction(const ThetaGrid& g, const ThetaFun& f) {
    const int n = g.n;
    auto F = doubled(g, f);
    fft_inplace(F, -1);
    double tot = 0.0, tail = 0.0;
    for (int q = 0; q < 2 * n; ++q) {
        int k = (q <= n) ? q : q - 2 * n;
        double p = std::norm(F[q]);
        tot += p;
        if (std::abs(k) > 3 * n / 4) tail += p;
    }
    return (tot > 0.0) ? tail / tot : 0.0;
}

}  // namespace ktk
