// Iterative radix-2 complex FFT, power-of-two lengths. No global plan state,
// safe for concurrent callers.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace ktk {

inline bool is_pow2(std::size_t n) { return n && (n & (n - 1)) == 0; }

// in-place, sign = -1: X_k = sum_j x_j e^{-2pi i jk/N};  sign = +1: e^{+...}, unnormalized
template <typename Real>
inline void fft_inplace_t(std::vector<std::complex<Real>>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const Real ang = Real(sign) * Real(2.0L * 3.141592653589793238462643383279502884L) / Real(len);
        const std::complex<Real> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<Real> w(Real(1));
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = a[i + k];
                auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline void fft_inplace(std::vector<std::complex<double>>& a, int sign) { fft_inplace_t(a, sign); }

// frequency of DFT bin q for sample spacing dx (angular frequency, wrapped)
inline double fft_freq(std::size_t q, std::size_t n, double dx) {
    double k = double(q);
    if (q > n / 2) k -= double(n);
    return 2.0 * M_PI * k / (double(n) * dx);
}

}  // namespace ktk
