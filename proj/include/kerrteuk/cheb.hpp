// Chebyshev-Lobatto grids on [a,b] with coefficient-space differentiation.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ktk {

struct ChebGrid {
    double a = 0.0, b = 1.0;
    int n = 0;  // number of nodes = n+1 (degree n)
    std::vector<double> x;

    ChebGrid() = default;
    ChebGrid(double a_, double b_, int degree) : a(a_), b(b_), n(degree) {
        if (degree < 2) throw std::invalid_argument("ChebGrid: degree too small");
        x.resize(n + 1);
        // nodes ordered increasing in physical coordinate
        for (int k = 0; k <= n; ++k) {
            double t = std::cos(M_PI * double(k) / double(n));
            x[n - k] = 0.5 * (a + b) + 0.5 * (b - a) * t;
        }
    }
    std::size_t size() const { return x.size(); }
};

// values at Lobatto nodes (ordered as ChebGrid::x) -> Chebyshev coefficients
inline std::vector<std::complex<double>> cheb_coeffs(const ChebGrid& g,
                                                     const std::vector<std::complex<double>>& vals) {
    const int n = g.n;
    if (vals.size() != std::size_t(n + 1)) throw std::invalid_argument("cheb_coeffs: size mismatch");
    std::vector<std::complex<double>> c(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        std::complex<double> s = 0.0;
        for (int j = 0; j <= n; ++j) {
            // vals index n-j corresponds to t_j = cos(pi j/n)
            double w = (j == 0 || j == n) ? 0.5 : 1.0;
            s += w * vals[n - j] * std::cos(M_PI * double(j * k) / double(n));
        }
        double norm = (k == 0 || k == n) ? 1.0 / double(n) : 2.0 / double(n);
        c[k] = s * norm;
    }
    return c;
}

inline std::vector<std::complex<double>> cheb_eval_all(const ChebGrid& g,
                                                       const std::vector<std::complex<double>>& c) {
    const int n = g.n;
    std::vector<std::complex<double>> vals(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        double t = std::cos(M_PI * double(j) / double(n));
        // Clenshaw
        std::complex<double> b1 = 0.0, b2 = 0.0;
        for (int k = n; k >= 1; --k) {
            auto tmp = 2.0 * t * b1 - b2 + c[k];
            b2 = b1;
            b1 = tmp;
        }
        vals[n - j] = t * b1 - b2 + c[0];
    }
    return vals;
}

inline std::complex<double> cheb_eval_at(const ChebGrid& g,
                                         const std::vector<std::complex<double>>& c, double xp) {
    double t = (2.0 * xp - (g.a + g.b)) / (g.b - g.a);
    std::complex<double> b1 = 0.0, b2 = 0.0;
    for (int k = g.n; k >= 1; --k) {
        auto tmp = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = tmp;
    }
    return t * b1 - b2 + c[0];
}

// derivative in coefficient space, including the 2/(b-a) chain factor
inline std::vector<std::complex<double>> cheb_diff_coeffs(const ChebGrid& g,
                                                          const std::vector<std::complex<double>>& c) {
    const int n = g.n;
    std::vector<std::complex<double>> d(n + 1, 0.0);
    if (n >= 1) {
        d[n] = 0.0;
        if (n >= 1) d[n - 1] = 2.0 * double(n) * c[n];
        for (int k = n - 2; k >= 0; --k) d[k] = d[k + 2] + 2.0 * double(k + 1) * c[k + 1];
        d[0] *= 0.5;
    }
    const double scale = 2.0 / (g.b - g.a);
    for (auto& v : d) v *= scale;
    return d;
}

// values -> derivative values at the same nodes; rel_floor truncates the
// roundoff plateau of the coefficient tail so repeated differentiation does
// not amplify noise
inline std::vector<std::complex<double>> cheb_derivative(const ChebGrid& g,
                                                         const std::vector<std::complex<double>>& vals,
                                                         double rel_floor = 0.0) {
    auto c = cheb_coeffs(g, vals);
    if (rel_floor > 0.0) {
        double cmax = 0.0;
        for (const auto& z : c) cmax = std::max(cmax, std::abs(z));
        std::size_t keep = 0;
        for (std::size_t k = 0; k < c.size(); ++k)
            if (std::abs(c[k]) > rel_floor * cmax) keep = k;
        for (std::size_t k = keep + 1; k < c.size(); ++k) c[k] = 0.0;
    }
    return cheb_eval_all(g, cheb_diff_coeffs(g, c));
}

}  // namespace ktk
