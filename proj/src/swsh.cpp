#include "kerrteuk/swsh.hpp"

#include <cmath>
#include <stdexcept>

namespace ktk {

namespace {

double jacobi_poly(int k, int alpha, int beta, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
    for (int n = 1; n < k; ++n) {
        double a1 = 2.0 * (n + 1) * (n + alpha + beta + 1) * (2.0 * n + alpha + beta);
        double a2 = (2.0 * n + alpha + beta + 1) * (double(alpha) * alpha - double(beta) * beta);
        double a3 = (2.0 * n + alpha + beta) * (2.0 * n + alpha + beta + 1) * (2.0 * n + alpha + beta + 2);
        double a4 = 2.0 * (n + alpha) * (n + beta) * (2.0 * n + alpha + beta + 2);
        double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace

double wigner_d(int j, int mp, int m, double beta) {
    if (std::abs(mp) > j || std::abs(m) > j) return 0.0;
    const int a1 = std::abs(mp - m);
    const int b1 = std::abs(mp + m);
    const int k = j - (a1 + b1) / 2;
    const double xi = (mp - m) > 0 && ((mp - m) % 2) ? -1.0 : 1.0;
    const double lognorm = 0.5 * (std::lgamma(k + 1.0) + std::lgamma(k + a1 + b1 + 1.0) -
                                  std::lgamma(k + a1 + 1.0) - std::lgamma(k + b1 + 1.0));
    const double sh = std::sin(0.5 * beta), ch = std::cos(0.5 * beta);
    double trig;
    if (a1 == 0 && b1 == 0) {
        trig = 1.0;
    } else {
        // stable for small angles: work with logs only when both factors nonzero
        if (sh == 0.0) return (a1 == 0) ? std::exp(lognorm) * jacobi_poly(k, a1, b1, std::cos(beta)) : 0.0;
        if (ch == 0.0) return (b1 == 0) ? xi * std::exp(lognorm) * std::pow(sh, a1) * jacobi_poly(k, a1, b1, std::cos(beta)) : 0.0;
        trig = std::pow(sh, a1) * std::pow(ch, b1);
    }
    return xi * std::exp(lognorm) * trig * jacobi_poly(k, a1, b1, std::cos(beta));
}

double swsh_theta(int s, int l, int m, double theta) {
    if (l < std::max(std::abs(m), std::abs(s)))
        throw std::invalid_argument("swsh: requires l >= max(|m|,|s|)");
    double sign = (m % 2) ? -1.0 : 1.0;
    return sign * std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI)) * wigner_d(l, -m, s, theta);
}

std::complex<double> swsh_eval(int s, int l, int m, double theta, double phi) {
    return swsh_theta(s, l, m, theta) *
           std::complex<double>(std::cos(m * phi), std::sin(m * phi));
}

}  // namespace ktk
