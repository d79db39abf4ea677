// Spin-weighted spherical harmonics via the Wigner-d/Jacobi construction.
// Convention: sYlm(th,ph) = (-1)^m sqrt((2l+1)/4pi) d^l_{-m,s}(th) e^{i m ph};
// the theta part is real and orthonormal on the sphere.
#pragma once

#include <complex>

namespace ktk {

double wigner_d(int j, int mp, int m, double beta);

// theta part of sYlm (real); requires l >= max(|m|,|s|)
double swsh_theta(int s, int l, int m, double theta);

std::complex<double> swsh_eval(int s, int l, int m, double theta, double phi);

}  // namespace ktk
