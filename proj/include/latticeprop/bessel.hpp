#pragma once

#include <complex>

namespace latticeprop::special {

// Bessel functions of real order on the positive real axis. Power series below
// kSeriesLimit, Hankel asymptotic expansion above.
inline constexpr double kSeriesLimit = 17.0;

double bessel_j(double nu, double z);
double bessel_y(double nu, double z);

// H^(2)_nu(z) = J_nu(z) - i Y_nu(z).
std::complex<double> hankel2(double nu, double z);

// d/dz H^(2)_nu(z).
std::complex<double> hankel2_derivative(double nu, double z);

// J_nu(z) / z^nu, finite at z = 0 for nu >= 0.
double bessel_j_scaled(double nu, double z);

}  // namespace latticeprop::special
