#include "latticeprop/bessel.hpp"

#include <cmath>
#include <numbers>

#include "latticeprop/error.hpp"

namespace latticeprop::special {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;

bool is_integer(double nu) { return std::nearbyint(nu) == nu; }

// sum_k (-1)^k (z/2)^(2k) / (k! Gamma(k+nu+1)), i.e. J_nu(z) / (z/2)^nu
long double j_series_reduced(double nu, long double z) {
    const long double q = -(z * z) / 4.0L;
    long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<long double>(k) * (k + nu));
        sum += term;
        if (std::fabs(term) < 1e-21L * std::fabs(sum)) break;
    }
    return sum;
}

long double j_series(double nu, long double z) {
    if (z == 0.0L) return nu == 0.0 ? 1.0L : 0.0L;
    return std::pow(z / 2.0L, static_cast<long double>(nu)) * j_series_reduced(nu, z);
}

long double y_integer_series(int n, long double z) {
    const long double half = z / 2.0L;
    long double finite = 0.0L;
    if (n > 0) {
        long double fact_ratio = std::tgamma(static_cast<long double>(n));  // (n-1)!/0!
        for (int k = 0; k < n; ++k) {
            finite += fact_ratio * std::pow(half, 2.0L * k - n);
            if (k + 1 < n) fact_ratio *= 1.0L / ((n - k - 1) * static_cast<long double>(k + 1));
        }
    }
    long double psi_k = -kEulerGamma;  // psi(k+1)
    long double psi_nk = -kEulerGamma;  // psi(n+k+1)
    for (int j = 1; j <= n; ++j) psi_nk += 1.0L / j;
    const long double q = -(z * z) / 4.0L;
    long double term = std::pow(half, static_cast<long double>(n)) / std::tgamma(static_cast<long double>(n) + 1.0L);
    long double tail = (psi_k + psi_nk) * term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<long double>(k) * (n + k));
        psi_k += 1.0L / k;
        psi_nk += 1.0L / (n + k);
        const long double add = (psi_k + psi_nk) * term;
        tail += add;
        if (std::fabs(term) < 1e-21L * (std::fabs(tail) + 1e-300L) && k > 5) break;
    }
    return -finite / kPi + 2.0L / kPi * std::log(half) * j_series(n, z) - tail / kPi;
}

struct Asymptotic {
    long double j;
    long double y;
};

Asymptotic hankel_asymptotic(double nu, long double z) {
    const long double mu = 4.0L * nu * nu;
    long double p = 1.0L, qsum = 0.0L;
    long double term = 1.0L;
    long double last = 1.0L;
    for (int k = 1; k < 60; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        term *= (mu - odd * odd) / (k * 8.0L * z);
        const long double mag = std::fabs(term);
        if (mag > last && k > 2) break;
        last = mag;
        const int r = (k / 2) % 2 == 0 ? 1 : -1;
        if (k % 2 == 0) {
            p += r * term;
        } else {
            qsum += ((k - 1) / 2 % 2 == 0 ? 1 : -1) * term;
        }
        if (mag < 1e-20L) break;
    }
    const long double chi = z - (nu / 2.0L + 0.25L) * kPi;
    const long double amp = std::sqrt(2.0L / (kPi * z));
    return {amp * (p * std::cos(chi) - qsum * std::sin(chi)), amp * (p * std::sin(chi) + qsum * std::cos(chi))};
}

}  // namespace

double bessel_j(double nu, double z) {
    if (z < 0.0) throw Error(ErrorCode::InvalidArgument, "bessel_j requires z >= 0");
    if (nu < 0.0 && is_integer(nu)) {
        const int n = static_cast<int>(-nu);
        return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-nu, z);
    }
    if (z < kSeriesLimit) return static_cast<double>(j_series(nu, z));
    return static_cast<double>(hankel_asymptotic(nu, z).j);
}

double bessel_y(double nu, double z) {
    if (z <= 0.0) throw Error(ErrorCode::InvalidArgument, "bessel_y requires z > 0");
    if (is_integer(nu)) {
        const int n = static_cast<int>(std::fabs(nu));
        const double sign = (nu < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
        if (z < kSeriesLimit) return sign * static_cast<double>(y_integer_series(n, z));
        return sign * static_cast<double>(hankel_asymptotic(n, z).y);
    }
    if (z < kSeriesLimit) {
        const long double a = static_cast<long double>(nu) * kPi;
        return static_cast<double>((j_series(nu, z) * std::cos(a) - j_series(-nu, z)) / std::sin(a));
    }
    return static_cast<double>(hankel_asymptotic(nu, z).y);
}

std::complex<double> hankel2(double nu, double z) { return {bessel_j(nu, z), -bessel_y(nu, z)}; }

std::complex<double> hankel2_derivative(double nu, double z) {
    return -hankel2(nu + 1.0, z) + (nu / z) * hankel2(nu, z);
}

double bessel_j_scaled(double nu, double z) {
    if (z < 1.0) return static_cast<double>(j_series_reduced(nu, z) / std::pow(2.0L, static_cast<long double>(nu)));
    return bessel_j(nu, z) / std::pow(z, nu);
}

}  // namespace latticeprop::special
