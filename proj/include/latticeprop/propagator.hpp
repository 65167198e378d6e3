#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "latticeprop/contmult.hpp"
#include "latticeprop/mink_core.hpp"
#include "latticeprop/types.hpp"

namespace latticeprop {

// N(I): number of canonical paths with total polygonal length I.
struct LengthSpectrum {
    std::map<std::int64_t, BigInt> entries;

    BigInt total() const;
    BigInt at(std::int64_t I) const;
    bool operator==(const LengthSpectrum& o) const { return entries == o.entries; }
};

enum class Variant { Standard, Feynman };

struct PropagatorRequest {
    int d = 1;
    int n = 1;
    double m = 1.0;
    LatticeVec x;
    LatticeVec y;
    Variant variant = Variant::Standard;
};

LengthSpectrum length_spectrum(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes);

// Each timelike step contributes +length or -length; every sign pattern is counted.
LengthSpectrum signed_length_spectrum(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes);

std::complex<double> fourier(const LengthSpectrum& s, double m);
std::complex<double> discrete_propagator(const PropagatorRequest& req);
std::complex<double> discrete_propagator(const PropagatorRequest& req, const AxisSet& axes);

// (1 - (|x|^2 + I^2)/t^2)^((d-2)/2) on the support, zero outside.
double continuum_density(const Eigen::VectorXd& x, double I, double t, int d);

// int_{-tau}^{tau} ((tau^2 - I^2)/t^2)^((d-2)/2) e^{imI} dI with tau^2 = t^2 - |x|^2,
// in closed form: t^(2-d) sqrt(pi) Gamma(d/2) (2 tau / m)^nu J_nu(m tau), nu = (d-1)/2.
double continuum_density_ft(const SpacetimeVec& y, double m);
double continuum_density_ft(double tau, double t, double m, int d);
// The same integral by tanh-sinh quadrature.
std::complex<double> continuum_density_ft_quadrature(const SpacetimeVec& y, double m);

inline constexpr double kLightconeTolerance = 1e-9;

// m^nu H^(2)_nu(m tau), nu = (d-1)/2, without the undetermined constant.
std::complex<double> kg_closed_form(double tau, double m, int d);

// Least-squares complex scalar C minimizing |C model - data|.
std::complex<double> fit_constant(const std::vector<std::complex<double>>& model,
                                  const std::vector<std::complex<double>>& data);

struct ShapeFit {
    std::complex<double> constant;
    double relative_error = 0.0;  // ||C model - data|| / ||data||
};

ShapeFit shape_fit(const std::vector<std::complex<double>>& model, const std::vector<std::complex<double>>& data);

// Componentwise closest integer of s * v.
LatticeVec closest_lattice_point(const SpacetimeVec& v, double s = 1.0);

struct ContinuumPropagatorResult {
    std::vector<double> I;
    std::vector<double> density;
    std::vector<double> density_se;
    std::complex<double> value;
    double std_error = 0.0;
};

// d = 1. The length density N(I) is the integral over the free generator amounts of
// the continuous multinomial of all amounts, with the time axis and the two unit
// nulls solved from the displacement and I. Free amounts are sampled.
ContinuumPropagatorResult continuum_propagator_small(const SpacetimeVec& x, const SpacetimeVec& y, double m, int n,
                                                     std::size_t samples, int grid_points = 64,
                                                     std::uint64_t seed = 1);

}  // namespace latticeprop
