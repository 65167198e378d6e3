#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "latticeprop/mink_core.hpp"
#include "latticeprop/pathspace.hpp"
#include "latticeprop/propagator.hpp"
#include "latticeprop/types.hpp"

namespace latticeprop {

// Flat quotient: spatial coordinate i is identified modulo circumference[i]
// (0 keeps the coordinate unbounded). Identifying x_i = 0 with x_i = C_i pairs
// the boundary points of each fundamental domain.
struct QuotientLattice {
    std::vector<std::int64_t> circumference;

    int dim() const { return static_cast<int>(circumference.size()); }
    LatticeVec reduce(const LatticeVec& v) const;
    bool same_point(const LatticeVec& a, const LatticeVec& b) const;
};

// Brute-force DFS on the quotient itself.
LengthSpectrum quotient_length_spectrum(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                        const AxisSet& axes, std::size_t node_cap = kDefaultNodeCap);

// Lifts of y inside the closed forward cone of x.
std::vector<LatticeVec> in_cone_lifts(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                      const PolygonalMetric& metric);

// Sum of free spectra over the in-cone lifts of y.
LengthSpectrum orbit_length_spectrum(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                     const AxisSet& axes);

std::complex<double> quotient_propagator_flat(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                              const AxisSet& axes, double m);

// Coefficients are kept in long double so long composition chains stay normalized
// in double precision.
struct MobiusMap {
    std::complex<long double> a{1.0L, 0.0L};
    std::complex<long double> b{0.0L, 0.0L};

    std::complex<double> operator()(std::complex<double> z) const;
    double normalization() const { return static_cast<double>(std::norm(a) - std::norm(b)); }
};

MobiusMap mobius_compose(const MobiusMap& g, const MobiusMap& h);  // g after h
std::complex<double> mobius_apply(const MobiusMap& g, std::complex<double> z);
MobiusMap rotation(double phi);

// The deck map sending the central ideal triangle to its left neighbour, and its
// two rotations by -2pi/3 and -4pi/3.
std::vector<MobiusMap> branched_cylinder_generators();

struct HyperboloidPoint {
    double t = 1.0, x = 0.0, y = 0.0;
};

HyperboloidPoint poincare_to_hyperboloid(std::complex<double> z);
std::complex<double> hyperboloid_to_poincare(const HyperboloidPoint& p);

struct OrbitSet {
    std::vector<std::complex<double>> disk;
    std::vector<SpacetimeVec> points;  // (x, y, t) on the sheet through t0
    std::vector<double> taus;           // Minkowski proper time from the origin event
    std::vector<std::vector<int>> words;
    std::size_t words_before_dedupe = 0;
    double t0 = 2.0;
};

inline constexpr double kOrbitDedupeTolerance = 1e-9;

// Sheet H_{t0}: t - t0 + 1 = sqrt(1 + x^2 + y^2).
OrbitSet orbit_enumerate(const std::vector<MobiusMap>& gens, std::complex<double> base, int max_word,
                         double dedupe_tol = kOrbitDedupeTolerance, double t0 = 2.0);

enum class OrbitKernel { DensityFourier, KleinGordon };

// Mean of the free kernel over the lifts inside the closed forward cone of x.
std::complex<double> orbit_sum_propagator(const OrbitSet& orbit, const SpacetimeVec& x, double m, int d = 2,
                                          OrbitKernel kernel = OrbitKernel::DensityFourier);
std::size_t orbit_in_cone_count(const OrbitSet& orbit, const SpacetimeVec& x);

enum class KLNormalization { InverseN, InverseSqrtN };

struct SpectralDensity {
    std::vector<double> grid;
    std::vector<double> values;
    KLNormalization normalization = KLNormalization::InverseN;
};

double sinc(double u);

// rho(m) = (1/N) sum_i tau_i sinc(tau_i m / 2), or with 1/sqrt(N).
SpectralDensity kl_spectrum(const std::vector<double>& taus, const std::vector<double>& m_grid,
                            KLNormalization mode = KLNormalization::InverseN);
double kl_value(const std::vector<double>& taus, double m, KLNormalization mode = KLNormalization::InverseN);

// Largest local maxima of rho, at least `radius` apart, sorted by location.
std::vector<double> spectral_peaks(const SpectralDensity& s, int count, double radius);

struct BoundaryReport {
    BigInt total = 0;
    std::map<int, BigInt> by_crossings;
    // (M, entry step index, exit step index, I) for M >= 1
    std::map<std::tuple<int, int, int, std::int64_t>, BigInt> classes;
    BigInt interior_paths = 0;
    bool partition_exact = false;
    bool zero_class_matches = false;
    bool single_crossing_matches = false;
    std::size_t single_crossing_classes = 0;
};

// d = 1 strip of width C with x = 0 ~ x = C. A boundary visit is an interior point of
// the path sitting on x = 0 mod C.
BoundaryReport boundary_decomposition_check(const QuotientLattice& strip, const LatticeVec& x, const LatticeVec& y,
                                            const AxisSet& axes, std::size_t node_cap = kDefaultNodeCap);

}  // namespace latticeprop
