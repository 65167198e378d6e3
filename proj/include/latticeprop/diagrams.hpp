#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "latticeprop/mink_core.hpp"
#include "latticeprop/pathspace.hpp"
#include "latticeprop/types.hpp"

namespace latticeprop {

struct TheorySpec {
    int d = 1;
    double m = 1.0;
    std::map<int, double> couplings;  // degree -> a_j
};

// Node indices run over externals first, then internal vertices.
struct DiagramSpec {
    std::vector<SpacetimeVec> externals;
    std::vector<int> vertices;  // degree of each internal vertex
    std::vector<std::pair<int, int>> edges;

    int node_count() const { return static_cast<int>(externals.size() + vertices.size()); }
    bool connected() const;
};

// Internal vertices range over the box [lo, hi] (coordinates (x, t)), integrated by the
// midpoint rule with the given number of cells per coordinate, or by Monte Carlo when
// mc_samples > 0. The length grid has cells of width length_step centred on multiples of it.
struct GridSpec {
    SpacetimeVec lo;
    SpacetimeVec hi;
    int cells = 8;
    double length_step = 0.02;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 1;
    std::size_t node_budget = 50'000'000;
};

struct DiagramValue {
    std::complex<double> value;
    double std_error = 0.0;
    std::size_t nodes = 0;
};

// prod_v (i a_deg(v)) (1/i)^edges
std::complex<double> diagram_prefactor(const DiagramSpec& diag, const TheorySpec& theory);

// Edge factor: continuum-density Fourier transform at |dt|, zero off the cone.
double edge_propagator(const SpacetimeVec& a, const SpacetimeVec& b, double m);

DiagramValue contribution_position_space(const DiagramSpec& diag, const TheorySpec& theory, const GridSpec& grid);
DiagramValue contribution_length_domain(const DiagramSpec& diag, const TheorySpec& theory, const GridSpec& grid);

// Cell masses of the continuum density between a and b on cells centred at k * step.
// offset is the index of the first entry, so entry j is the cell k = offset + j.
struct BinnedDensity {
    std::int64_t offset = 0;
    std::vector<double> mass;

    double total() const;
    std::complex<double> fourier(double m, double step) const;
};

BinnedDensity edge_length_density(const SpacetimeVec& a, const SpacetimeVec& b, double step);
BinnedDensity convolve(const BinnedDensity& p, const BinnedDensity& q);

// Per-edge lengths, or one total length for the whole diagram.
struct LengthConstraint {
    std::optional<std::vector<std::int64_t>> per_edge;
    std::optional<std::int64_t> total;
};

// Internal vertices range over the lattice points of [box_lo, box_hi]; each edge runs
// from its earlier endpoint to its later one.
BigInt lattice_diagram_count(const DiagramSpec& diag, const AxisSet& axes, const LatticeVec& box_lo,
                             const LatticeVec& box_hi, const LengthConstraint& lengths = {},
                             std::size_t budget = 10'000'000);

// 1 / Vol(S^{d-1}(dt)) on the cone, zero elsewhere.
double photon_density_continuum(const SpacetimeVec& x, const SpacetimeVec& y, double tol = 1e-12);
// Indicator of a d_n-null separation over the number of d_n-null lattice points at that time.
double photon_density_discrete(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes);
std::size_t null_points_at_time(const AxisSet& axes, std::int64_t t);

// Built-in d = 1 test diagrams with their vertex boxes.
struct TestDiagram {
    const char* name;
    DiagramSpec diagram;
    GridSpec grid;
};

std::vector<TestDiagram> builtin_test_diagrams();

}  // namespace latticeprop
