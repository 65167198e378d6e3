#pragma once

#include <cstdint>
#include <vector>

#include "latticeprop/types.hpp"

namespace latticeprop {

double minkowski_length(const LatticeVec& a);
double minkowski_length(const SpacetimeVec& a);

struct AxisVector {
    LatticeVec step;
    std::int64_t length = 0;

    bool is_null() const { return length == 0; }
    bool operator==(const AxisVector& o) const { return length == o.length && step == o.step; }
};

struct AxisSet {
    int d = 1;
    int n = 1;
    std::vector<AxisVector> axes;   // timelike, including the pure time axis
    std::vector<AxisVector> nulls;  // length zero

    // axes followed by nulls
    std::vector<AxisVector> all() const;
    std::size_t size() const { return axes.size() + nulls.size(); }
};

// Every primitive (x, t) with sum x_i^2 + I^2 = t^2, 1 <= t <= n, I a
// nonnegative integer. Sorted by t, then lexicographically on x.
AxisSet generate_axes(int d, int n);

struct HalfspaceNormal {
    AxisVector v;
    Eigen::VectorXd perp;
    std::vector<AxisVector> neighborhood;
};

HalfspaceNormal neighborhood(const AxisVector& v, const AxisSet& axes);

// len(v) * (perp . x) / (perp . v)
double halfspace_value(const HalfspaceNormal& h, const SpacetimeVec& x);

struct Rational64 {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// The polygonal metric d_n. The unit ball is
//   B = conv{ step / length : timelike axes } + cone{ null steps },
// and d_n(x) = max{ s : x in s B } = min_f (N_f . x) / D_f over the facets of B
// with positive offset. Facets are computed once, in exact integer arithmetic.
class PolygonalMetric {
public:
    explicit PolygonalMetric(const AxisSet& axes);

    const AxisSet& axes() const { return axes_; }
    int dim() const { return axes_.d; }

    bool in_cone(const LatticeVec& x) const;
    bool in_cone(const SpacetimeVec& x, double tol = 1e-12) const;

    // d_n(0, x), exact. Throws OutsideCone.
    Rational64 exact(const LatticeVec& x) const;
    double operator()(const LatticeVec& x) const { return exact(x).value(); }
    double operator()(const SpacetimeVec& x) const;
    double distance(const LatticeVec& x1, const LatticeVec& x2) const { return (*this)(LatticeVec(x2 - x1)); }

    std::size_t facet_count() const { return facet_den_.size(); }
    std::size_t cone_facet_count() const { return cone_normals_.size(); }

    // Timelike axis points scaled to d_n = radius, one row per vertex.
    Eigen::MatrixXd ball_vertices(double radius) const;

private:
    AxisSet axes_;
    std::vector<LatticeVec> facet_normals_;
    std::vector<std::int64_t> facet_den_;
    std::vector<LatticeVec> cone_normals_;
};

struct DensityResult {
    std::int64_t count = 0;
    double predicted = 0.0;
};

inline constexpr double kCatalan = 0.9159655;

// Primitive unordered nonnegative tuples 0 <= a_0 <= ... <= a_d (the d spatial
// components and I) with sum a_i^2 = D^2 for some integer 1 <= D <= n. predicted = n^2 / (32 G) for d = 2,
// zero otherwise.
DensityResult density_check(int d, int n);

struct EquidistributionStats {
    std::vector<std::size_t> histogram;
    double discrepancy = 0.0;
    std::size_t count = 0;
};

// Extreme discrepancy D+ + D- of a sample in [0, 1].
double extreme_discrepancy(std::vector<double> u);

// Direction statistics of the timelike axes. For d = 1 the sample is the angle of
// (x, I) / t on the upper half circle, normalized to [0, 1]. For d >= 2 the samples
// are I / t and the azimuth of x; the histogram uses the azimuth and the
// discrepancy is the larger of the two.
EquidistributionStats equidistribution_stats(const AxisSet& axes, int bins);

}  // namespace latticeprop
