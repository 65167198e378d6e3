#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "latticeprop/mink_core.hpp"
#include "latticeprop/types.hpp"

namespace latticeprop {

struct LatticePath {
    std::vector<LatticeVec> points;

    std::size_t segments() const { return points.empty() ? 0 : points.size() - 1; }
    LatticeVec step(std::size_t i) const { return points[i + 1] - points[i]; }
    bool operator==(const LatticePath& o) const { return points == o.points; }
};

LatticePath concat(const LatticePath& p, const LatticePath& q);

// Sparse counts I_a. Entries keep the order of AxisSet::all() and are nonzero.
struct StepMultiset {
    std::vector<AxisVector> axes;
    std::vector<std::int64_t> counts;

    std::int64_t steps() const;
    std::int64_t length() const;
    LatticeVec displacement(int d) const;
    std::int64_t count_of(const LatticeVec& step) const;
};

struct PathConstraints {
    LatticeVec displacement;
    std::optional<std::int64_t> total_length;
};

inline constexpr std::size_t kDefaultNodeCap = 50'000'000;

// Splits each segment into copies of the primitive axis step along it.
LatticePath canonicalize(const LatticePath& path, const AxisSet& axes);

double proper_time(const LatticePath& path, const PolygonalMetric& metric);
double proper_time_minkowski(const LatticePath& path);

// Brute-force DFS over canonical paths from x to y, optionally filtered to total
// polygonal length I. Order follows AxisSet::all() at every branch.
std::vector<LatticePath> enumerate_paths(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes,
                                         std::optional<std::int64_t> I = std::nullopt,
                                         std::size_t node_cap = kDefaultNodeCap);

// Path counts per total length by memoized recursion on the remaining displacement.
std::map<std::int64_t, BigInt> count_paths_by_length(const LatticeVec& displacement, const AxisSet& axes,
                                                     std::size_t node_cap = kDefaultNodeCap);

std::vector<StepMultiset> step_solutions(const PathConstraints& c, const AxisSet& axes);

BigInt orderings_count(const StepMultiset& s);
BigInt multinomial(const std::vector<std::int64_t>& k);
BigInt binomial(std::int64_t n, std::int64_t k);

}  // namespace latticeprop
