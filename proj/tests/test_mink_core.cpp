#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "latticeprop/error.hpp"
#include "latticeprop/mink_core.hpp"

using namespace latticeprop;

namespace {

bool contains(const std::vector<AxisVector>& v, const LatticeVec& step, std::int64_t len) {
    return std::any_of(v.begin(), v.end(), [&](const AxisVector& a) { return a.step == step && a.length == len; });
}

// Exhaustive scan over x, I, t independently of generate_axes.
std::set<std::vector<std::int64_t>> scan_d1(int n) {
    std::set<std::vector<std::int64_t>> out;
    for (std::int64_t t = 1; t <= n; ++t)
        for (std::int64_t x = -t; x <= t; ++x)
            for (std::int64_t I = 0; I <= t; ++I)
                if (x * x + I * I == t * t && std::gcd(std::gcd(x, I), t) == 1) out.insert({x, t, I});
    return out;
}

// Bounded search for a nonnegative integer combination of generators equal to v.
bool decomposes(const LatticeVec& v, const std::vector<AxisVector>& gens, std::size_t from = 0) {
    if (v.isZero()) return true;
    if (v(v.size() - 1) <= 0) return false;
    for (std::size_t i = from; i < gens.size(); ++i)
        if (decomposes(LatticeVec(v - gens[i].step), gens, i)) return true;
    return false;
}

}  // namespace

TEST_CASE("minkowski_length") {
    CHECK(minkowski_length(lattice_vec({0, 5})) == 5.0);
    CHECK(minkowski_length(lattice_vec({3, 5})) == 4.0);
    CHECK(minkowski_length(lattice_vec({1, 1})) == 0.0);
    CHECK(minkowski_length(spacetime_vec({0.6, 1.0})) == doctest::Approx(0.8));
    CHECK_THROWS_AS(minkowski_length(lattice_vec({2, 1})), Error);
}

TEST_CASE("generate_axes small cases") {
    const auto a21 = generate_axes(2, 1);
    REQUIRE(a21.axes.size() == 1);
    CHECK(a21.axes[0].step == lattice_vec({0, 0, 1}));
    CHECK(a21.axes[0].length == 1);
    CHECK(a21.nulls.size() == 4);
    for (auto s : {lattice_vec({1, 0, 1}), lattice_vec({-1, 0, 1}), lattice_vec({0, 1, 1}), lattice_vec({0, -1, 1})})
        CHECK(contains(a21.nulls, s, 0));

    const auto a11 = generate_axes(1, 1);
    REQUIRE(a11.axes.size() == 1);
    CHECK(a11.nulls.size() == 2);
    CHECK(contains(a11.nulls, lattice_vec({1, 1}), 0));
    CHECK(contains(a11.nulls, lattice_vec({-1, 1}), 0));

    const auto a15 = generate_axes(1, 5);
    CHECK(contains(a15.axes, lattice_vec({3, 5}), 4));
    CHECK(contains(a15.axes, lattice_vec({-4, 5}), 3));
}

TEST_CASE("generate_axes agrees with an exhaustive scan for d = 1") {
    for (int n : {1, 5, 13, 30}) {
        const auto ref = scan_d1(n);
        std::set<std::vector<std::int64_t>> got;
        for (const auto& a : generate_axes(1, n).all()) got.insert({a.step(0), a.step(1), a.length});
        CHECK(got == ref);
    }
}

TEST_CASE("axis sets contain the time axis and the unit nulls") {
    for (int d : {1, 2, 3}) {
        const auto a = generate_axes(d, 3);
        LatticeVec time = LatticeVec::Zero(d + 1);
        time(d) = 1;
        CHECK(contains(a.axes, time, 1));
        for (int i = 0; i < d; ++i) {
            LatticeVec e = time;
            e(i) = 1;
            CHECK(contains(a.nulls, e, 0));
            e(i) = -1;
            CHECK(contains(a.nulls, e, 0));
        }
        std::set<std::vector<std::int64_t>> dirs;
        for (const auto& v : a.all()) CHECK(dirs.insert(std::vector<std::int64_t>(v.step.data(), v.step.data() + d + 1)).second);
    }
}

TEST_CASE("neighborhood") {
    const auto a11 = generate_axes(1, 1);
    const auto h = neighborhood(a11.axes[0], a11);
    REQUIRE(h.neighborhood.size() == 1);
    CHECK(h.neighborhood[0].step == lattice_vec({-1, 1}));
    for (const auto& w : h.neighborhood) CHECK(std::abs(h.perp.dot((w.step - h.v.step).cast<double>())) < 1e-14);
    CHECK(halfspace_value(h, spacetime_vec({0.0, 3.0})) == doctest::Approx(3.0));

    const auto a21 = generate_axes(2, 1);
    const auto h2 = neighborhood(a21.axes[0], a21);
    CHECK(h2.neighborhood.size() == 2);
    for (const auto& w : h2.neighborhood) CHECK(std::abs(h2.perp.dot((w.step - h2.v.step).cast<double>())) < 1e-14);

    AxisSet lonely;
    lonely.d = 1;
    lonely.axes = {{lattice_vec({0, 1}), 1}};
    CHECK_THROWS_AS(neighborhood(lonely.axes[0], lonely), Error);
}

TEST_CASE("polygonal metric, d = 1, n = 1 is t - |x|") {
    const PolygonalMetric m(generate_axes(1, 1));
    for (std::int64_t t = 0; t <= 9; ++t)
        for (std::int64_t x = -t; x <= t; ++x) {
            const auto r = m.exact(lattice_vec({x, t}));
            CHECK(r.num == (t - std::abs(x)) * r.den);
        }
    CHECK_THROWS_AS(m.exact(lattice_vec({3, 2})), Error);
    CHECK(m(spacetime_vec({0.5, 2.0})) == doctest::Approx(1.5));
    CHECK(m.distance(lattice_vec({1, 1}), lattice_vec({1, 4})) == 3.0);
}

TEST_CASE("polygonal metric is exact on axes and below Minkowski elsewhere") {
    for (int d : {1, 2}) {
        std::vector<PolygonalMetric> ms;
        for (int n : {1, 3, 5}) ms.emplace_back(generate_axes(d, n));
        for (const auto& m : ms) {
            for (const auto& a : m.axes().all()) {
                const auto r = m.exact(a.step);
                CHECK(r.num == a.length * r.den);
                for (std::int64_t k = 2; k <= 3; ++k) {
                    const auto rk = m.exact(LatticeVec(k * a.step));
                    CHECK(rk.num == k * a.length * rk.den);
                }
                LatticeVec time = LatticeVec::Zero(d + 1);
                time(d) = 7;
                CHECK(m(time) == 7.0);
            }
        }
        const int box = d == 1 ? 12 : 8;
        LatticeVec v(d + 1);
        for (std::int64_t t = 1; t <= box; ++t) {
            for (std::int64_t x0 = -t; x0 <= t; ++x0)
                for (std::int64_t x1 = (d == 2 ? -t : 0); x1 <= (d == 2 ? t : 0); ++x1) {
                    v(0) = x0;
                    if (d == 2) v(1) = x1;
                    v(d) = t;
                    if (minkowski_square(v) < 0) continue;
                    const double mink = minkowski_length(v);
                    double prev_gap = INFINITY;
                    for (const auto& m : ms) {
                        if (!m.in_cone(v)) continue;
                        const double dn = m(v);
                        CHECK(dn <= mink + 1e-12);
                        const double gap = mink - dn;
                        CHECK(gap <= prev_gap + 1e-12);
                        prev_gap = gap;
                    }
                }
        }
    }
}

TEST_CASE("vectors where d_n equals the Minkowski length are generated by the axes") {
    const PolygonalMetric m(generate_axes(1, 5));
    const auto gens = m.axes().all();
    for (std::int64_t t = 1; t <= 12; ++t)
        for (std::int64_t x = -t; x <= t; ++x) {
            const LatticeVec v = lattice_vec({x, t});
            if (!m.in_cone(v)) continue;
            const auto r = m.exact(v);
            const std::int64_t s = t * t - x * x;
            if (r.num * r.num == s * r.den * r.den) CHECK(decomposes(v, gens));
        }
}

TEST_CASE("metric-ball vertices have unit polygonal length") {
    const PolygonalMetric m(generate_axes(2, 5));
    const auto verts = m.ball_vertices(2.0);
    for (Eigen::Index i = 0; i < verts.rows(); ++i) CHECK(m(SpacetimeVec(verts.row(i).transpose())) == doctest::Approx(2.0));
}

TEST_CASE("density_check") {
    // Independent oracle: ordered triples, deduplicated by sorting.
    const int n = 100;
    std::set<std::array<int, 3>> seen;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int c = 0; c <= n; ++c) {
                const int s = a * a + b * b + c * c;
                if (s == 0 || s > n * n) continue;
                const int r = static_cast<int>(std::lround(std::sqrt(s)));
                if (r * r != s || std::gcd(std::gcd(a, b), c) != 1) continue;
                std::array<int, 3> k{a, b, c};
                std::sort(k.begin(), k.end());
                seen.insert(k);
            }
    const auto res = density_check(2, n);
    CHECK(res.count == static_cast<std::int64_t>(seen.size()));
    CHECK(res.predicted == doctest::Approx(341.2).epsilon(1e-3));
    CHECK(density_check(2, 200).predicted / res.predicted == doctest::Approx(4.0));
    CHECK(kCatalan == 0.9159655);
    // d = 1: (0,1,1), (3,4,5), (5,12,13), (8,15,17)
    CHECK(density_check(1, 17).count == 4);
}

TEST_CASE("equidistribution") {
    CHECK(extreme_discrepancy({0.3}) == doctest::Approx(1.0));
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) grid.push_back((i + 0.5) / 64.0);
    CHECK(extreme_discrepancy(grid) == doctest::Approx(1.0 / 64.0));

    AxisSet single;
    single.axes = {{lattice_vec({0, 1}), 1}};
    CHECK(equidistribution_stats(single, 1).discrepancy == doctest::Approx(1.0));

    const auto s500 = equidistribution_stats(generate_axes(1, 500), 10);
    const auto s5000 = equidistribution_stats(generate_axes(1, 5000), 10);
    CHECK(s5000.discrepancy < s500.discrepancy);
    CHECK(std::accumulate(s500.histogram.begin(), s500.histogram.end(), std::size_t{0}) == s500.count);
    CHECK_THROWS_AS(equidistribution_stats(single, 4), Error);

    const auto s2 = equidistribution_stats(generate_axes(2, 40), 8);
    CHECK(s2.discrepancy < 0.5);
}
