#include <random>

#include "doctest.h"
#include "latticeprop/error.hpp"
#include "latticeprop/pathspace.hpp"

using namespace latticeprop;

namespace {

LatticePath make_path(std::initializer_list<LatticeVec> pts) { return {std::vector<LatticeVec>(pts)}; }

BigInt spectrum_total(const std::vector<StepMultiset>& sols) {
    BigInt s = 0;
    for (const auto& m : sols) s += orderings_count(m);
    return s;
}

}  // namespace

TEST_CASE("canonicalize") {
    const auto a1 = generate_axes(1, 1);
    const auto p = make_path({lattice_vec({0, 0}), lattice_vec({0, 1}), lattice_vec({0, 2})});
    CHECK(canonicalize(p, a1) == p);
    const auto q = make_path({lattice_vec({0, 0}), lattice_vec({0, 2})});
    CHECK(canonicalize(q, a1) == p);

    const auto a5 = generate_axes(1, 5);
    const auto r = canonicalize(make_path({lattice_vec({0, 0}), lattice_vec({6, 10})}), a5);
    REQUIRE(r.segments() == 2);
    CHECK(r.step(0) == lattice_vec({3, 5}));
    CHECK(r.step(1) == lattice_vec({3, 5}));
    CHECK(canonicalize(r, a5) == r);

    CHECK_THROWS_AS(canonicalize(make_path({lattice_vec({0, 0}), lattice_vec({1, 3})}), a5), Error);
}

TEST_CASE("canonicalize is constant on subdivisions of the same trace") {
    const auto a5 = generate_axes(1, 5);
    std::mt19937_64 rng(7);
    const std::vector<LatticeVec> dirs = {lattice_vec({3, 5}), lattice_vec({0, 1}), lattice_vec({-1, 1}), lattice_vec({4, 5})};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<LatticeVec, int>> runs;
        for (int k = 0; k < 4; ++k) runs.push_back({dirs[rng() % dirs.size()], 1 + static_cast<int>(rng() % 4)});
        LatticePath fine, coarse;
        fine.points.push_back(LatticeVec::Zero(2));
        coarse.points.push_back(LatticeVec::Zero(2));
        for (const auto& [dir, len] : runs) {
            int done = 0;
            while (done < len) {
                const int chunk = 1 + static_cast<int>(rng() % (len - done));
                coarse.points.push_back(LatticeVec(coarse.points.back() + chunk * dir));
                done += chunk;
            }
            for (int j = 0; j < len; ++j) fine.points.push_back(LatticeVec(fine.points.back() + dir));
        }
        CHECK(canonicalize(coarse, a5) == fine);
    }
}

TEST_CASE("proper_time") {
    const PolygonalMetric m1(generate_axes(1, 1));
    const auto straight = make_path({lattice_vec({0, 0}), lattice_vec({0, 4})});
    CHECK(proper_time(straight, m1) == 4.0);
    CHECK(proper_time_minkowski(straight) == 4.0);
    const auto zig = make_path({lattice_vec({0, 0}), lattice_vec({1, 1}), lattice_vec({0, 2})});
    CHECK(proper_time(zig, m1) == 0.0);
    CHECK(proper_time_minkowski(zig) == 0.0);
    const auto bent = make_path({lattice_vec({0, 0}), lattice_vec({3, 5}), lattice_vec({3, 10})});
    CHECK(proper_time_minkowski(bent) == 9.0);
    CHECK(proper_time(bent, PolygonalMetric(generate_axes(1, 5))) == 9.0);
    CHECK(proper_time_minkowski(concat(straight, make_path({lattice_vec({0, 4}), lattice_vec({3, 9})}))) ==
          doctest::Approx(proper_time_minkowski(straight) + 4.0));
    CHECK_THROWS_AS(proper_time_minkowski(make_path({lattice_vec({0, 0}), lattice_vec({2, 1})})), Error);
}

TEST_CASE("enumerate_paths examples") {
    const auto a1 = generate_axes(1, 1);
    const auto o = lattice_vec({0, 0});
    CHECK(enumerate_paths(o, o, a1).size() == 1);
    CHECK(enumerate_paths(o, lattice_vec({0, 2}), a1, 2).size() == 1);
    const auto zero = enumerate_paths(o, lattice_vec({0, 2}), a1, 0);
    REQUIRE(zero.size() == 2);
    CHECK(zero[0].step(0) == lattice_vec({-1, 1}));
    CHECK(zero[1].step(0) == lattice_vec({1, 1}));
    CHECK(enumerate_paths(o, lattice_vec({1, 1}), a1).size() == 1);
    CHECK(enumerate_paths(o, lattice_vec({2, 1}), a1).empty());
    CHECK_THROWS_AS(enumerate_paths(o, lattice_vec({0, 12}), a1, std::nullopt, 100), Error);
}

TEST_CASE("step_solutions examples") {
    const auto a1 = generate_axes(1, 1);
    auto s2 = step_solutions({lattice_vec({0, 2}), 2}, a1);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].count_of(lattice_vec({0, 1})) == 2);
    auto s0 = step_solutions({lattice_vec({0, 2}), 0}, a1);
    REQUIRE(s0.size() == 1);
    CHECK(s0[0].count_of(lattice_vec({1, 1})) == 1);
    CHECK(s0[0].count_of(lattice_vec({-1, 1})) == 1);
    CHECK(step_solutions({lattice_vec({0, 2}), 3}, a1).empty());
    CHECK(step_solutions({lattice_vec({0, 2}), 1}, a1).empty());
    CHECK(step_solutions({lattice_vec({0, 2}), std::nullopt}, a1).size() == 2);
}

TEST_CASE("orderings_count") {
    CHECK(multinomial({2, 2}) == 6);
    CHECK(multinomial({5}) == 1);
    CHECK(multinomial({1, 1, 1}) == 6);
    CHECK(binomial(60, 30) == BigInt("118264581564861424"));
    CHECK(multinomial({20, 20, 20}) > BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST_CASE("multinomial sum equals brute force, d = 1, n in {1, 3, 5}") {
    for (int n : {1, 3, 5}) {
        const auto axes = generate_axes(1, n);
        const std::int64_t tmax = n == 5 ? 10 : 8;
        for (std::int64_t t = 0; t <= tmax; ++t)
            for (std::int64_t x = -t; x <= t; ++x) {
                const LatticeVec y = lattice_vec({x, t});
                const auto dp = count_paths_by_length(y, axes);
                for (std::int64_t I = 0; I <= t; ++I) {
                    const auto paths = enumerate_paths(lattice_vec({0, 0}), y, axes, I);
                    const BigInt s = spectrum_total(step_solutions({y, I}, axes));
                    CHECK(s == BigInt(paths.size()));
                    const auto it = dp.find(I);
                    CHECK((it == dp.end() ? BigInt(0) : it->second) == s);
                }
            }
    }
}

TEST_CASE("multinomial sum equals brute force, d = 2, n = 1") {
    const auto axes = generate_axes(2, 1);
    for (std::int64_t t = 0; t <= 4; ++t)
        for (std::int64_t x = -t; x <= t; ++x)
            for (std::int64_t y0 = -t; y0 <= t; ++y0) {
                const LatticeVec y = lattice_vec({x, y0, t});
                for (std::int64_t I = 0; I <= t; ++I) {
                    const auto paths = enumerate_paths(lattice_vec({0, 0, 0}), y, axes, I);
                    CHECK(spectrum_total(step_solutions({y, I}, axes)) == BigInt(paths.size()));
                }
            }
}

TEST_CASE("enumerated paths are canonical and have the requested length") {
    const auto axes = generate_axes(1, 5);
    const PolygonalMetric m(axes);
    for (const auto& p : enumerate_paths(lattice_vec({1, 0}), lattice_vec({2, 10}), axes, 6)) {
        CHECK(canonicalize(p, axes) == p);
        CHECK(proper_time(p, m) == 6.0);
    }
}
