#include <cmath>
#include <numbers>

#include "doctest.h"
#include "latticeprop/diagrams.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/propagator.hpp"

using namespace latticeprop;
using cd = std::complex<double>;

namespace {

const TheorySpec kCubic{1, 1.0, {{3, 1.0}}};

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("prefactor") {
    const cd i(0.0, 1.0);
    const double lambda = 0.3;
    const TheorySpec th{1, 1.0, {{3, lambda}, {4, 2.0}}};
    // two cubic vertices and five propagators
    DiagramSpec left{{spacetime_vec({0, 0}), spacetime_vec({1, 2}), spacetime_vec({0, 3}), spacetime_vec({1, 5})},
                     {3, 3},
                     {{0, 4}, {1, 4}, {4, 5}, {5, 2}, {5, 3}}};
    CHECK(std::abs(diagram_prefactor(left, th) - std::pow(i * lambda, 2) * std::pow(1.0 / i, 5)) < 1e-15);
    DiagramSpec edge{{spacetime_vec({0, 0}), spacetime_vec({0, 1})}, {}, {{0, 1}}};
    CHECK(std::abs(diagram_prefactor(edge, th) - 1.0 / i) < 1e-15);
    CHECK(diagram_prefactor(DiagramSpec{}, th) == cd(1.0));

    // disjoint union multiplies
    DiagramSpec quartic{{spacetime_vec({0, 0}), spacetime_vec({0, 1}), spacetime_vec({0, 2}), spacetime_vec({0, 3})},
                        {4},
                        {{0, 4}, {1, 4}, {2, 4}, {3, 4}}};
    DiagramSpec both = left;
    const int shift = 4;
    both.externals.insert(both.externals.begin() + 4, quartic.externals.begin(), quartic.externals.end());
    // externals 0..7, vertices 8 (3), 9 (3), 10 (4)
    both.vertices = {3, 3, 4};
    both.edges = {{0, 8}, {1, 8}, {8, 9}, {9, 2}, {9, 3}};
    for (const auto& [a, b] : quartic.edges) both.edges.push_back({a + shift, b == 4 ? 10 : b + shift});
    CHECK(std::abs(diagram_prefactor(both, th) - diagram_prefactor(left, th) * diagram_prefactor(quartic, th)) < 1e-14);
    CHECK_FALSE(both.connected());
    CHECK_THROWS_AS(contribution_position_space(both, th, GridSpec{}), Error);

    DiagramSpec bad = left;
    bad.vertices = {3, 4};
    CHECK_THROWS_AS(diagram_prefactor(bad, th), Error);
    try {
        diagram_prefactor(bad, th);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegreeMismatch);
    }
}

TEST_CASE("edge length densities") {
    const auto a = spacetime_vec({0.0, 0.0}), b = spacetime_vec({0.5, 3.0});
    const double tau = std::sqrt(9.0 - 0.25);
    const auto dens = edge_length_density(a, b, 0.01);
    CHECK(dens.total() == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-12));
    for (double m : {0.5, 1.0, 2.0})
        CHECK(std::abs(dens.fourier(m, 0.01) - edge_propagator(a, b, m)) < 1e-3 * std::abs(3.0 * std::numbers::pi));
    CHECK(edge_propagator(a, b, 1.0) == doctest::Approx(3.0 * std::numbers::pi * std::cyl_bessel_j(0.0, tau)));
    CHECK(edge_propagator(b, a, 1.0) == edge_propagator(a, b, 1.0));
    CHECK(edge_length_density(a, spacetime_vec({3.0, 1.0}), 0.01).mass.empty());

    // d = 3 masses integrate to the m = 0 transform
    const SpacetimeVec a3 = SpacetimeVec::Zero(4), b3 = spacetime_vec({0.3, 0.2, 0.1, 2.0});
    CHECK(edge_length_density(a3, b3, 0.01).total() == doctest::Approx(edge_propagator(a3, b3, 1e-9)).epsilon(1e-9));

    SUBCASE("fourier transform of a convolution is the product") {
        const auto c = spacetime_vec({-0.4, 5.0});
        const auto p = edge_length_density(a, b, 0.01), q = edge_length_density(b, c, 0.01);
        const auto pq = convolve(p, q);
        CHECK(pq.total() == doctest::Approx(p.total() * q.total()).epsilon(1e-12));
        for (double m : {0.3, 1.0, 1.7})
            CHECK(std::abs(pq.fourier(m, 0.01) - p.fourier(m, 0.01) * q.fourier(m, 0.01)) < 1e-9 * pq.total());
    }
}

TEST_CASE("position space and length domain agree") {
    for (const auto& t : builtin_test_diagrams()) {
        CAPTURE(t.name);
        const auto pos = contribution_position_space(t.diagram, kCubic, t.grid);
        const auto len = contribution_length_domain(t.diagram, kCubic, t.grid);
        CHECK(rel(len.value, pos.value) < 0.02);
    }
}

TEST_CASE("built-in diagram values") {
    const auto tests = builtin_test_diagrams();
    const auto& single = tests[0];
    const auto v = contribution_position_space(single.diagram, kCubic, single.grid).value;
    CHECK(std::abs(v - edge_propagator(single.diagram.externals[0], single.diagram.externals[1], 1.0) / cd(0.0, 1.0)) <
          1e-14);

    const auto& tree = tests[1];
    const auto tv = contribution_position_space(tree.diagram, kCubic, tree.grid);
    CHECK(tv.value.real() == doctest::Approx(-18.01127265183468).epsilon(1e-11));
    CHECK(std::abs(tv.value.imag()) < 1e-12);
    CHECK(tv.nodes == 64);

    SUBCASE("refinement approaches the dense-grid value") {
        GridSpec fine = tree.grid;
        fine.cells = 64;
        CHECK(contribution_position_space(tree.diagram, kCubic, fine).value.real() ==
              doctest::Approx(-17.19521730006775).epsilon(1e-10));
    }
    SUBCASE("monte carlo is unbiased within its error") {
        GridSpec mc = tree.grid;
        mc.mc_samples = 200000;
        mc.seed = 4;
        const auto r = contribution_position_space(tree.diagram, kCubic, mc);
        CHECK(std::abs(r.value.real() + 17.18729032351157) < 5.0 * r.std_error);
        CHECK(r.std_error > 0.0);
    }
    SUBCASE("relabeling the loop vertices") {
        auto loop = tests[2];
        const auto a = contribution_position_space(loop.diagram, kCubic, loop.grid).value;
        loop.diagram.edges = {{0, 3}, {3, 2}, {2, 3}, {2, 1}};
        const auto b = contribution_position_space(loop.diagram, kCubic, loop.grid).value;
        CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
    GridSpec tiny = tests[2].grid;
    tiny.node_budget = 100;
    CHECK_THROWS_AS(contribution_position_space(tests[2].diagram, kCubic, tiny), Error);
}

TEST_CASE("lattice diagram counts") {
    const auto axes = generate_axes(1, 1);
    SUBCASE("single edge is the length spectrum") {
        DiagramSpec e{{spacetime_vec({0, 0}), spacetime_vec({1, 5})}, {}, {{0, 1}}};
        const auto spec = length_spectrum(lattice_vec({0, 0}), lattice_vec({1, 5}), axes);
        CHECK(lattice_diagram_count(e, axes, LatticeVec(), LatticeVec()) == spec.total());
        CHECK(lattice_diagram_count(e, axes, LatticeVec(), LatticeVec(), {std::vector<std::int64_t>{2}, {}}) ==
              spec.at(2));
    }
    SUBCASE("one internal vertex factorizes over the joint walk") {
        for (std::int64_t t = 2; t <= 6; ++t)
            for (std::int64_t x = -1; x <= 1; ++x) {
                const auto a = lattice_vec({0, 0}), b = lattice_vec({x, t});
                DiagramSpec chain{{to_real(a), to_real(b)}, {2}, {{0, 2}, {2, 1}}};
                const auto lo = lattice_vec({-t, 0}), hi = lattice_vec({t, t});
                // a path from a to b with one marked point, anywhere on it
                BigInt joint = 0;
                std::map<std::int64_t, BigInt> joint_by_length;
                for (const auto& p : enumerate_paths(a, b, axes)) {
                    std::int64_t len = 0;
                    for (std::size_t s = 0; s < p.segments(); ++s)
                        len += static_cast<std::int64_t>(minkowski_length(p.step(s)));
                    joint += p.points.size();
                    joint_by_length[len] += p.points.size();
                }
                CHECK(lattice_diagram_count(chain, axes, lo, hi) == joint);
                for (const auto& [I, c] : joint_by_length)
                    CHECK(lattice_diagram_count(chain, axes, lo, hi, {{}, I}) == c);
            }
    }
    SUBCASE("restricted box") {
        DiagramSpec chain{{spacetime_vec({0, 0}), spacetime_vec({0, 4})}, {2}, {{0, 2}, {2, 1}}};
        // only the midpoint time slice
        BigInt expect = 0;
        for (const auto& p : enumerate_paths(lattice_vec({0, 0}), lattice_vec({0, 4}), axes)) (void)p, ++expect;
        // every path has exactly one point at t = 2
        CHECK(lattice_diagram_count(chain, axes, lattice_vec({-2, 2}), lattice_vec({2, 2})) == expect);
    }
    DiagramSpec split{{spacetime_vec({0, 0}), spacetime_vec({0, 1}), spacetime_vec({0, 2})}, {}, {{0, 1}}};
    CHECK_THROWS_AS(lattice_diagram_count(split, axes, LatticeVec(), LatticeVec()), Error);
    DiagramSpec off{{spacetime_vec({0.5, 0}), spacetime_vec({0, 1})}, {}, {{0, 1}}};
    CHECK_THROWS_AS(lattice_diagram_count(off, axes, LatticeVec(), LatticeVec()), Error);
}

TEST_CASE("photon density") {
    CHECK(photon_density_continuum(spacetime_vec({0, 0, 0}), spacetime_vec({0.6, 0.8, 1.0})) ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(photon_density_continuum(spacetime_vec({0, 0, 0}), spacetime_vec({1.2, 1.6, 2.0})) ==
          doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
    CHECK(photon_density_continuum(spacetime_vec({0, 0, 0}), spacetime_vec({0.1, 0.2, 1.0})) == 0.0);
    CHECK(photon_density_continuum(spacetime_vec({0, 0}), spacetime_vec({2, 2})) == doctest::Approx(0.5));

    const auto axes = generate_axes(1, 1);
    for (std::int64_t t = 1; t <= 4; ++t) {
        CHECK(null_points_at_time(axes, t) == 2);
        CHECK(photon_density_discrete(lattice_vec({0, 0}), lattice_vec({t, t}), axes) == 0.5);
        CHECK(photon_density_discrete(lattice_vec({0, 0}), lattice_vec({-t, t}), axes) == 0.5);
    }
    CHECK(photon_density_discrete(lattice_vec({0, 0}), lattice_vec({0, 3}), axes) == 0.0);
    CHECK_THROWS_AS(photon_density_discrete(lattice_vec({0, 0}), lattice_vec({0, 0}), axes), Error);
    // d = 2: null directions at t = 5 are the lattice points on the circle of radius 5
    CHECK(null_points_at_time(generate_axes(2, 5), 5) == 12);
}
