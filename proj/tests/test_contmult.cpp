#include <cmath>
#include <set>

#include "doctest.h"
#include "latticeprop/contmult.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/pathspace.hpp"

using namespace latticeprop;

namespace {

// Frozen from an independent mpmath evaluation at 30 digits of the raw double
// sum over k1, k2 <= 40 (and k1..k3 <= 18 for three letters).
constexpr double kCm11 = 7.740444313946793;
constexpr double kCm111 = 457.1442663767435;

}  // namespace

TEST_CASE("smirnov words") {
    CHECK(smirnov_words(1, 2).size() == 2);
    const auto w3 = smirnov_words(3, 2);
    REQUIRE(w3.size() == 2);
    CHECK(w3[0].letters == std::vector<int>{1, 2, 1});
    CHECK(w3[1].letters == std::vector<int>{2, 1, 2});
    CHECK(smirnov_words(2, 3).size() == 6);
    for (int l = 2; l <= 4; ++l)
        for (int n = 1; n <= 12; ++n) {
            std::size_t count = 0;
            bool ordered = true;
            std::vector<int> prev;
            for_each_smirnov_word(n, l, [&](const SmirnovWord& w) {
                ++count;
                ordered &= prev.empty() || prev < w.letters;
                prev = w.letters;
            });
            CHECK(count == static_cast<std::size_t>(l * std::pow(l - 1, n - 1)));
            CHECK(ordered);
        }
}

TEST_CASE("Smirnov counts by letter multiplicity") {
    for (int l = 2; l <= 4; ++l) {
        SmirnovCounter c(l);
        for (int n = 1; n <= 7; ++n) {
            std::map<std::vector<std::int64_t>, long> tally;
            for_each_smirnov_word(n, l, [&](const SmirnovWord& w) { ++tally[w.letter_counts(l)]; });
            for (const auto& [k, v] : tally) {
                CHECK(c(k) == doctest::Approx(static_cast<double>(v)));
                CHECK(c.exact(k) == v);
            }
        }
    }
}

TEST_CASE("path polytope volume, basis directions") {
    const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::Vector2d q(0.7, 1.3);
    CHECK(path_polytope_volume(q, {{1, 2}}, I2).value == doctest::Approx(1.0));
    CHECK(path_polytope_volume(q, {{1, 2, 1}}, I2).value == doctest::Approx(0.7));
    CHECK(path_polytope_volume(Eigen::Vector2d(2, 3), {{1, 2, 1, 2}}, I2).value == doctest::Approx(6.0));
    CHECK(path_polytope_volume(Eigen::Vector2d(2, 3), {{1, 2, 1, 2, 1}}, {}).value == doctest::Approx(2.0 * 3.0));
    CHECK_THROWS_AS(path_polytope_volume(q, {{1}}, I2), Error);
    CHECK_THROWS_AS(path_polytope_volume(q, {{1, 1}}, I2), Error);
}

TEST_CASE("sampled volumes agree with the closed form within 3 standard errors") {
    const Eigen::MatrixXd I3 = Eigen::MatrixXd::Identity(3, 3);
    const Eigen::Vector3d q(1.2, 0.8, 1.5);
    const std::vector<SmirnovWord> words = {{{1, 2, 1, 3}}, {{1, 2, 3, 1, 3}}, {{2, 1, 2, 3, 2, 1}}};
    for (const auto& w : words) {
        const double exact = path_polytope_volume(q, w, I3).value;
        MonteCarloOptions mc;
        mc.samples = 200000;
        mc.seed = 11;
        mc.force_sampling = true;
        const auto est = path_polytope_volume(q, w, I3, mc);
        CHECK(est.std_error > 0.0);
        CHECK(std::abs(est.value - exact) < 3.0 * est.std_error);
    }
}

TEST_CASE("sampled volumes for skew directions") {
    // Directions (1,0), (1,1): the fiber of word 1 2 1 over q = (3, 1) is lambda_2 = 1,
    // lambda_1 + lambda_3 = 2, a segment of delta-measure 2 / |det| = 2.
    Eigen::MatrixXd E(2, 2);
    E << 1, 1, 0, 1;
    MonteCarloOptions mc;
    mc.samples = 100000;
    const auto est = path_polytope_volume(Eigen::Vector2d(3, 1), {{1, 2, 1}}, E, mc);
    CHECK(std::abs(est.value - 2.0) < 4.0 * est.std_error + 1e-12);
    CHECK(path_polytope_volume(Eigen::Vector2d(3, 1), {{1, 2}}, E).value == doctest::Approx(1.0));
    CHECK_THROWS_AS(path_polytope_volume(Eigen::Vector2d(-3, 1), {{1, 2}}, E), Error);
}

TEST_CASE("continuous multinomial golden values and closed forms") {
    CHECK(continuous_multinomial({1.0, 1.0}) == doctest::Approx(kCm11).epsilon(1e-9));
    CHECK(continuous_multinomial({1.0, 1.0, 1.0}) == doctest::Approx(kCm111).epsilon(1e-9));
    TruncationPolicy fine;
    fine.tail_epsilon = 1e-16;
    CHECK(continuous_multinomial({1.0, 1.0}, fine) == doctest::Approx(kCm11).epsilon(1e-14));
    CHECK(continuous_multinomial({1.0, 1.0, 1.0}, fine) == doctest::Approx(kCm111).epsilon(1e-13));
    CHECK(continuous_binomial(1.0, 1.0) == doctest::Approx(kCm11).epsilon(1e-13));
    for (auto x : std::vector<std::vector<double>>{{0.5, 2.0}, {1.0, 1.0, 1.0}, {0.3, 1.1, 0.7, 0.9}, {2.0, 1.0, 0.5}}) {
        TruncationPolicy pol;
        pol.max_word_length = 120;
        CHECK(continuous_multinomial(x, pol) == doctest::Approx(continuous_multinomial_integral(x)).epsilon(1e-9));
    }
    CHECK(continuous_multinomial({0.5, 2.0}, fine) == doctest::Approx(continuous_binomial(0.5, 2.0)).epsilon(1e-13));
    const auto five = continuous_multinomial(ContMultArgs{{0.4, 0.5, 0.6, 0.7, 0.8}, {}});
    CHECK(five.method == ContMultMethod::BesselIntegral);
    CHECK(five.value > 0.0);
}

TEST_CASE("continuous multinomial: symmetry, positivity, monotonicity, zero rule") {
    CHECK(continuous_multinomial({0.7, 1.9}) == continuous_multinomial({1.9, 0.7}));
    const double a = continuous_multinomial({0.5, 1.0, 1.5});
    CHECK(continuous_multinomial({1.5, 0.5, 1.0}) == doctest::Approx(a).epsilon(1e-14));
    CHECK(continuous_multinomial({1.0, 1.5, 0.5}) == doctest::Approx(a).epsilon(1e-14));
    for (double x1 = 0.25; x1 < 3.0; x1 += 0.5)
        for (double x2 = 0.25; x2 < 3.0; x2 += 0.5) {
            const double v = continuous_multinomial({x1, x2});
            CHECK(v > 0.0);
            CHECK(continuous_multinomial({x1 + 0.3, x2}) > v);
            CHECK(continuous_multinomial({x1, x2, 0.5}) < continuous_multinomial({x1, x2 + 0.2, 0.5}));
        }
    CHECK(continuous_multinomial({0.0, 1.0, 2.0}) == 0.0);
    CHECK_THROWS_AS(continuous_multinomial({20.0, 20.0}), Error);
}

TEST_CASE("truncation diagnostics") {
    const auto r = continuous_multinomial(ContMultArgs{{1.0, 1.0}, {}});
    CHECK(r.word_length_reached > 2);
    CHECK(r.last_contribution < 1e-10 * r.value);
    TruncationPolicy tight;
    tight.max_word_length = 5;
    CHECK_THROWS_AS(continuous_multinomial({1.0, 1.0}, tight), Error);
}

TEST_CASE("general directions through sampled volumes") {
    ContMultArgs args{{1.0, 1.0}, Eigen::MatrixXd::Identity(2, 2)};
    args.directions(0, 1) = 1e-9;  // not the exact basis, so volumes are sampled
    TruncationPolicy pol;
    pol.tail_epsilon = 1e-4;
    pol.max_word_length = 14;
    MonteCarloOptions mc;
    mc.samples = 4000;
    const auto r = continuous_multinomial(args, pol, mc);
    CHECK(r.method == ContMultMethod::MonteCarlo);
    CHECK(std::abs(r.value - kCm11) < 4.0 * r.std_error + 1e-3);
}

TEST_CASE("discrete multinomial asymptotic") {
    const double exact = to_double(binomial(1000, 500));
    CHECK(discrete_multinomial_asymptotic({500, 500}) / exact == doctest::Approx(1.0).epsilon(0.01));
    CHECK(discrete_multinomial_asymptotic({550, 450}) / to_double(binomial(1000, 550)) == doctest::Approx(1.0).epsilon(0.01));
    const double bal = discrete_multinomial_log_asymptotic({40, 40, 40});
    CHECK(bal == doctest::Approx(121.5 * std::log(3.0) - std::log(2.0 * M_PI * 120.0)));
}

TEST_CASE("t_cont_apply") {
    GroupedTerms one{{2, {{1.0, 0.0}}}};
    for (double m : {1.0, 3.0, 50.0}) CHECK(std::abs(t_cont_apply(one, m, 2) - 1.0) < 1e-15);
    GroupedTerms next{{3, {{1.0, 0.0}}}};
    CHECK(std::abs(t_cont_apply(next, 4.0, 2) - 0.25) < 1e-15);
    GroupedTerms mixed{{1, {{9.0, 0.0}}}, {2, {{2.0, 1.0}, {0.5, -2.0}}}, {4, {{3.0, 6.0}}}};
    const double m = 2.0;
    const std::complex<double> hand =
        2.0 * std::polar(1.0, 0.5) + 0.5 * std::polar(1.0, -1.0) + 3.0 / (m * m) * std::polar(1.0, 3.0);
    CHECK(std::abs(t_cont_apply(mixed, m, 2) - hand) < 1e-14);
}

TEST_CASE("discrete to continuous") {
    const auto bal = disctocont_ratio({1.5, 1.5}, 20);
    CHECK(bal.ratio == doctest::Approx(1.0));
    const auto r = disctocont_ratio({1.0, 2.0}, 80);
    CHECK(r.diagnostic < 0.05);
    const double limit = continuous_multinomial({1.0, 2.0}) / continuous_multinomial({1.5, 1.5});
    CHECK(std::abs(r.ratio - limit) / limit < 0.05);
    const auto r2 = disctocont_ratio({1.0, 2.0}, 40);
    CHECK(r.diagnostic < r2.diagnostic);
}

TEST_CASE("convolution identity check") {
    CHECK_THROWS_AS(convolution_identity_check({1.0, 1.0}), Error);
    const auto c = convolution_identity_check({1.0, 1.0, 1.0});
    CHECK(c.lhs == doctest::Approx(kCm111).epsilon(1e-10));
    // The mollified right side reproduces cm(1, 2) cm(1, 1) up to the smoothing.
    CHECK(c.rhs == doctest::Approx(continuous_binomial(1.0, 2.0) * kCm11).epsilon(1e-3));
}

TEST_CASE("discrete analogue of the convolution identity is exact") {
    for (std::int64_t a = 0; a <= 6; ++a)
        for (std::int64_t b = 0; b <= 6; ++b)
            for (std::int64_t c = 0; c <= 6; ++c)
                CHECK(multinomial({a, b, c}) == multinomial({a, b + c}) * multinomial({b, c}));
}
