#include "latticeprop/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "latticeprop/contmult.hpp"
#include "latticeprop/diagrams.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/manifold.hpp"
#include "latticeprop/mink_core.hpp"
#include "latticeprop/pathspace.hpp"
#include "latticeprop/propagator.hpp"
#include "latticeprop/spinor.hpp"

namespace latticeprop {

namespace {

using cd = std::complex<double>;

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome paths_oracle() {
    std::size_t cases = 0, equal = 0;
    for (int n : {1, 3}) {
        const auto axes = generate_axes(1, n);
        for (std::int64_t t = 1; t <= 10; ++t)
            for (std::int64_t x = -t; x <= t; ++x) {
                const auto a = lattice_vec({0, 0}), b = lattice_vec({x, t});
                std::map<std::int64_t, BigInt> dfs;
                for (const auto& p : enumerate_paths(a, b, axes)) {
                    std::int64_t len = 0;
                    for (std::size_t s = 0; s < p.segments(); ++s)
                        len += static_cast<std::int64_t>(std::llround(minkowski_length(p.step(s))));
                    dfs[len] += 1;
                }
                ++cases;
                if (length_spectrum(a, b, axes).entries == dfs) ++equal;
            }
    }
    return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) + " targets equal"};
}

Outcome pythagorean_density() {
    const auto dens = density_check(2, 2000);
    const double ratio = static_cast<double>(dens.count) / dens.predicted;
    const double d500 = equidistribution_stats(generate_axes(1, 500), 16).discrepancy;
    const double d5000 = equidistribution_stats(generate_axes(1, 5000), 16).discrepancy;
    const bool pass = std::abs(ratio - 1.0) <= 0.10 && d5000 < d500;
    return {pass, "count " + std::to_string(dens.count) + " vs " + fmt(dens.predicted) + " (ratio " + fmt(ratio) +
                      "), discrepancy n=500 " + fmt(d500) + ", n=5000 " + fmt(d5000)};
}

Outcome kg_closed_form_check() {
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double mt = 0.05 * k;
        const auto q = continuum_density_ft_quadrature(spacetime_vec({0.0, 1.0}), mt);
        worst = std::max(worst, std::abs(q - std::numbers::pi * std::cyl_bessel_j(0.0, mt)));
    }
    // d = 3 at fixed t, tau kept at least 0.1 t away from the cone
    const double t = 3.0, m = 1.0;
    std::vector<cd> model, data;
    for (int k = 0; k <= 60; ++k) {
        const double x = 0.99 * t * k / 60.0;
        const double tau = std::sqrt(t * t - x * x);
        if (tau < 0.1 * t) continue;
        model.push_back(kg_closed_form(tau, m, 3));
        data.push_back(continuum_density_ft(spacetime_vec({x, 0.0, 0.0, t}), m));
    }
    const auto fit = shape_fit(model, data);
    const bool pass = worst < 1e-6 && fit.relative_error < 0.01;
    return {pass, "d=1 max abs error " + fmt(worst) + "; d=3 shape residual " + fmt(fit.relative_error) +
                      " after fit over " + std::to_string(model.size()) + " points"};
}

Outcome continuous_multinomial_check() {
    std::vector<double> x{0.5, 1.0, 1.5};
    const double base = continuous_multinomial(x);
    double spread = 0.0;
    std::sort(x.begin(), x.end());
    do spread = std::max(spread, std::abs(continuous_multinomial(x) - base) / base);
    while (std::next_permutation(x.begin(), x.end()));

    const auto conv = convolution_identity_check({1.0, 1.0, 1.0});

    TruncationPolicy pol;
    pol.max_word_length = 300;
    const double balanced = continuous_multinomial({20.0, 20.0}, pol);
    double gauss = 0.0;
    for (double delta : {1.0, 2.0, 3.0}) {
        const double r = continuous_multinomial({20.0 + delta, 20.0 - delta}, pol) / balanced;
        gauss = std::max(gauss, std::abs(r / std::exp(-delta * delta / 20.0) - 1.0));
    }

    const auto dc = disctocont_ratio({1.0, 2.0}, 80);
    const double refine = std::abs(dc.ratio - dc.ratio_half) / std::abs(dc.ratio);

    const bool pass = spread < 1e-12 && conv.relative_error < 0.02 && gauss < 0.02 && refine < 0.05;
    return {pass, "permutation spread " + fmt(spread) + "; convolution lhs " + fmt(conv.lhs) + " rhs " +
                      fmt(conv.rhs) + " rel " + fmt(conv.relative_error) + "; gaussian " + fmt(gauss) +
                      "; disctocont 40->80 " + fmt(refine)};
}

Outcome quotient_orbit() {
    std::size_t cases = 0, equal = 0;
    for (int n : {1, 5}) {
        const auto axes = generate_axes(1, n);
        for (std::int64_t C : {2, 3, 4}) {
            const QuotientLattice q{{C}};
            for (std::int64_t t = 1; t <= 10; ++t)
                for (std::int64_t x = 0; x < C; ++x) {
                    const auto a = lattice_vec({0, 0}), b = lattice_vec({x, t});
                    ++cases;
                    if (quotient_length_spectrum(q, a, b, axes) == orbit_length_spectrum(q, a, b, axes)) ++equal;
                }
        }
    }
    return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) + " (C, x, t, n) cases equal"};
}

Outcome branched_cylinder() {
    const auto gens = branched_cylinder_generators();
    const auto fixed = std::polar(1.0, std::numbers::pi / 2 + 2 * std::numbers::pi / 3);
    const double fix_err = std::abs(gens[0](fixed) - fixed);
    const double map_err =
        std::abs(gens[0](cd(0.0, 1.0)) - std::polar(1.0, std::numbers::pi / 2 + std::numbers::pi / 3));

    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> r(0.0, 0.95), th(-std::numbers::pi, std::numbers::pi);
    double norm_err = 0.0;
    for (int chain = 0; chain < 100; ++chain) {
        MobiusMap g;
        for (int k = 0; k < 20; ++k) g = mobius_compose(gens[pick(rng)], g);
        norm_err = std::max(norm_err, std::abs(g.normalization() - 1.0));
    }
    double trip = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto z = std::polar(r(rng), th(rng));
        trip = std::max(trip, std::abs(hyperboloid_to_poincare(poincare_to_hyperboloid(z)) - z));
    }
    const bool pass = fix_err < 1e-12 && map_err < 1e-12 && norm_err < 1e-12 && trip < 1e-12;
    return {pass, "fixed point " + fmt(fix_err) + ", image " + fmt(map_err) + ", normalization " + fmt(norm_err) +
                      ", round trip " + fmt(trip)};
}

Outcome kallen_lehmann() {
    const double alpha = 1.0, step = 1e-3;
    std::vector<double> taus;
    for (int i = 1; i <= 10000; ++i) taus.push_back(alpha * i);
    std::vector<double> grid;
    for (long j = 0; 1.0 + step * j < 4 * std::numbers::pi * 3.5 / alpha; ++j) grid.push_back(1.0 + step * j);
    const auto peaks = spectral_peaks(kl_spectrum(taus, grid), 3, 1.0);
    bool pass = peaks.size() == 3;
    std::string detail = "peak offsets (steps):";
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        const double off = (peaks[k] - 4 * std::numbers::pi * (k + 1) / alpha) / step;
        detail += " " + fmt(off);
        pass = pass && std::abs(off) <= 1.0;
    }
    auto rho = [](int N) {
        std::vector<double> t;
        for (int i = 1; i <= N; ++i) t.push_back(i);
        return kl_value(t, std::sqrt(2.0));
    };
    const double decay = std::abs(rho(10000) / rho(100));
    pass = pass && decay < 0.05;
    return {pass, detail + "; irrational decay " + fmt(decay)};
}

Outcome fermion_relations() {
    const auto dirac = dirac_relation_check(gamma_basis(3));
    double corr = 1.0;
    for (int d : {1, 3}) corr = std::min(corr, cosh_factorization_check(gamma_basis(d), 200, 17).correlation);
    double cliff = 0.0;
    for (int d : {1, 2, 3}) cliff = std::max(cliff, clifford_defect(gamma_basis(d)));
    const bool pass = dirac.max_relative_error < 1e-4 && corr > 1.0 - 1e-9 && cliff == 0.0;
    return {pass, "dirac fd error " + fmt(dirac.max_relative_error) + " over " + std::to_string(dirac.points) +
                      " points; cosh correlation 1-" + fmt(1.0 - corr) + "; clifford defect " + fmt(cliff)};
}

Outcome diagram_evaluators() {
    const TheorySpec theory{1, 1.0, {{3, 1.0}}};
    bool pass = true;
    std::string detail = "relative differences:";
    for (const auto& t : builtin_test_diagrams()) {
        const auto pos = contribution_position_space(t.diagram, theory, t.grid).value;
        const auto len = contribution_length_domain(t.diagram, theory, t.grid).value;
        const double rel = std::abs(pos - len) / std::abs(pos);
        detail += std::string(" ") + t.name + " " + fmt(rel);
        pass = pass && rel < 0.02;
    }
    const auto axes = generate_axes(1, 1);
    std::size_t cases = 0, equal = 0;
    for (std::int64_t t = 1; t <= 6; ++t)
        for (std::int64_t x = -t; x <= t; ++x) {
            const auto a = lattice_vec({0, 0}), b = lattice_vec({x, t});
            DiagramSpec chain{{to_real(a), to_real(b)}, {2}, {{0, 2}, {2, 1}}};
            BigInt joint = 0;
            for (const auto& p : enumerate_paths(a, b, axes)) joint += p.points.size();
            ++cases;
            if (lattice_diagram_count(chain, axes, lattice_vec({-t, 0}), lattice_vec({t, t})) == joint) ++equal;
        }
    pass = pass && equal == cases;
    return {pass, detail + "; lattice factorization " + std::to_string(equal) + "/" + std::to_string(cases)};
}

Outcome teichmuller() {
    const auto axes = generate_axes(1, 1);
    const QuotientLattice strip{{3}};
    std::size_t cases = 0, good = 0, classes = 0;
    for (std::int64_t t = 2; t <= 8; ++t)
        for (std::int64_t y : {1, 2}) {
            const auto rep = boundary_decomposition_check(strip, lattice_vec({1, 0}), lattice_vec({y, t}), axes);
            ++cases;
            classes += rep.single_crossing_classes;
            if (rep.partition_exact && rep.zero_class_matches && rep.single_crossing_matches) ++good;
        }
    return {good == cases, std::to_string(good) + "/" + std::to_string(cases) + " endpoints exact, " +
                               std::to_string(classes) + " single-crossing classes compared"};
}

struct Criterion {
    const char* name;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {"path oracle equality", 120.0, paths_oracle},
        {"pythagorean density", 60.0, pythagorean_density},
        {"klein-gordon closed form", 0.0, kg_closed_form_check},
        {"continuous multinomial", 0.0, continuous_multinomial_check},
        {"quotient orbit equality", 0.0, quotient_orbit},
        {"branched cylinder", 0.0, branched_cylinder},
        {"kallen-lehmann estimator", 0.0, kallen_lehmann},
        {"fermion relations", 0.0, fermion_relations},
        {"diagram evaluators", 0.0, diagram_evaluators},
        {"boundary decomposition", 0.0, teichmuller},
    };
    return list;
}

}  // namespace

CriterionResult run_criterion(int id) {
    if (id < 1 || id > kCriteriaCount) throw Error(ErrorCode::InvalidArgument, "criterion id out of range");
    const auto& c = criteria()[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = c.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto o = c.run();
        r.pass = o.pass;
        r.detail = o.detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && r.seconds > c.time_limit) {
        r.pass = false;
        r.detail += "; over the time limit of " + fmt(c.time_limit) + " s";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteriaCount; ++id) out.push_back(run_criterion(id));
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream o;
    o << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.name << "): " << r.detail << " ["
      << fmt(r.seconds) << " s]";
    return o.str();
}

}  // namespace latticeprop
