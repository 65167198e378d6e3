#include "latticeprop/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "latticeprop/error.hpp"
#include "latticeprop/pathspace.hpp"

namespace latticeprop {

namespace {

std::int64_t mod_floor(std::int64_t a, std::int64_t c) { return ((a % c) + c) % c; }

void check_quotient(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y, const AxisSet& axes) {
    if (q.dim() != axes.d || x.size() != axes.d + 1 || y.size() != axes.d + 1)
        throw Error(ErrorCode::DimensionMismatch, "quotient, axes and points disagree on d");
    for (auto c : q.circumference)
        if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative circumference");
}

}  // namespace

LatticeVec QuotientLattice::reduce(const LatticeVec& v) const {
    LatticeVec r = v;
    for (int i = 0; i < dim(); ++i)
        if (circumference[i] > 0) r[i] = mod_floor(v[i], circumference[i]);
    return r;
}

bool QuotientLattice::same_point(const LatticeVec& a, const LatticeVec& b) const { return reduce(a) == reduce(b); }

LengthSpectrum quotient_length_spectrum(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                        const AxisSet& axes, std::size_t node_cap) {
    check_quotient(q, x, y, axes);
    const auto steps = axes.all();
    const std::int64_t t_end = time_of(y);
    const LatticeVec target = q.reduce(y);
    const int d = axes.d;

    using Key = std::vector<std::int64_t>;
    using Counts = std::map<std::int64_t, BigInt>;
    std::map<Key, Counts> memo;
    std::size_t nodes = 0;

    // Counts of paths from the reduced event p to the target, by remaining length.
    std::function<const Counts&(const LatticeVec&)> walk = [&](const LatticeVec& p) -> const Counts& {
        Key key(p.data(), p.data() + p.size());
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (++nodes > node_cap) throw Error(ErrorCode::BudgetExceeded, "quotient DFS node cap reached");
        Counts out;
        if (time_of(p) == t_end) {
            if (p.head(d) == target.head(d)) out[0] = 1;
        } else {
            for (const auto& a : steps) {
                if (time_of(p) + time_of(a.step) > t_end) continue;
                for (const auto& [I, c] : walk(q.reduce(p + a.step))) out[I + a.length] += c;
            }
        }
        return memo.emplace(std::move(key), std::move(out)).first->second;
    };

    LengthSpectrum s;
    if (time_of(y) < time_of(x)) return s;
    for (const auto& [I, c] : walk(q.reduce(x)))
        if (c != 0) s.entries[I] = c;
    return s;
}

std::vector<LatticeVec> in_cone_lifts(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                      const PolygonalMetric& metric) {
    const int d = q.dim();
    const std::int64_t dt = time_of(y) - time_of(x);
    std::vector<LatticeVec> out;
    if (dt < 0) return out;
    std::vector<std::int64_t> lo(d, 0), hi(d, 0);
    for (int i = 0; i < d; ++i) {
        const std::int64_t c = q.circumference[i];
        if (c == 0) continue;
        // lifts further than dt from x in coordinate i are spacelike
        lo[i] = (-dt - (y[i] - x[i])) / c - 1;
        hi[i] = (dt - (y[i] - x[i])) / c + 1;
    }
    std::vector<std::int64_t> k = lo;
    while (true) {
        LatticeVec lift = y;
        for (int i = 0; i < d; ++i) lift[i] += k[i] * q.circumference[i];
        if (metric.in_cone(LatticeVec(lift - x))) out.push_back(lift);
        int i = 0;
        while (i < d && ++k[i] > hi[i]) {
            k[i] = lo[i];
            ++i;
        }
        if (i == d) break;
    }
    return out;
}

LengthSpectrum orbit_length_spectrum(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                     const AxisSet& axes) {
    check_quotient(q, x, y, axes);
    const PolygonalMetric metric(axes);
    LengthSpectrum s;
    for (const auto& lift : in_cone_lifts(q, x, y, metric))
        for (const auto& [I, c] : length_spectrum(x, lift, axes).entries) s.entries[I] += c;
    return s;
}

std::complex<double> quotient_propagator_flat(const QuotientLattice& q, const LatticeVec& x, const LatticeVec& y,
                                              const AxisSet& axes, double m) {
    return fourier(quotient_length_spectrum(q, x, y, axes), m);
}

std::complex<double> MobiusMap::operator()(std::complex<double> z) const {
    const std::complex<long double> w(z.real(), z.imag());
    const auto r = (a * w + b) / (std::conj(b) * w + std::conj(a));
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

std::complex<double> mobius_apply(const MobiusMap& g, std::complex<double> z) { return g(z); }

MobiusMap mobius_compose(const MobiusMap& g, const MobiusMap& h) {
    return {g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)};
}

MobiusMap rotation(double phi) { return {std::polar(1.0L, 0.5L * phi), 0.0L}; }

std::vector<MobiusMap> branched_cylinder_generators() {
    using namespace std::complex_literals;
    // d1(z) = -((2 - i) + sqrt3)(i + 2z) / (((2 + i) + sqrt3)(2i + z))
    const long double s3 = std::sqrt(3.0L);
    const std::complex<long double> c = 2.0L + 1.0il + s3;
    const std::complex<long double> lambda = std::polar(1.0L / (s3 * std::abs(c)), std::numbers::pi_v<long double> / 4);
    const MobiusMap d1{-2.0L * std::conj(c) * lambda, -1.0il * std::conj(c) * lambda};
    const double third = 2.0 * std::numbers::pi / 3.0;
    return {d1, mobius_compose(rotation(-third), d1), mobius_compose(rotation(-2.0 * third), d1)};
}

HyperboloidPoint poincare_to_hyperboloid(std::complex<double> z) {
    const double r2 = std::norm(z);
    if (!(r2 < 1.0)) throw Error(ErrorCode::BoundaryPoint, "disk point on or outside the unit circle");
    const double w = 1.0 - r2;
    return {(1.0 + r2) / w, 2.0 * z.real() / w, 2.0 * z.imag() / w};
}

std::complex<double> hyperboloid_to_poincare(const HyperboloidPoint& p) {
    const double s = p.t * p.t - p.x * p.x - p.y * p.y;
    if (!(p.t >= 1.0) || std::abs(s - 1.0) > 1e-9 * p.t * p.t)
        throw Error(ErrorCode::InvalidArgument, "point not on the unit hyperboloid");
    const double r = std::hypot(p.x, p.y) / (1.0 + p.t);
    return std::polar(r, std::atan2(p.y, p.x));
}

OrbitSet orbit_enumerate(const std::vector<MobiusMap>& gens, std::complex<double> base, int max_word,
                         double dedupe_tol, double t0) {
    if (max_word < 0) throw Error(ErrorCode::InvalidArgument, "max_word must be nonnegative");
    if (gens.empty() && max_word > 0) throw Error(ErrorCode::InvalidArgument, "no generators");
    if (!(std::norm(base) < 1.0)) throw Error(ErrorCode::BoundaryPoint, "base point outside the disk");

    OrbitSet out;
    out.t0 = t0;
    auto add = [&](std::complex<double> z, const std::vector<int>& word) {
        ++out.words_before_dedupe;
        for (const auto& w : out.disk)
            if (std::abs(w - z) <= dedupe_tol) return;
        const auto h = poincare_to_hyperboloid(z);
        SpacetimeVec p(3);
        p << h.x, h.y, h.t + t0 - 1.0;
        out.disk.push_back(z);
        out.points.push_back(p);
        out.taus.push_back(std::sqrt(std::max(0.0, p[2] * p[2] - h.x * h.x - h.y * h.y)));
        out.words.push_back(word);
    };

    struct Node {
        std::complex<double> z;
        std::vector<int> word;
    };
    std::vector<Node> level{{base, {}}};
    add(base, {});
    for (int len = 1; len <= max_word; ++len) {
        std::vector<Node> next;
        for (const auto& node : level) {
            for (int g = 1; g <= static_cast<int>(gens.size()); ++g) {
                if (!node.word.empty() && node.word.back() == g) continue;
                Node child{gens[g - 1](node.z), node.word};
                child.word.push_back(g);
                add(child.z, child.word);
                next.push_back(std::move(child));
            }
        }
        level.swap(next);
    }
    return out;
}

namespace {

bool in_closed_cone(const SpacetimeVec& p, const SpacetimeVec& x, double& tau, double& dt) {
    const SpacetimeVec v = p - x;
    dt = time_of(v);
    const double s = dt * dt - v.head(v.size() - 1).squaredNorm();
    if (!(dt > 0.0) || s < -kLightconeTolerance * dt * dt) return false;
    tau = std::sqrt(std::max(0.0, s));
    return true;
}

}  // namespace

std::size_t orbit_in_cone_count(const OrbitSet& orbit, const SpacetimeVec& x) {
    std::size_t n = 0;
    double tau, dt;
    for (const auto& p : orbit.points)
        if (in_closed_cone(p, x, tau, dt)) ++n;
    return n;
}

std::complex<double> orbit_sum_propagator(const OrbitSet& orbit, const SpacetimeVec& x, double m, int d,
                                          OrbitKernel kernel) {
    if (x.size() != 3) throw Error(ErrorCode::DimensionMismatch, "orbit events are (x, y, t)");
    std::complex<double> sum = 0.0;
    std::size_t n = 0;
    double tau, dt;
    for (const auto& p : orbit.points) {
        if (!in_closed_cone(p, x, tau, dt)) continue;
        ++n;
        sum += kernel == OrbitKernel::KleinGordon ? kg_closed_form(tau, m, d)
                                                  : std::complex<double>(continuum_density_ft(tau, dt, m, d));
    }
    if (n == 0) throw Error(ErrorCode::EmptyOrbit, "no orbit point inside the cone of the source");
    return sum / static_cast<double>(n);
}

double sinc(double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

double kl_value(const std::vector<double>& taus, double m, KLNormalization mode) {
    if (taus.empty()) throw Error(ErrorCode::InvalidArgument, "kl_spectrum needs at least one tau");
    double s = 0.0;
    for (double t : taus) s += t * sinc(0.5 * t * m);
    const double n = static_cast<double>(taus.size());
    return s / (mode == KLNormalization::InverseN ? n : std::sqrt(n));
}

SpectralDensity kl_spectrum(const std::vector<double>& taus, const std::vector<double>& m_grid, KLNormalization mode) {
    for (std::size_t i = 1; i < m_grid.size(); ++i)
        if (!(m_grid[i] > m_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "mass grid must increase");
    SpectralDensity s{m_grid, std::vector<double>(m_grid.size()), mode};
    for (std::size_t i = 0; i < m_grid.size(); ++i) s.values[i] = kl_value(taus, m_grid[i], mode);
    return s;
}

std::vector<double> spectral_peaks(const SpectralDensity& s, int count, double radius) {
    const auto& v = s.values;
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const bool left = i == 0 || v[i] >= v[i - 1];
        const bool right = i + 1 == v.size() || v[i] >= v[i + 1];
        if (left && right) cand.push_back(i);
    }
    std::stable_sort(cand.begin(), cand.end(), [&](auto a, auto b) { return v[a] > v[b]; });
    std::vector<double> peaks;
    for (auto i : cand) {
        if (static_cast<int>(peaks.size()) == count) break;
        const double m = s.grid[i];
        if (std::all_of(peaks.begin(), peaks.end(), [&](double p) { return std::abs(p - m) > radius; }))
            peaks.push_back(m);
    }
    std::sort(peaks.begin(), peaks.end());
    return peaks;
}

namespace {

// Paths on the strip from `from` to `to` whose interior points avoid x = 0 mod C,
// keyed by (I, first step, last step).
std::map<std::tuple<std::int64_t, int, int>, BigInt> interior_counts(std::int64_t C, const LatticeVec& from,
                                                                     const LatticeVec& to,
                                                                     const std::vector<AxisVector>& steps) {
    std::map<std::tuple<std::int64_t, int, int>, BigInt> out;
    const std::int64_t goal = mod_floor(to[0], C);
    std::function<void(std::int64_t, std::int64_t, std::int64_t, int, int)> rec =
        [&](std::int64_t pos, std::int64_t t, std::int64_t I, int first, int last) {
            if (t == to[1]) {
                if (pos == goal && first >= 0) out[{I, first, last}] += 1;
                return;
            }
            if (first >= 0 && pos == 0) return;
            for (int a = 0; a < static_cast<int>(steps.size()); ++a) {
                const auto& s = steps[a].step;
                if (t + s[1] > to[1]) continue;
                rec(mod_floor(pos + s[0], C), t + s[1], I + steps[a].length, first < 0 ? a : first, a);
            }
        };
    rec(mod_floor(from[0], C), from[1], 0, -1, -1);
    return out;
}

}  // namespace

BoundaryReport boundary_decomposition_check(const QuotientLattice& strip, const LatticeVec& x, const LatticeVec& y,
                                            const AxisSet& axes, std::size_t node_cap) {
    if (axes.d != 1 || strip.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "boundary check is d = 1 only");
    check_quotient(strip, x, y, axes);
    const std::int64_t C = strip.circumference[0];
    if (C < 2) throw Error(ErrorCode::InvalidArgument, "strip width must be at least 2");
    if (mod_floor(x[0], C) == 0 || mod_floor(y[0], C) == 0)
        throw Error(ErrorCode::BoundaryPoint, "endpoints must be interior");
    if (time_of(y) <= time_of(x)) throw Error(ErrorCode::InvalidArgument, "target must be later than source");

    const auto steps = axes.all();
    BoundaryReport rep;
    std::map<std::int64_t, BigInt> by_length;
    std::vector<int> word;
    std::vector<std::int64_t> pos_trace;
    std::size_t nodes = 0;

    const std::int64_t goal = mod_floor(y[0], C);
    std::function<void(std::int64_t, std::int64_t, std::int64_t)> dfs = [&](std::int64_t pos, std::int64_t t,
                                                                         std::int64_t I) {
        if (++nodes > node_cap) throw Error(ErrorCode::BudgetExceeded, "boundary DFS node cap reached");
        if (t == y[1]) {
            if (pos != goal) return;
            rep.total += 1;
            by_length[I] += 1;
            int M = 0, first = -1, last = -1;
            for (std::size_t j = 1; j + 1 < pos_trace.size(); ++j) {
                if (pos_trace[j] != 0) continue;
                if (M++ == 0) first = static_cast<int>(j);
                last = static_cast<int>(j);
            }
            rep.by_crossings[M] += 1;
            if (M > 0) rep.classes[{M, word[first - 1], word[last], I}] += 1;
            return;
        }
        for (int a = 0; a < static_cast<int>(steps.size()); ++a) {
            const auto& s = steps[a].step;
            if (t + s[1] > y[1]) continue;
            const std::int64_t np = mod_floor(pos + s[0], C);
            word.push_back(a);
            pos_trace.push_back(np);
            dfs(np, t + s[1], I + steps[a].length);
            word.pop_back();
            pos_trace.pop_back();
        }
    };
    pos_trace.push_back(mod_floor(x[0], C));
    dfs(pos_trace[0], x[1], 0);

    BigInt class_sum = 0;
    for (const auto& [M, c] : rep.by_crossings) class_sum += c;
    const auto reference = quotient_length_spectrum(strip, x, y, axes, node_cap);
    LengthSpectrum enumerated;
    for (const auto& [I, c] : by_length) enumerated.entries[I] = c;
    rep.partition_exact = class_sum == rep.total && reference == enumerated;

    for (const auto& [k, c] : interior_counts(C, x, y, steps)) rep.interior_paths += c;
    const auto zero = rep.by_crossings.find(0);
    rep.zero_class_matches = rep.interior_paths == (zero == rep.by_crossings.end() ? BigInt(0) : zero->second);

    std::map<std::tuple<int, int, int, std::int64_t>, BigInt> expected;
    for (std::int64_t tb = x[1] + 1; tb < y[1]; ++tb) {
        const LatticeVec b = lattice_vec({0, tb});
        const auto left = interior_counts(C, x, b, steps);
        const auto right = interior_counts(C, b, y, steps);
        for (const auto& [kl, cl] : left)
            for (const auto& [kr, cr] : right)
                expected[{1, std::get<2>(kl), std::get<1>(kr), std::get<0>(kl) + std::get<0>(kr)}] += cl * cr;
    }
    std::map<std::tuple<int, int, int, std::int64_t>, BigInt> observed;
    for (const auto& [k, c] : rep.classes)
        if (std::get<0>(k) == 1) observed[k] = c;
    rep.single_crossing_classes = observed.size();
    rep.single_crossing_matches = observed == expected;
    return rep;
}

}  // namespace latticeprop
