#include "latticeprop/pathspace.hpp"

#include <cmath>
#include <numeric>

#include "latticeprop/error.hpp"

namespace latticeprop {

namespace {

std::int64_t gcd_all(const LatticeVec& v) {
    std::int64_t g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i));
    return g;
}

std::vector<std::int64_t> key_of(const LatticeVec& v) { return {v.data(), v.data() + v.size()}; }

// d_n(R) >= L, exactly.
bool length_reachable(const PolygonalMetric& m, const LatticeVec& r, std::int64_t L) {
    if (L <= 0) return true;
    const auto q = m.exact(r);
    return q.num >= L * q.den;
}

void check_dims(const LatticeVec& v, const AxisSet& axes) {
    if (v.size() != axes.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
}

}  // namespace

LatticePath concat(const LatticePath& p, const LatticePath& q) {
    if (p.points.empty()) return q;
    if (q.points.empty()) return p;
    if (p.points.back() != q.points.front()) throw Error(ErrorCode::InvalidArgument, "paths do not meet");
    LatticePath out = p;
    out.points.insert(out.points.end(), q.points.begin() + 1, q.points.end());
    return out;
}

std::int64_t StepMultiset::steps() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }

std::int64_t StepMultiset::length() const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < axes.size(); ++i) s += counts[i] * axes[i].length;
    return s;
}

LatticeVec StepMultiset::displacement(int d) const {
    LatticeVec s = LatticeVec::Zero(d + 1);
    for (std::size_t i = 0; i < axes.size(); ++i) s += counts[i] * axes[i].step;
    return s;
}

std::int64_t StepMultiset::count_of(const LatticeVec& step) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i].step == step) return counts[i];
    return 0;
}

LatticePath canonicalize(const LatticePath& path, const AxisSet& axes) {
    LatticePath out;
    if (path.points.empty()) return out;
    const auto gens = axes.all();
    out.points.push_back(path.points.front());
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const LatticeVec s = path.step(i);
        check_dims(s, axes);
        if (s.isZero()) continue;
        const std::int64_t g = gcd_all(s);
        const LatticeVec prim = s / g;
        const bool known = std::any_of(gens.begin(), gens.end(), [&](const AxisVector& a) { return a.step == prim; });
        if (!known) throw Error(ErrorCode::NotGenerated, "segment is not a multiple of an axis vector");
        for (std::int64_t k = 0; k < g; ++k) out.points.push_back(LatticeVec(out.points.back() + prim));
    }
    return out;
}

double proper_time(const LatticePath& path, const PolygonalMetric& metric) {
    double rho = 0.0;
    for (std::size_t i = 0; i < path.segments(); ++i) {
        const LatticeVec s = path.step(i);
        if (!metric.in_cone(s)) throw Error(ErrorCode::SpacelikeSegment, "segment outside the polygonal cone");
        rho += metric(s);
    }
    return rho;
}

double proper_time_minkowski(const LatticePath& path) {
    double rho = 0.0;
    for (std::size_t i = 0; i < path.segments(); ++i) {
        const LatticeVec s = path.step(i);
        if (time_of(s) < 0 || minkowski_square(s) < 0) throw Error(ErrorCode::SpacelikeSegment, "segment is spacelike");
        rho += minkowski_length(s);
    }
    return rho;
}

std::vector<LatticePath> enumerate_paths(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes,
                                         std::optional<std::int64_t> I, std::size_t node_cap) {
    check_dims(x, axes);
    check_dims(y, axes);
    std::vector<LatticePath> out;
    const LatticeVec disp = y - x;
    if (time_of(disp) < 0) return out;
    const PolygonalMetric metric(axes);
    if (!metric.in_cone(disp)) return out;
    if (I && !length_reachable(metric, disp, *I)) return out;

    const auto gens = axes.all();
    std::size_t nodes = 0;
    LatticePath cur;
    cur.points.push_back(x);
    auto dfs = [&](auto&& self, const LatticeVec& rem, std::int64_t used) -> void {
        if (++nodes > node_cap) throw Error(ErrorCode::BudgetExceeded, "enumerate_paths node cap");
        if (rem.isZero()) {
            if (!I || used == *I) out.push_back(cur);
            return;
        }
        for (const auto& g : gens) {
            const LatticeVec next = rem - g.step;
            if (time_of(next) < 0 || !metric.in_cone(next)) continue;
            const std::int64_t u = used + g.length;
            if (I && (u > *I || !length_reachable(metric, next, *I - u))) continue;
            cur.points.push_back(LatticeVec(cur.points.back() + g.step));
            self(self, next, u);
            cur.points.pop_back();
        }
    };
    dfs(dfs, disp, 0);
    return out;
}

std::map<std::int64_t, BigInt> count_paths_by_length(const LatticeVec& displacement, const AxisSet& axes,
                                                     std::size_t node_cap) {
    check_dims(displacement, axes);
    if (time_of(displacement) < 0) return {};
    const PolygonalMetric metric(axes);
    if (!metric.in_cone(displacement)) return {};
    const auto gens = axes.all();
    std::map<std::vector<std::int64_t>, std::map<std::int64_t, BigInt>> memo;
    std::size_t nodes = 0;
    auto rec = [&](auto&& self, const LatticeVec& rem) -> const std::map<std::int64_t, BigInt>& {
        const auto key = key_of(rem);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (++nodes > node_cap) throw Error(ErrorCode::BudgetExceeded, "count_paths_by_length node cap");
        std::map<std::int64_t, BigInt> acc;
        if (rem.isZero()) {
            acc[0] = 1;
        } else {
            for (const auto& g : gens) {
                const LatticeVec next = rem - g.step;
                if (time_of(next) < 0 || !metric.in_cone(next)) continue;
                for (const auto& [len, c] : self(self, next)) acc[len + g.length] += c;
            }
        }
        return memo.emplace(key, std::move(acc)).first->second;
    };
    return rec(rec, displacement);
}

std::vector<StepMultiset> step_solutions(const PathConstraints& c, const AxisSet& axes) {
    check_dims(c.displacement, axes);
    const int d = axes.d;
    std::vector<StepMultiset> out;
    if (time_of(c.displacement) < 0) return out;
    if (c.total_length && *c.total_length < 0) return out;
    const PolygonalMetric metric(axes);
    if (!metric.in_cone(c.displacement)) return out;
    const auto gens = axes.all();

    // Pivot generators: the time axis (only when I is fixed), (e_i, 1) and (-e_1, 1).
    // They are solved for exactly once the free generators are chosen.
    auto find = [&](const LatticeVec& s) -> int {
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (gens[i].step == s) return static_cast<int>(i);
        return -1;
    };
    LatticeVec time = LatticeVec::Zero(d + 1);
    time(d) = 1;
    std::vector<int> e_idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        LatticeVec e = time;
        e(i) = 1;
        e_idx[static_cast<std::size_t>(i)] = find(e);
    }
    LatticeVec me = time;
    me(0) = -1;
    const int m_idx = find(me);
    const int t_idx = c.total_length ? find(time) : -2;
    const bool pivots = m_idx >= 0 && t_idx != -1 &&
                        std::all_of(e_idx.begin(), e_idx.end(), [](int i) { return i >= 0; });

    std::vector<bool> is_pivot(gens.size(), false);
    if (pivots) {
        for (int i : e_idx) is_pivot[static_cast<std::size_t>(i)] = true;
        is_pivot[static_cast<std::size_t>(m_idx)] = true;
        if (t_idx >= 0) is_pivot[static_cast<std::size_t>(t_idx)] = true;
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!is_pivot[i]) free.push_back(i);

    std::vector<std::int64_t> counts(gens.size(), 0);
    auto emit = [&]() {
        StepMultiset s;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (counts[i] > 0) {
                s.axes.push_back(gens[i]);
                s.counts.push_back(counts[i]);
            }
        out.push_back(std::move(s));
    };

    auto solve_pivots = [&](const LatticeVec& r, std::int64_t L) {
        if (!pivots) {
            if (r.isZero() && L == 0) emit();
            return;
        }
        std::int64_t S = r(d);
        if (t_idx >= 0) {
            S -= L;
        } else if (L != 0) {
            return;
        }
        for (int i = 1; i < d; ++i) {
            if (r(i) < 0) return;
            S -= r(i);
        }
        if ((S + r(0)) % 2 != 0) return;
        const std::int64_t p1 = (S + r(0)) / 2, q = (S - r(0)) / 2;
        if (p1 < 0 || q < 0) return;
        if (t_idx >= 0) counts[static_cast<std::size_t>(t_idx)] = L;
        for (int i = 1; i < d; ++i) counts[static_cast<std::size_t>(e_idx[static_cast<std::size_t>(i)])] = r(i);
        counts[static_cast<std::size_t>(e_idx[0])] = p1;
        counts[static_cast<std::size_t>(m_idx)] = q;
        emit();
        if (t_idx >= 0) counts[static_cast<std::size_t>(t_idx)] = 0;
        for (int i : e_idx) counts[static_cast<std::size_t>(i)] = 0;
        counts[static_cast<std::size_t>(m_idx)] = 0;
    };

    const bool fixed = c.total_length.has_value();
    auto rec = [&](auto&& self, std::size_t k, const LatticeVec& r, std::int64_t L) -> void {
        if (k == free.size()) {
            solve_pivots(r, L);
            return;
        }
        const auto& g = gens[free[k]];
        std::int64_t cap = r(d) / g.step(d);
        if (fixed && g.length > 0) cap = std::min(cap, L / g.length);
        LatticeVec rr = r;
        for (std::int64_t n = 0; n <= cap; ++n) {
            if (n > 0) rr -= g.step;
            const std::int64_t LL = fixed ? L - n * g.length : 0;
            if (!metric.in_cone(rr)) break;
            if (fixed && !length_reachable(metric, rr, LL)) continue;
            counts[free[k]] = n;
            self(self, k + 1, rr, LL);
        }
        counts[free[k]] = 0;
    };
    rec(rec, 0, c.displacement, c.total_length.value_or(0));
    return out;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt multinomial(const std::vector<std::int64_t>& k) {
    BigInt r = 1;
    std::int64_t s = 0;
    for (auto ki : k) {
        if (ki < 0) return 0;
        s += ki;
        r *= binomial(s, ki);
    }
    return r;
}

BigInt orderings_count(const StepMultiset& s) { return multinomial(s.counts); }

}  // namespace latticeprop
