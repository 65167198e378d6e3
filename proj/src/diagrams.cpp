#include "latticeprop/diagrams.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "latticeprop/error.hpp"
#include "latticeprop/propagator.hpp"

namespace latticeprop {

namespace {

using cd = std::complex<double>;

void check_structure(const DiagramSpec& diag) {
    const int n = diag.node_count();
    for (const auto& [a, b] : diag.edges)
        if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    for (std::size_t k = 1; k < diag.externals.size(); ++k)
        if (diag.externals[k].size() != diag.externals[0].size())
            throw Error(ErrorCode::DimensionMismatch, "external points differ in dimension");
}

int diagram_dim(const DiagramSpec& diag, const TheorySpec& theory) {
    if (!diag.externals.empty() && spatial_dim(diag.externals[0]) != theory.d)
        throw Error(ErrorCode::DimensionMismatch, "external points do not match the theory dimension");
    return theory.d;
}

// Integrates f over the internal vertex positions. f receives all node positions.
DiagramValue integrate_vertices(const DiagramSpec& diag, const GridSpec& grid, int d,
                                const std::function<cd(const std::vector<SpacetimeVec>&)>& f) {
    check_structure(diag);
    if (!diag.connected()) throw Error(ErrorCode::InvalidArgument, "diagram is not connected");
    std::vector<SpacetimeVec> pos(diag.externals.begin(), diag.externals.end());
    const std::size_t nv = diag.vertices.size();
    pos.resize(diag.externals.size() + nv, SpacetimeVec::Zero(d + 1));
    DiagramValue out;
    if (nv == 0) {
        out.value = f(pos);
        out.nodes = 1;
        return out;
    }
    if (grid.lo.size() != d + 1 || grid.hi.size() != d + 1)
        throw Error(ErrorCode::DimensionMismatch, "vertex box has the wrong dimension");
    const SpacetimeVec width = grid.hi - grid.lo;
    if ((width.array() <= 0.0).any()) throw Error(ErrorCode::InvalidArgument, "vertex box must have positive extent");
    const double box_volume = width.prod();
    const std::size_t per_vertex = static_cast<std::size_t>(std::pow(grid.cells, d + 1));
    const std::size_t base = diag.externals.size();

    if (grid.mc_samples > 0) {
        std::mt19937_64 rng(grid.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double vol = std::pow(box_volume, static_cast<double>(nv));
        cd sum = 0.0;
        double sq = 0.0;
        for (std::size_t s = 0; s < grid.mc_samples; ++s) {
            for (std::size_t v = 0; v < nv; ++v)
                for (int c = 0; c <= d; ++c) pos[base + v](c) = grid.lo(c) + width(c) * u(rng);
            const cd val = vol * f(pos);
            sum += val;
            sq += std::norm(val);
        }
        const double n = static_cast<double>(grid.mc_samples);
        out.value = sum / n;
        out.std_error = std::sqrt(std::max(0.0, sq / n - std::norm(out.value)) / n);
        out.nodes = grid.mc_samples;
        return out;
    }

    if (grid.cells < 1) throw Error(ErrorCode::InvalidArgument, "cells must be positive");
    const double total_nodes = std::pow(static_cast<double>(per_vertex), static_cast<double>(nv));
    if (total_nodes > static_cast<double>(grid.node_budget))
        throw Error(ErrorCode::BudgetExceeded, "vertex grid exceeds the node budget");
    const double cell_volume = box_volume / static_cast<double>(per_vertex);
    const double weight = std::pow(cell_volume, static_cast<double>(nv));
    std::vector<std::size_t> idx(nv, 0);
    auto place = [&](std::size_t v) {
        std::size_t k = idx[v];
        for (int c = 0; c <= d; ++c) {
            const std::size_t j = k % grid.cells;
            k /= grid.cells;
            pos[base + v](c) = grid.lo(c) + width(c) * (j + 0.5) / grid.cells;
        }
    };
    for (std::size_t v = 0; v < nv; ++v) place(v);
    // compensated summation over the nodes
    cd sum = 0.0, comp = 0.0;
    while (true) {
        const cd y = weight * f(pos) - comp;
        const cd t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        ++out.nodes;
        std::size_t v = 0;
        while (v < nv && ++idx[v] == per_vertex) {
            idx[v] = 0;
            place(v);
            ++v;
        }
        if (v == nv) break;
        place(v);
    }
    out.value = sum;
    return out;
}

// Mass of the length density on [0, I] for 0 <= I <= tau.
double half_cdf(double I, double tau, double t, int d) {
    const double u = std::min(1.0, I / tau);
    const double beta_half = 0.5 * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * d) / std::tgamma(0.5 * (d + 1));
    return std::pow(tau, d - 1) * std::pow(t, 2.0 - d) * beta_half * boost::math::ibeta(0.5, 0.5 * d, u * u);
}

double cdf(double I, double tau, double t, int d) {
    if (I >= tau) return half_cdf(tau, tau, t, d);
    if (I <= -tau) return -half_cdf(tau, tau, t, d);
    return I >= 0.0 ? half_cdf(I, tau, t, d) : -half_cdf(-I, tau, t, d);
}

}  // namespace

bool DiagramSpec::connected() const {
    const int n = node_count();
    if (n == 0) return true;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (const auto& [a, b] : edges)
        if (a >= 0 && b >= 0 && a < n && b < n) parent[find(a)] = find(b);
    for (int i = 1; i < n; ++i)
        if (find(i) != find(0)) return false;
    return true;
}

cd diagram_prefactor(const DiagramSpec& diag, const TheorySpec& theory) {
    check_structure(diag);
    const int base = static_cast<int>(diag.externals.size());
    std::vector<int> incidence(diag.vertices.size(), 0);
    for (const auto& [a, b] : diag.edges) {
        if (a >= base) ++incidence[a - base];
        if (b >= base) ++incidence[b - base];
    }
    cd pre = 1.0;
    for (std::size_t v = 0; v < diag.vertices.size(); ++v) {
        const int deg = diag.vertices[v];
        if (incidence[v] != deg) throw Error(ErrorCode::DegreeMismatch, "vertex degree differs from its edge count");
        const auto it = theory.couplings.find(deg);
        if (it == theory.couplings.end()) throw Error(ErrorCode::DegreeMismatch, "no coupling for a vertex degree");
        pre *= cd(0.0, it->second);
    }
    for (std::size_t e = 0; e < diag.edges.size(); ++e) pre /= cd(0.0, 1.0);
    return pre;
}

double edge_propagator(const SpacetimeVec& a, const SpacetimeVec& b, double m) {
    const SpacetimeVec v = b - a;
    const int d = spatial_dim(v);
    const double dt = std::abs(time_of(v));
    const double s = dt * dt - v.head(d).squaredNorm();
    if (!(dt > 0.0) || !(s > 0.0)) return 0.0;
    return continuum_density_ft(std::sqrt(s), dt, m, d);
}

double BinnedDensity::total() const {
    double s = 0.0;
    for (double x : mass) s += x;
    return s;
}

cd BinnedDensity::fourier(double m, double step) const {
    cd s = 0.0;
    for (std::size_t j = 0; j < mass.size(); ++j)
        s += mass[j] * std::polar(1.0, m * step * static_cast<double>(offset + static_cast<std::int64_t>(j)));
    return s;
}

BinnedDensity edge_length_density(const SpacetimeVec& a, const SpacetimeVec& b, double step) {
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "length step must be positive");
    const SpacetimeVec v = b - a;
    const int d = spatial_dim(v);
    const double dt = std::abs(time_of(v));
    const double s = dt * dt - v.head(d).squaredNorm();
    BinnedDensity out;
    if (!(dt > 0.0) || !(s > 0.0)) return out;
    const double tau = std::sqrt(s);
    const auto K = static_cast<std::int64_t>(std::ceil(tau / step + 0.5));
    out.offset = -K;
    out.mass.resize(static_cast<std::size_t>(2 * K + 1));
    for (std::int64_t k = -K; k <= K; ++k) {
        const double lo = (k - 0.5) * step, hi = (k + 0.5) * step;
        out.mass[static_cast<std::size_t>(k + K)] = cdf(hi, tau, dt, d) - cdf(lo, tau, dt, d);
    }
    return out;
}

BinnedDensity convolve(const BinnedDensity& p, const BinnedDensity& q) {
    BinnedDensity out;
    if (p.mass.empty() || q.mass.empty()) return out;
    out.offset = p.offset + q.offset;
    out.mass.assign(p.mass.size() + q.mass.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        if (p.mass[i] == 0.0) continue;
        for (std::size_t j = 0; j < q.mass.size(); ++j) out.mass[i + j] += p.mass[i] * q.mass[j];
    }
    return out;
}

DiagramValue contribution_position_space(const DiagramSpec& diag, const TheorySpec& theory, const GridSpec& grid) {
    const int d = diagram_dim(diag, theory);
    const cd pre = diagram_prefactor(diag, theory);
    auto r = integrate_vertices(diag, grid, d, [&](const std::vector<SpacetimeVec>& pos) -> cd {
        double prod = 1.0;
        for (const auto& [a, b] : diag.edges) {
            prod *= edge_propagator(pos[a], pos[b], theory.m);
            if (prod == 0.0) break;
        }
        return prod;
    });
    r.value *= pre;
    r.std_error *= std::abs(pre);
    return r;
}

DiagramValue contribution_length_domain(const DiagramSpec& diag, const TheorySpec& theory, const GridSpec& grid) {
    const int d = diagram_dim(diag, theory);
    const cd pre = diagram_prefactor(diag, theory);
    auto r = integrate_vertices(diag, grid, d, [&](const std::vector<SpacetimeVec>& pos) -> cd {
        BinnedDensity joint{0, {1.0}};
        for (const auto& [a, b] : diag.edges) {
            joint = convolve(joint, edge_length_density(pos[a], pos[b], grid.length_step));
            if (joint.mass.empty()) return 0.0;
        }
        return joint.fourier(theory.m, grid.length_step);
    });
    r.value *= pre;
    r.std_error *= std::abs(pre);
    return r;
}

BigInt lattice_diagram_count(const DiagramSpec& diag, const AxisSet& axes, const LatticeVec& box_lo,
                             const LatticeVec& box_hi, const LengthConstraint& lengths, std::size_t budget) {
    check_structure(diag);
    if (!diag.connected()) throw Error(ErrorCode::InvalidArgument, "diagram is not connected");
    const int d = axes.d;
    if (lengths.per_edge && lengths.per_edge->size() != diag.edges.size())
        throw Error(ErrorCode::DimensionMismatch, "one length per edge is required");
    std::vector<LatticeVec> pos;
    for (const auto& e : diag.externals) {
        if (spatial_dim(e) != d) throw Error(ErrorCode::DimensionMismatch, "external point dimension");
        LatticeVec p = closest_lattice_point(e);
        if ((p.cast<double>() - e).cwiseAbs().maxCoeff() > 0.0)
            throw Error(ErrorCode::InvalidArgument, "external points must be lattice points");
        pos.push_back(p);
    }
    const std::size_t nv = diag.vertices.size();
    if (nv > 0 && (box_lo.size() != d + 1 || box_hi.size() != d + 1))
        throw Error(ErrorCode::DimensionMismatch, "vertex box dimension");
    std::size_t per_vertex = 1;
    for (int c = 0; nv > 0 && c <= d; ++c) {
        if (box_hi(c) < box_lo(c)) return 0;
        per_vertex *= static_cast<std::size_t>(box_hi(c) - box_lo(c) + 1);
    }
    if (std::pow(static_cast<double>(per_vertex), static_cast<double>(nv)) > static_cast<double>(budget))
        throw Error(ErrorCode::BudgetExceeded, "vertex assignments exceed the budget");

    std::map<std::vector<std::int64_t>, LengthSpectrum> cache;
    auto edge_spectrum = [&](const LatticeVec& a, const LatticeVec& b) -> const LengthSpectrum& {
        const LatticeVec disp = time_of(b) >= time_of(a) ? LatticeVec(b - a) : LatticeVec(a - b);
        std::vector<std::int64_t> key(disp.data(), disp.data() + disp.size());
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        LengthSpectrum s;
        if (time_of(disp) > 0 || disp.isZero()) s = length_spectrum(LatticeVec::Zero(d + 1), disp, axes);
        return cache.emplace(std::move(key), std::move(s)).first->second;
    };

    pos.resize(diag.externals.size() + nv, LatticeVec::Zero(d + 1));
    const std::size_t base = diag.externals.size();
    std::vector<std::size_t> idx(nv, 0);
    auto place = [&](std::size_t v) {
        std::size_t k = idx[v];
        for (int c = 0; c <= d; ++c) {
            const auto span = static_cast<std::size_t>(box_hi(c) - box_lo(c) + 1);
            pos[base + v](c) = box_lo(c) + static_cast<std::int64_t>(k % span);
            k /= span;
        }
    };
    for (std::size_t v = 0; v < nv; ++v) place(v);

    BigInt total = 0;
    while (true) {
        if (lengths.total) {
            std::map<std::int64_t, BigInt> joint{{0, 1}};
            for (const auto& [a, b] : diag.edges) {
                std::map<std::int64_t, BigInt> next;
                for (const auto& [I, c] : edge_spectrum(pos[a], pos[b]).entries)
                    for (const auto& [J, e] : joint)
                        if (I + J <= *lengths.total) next[I + J] += c * e;
                joint.swap(next);
                if (joint.empty()) break;
            }
            if (auto it = joint.find(*lengths.total); it != joint.end()) total += it->second;
        } else {
            BigInt prod = 1;
            for (std::size_t e = 0; e < diag.edges.size() && prod != 0; ++e) {
                const auto& s = edge_spectrum(pos[diag.edges[e].first], pos[diag.edges[e].second]);
                prod *= lengths.per_edge ? s.at((*lengths.per_edge)[e]) : s.total();
            }
            total += prod;
        }
        std::size_t v = 0;
        while (v < nv && ++idx[v] == per_vertex) {
            idx[v] = 0;
            place(v);
            ++v;
        }
        if (v >= nv) break;
        place(v);
    }
    return total;
}

double photon_density_continuum(const SpacetimeVec& x, const SpacetimeVec& y, double tol) {
    const SpacetimeVec v = y - x;
    const int d = spatial_dim(v);
    const double dt = time_of(v);
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "photon density needs a later target");
    if (std::abs(v.head(d).norm() - dt) > tol * dt) return 0.0;
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d) * std::pow(dt, d - 1);
    return 1.0 / sphere;
}

std::size_t null_points_at_time(const AxisSet& axes, std::int64_t t) {
    const PolygonalMetric metric(axes);
    const int d = axes.d;
    LatticeVec z = LatticeVec::Zero(d + 1);
    z(d) = t;
    std::vector<std::int64_t> k(d, -t);
    std::size_t count = 0;
    while (true) {
        for (int i = 0; i < d; ++i) z(i) = k[i];
        if (metric.in_cone(z) && metric.exact(z).num == 0) ++count;
        int i = 0;
        while (i < d && ++k[i] > t) {
            k[i] = -t;
            ++i;
        }
        if (i == d) break;
    }
    return count;
}

double photon_density_discrete(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes) {
    const LatticeVec v = y - x;
    if (v.size() != axes.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    if (time_of(v) <= 0) throw Error(ErrorCode::InvalidArgument, "photon density needs a later target");
    const PolygonalMetric metric(axes);
    if (!metric.in_cone(v) || metric.exact(v).num != 0) return 0.0;
    return 1.0 / static_cast<double>(null_points_at_time(axes, time_of(v)));
}

std::vector<TestDiagram> builtin_test_diagrams() {
    std::vector<TestDiagram> out;
    GridSpec none;
    none.lo = spacetime_vec({0.0, 0.0});
    none.hi = spacetime_vec({1.0, 1.0});
    out.push_back({"single-edge", {{spacetime_vec({0.0, 0.0}), spacetime_vec({0.5, 3.0})}, {}, {{0, 1}}}, none});

    GridSpec tree = none;
    tree.lo = spacetime_vec({-1.0, 0.5});
    tree.hi = spacetime_vec({1.0, 3.5});
    out.push_back({"tree-3pt",
                   {{spacetime_vec({0.0, 0.0}), spacetime_vec({-1.0, 4.0}), spacetime_vec({1.0, 4.0})},
                    {3},
                    {{0, 3}, {3, 1}, {3, 2}}},
                   tree});

    GridSpec loop = none;
    loop.lo = spacetime_vec({-1.0, 0.5});
    loop.hi = spacetime_vec({1.0, 4.5});
    loop.length_step = 0.05;
    out.push_back({"one-loop",
                   {{spacetime_vec({0.0, 0.0}), spacetime_vec({0.0, 5.0})}, {3, 3}, {{0, 2}, {2, 3}, {2, 3}, {3, 1}}},
                   loop});
    return out;
}

}  // namespace latticeprop
