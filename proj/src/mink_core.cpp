#include "latticeprop/mink_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "latticeprop/error.hpp"

namespace latticeprop {

namespace {

using i128 = __int128;

std::int64_t isqrt_exact(std::int64_t s) {
    if (s < 0) return -1;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(s))));
    while (r * r > s) --r;
    while ((r + 1) * (r + 1) <= s) ++r;
    return r * r == s ? r : -1;
}

std::int64_t gcd_all(const LatticeVec& v) {
    std::int64_t g = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i));
    return g;
}

// Fraction-free Gaussian elimination.
i128 determinant(std::vector<std::vector<i128>> m) {
    const std::size_t k = m.size();
    if (k == 0) return 1;
    i128 sign = 1, prev = 1;
    for (std::size_t p = 0; p < k; ++p) {
        if (m[p][p] == 0) {
            std::size_t s = p + 1;
            while (s < k && m[s][p] == 0) ++s;
            if (s == k) return 0;
            std::swap(m[p], m[s]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < k; ++i) {
            for (std::size_t j = p + 1; j < k; ++j) m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / prev;
            m[i][p] = 0;
        }
        prev = m[p][p];
    }
    return sign * m[k - 1][k - 1];
}

template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<std::int64_t> key_of(const LatticeVec& v, std::int64_t extra) {
    std::vector<std::int64_t> k(v.data(), v.data() + v.size());
    k.push_back(extra);
    return k;
}

bool lex_less(const LatticeVec& a, const LatticeVec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

double minkowski_length(const LatticeVec& a) {
    const std::int64_t s = minkowski_square(a);
    if (s < 0) throw Error(ErrorCode::SpacelikeInput, "t^2 < |x|^2");
    const std::int64_t r = isqrt_exact(s);
    return r >= 0 ? static_cast<double>(r) : std::sqrt(static_cast<double>(s));
}

double minkowski_length(const SpacetimeVec& a) {
    const double s = minkowski_square(a);
    if (s < 0.0) throw Error(ErrorCode::SpacelikeInput, "t^2 < |x|^2");
    return std::sqrt(s);
}

std::vector<AxisVector> AxisSet::all() const {
    std::vector<AxisVector> out = axes;
    out.insert(out.end(), nulls.begin(), nulls.end());
    return out;
}

AxisSet generate_axes(int d, int n) {
    if (d < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "generate_axes needs d >= 1, n >= 1");
    AxisSet set;
    set.d = d;
    set.n = n;
    LatticeVec v(d + 1);
    for (std::int64_t t = 1; t <= n; ++t) {
        v.setConstant(-t);
        v(d) = t;
        while (true) {
            const std::int64_t s = t * t - v.head(d).squaredNorm();
            if (s >= 0 && gcd_all(v) == 1) {
                const std::int64_t len = isqrt_exact(s);
                if (len == 0) {
                    set.nulls.push_back({v, 0});
                } else if (len > 0) {
                    set.axes.push_back({v, len});
                }
            }
            int i = d - 1;
            while (i >= 0 && v(i) == t) v(i--) = -t;
            if (i < 0) break;
            ++v(i);
        }
    }
    return set;
}

HalfspaceNormal neighborhood(const AxisVector& v, const AxisSet& axes) {
    const int d = axes.d;
    std::vector<AxisVector> cand;
    for (const auto& a : axes.all())
        if (!(a.step == v.step)) cand.push_back(a);
    std::stable_sort(cand.begin(), cand.end(), [&](const AxisVector& a, const AxisVector& b) {
        const auto da = (a.step - v.step).squaredNorm();
        const auto db = (b.step - v.step).squaredNorm();
        if (da != db) return da < db;
        return lex_less(a.step, b.step);
    });

    HalfspaceNormal h;
    h.v = v;
    Eigen::MatrixXd rows(0, d + 1);
    for (const auto& w : cand) {
        if (static_cast<int>(h.neighborhood.size()) == d) break;
        Eigen::MatrixXd trial(rows.rows() + 1, d + 1);
        trial.topRows(rows.rows()) = rows;
        trial.row(rows.rows()) = (w.step - v.step).cast<double>().transpose();
        if (Eigen::FullPivLU<Eigen::MatrixXd>(trial).rank() == trial.rows()) {
            rows = trial;
            h.neighborhood.push_back(w);
        }
    }
    if (static_cast<int>(h.neighborhood.size()) < d)
        throw Error(ErrorCode::DegenerateNeighborhood, "fewer than d independent neighbours");
    Eigen::MatrixXd ker = Eigen::FullPivLU<Eigen::MatrixXd>(rows).kernel();
    h.perp = ker.col(0).normalized();
    if (h.perp.dot(v.step.cast<double>()) < 0.0) h.perp = -h.perp;
    return h;
}

double halfspace_value(const HalfspaceNormal& h, const SpacetimeVec& x) {
    const double pv = h.perp.dot(h.v.step.cast<double>());
    if (std::abs(pv) < 1e-15) throw Error(ErrorCode::DegenerateNeighborhood, "perp orthogonal to v");
    return static_cast<double>(h.v.length) * h.perp.dot(x) / pv;
}

PolygonalMetric::PolygonalMetric(const AxisSet& axes) : axes_(axes) {
    const int d = axes.d;
    const auto gens = axes.all();
    const std::size_t g = gens.size();

    std::set<std::vector<std::int64_t>> seen;
    for_each_combination(g, static_cast<std::size_t>(d + 1), [&](const std::vector<std::size_t>& idx) {
        bool any_len = false;
        for (auto j : idx) any_len |= gens[j].length > 0;
        if (!any_len) return;
        std::vector<std::vector<i128>> m(d + 1, std::vector<i128>(d + 1));
        for (int r = 0; r <= d; ++r)
            for (int c = 0; c <= d; ++c) m[r][c] = gens[idx[r]].step(c);
        i128 det = determinant(m);
        if (det == 0) return;
        LatticeVec normal(d + 1);
        for (int c = 0; c <= d; ++c) {
            auto mc = m;
            for (int r = 0; r <= d; ++r) mc[r][c] = gens[idx[r]].length;
            normal(c) = static_cast<std::int64_t>(determinant(mc));
        }
        auto den = static_cast<std::int64_t>(det);
        if (den < 0) {
            den = -den;
            normal = -normal;
        }
        for (const auto& a : gens)
            if (static_cast<i128>(normal.dot(a.step)) < static_cast<i128>(a.length) * den) return;
        const std::int64_t gg = std::gcd(gcd_all(normal), den);
        normal /= gg;
        den /= gg;
        if (seen.insert(key_of(normal, den)).second) {
            facet_normals_.push_back(normal);
            facet_den_.push_back(den);
        }
    });

    std::set<std::vector<std::int64_t>> seen_cone;
    for_each_combination(g, static_cast<std::size_t>(d), [&](const std::vector<std::size_t>& idx) {
        LatticeVec r(d + 1);
        for (int c = 0; c <= d; ++c) {
            std::vector<std::vector<i128>> minor(d, std::vector<i128>(d));
            for (int row = 0; row < d; ++row) {
                int cc = 0;
                for (int col = 0; col <= d; ++col)
                    if (col != c) minor[row][cc++] = gens[idx[row]].step(col);
            }
            r(c) = static_cast<std::int64_t>((c % 2 == 0 ? 1 : -1) * determinant(minor));
        }
        if (r.isZero()) return;
        bool pos = true, neg = true;
        for (const auto& a : gens) {
            const auto s = r.dot(a.step);
            pos &= s >= 0;
            neg &= s <= 0;
        }
        if (!pos && !neg) return;
        if (!pos) r = -r;
        r /= gcd_all(r);
        if (seen_cone.insert(key_of(r, 0)).second) cone_normals_.push_back(r);
    });
}

bool PolygonalMetric::in_cone(const LatticeVec& x) const {
    if (x.size() != axes_.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    for (const auto& r : cone_normals_)
        if (r.dot(x) < 0) return false;
    return true;
}

bool PolygonalMetric::in_cone(const SpacetimeVec& x, double tol) const {
    if (x.size() != axes_.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    for (const auto& r : cone_normals_) {
        const Eigen::VectorXd rr = r.cast<double>();
        if (rr.dot(x) < -tol * rr.norm() * (x.norm() + 1.0)) return false;
    }
    return true;
}

Rational64 PolygonalMetric::exact(const LatticeVec& x) const {
    if (!in_cone(x)) throw Error(ErrorCode::OutsideCone, "target outside the cone of the axis set");
    Rational64 best{0, 0};
    for (std::size_t f = 0; f < facet_den_.size(); ++f) {
        const std::int64_t num = facet_normals_[f].dot(x);
        const std::int64_t den = facet_den_[f];
        if (best.den == 0 || static_cast<i128>(num) * best.den < static_cast<i128>(best.num) * den) best = {num, den};
    }
    if (best.den == 0) throw Error(ErrorCode::OutsideCone, "no facet with positive offset");
    const std::int64_t g = std::gcd(best.num, best.den);
    if (g > 1) {
        best.num /= g;
        best.den /= g;
    }
    return best;
}

double PolygonalMetric::operator()(const SpacetimeVec& x) const {
    if (!in_cone(x)) throw Error(ErrorCode::OutsideCone, "target outside the cone of the axis set");
    double best = INFINITY;
    for (std::size_t f = 0; f < facet_den_.size(); ++f)
        best = std::min(best, facet_normals_[f].cast<double>().dot(x) / static_cast<double>(facet_den_[f]));
    return std::max(best, 0.0);
}

Eigen::MatrixXd PolygonalMetric::ball_vertices(double radius) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(axes_.axes.size()), axes_.d + 1);
    for (std::size_t i = 0; i < axes_.axes.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) =
            radius * axes_.axes[i].step.cast<double>().transpose() / static_cast<double>(axes_.axes[i].length);
    return out;
}

DensityResult density_check(int d, int n) {
    if (d < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "density_check needs d >= 1, n >= 1");
    const std::int64_t n2 = static_cast<std::int64_t>(n) * n;
    std::vector<std::int32_t> root(static_cast<std::size_t>(n2 + 1), -1);
    for (std::int64_t r = 0; r <= n; ++r) root[static_cast<std::size_t>(r * r)] = static_cast<std::int32_t>(r);

    DensityResult res;
    if (d == 2) {
        for (std::int64_t a = 0; 3 * a * a <= n2; ++a)
            for (std::int64_t b = a; a * a + 2 * b * b <= n2; ++b) {
                const std::int64_t ab = a * a + b * b;
                const std::int64_t gab = std::gcd(a, b);
                for (std::int64_t c = b; ab + c * c <= n2; ++c) {
                    const std::int64_t s = ab + c * c;
                    if (s == 0 || root[static_cast<std::size_t>(s)] < 0) continue;
                    if (std::gcd(gab, c) == 1) ++res.count;
                }
            }
        res.predicted = static_cast<double>(n2) / (32.0 * kCatalan);
        return res;
    }

    const int parts = d + 1;
    auto rec = [&](auto&& self, int k, std::int64_t lo, std::int64_t sum, std::int64_t g) -> void {
        if (k == parts) {
            if (sum > 0 && root[static_cast<std::size_t>(sum)] >= 0 && g == 1) ++res.count;
            return;
        }
        for (std::int64_t a = lo; sum + (parts - k) * a * a <= n2; ++a) self(self, k + 1, a, sum + a * a, std::gcd(g, a));
    };
    rec(rec, 0, 0, 0, 0);
    return res;
}

double extreme_discrepancy(std::vector<double> u) {
    if (u.empty()) return 0.0;
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double dplus = 0.0, dminus = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dplus = std::max(dplus, static_cast<double>(i + 1) / n - u[i]);
        dminus = std::max(dminus, u[i] - static_cast<double>(i) / n);
    }
    return dplus + dminus;
}

EquidistributionStats equidistribution_stats(const AxisSet& axes, int bins) {
    if (bins < 1 || axes.axes.size() < static_cast<std::size_t>(bins))
        throw Error(ErrorCode::InvalidArgument, "need at least `bins` axes");
    const int d = axes.d;
    std::vector<double> primary, secondary;
    for (const auto& a : axes.axes) {
        const double t = static_cast<double>(a.step(d));
        const double len = static_cast<double>(a.length);
        if (d == 1) {
            primary.push_back(std::atan2(len, static_cast<double>(a.step(0))) / std::numbers::pi);
        } else {
            double az = std::atan2(static_cast<double>(a.step(1)), static_cast<double>(a.step(0))) / (2.0 * std::numbers::pi);
            if (az < 0.0) az += 1.0;
            primary.push_back(az);
            secondary.push_back(len / t);
        }
    }
    EquidistributionStats st;
    st.count = primary.size();
    st.histogram.assign(static_cast<std::size_t>(bins), 0);
    for (double u : primary) ++st.histogram[std::min<std::size_t>(static_cast<std::size_t>(u * bins), bins - 1)];
    st.discrepancy = extreme_discrepancy(primary);
    if (!secondary.empty()) st.discrepancy = std::max(st.discrepancy, extreme_discrepancy(secondary));
    return st;
}

}  // namespace latticeprop
