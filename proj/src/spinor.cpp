#include "latticeprop/spinor.hpp"

#include <cmath>
#include <random>

#include "latticeprop/bessel.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/propagator.hpp"

namespace latticeprop {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd pauli(int k) {
    Eigen::Matrix2cd s;
    const cd i(0.0, 1.0);
    if (k == 1) s << 0.0, 1.0, 1.0, 0.0;
    if (k == 2) s << 0.0, -i, i, 0.0;
    if (k == 3) s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

Eigen::VectorXcd frame_event(double t, const Eigen::VectorXd& x, double I) {
    Eigen::VectorXcd X(x.size() + 2);
    X(0) = t;
    for (Eigen::Index k = 0; k < x.size(); ++k) X(k + 1) = x(k);
    X(x.size() + 1) = I;
    return X;
}

Eigen::MatrixXcd slash(const GammaBasis& g, double t, const Eigen::VectorXd& x) {
    Eigen::MatrixXcd s = g[0] * t;
    for (int k = 0; k < g.d; ++k) s -= g[k + 1] * x(k);
    return s;
}

}  // namespace

double clifford_defect(const GammaBasis& g) {
    const int n = g.rep_dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    double worst = 0.0;
    for (int mu = 0; mu <= g.d; ++mu)
        for (int nu = 0; nu <= g.d; ++nu) {
            const double eta = mu != nu ? 0.0 : (mu == 0 ? 1.0 : -1.0);
            const Eigen::MatrixXcd r = g[mu] * g[nu] + g[nu] * g[mu] - 2.0 * eta * id;
            worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
    return worst;
}

GammaBasis gamma_basis(int d) {
    const cd i(0.0, 1.0);
    GammaBasis g;
    g.d = d;
    if (d == 1 || d == 2) {
        g.matrices = {pauli(1), i * pauli(2)};
        if (d == 2) g.matrices.push_back(i * pauli(3));
    } else if (d == 3) {
        Eigen::MatrixXcd g0 = Eigen::MatrixXcd::Zero(4, 4);
        g0.topLeftCorner(2, 2).setIdentity();
        g0.bottomRightCorner(2, 2) = -Eigen::Matrix2cd::Identity();
        g.matrices = {g0};
        for (int k = 1; k <= 3; ++k) {
            Eigen::MatrixXcd gk = Eigen::MatrixXcd::Zero(4, 4);
            gk.topRightCorner(2, 2) = pauli(k);
            gk.bottomLeftCorner(2, 2) = -pauli(k);
            g.matrices.push_back(gk);
        }
    } else {
        throw Error(ErrorCode::InvalidArgument, "gamma matrices are provided for d = 1, 2, 3");
    }
    if (clifford_defect(g) != 0.0) throw Error(ErrorCode::InvalidArgument, "gamma matrices fail the Clifford relation");
    return g;
}

FrameVector frame_vector(const SpinorPair& p, const GammaBasis& g) {
    if (p.v.size() != g.rep_dim() || p.w.size() != g.rep_dim())
        throw Error(ErrorCode::DimensionMismatch, "spinor size differs from the representation");
    FrameVector f{Eigen::VectorXcd(g.d + 2)};
    for (int mu = 0; mu <= g.d; ++mu) f.components(mu) = p.v.dot(g[mu] * p.w);
    f.components(g.d + 1) = -p.v.dot(p.w);
    return f;
}

cd frame_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "frame vectors differ in size");
    cd s = a(0) * b(0);
    for (Eigen::Index k = 1; k < a.size(); ++k) s -= a(k) * b(k);
    return s;
}

Eigen::VectorXcd frame_embed(const SpacetimeVec& a) {
    const int d = spatial_dim(a);
    return frame_event(time_of(a), a.head(d), 0.0);
}

double rapidity(const SpacetimeVec& prev, const SpacetimeVec& cur) {
    const double sa = minkowski_square(prev), sb = minkowski_square(cur);
    if (!(sa > 0.0) || !(sb > 0.0) || !(time_of(prev) > 0.0) || !(time_of(cur) > 0.0))
        throw Error(ErrorCode::NullOrSpacelike, "rapidity needs future timelike vectors");
    const double c = minkowski_dot(prev, cur) / std::sqrt(sa * sb);
    return std::acosh(std::max(1.0, c));
}

cd rapidity(const FrameVector& frame, const SpacetimeVec& cur) {
    const double sb = minkowski_square(cur);
    if (!(sb > 0.0) || !(time_of(cur) > 0.0)) throw Error(ErrorCode::NullOrSpacelike, "step is not future timelike");
    if (frame.d() != spatial_dim(cur)) throw Error(ErrorCode::DimensionMismatch, "frame and step dimensions differ");
    const cd vv = frame_dot(frame.components, frame.components);
    if (std::abs(vv) <= 1e-14 * frame.components.squaredNorm())
        throw Error(ErrorCode::NullOrSpacelike, "frame vector is null");
    const cd c = frame_dot(frame.components, frame_embed(cur)) / (std::sqrt(vv) * std::sqrt(sb));
    if (c.imag() == 0.0 && c.real() >= 1.0) return std::acosh(c.real());
    return std::acosh(c);
}

cd total_rapidity(const LatticePath& path, const std::optional<FrameVector>& frame) {
    cd eta = 0.0;
    for (std::size_t i = 0; i < path.segments(); ++i) {
        const SpacetimeVec s = to_real(path.step(i));
        if (!(minkowski_square(s) > 0.0)) throw Error(ErrorCode::NullStep, "fermion paths exclude null steps");
        if (i == 0) {
            if (frame) eta += rapidity(*frame, s);
        } else {
            eta += rapidity(to_real(path.step(i - 1)), s);
        }
    }
    return eta;
}

cd fermion_path_weight(const LatticePath& path, double m, const std::optional<FrameVector>& frame, bool feynman) {
    const cd eta = total_rapidity(path, frame);
    double len = 0.0;
    for (std::size_t i = 0; i < path.segments(); ++i) len += minkowski_length(path.step(i));
    const cd phase = std::polar(1.0, m * len);
    return phase * (feynman ? std::exp(-eta) + std::exp(eta) : std::exp(-eta));
}

FermionResult discrete_fermion_propagator(const LatticeVec& x, const LatticeVec& y, double m,
                                          const std::optional<FrameVector>& frame, const AxisSet& axes,
                                          bool feynman, std::size_t node_cap) {
    AxisSet timelike = axes;
    timelike.nulls.clear();
    FermionResult r;
    for (const auto& p : enumerate_paths(x, y, timelike, std::nullopt, node_cap)) {
        r.value += fermion_path_weight(p, m, frame, feynman);
        r.total_rapidities.push_back(total_rapidity(p, frame));
        ++r.paths;
    }
    return r;
}

FermionResult discrete_fermion_propagator(const LatticeVec& x, const LatticeVec& y, double m, const SpinorPair& p,
                                          const AxisSet& axes, bool feynman, std::size_t node_cap) {
    return discrete_fermion_propagator(x, y, m, frame_vector(p, gamma_basis(axes.d)), axes, feynman, node_cap);
}

double boson_density(double t, const Eigen::VectorXd& x, double I, int d) {
    const double s = t * t - x.squaredNorm() - I * I;
    if (!(s > 0.0)) return 0.0;
    return d == 2 ? 1.0 : std::pow(s, 0.5 * (d - 2));
}

Eigen::MatrixXcd fermion_density_closed(double t, const Eigen::VectorXd& x, double I, const GammaBasis& g) {
    if (x.size() != g.d) throw Error(ErrorCode::DimensionMismatch, "event and gamma basis dimensions differ");
    const int n = g.rep_dim();
    const double s = t * t - x.squaredNorm() - I * I;
    if (!(s > 0.0)) return Eigen::MatrixXcd::Zero(n, n);
    const Eigen::MatrixXcd m = slash(g, t, x) + I * Eigen::MatrixXcd::Identity(n, n);
    return cd(0.0, g.d - 2.0) * std::pow(s, 0.5 * (g.d - 4)) * m;
}

Eigen::MatrixXcd fermion_density_fd(double t, const Eigen::VectorXd& x, double I, const GammaBasis& g, double h) {
    if (x.size() != g.d) throw Error(ErrorCode::DimensionMismatch, "event and gamma basis dimensions differ");
    const int d = g.d, n = g.rep_dim();
    auto b = [&](double tt, const Eigen::VectorXd& xx, double II) { return boson_density(tt, xx, II, d); };
    Eigen::MatrixXcd out = g[0] * ((b(t + h, x, I) - b(t - h, x, I)) / (2 * h));
    for (int k = 0; k < d; ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        out += g[k + 1] * ((b(t, xp, I) - b(t, xm, I)) / (2 * h));
    }
    out -= Eigen::MatrixXcd::Identity(n, n) * ((b(t, x, I + h) - b(t, x, I - h)) / (2 * h));
    return cd(0.0, 1.0) * out;
}

DiracCheck dirac_relation_check(const GammaBasis& g, const DiracGrid& grid) {
    const int d = g.d;
    Eigen::VectorXd dir(d);
    for (int k = 0; k < d; ++k) dir(k) = 1.0 / (k + 1.0);
    dir.normalize();
    DiracCheck out;
    for (double t : grid.times) {
        const double inner = std::sqrt(1.0 - grid.margin) * t;
        for (int a = 0; a < grid.radial_points; ++a) {
            const double r = inner * a / grid.radial_points;
            const double imax = std::sqrt(std::max(0.0, inner * inner - r * r));
            for (int b = 0; b < grid.length_points; ++b) {
                const double I =
                    grid.length_points == 1 ? 0.0 : -imax + 2.0 * imax * b / (grid.length_points - 1);
                const Eigen::VectorXd x = r * dir;
                const auto closed = fermion_density_closed(t, x, I, g);
                const auto fd = fermion_density_fd(t, x, I, g, grid.step);
                const double scale = closed.norm();
                const double err = scale > 0.0 ? (fd - closed).norm() / scale : (fd - closed).norm();
                out.max_relative_error = std::max(out.max_relative_error, err);
                ++out.points;
            }
        }
    }
    return out;
}

Eigen::MatrixXcd dirac_closed_form(const SpacetimeVec& y, double m, const GammaBasis& g) {
    const int d = spatial_dim(y);
    if (d != g.d) throw Error(ErrorCode::DimensionMismatch, "event and gamma basis dimensions differ");
    const double t = time_of(y);
    const double s = t * t - y.head(d).squaredNorm();
    if (!(t > 0.0) || s < 0.0) throw Error(ErrorCode::SpacelikeInput, "dirac_closed_form needs a future timelike event");
    const double tau = std::sqrt(s);
    if (tau < kLightconeTolerance) throw Error(ErrorCode::NearLightcone, "tau below the lightcone tolerance");
    const double nu = 0.5 * (d - 1);
    const cd f = kg_closed_form(tau, m, d);
    const cd fp = std::pow(m, nu) * m * special::hankel2_derivative(nu, m * tau);
    const int n = g.rep_dim();
    return cd(0.0, 1.0) * fp / tau * slash(g, t, y.head(d)) - m * f * Eigen::MatrixXcd::Identity(n, n);
}

FactorizationCheck cosh_factorization_check(const GammaBasis& g, std::size_t pairs, std::uint64_t seed) {
    if (g.d == 2) throw Error(ErrorCode::InvalidArgument, "the fermion density vanishes identically for d = 2");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(-1.0, 1.0), times(1.0, 3.0);
    const int n = g.rep_dim(), d = g.d;
    std::vector<cd> lhs, rhs;
    for (std::size_t k = 0; k < pairs; ++k) {
        SpinorPair p{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
        for (int j = 0; j < n; ++j) {
            p.v(j) = {normal(rng), normal(rng)};
            p.w(j) = {normal(rng), normal(rng)};
        }
        const double t = times(rng);
        Eigen::VectorXd x(d);
        double I, s;
        do {
            for (int j = 0; j < d; ++j) x(j) = t * unit(rng);
            I = t * unit(rng);
            s = t * t - x.squaredNorm() - I * I;
        } while (s < 0.1 * t * t);
        lhs.push_back(p.v.dot(fermion_density_closed(t, x, I, g) * p.w));
        const auto V = frame_vector(p, g).components;
        const cd norm_v = std::sqrt(frame_dot(V, V));
        const cd cosh_eta = frame_dot(V, frame_event(t, x, I)) / (norm_v * std::sqrt(s));
        rhs.push_back(norm_v * cosh_eta * std::pow(s, 0.5 * (d - 3)));
    }
    FactorizationCheck out;
    out.samples = pairs;
    out.constant = fit_constant(rhs, lhs);
    cd cross = 0.0;
    double na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
        cross += std::conj(rhs[k]) * lhs[k];
        na += std::norm(lhs[k]);
        nb += std::norm(rhs[k]);
    }
    out.correlation = std::norm(cross) / (na * nb);
    return out;
}

double curved_fermion_estimate(const OrbitSet& orbit, const SpacetimeVec& source, double m) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const auto& p : orbit.points) {
        const SpacetimeVec v = p - source;
        const double dt = time_of(v);
        const double s = minkowski_square(v);
        if (!(dt > 0.0) || !(s > 0.0)) continue;
        const double tau = std::sqrt(s);
        sum += 2.0 * (dt / tau) * tau * sinc(0.5 * m * tau);
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::EmptyOrbit, "no orbit point inside the cone of the source");
    return sum;
}

}  // namespace latticeprop
