#include "latticeprop/propagator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "latticeprop/bessel.hpp"
#include "latticeprop/error.hpp"
#include "latticeprop/pathspace.hpp"

namespace latticeprop {

BigInt LengthSpectrum::total() const {
    BigInt s = 0;
    for (const auto& [I, c] : entries) s += c;
    return s;
}

BigInt LengthSpectrum::at(std::int64_t I) const {
    const auto it = entries.find(I);
    return it == entries.end() ? BigInt(0) : it->second;
}

LengthSpectrum length_spectrum(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes) {
    LengthSpectrum s;
    const LatticeVec disp = y - x;
    if (disp.size() != axes.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    for (std::int64_t I = 0; I <= time_of(disp); ++I) {
        BigInt sum = 0;
        for (const auto& sol : step_solutions({disp, I}, axes)) sum += orderings_count(sol);
        if (sum != 0) s.entries[I] = sum;
    }
    return s;
}

LengthSpectrum signed_length_spectrum(const LatticeVec& x, const LatticeVec& y, const AxisSet& axes) {
    LengthSpectrum s;
    const LatticeVec disp = y - x;
    if (disp.size() != axes.d + 1) throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    for (const auto& sol : step_solutions({disp, std::nullopt}, axes)) {
        std::map<std::int64_t, BigInt> dist{{0, 1}};
        for (std::size_t i = 0; i < sol.axes.size(); ++i) {
            const std::int64_t len = sol.axes[i].length, k = sol.counts[i];
            if (len == 0) continue;
            std::map<std::int64_t, BigInt> next;
            for (std::int64_t j = 0; j <= k; ++j) {
                const BigInt w = binomial(k, j);
                for (const auto& [v, c] : dist) next[v + len * (2 * j - k)] += w * c;
            }
            dist.swap(next);
        }
        const BigInt orders = orderings_count(sol);
        for (const auto& [v, c] : dist) s.entries[v] += orders * c;
    }
    return s;
}

std::complex<double> fourier(const LengthSpectrum& s, double m) {
    std::complex<double> k = 0.0;
    for (const auto& [I, c] : s.entries) k += to_double(c) * std::polar(1.0, m * static_cast<double>(I));
    return k;
}

std::complex<double> discrete_propagator(const PropagatorRequest& req, const AxisSet& axes) {
    if (req.x.size() != axes.d + 1 || req.y.size() != axes.d + 1)
        throw Error(ErrorCode::DimensionMismatch, "vector size != d + 1");
    const auto spec = req.variant == Variant::Feynman ? signed_length_spectrum(req.x, req.y, axes)
                                                      : length_spectrum(req.x, req.y, axes);
    return fourier(spec, req.m);
}

std::complex<double> discrete_propagator(const PropagatorRequest& req) {
    return discrete_propagator(req, generate_axes(req.d, req.n));
}

double continuum_density(const Eigen::VectorXd& x, double I, double t, int d) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "continuum_density needs t > 0");
    const double u = 1.0 - (x.squaredNorm() + I * I) / (t * t);
    if (u < 0.0) return 0.0;
    if (d == 2) return 1.0;
    if (u == 0.0) return d > 2 ? 0.0 : INFINITY;
    return std::pow(u, 0.5 * (d - 2));
}

double continuum_density_ft(double tau, double t, double m, int d) {
    if (!(t > 0.0) || !(tau > 0.0)) return 0.0;
    const double nu = 0.5 * (d - 1);
    // (2 tau / m)^nu J_nu(m tau) = 2^nu tau^(2 nu) J_nu(m tau) / (m tau)^nu
    const double bess = std::pow(2.0, nu) * std::pow(tau, 2.0 * nu) * special::bessel_j_scaled(nu, std::abs(m) * tau);
    return std::pow(t, 2.0 - d) * std::sqrt(std::numbers::pi) * std::tgamma(0.5 * d) * bess;
}

double continuum_density_ft(const SpacetimeVec& y, double m) {
    const int d = spatial_dim(y);
    const double t = time_of(y);
    const double tau2 = t * t - y.head(d).squaredNorm();
    if (!(t > 0.0) || tau2 <= 0.0) return 0.0;
    return continuum_density_ft(std::sqrt(tau2), t, m, d);
}

std::complex<double> continuum_density_ft_quadrature(const SpacetimeVec& y, double m) {
    const int d = spatial_dim(y);
    const double t = time_of(y);
    const double tau2 = t * t - y.head(d).squaredNorm();
    if (!(t > 0.0) || tau2 <= 0.0) return 0.0;
    const double tau = std::sqrt(tau2);
    const double expo = 0.5 * (d - 2);
    // xc is the signed distance to the nearer endpoint, so tau^2 - I^2 keeps full
    // precision next to the singularity.
    auto weight = [&](double xc) {
        const double dist = std::abs(xc);
        return std::pow(dist * (2.0 * tau - dist) / (t * t), expo);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double re = ts.integrate([&](double I, double xc) { return weight(xc) * std::cos(m * I); }, -tau, tau);
    const double im = ts.integrate([&](double I, double xc) { return weight(xc) * std::sin(m * I); }, -tau, tau);
    return {re, im};
}

std::complex<double> kg_closed_form(double tau, double m, int d) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "kg_closed_form needs m > 0");
    if (!(tau >= kLightconeTolerance)) throw Error(ErrorCode::NearLightcone, "tau below the lightcone tolerance");
    const double nu = 0.5 * (d - 1);
    return std::pow(m, nu) * special::hankel2(nu, m * tau);
}

std::complex<double> fit_constant(const std::vector<std::complex<double>>& model,
                                  const std::vector<std::complex<double>>& data) {
    if (model.size() != data.size() || model.empty()) throw Error(ErrorCode::DimensionMismatch, "fit sizes differ");
    std::complex<double> num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        num += std::conj(model[i]) * data[i];
        den += std::norm(model[i]);
    }
    if (den == 0.0) throw Error(ErrorCode::InvalidArgument, "model is identically zero");
    return num / den;
}

ShapeFit shape_fit(const std::vector<std::complex<double>>& model, const std::vector<std::complex<double>>& data) {
    ShapeFit f;
    f.constant = fit_constant(model, data);
    double res = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        res += std::norm(f.constant * model[i] - data[i]);
        norm += std::norm(data[i]);
    }
    f.relative_error = norm > 0.0 ? std::sqrt(res / norm) : std::sqrt(res);
    return f;
}

LatticeVec closest_lattice_point(const SpacetimeVec& v, double s) {
    LatticeVec out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = std::llround(s * v(i));
    return out;
}

ContinuumPropagatorResult continuum_propagator_small(const SpacetimeVec& x, const SpacetimeVec& y, double m, int n,
                                                     std::size_t samples, int grid_points, std::uint64_t seed) {
    if (x.size() != 2 || y.size() != 2) throw Error(ErrorCode::DimensionMismatch, "continuum_propagator_small is d = 1");
    if (n < 1 || grid_points < 1) throw Error(ErrorCode::InvalidArgument, "need n >= 1 and grid_points >= 1");
    const auto axes = generate_axes(1, n);
    const PolygonalMetric metric(axes);
    const SpacetimeVec disp = y - x;
    ContinuumPropagatorResult res;
    res.value = 0.0;
    if (!(disp(1) > 0.0) || !metric.in_cone(disp)) return res;
    const double Imax = metric(disp);
    if (!(Imax > 0.0)) return res;

    std::vector<AxisVector> free;
    for (const auto& a : axes.all()) {
        const bool pivot = a.step == lattice_vec({0, 1}) || a.step == lattice_vec({1, 1}) || a.step == lattice_vec({-1, 1});
        if (!pivot) free.push_back(a);
    }
    if (!free.empty() && samples == 0) throw Error(ErrorCode::BudgetExceeded, "sample budget is zero");
    if (free.empty()) samples = 1;

    // (x, t, I) from the pivot amounts (time, +null, -null) has determinant 2.
    constexpr double kPivotJacobian = 0.5;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> box(free.size());
    double box_vol = 1.0;
    for (std::size_t j = 0; j < free.size(); ++j) {
        box[j] = disp(1) / static_cast<double>(free[j].step(1));
        box_vol *= box[j];
    }

    const double h = Imax / grid_points;
    std::vector<double> amounts(free.size() + 3);
    for (int k = 0; k < grid_points; ++k) {
        const double I = (k + 0.5) * h;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            double rx = disp(0), rt = disp(1), L = I;
            for (std::size_t j = 0; j < free.size(); ++j) {
                const double lam = box[j] * unif(rng);
                amounts[j + 3] = lam;
                rx -= lam * static_cast<double>(free[j].step(0));
                rt -= lam * static_cast<double>(free[j].step(1));
                L -= lam * static_cast<double>(free[j].length);
            }
            const double S = rt - L;
            const double p = 0.5 * (S + rx), q = 0.5 * (S - rx);
            double v = 0.0;
            if (L > 0.0 && p > 0.0 && q > 0.0) {
                amounts[0] = L;
                amounts[1] = p;
                amounts[2] = q;
                std::vector<double> args(amounts.begin(), amounts.end());
                TruncationPolicy pol;
                pol.max_word_length = 400;
                v = continuous_multinomial(args, pol);
            }
            sum += v;
            sum2 += v * v;
        }
        const double N = static_cast<double>(samples);
        const double mean = sum / N;
        const double var = free.empty() ? 0.0 : std::max(0.0, sum2 / N - mean * mean) / N;
        res.I.push_back(I);
        res.density.push_back(kPivotJacobian * box_vol * mean);
        res.density_se.push_back(kPivotJacobian * box_vol * std::sqrt(var));
    }
    double var = 0.0;
    for (std::size_t k = 0; k < res.I.size(); ++k) {
        res.value += res.density[k] * h * std::polar(1.0, m * res.I[k]);
        var += res.density_se[k] * res.density_se[k] * h * h;
    }
    res.std_error = std::sqrt(var);
    return res;
}

}  // namespace latticeprop
