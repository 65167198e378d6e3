#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "latticeprop/manifold.hpp"
#include "latticeprop/mink_core.hpp"
#include "latticeprop/pathspace.hpp"
#include "latticeprop/types.hpp"

namespace latticeprop {

// gamma^0 is the time matrix; signature (+, -, ..., -).
struct GammaBasis {
    int d = 1;
    std::vector<Eigen::MatrixXcd> matrices;

    int rep_dim() const { return static_cast<int>(matrices.front().rows()); }
    const Eigen::MatrixXcd& operator[](int mu) const { return matrices[mu]; }
};

// d = 1: sigma_x, i sigma_y. d = 2: sigma_x, i sigma_y, i sigma_z. d = 3: Dirac representation.
// The anticommutator is verified on construction.
GammaBasis gamma_basis(int d);

// max |{g^mu, g^nu} - 2 eta^{mu nu}| over all entries.
double clifford_defect(const GammaBasis& g);

struct SpinorPair {
    Eigen::VectorXcd v;
    Eigen::VectorXcd w;
};

// Components (V^0, V^1, ..., V^d, V^I) with V^mu = v^dag gamma^mu w and V^I = -v^dag w.
struct FrameVector {
    Eigen::VectorXcd components;

    int d() const { return static_cast<int>(components.size()) - 2; }
};

FrameVector frame_vector(const SpinorPair& p, const GammaBasis& g);

// Bilinear (d+2)-dimensional Minkowski form, metric diag(+, -, ..., -).
std::complex<double> frame_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// A spacetime step (x, t) as (t, x, 0) in frame coordinates.
Eigen::VectorXcd frame_embed(const SpacetimeVec& a);

// arccosh of the normalized Minkowski product of two timelike steps.
double rapidity(const SpacetimeVec& prev, const SpacetimeVec& cur);
// First-step branch: the frame may be complex, and the principal arccosh is used.
std::complex<double> rapidity(const FrameVector& frame, const SpacetimeVec& cur);

std::complex<double> total_rapidity(const LatticePath& path, const std::optional<FrameVector>& frame);

// e^{i m sum len} e^{-sum eta}; with `feynman` both signs e^{-+ sum eta} are summed.
std::complex<double> fermion_path_weight(const LatticePath& path, double m, const std::optional<FrameVector>& frame,
                                         bool feynman = false);

struct FermionResult {
    std::complex<double> value;
    std::size_t paths = 0;
    std::vector<std::complex<double>> total_rapidities;
};

// Sum over canonical paths built from the timelike axes only.
FermionResult discrete_fermion_propagator(const LatticeVec& x, const LatticeVec& y, double m,
                                          const std::optional<FrameVector>& frame, const AxisSet& axes,
                                          bool feynman = false, std::size_t node_cap = kDefaultNodeCap);
FermionResult discrete_fermion_propagator(const LatticeVec& x, const LatticeVec& y, double m, const SpinorPair& p,
                                          const AxisSet& axes, bool feynman = false,
                                          std::size_t node_cap = kDefaultNodeCap);

// (t^2 - |x|^2 - I^2)^((d-2)/2)
double boson_density(double t, const Eigen::VectorXd& x, double I, int d);

// i (d-2) (gamma^mu x_mu + I) (t^2 - |x|^2 - I^2)^((d-4)/2), x_mu = (t, -x). Zero off the support.
Eigen::MatrixXcd fermion_density_closed(double t, const Eigen::VectorXd& x, double I, const GammaBasis& g);

// i (gamma^mu d_mu - d_I) applied to boson_density by central differences.
Eigen::MatrixXcd fermion_density_fd(double t, const Eigen::VectorXd& x, double I, const GammaBasis& g, double h);

struct DiracGrid {
    std::vector<double> times{1.0, 2.0, 3.0};
    int radial_points = 5;
    int length_points = 5;
    double margin = 0.1;  // keep (t^2 - |x|^2 - I^2) >= margin t^2
    double step = 1e-4;
};

struct DiracCheck {
    double max_relative_error = 0.0;
    std::size_t points = 0;
};

DiracCheck dirac_relation_check(const GammaBasis& g, const DiracGrid& grid = {});

// i f'(tau) gamma^mu x_mu / tau - m f(tau) with f = kg_closed_form; y is the event (x, t).
Eigen::MatrixXcd dirac_closed_form(const SpacetimeVec& y, double m, const GammaBasis& g);

struct FactorizationCheck {
    double correlation = 0.0;  // |<a, b>|^2 / (|a|^2 |b|^2)
    std::complex<double> constant;
    std::size_t samples = 0;
};

// v^dag (#f) w against sqrt(V.V) cosh(eta_V) s^((d-3)/2) over random spinor pairs and events.
FactorizationCheck cosh_factorization_check(const GammaBasis& g, std::size_t pairs, std::uint64_t seed);

// Exploratory: sum over orbit lifts of 2 cosh(eta') tau' sinc(m tau'/2), with eta' the rapidity of
// the lift displacement against the source time axis.
double curved_fermion_estimate(const OrbitSet& orbit, const SpacetimeVec& source, double m);

}  // namespace latticeprop
