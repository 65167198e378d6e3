#pragma once

#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace latticeprop {

// Spacetime vectors store the d spatial components first and time last.
using LatticeVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using SpacetimeVec = Eigen::VectorXd;
using BigInt = boost::multiprecision::cpp_int;

inline int spatial_dim(const LatticeVec& v) { return static_cast<int>(v.size()) - 1; }
inline int spatial_dim(const SpacetimeVec& v) { return static_cast<int>(v.size()) - 1; }

template <typename Derived>
auto time_of(const Eigen::MatrixBase<Derived>& v) {
    return v(v.size() - 1);
}

// t^2 - |x|^2 in the scalar type of the argument.
template <typename Derived>
typename Derived::Scalar minkowski_square(const Eigen::MatrixBase<Derived>& v) {
    const auto n = v.size() - 1;
    return v(n) * v(n) - v.head(n).squaredNorm();
}

template <typename DA, typename DB>
typename DA::Scalar minkowski_dot(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    const auto n = a.size() - 1;
    return a(n) * b(n) - a.head(n).dot(b.head(n));
}

inline LatticeVec lattice_vec(std::initializer_list<std::int64_t> c) {
    LatticeVec v(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (auto x : c) v(i++) = x;
    return v;
}

inline SpacetimeVec spacetime_vec(std::initializer_list<double> c) {
    SpacetimeVec v(static_cast<Eigen::Index>(c.size()));
    Eigen::Index i = 0;
    for (auto x : c) v(i++) = x;
    return v;
}

inline SpacetimeVec to_real(const LatticeVec& v) { return v.cast<double>(); }

inline double to_double(const BigInt& b) { return b.convert_to<double>(); }

}  // namespace latticeprop
