// types.hpp: scalar-templated Eigen aliases shared by the dissipative JC core.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace jcdiss {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Sign index used for dressed doublets (s = ±1) and jump labels (l, m = ±1).
enum class Sign : int { Minus = -1, Plus = +1 };

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }
constexpr char glyph(Sign s) noexcept { return s == Sign::Plus ? '+' : '-'; }

// Which basis a matrix is expressed in.
enum class BasisTag { Bare, Dressed };

// Raised when a problem instance violates a physical or structural invariant.
class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace jcdiss
