#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace msqp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Bohr magneton over Planck constant, GHz per tesla (CODATA).
inline constexpr double kMuBGHzPerTesla = 13.996245;

/// Tesla per gauss.
inline constexpr double kTeslaPerGauss = 1e-4;

/// Invalid input or violated precondition. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration, calibration or invariant failure. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest |A_ij - conj(A_ji)|.
inline double hermiticity_deviation(const Matrix& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// exp(-i 2π H t) for Hermitian H given in GHz and t in ns.
inline Matrix unitary_exp(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& v = es.eigenvectors();
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::exp(-kI * kTwoPi * es.eigenvalues()(k) * t);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

/// Wraps an angle into (-π, π].
inline double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  return a;
}

}  // namespace msqp
