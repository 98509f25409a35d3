// Copyright 2026 The entunit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace entunit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Matrix2c = Eigen::Matrix2cd;

/// Raised when a value fails one of its construction invariants. `invariant()`
/// names the check that failed so callers can report it verbatim.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

inline constexpr double kValidationTol = 1e-9;

template <typename Derived>
double hermitian_deviation(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kValidationTol) {
  if (u.rows() != u.cols()) return false;
  using Plain = typename Derived::PlainObject;
  Plain id = Plain::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol;
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = Eigen::kroneckerProduct(a, b);
  return out;
}

/// Eigenvalues of a Hermitian matrix, ascending.
template <typename Derived>
RVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.eval(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Binary entropy in bits; h(0) = h(1) = 0.
inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

namespace gates {

inline Matrix2c pauli_x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix2c pauli_y() {
  Matrix2c m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix2c pauli_z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix2c hadamard() {
  Matrix2c m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

inline Matrix2c rz(double theta) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = std::polar(1.0, -theta / 2);
  m(1, 1) = std::polar(1.0, theta / 2);
  return m;
}

inline Matrix2c ry(double theta) {
  Matrix2c m;
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m << c, -s, s, c;
  return m;
}

}  // namespace gates

}  // namespace entunit
