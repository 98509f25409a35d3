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

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "entunit/linalg.hpp"

namespace entunit {

/// Subsystem dimensions. Subsystem 0 is the most significant digit of the
/// flattened basis index.
using Dims = std::vector<int>;

std::size_t total_dim(const Dims& dims);

/// Tag for constructing states that are valid by construction (e.g. the
/// output of a partial trace) without re-running the spectral checks.
struct Unchecked {};

class DensityMatrix;

class PureState {
 public:
  /// Throws ValidationError unless dims are well formed and the vector is
  /// normalized within 1e-9.
  PureState(CVector amplitudes, Dims dims);
  PureState(Unchecked, CVector amplitudes, Dims dims)
      : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {}

  static PureState basis(Dims dims, std::size_t index);

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }
  int num_subsystems() const noexcept { return static_cast<int>(dims_.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

  DensityMatrix projector() const;

 private:
  CVector amplitudes_;
  Dims dims_;
};

class DensityMatrix {
 public:
  /// Throws ValidationError unless the matrix is Hermitian, PSD and unit
  /// trace within 1e-9.
  DensityMatrix(CMatrix matrix, Dims dims);
  DensityMatrix(Unchecked, CMatrix matrix, Dims dims)
      : matrix_(std::move(matrix)), dims_(std::move(dims)) {}

  static DensityMatrix maximally_mixed(Dims dims);

  const CMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  int num_subsystems() const noexcept { return static_cast<int>(dims_.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

  /// Eigenvalues, ascending.
  RVector spectrum() const { return hermitian_eigenvalues(matrix_); }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  CMatrix matrix_;
  Dims dims_;
};

using State = std::variant<PureState, DensityMatrix>;

enum class Side { A, B };

/// A bipartition of subsystem indices. Both sides are stored sorted.
class Cut {
 public:
  Cut(std::vector<int> side_a, std::vector<int> side_b, int num_subsystems);

  /// Side B is the complement of `side_a`.
  static Cut from_side_a(std::vector<int> side_a, int num_subsystems);

  const std::vector<int>& side_a() const noexcept { return side_a_; }
  const std::vector<int>& side_b() const noexcept { return side_b_; }
  const std::vector<int>& side(Side s) const noexcept { return s == Side::A ? side_a_ : side_b_; }
  int num_subsystems() const noexcept { return n_; }

 private:
  std::vector<int> side_a_;
  std::vector<int> side_b_;
  int n_;
};

struct SchmidtDecomposition {
  /// Descending, strictly positive (terms below 1e-12 are dropped).
  RVector coefficients;
  std::vector<CVector> left;
  std::vector<CVector> right;
  Dims dims_a;
  Dims dims_b;

  std::size_t rank() const noexcept { return static_cast<std::size_t>(coefficients.size()); }
  /// Σ λ_k |u_k⟩⊗|v_k⟩ in the (A, B) ordering.
  CVector reconstruct() const;
};

PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);
/// Throws std::invalid_argument("kind mismatch") when the kinds differ.
State tensor_product(const State& a, const State& b);

DensityMatrix to_density(const State& s);

/// Flattened state index of each (a, b) pair across `cut`, stored at
/// a * dim(B) + b.
std::vector<std::size_t> bipartite_index_table(const Dims& dims, const Cut& cut);
Dims side_dims(const Dims& dims, const std::vector<int>& side);

/// The amplitudes of `psi` arranged as a dim(A) x dim(B) matrix.
CMatrix bipartite_matrix(const PureState& psi, const Cut& cut);

DensityMatrix partial_trace(const DensityMatrix& rho, const Cut& cut, Side keep);
DensityMatrix reduced_state(const PureState& psi, const Cut& cut, Side keep);

SchmidtDecomposition schmidt_decompose(const PureState& psi, const Cut& cut);

inline constexpr double kSchmidtRankThreshold = 1e-7;

/// Number of Schmidt coefficients >= threshold.
int schmidt_rank(const PureState& psi, const Cut& cut, double threshold = kSchmidtRankThreshold);

/// Von Neumann entropy in bits of a spectrum; eigenvalues below 1e-12 are
/// treated as exactly zero.
double spectral_entropy(const RVector& eigenvalues);
double von_neumann_entropy(const DensityMatrix& rho);

/// Squared (transition probability) fidelity (tr √(√ρ σ √ρ))².
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// |⟨ψ|φ⟩|².
double fidelity(const PureState& psi, const PureState& phi);

PureState apply_local_unitary(const PureState& psi, int subsystem, const CMatrix& u);

// Named states.

PureState bell_state();
PureState ghz_state(int n);
PureState w_state(int n);
DensityMatrix werner_state(double p);
PureState random_pure_state(const Dims& dims, std::uint64_t seed);
DensityMatrix random_mixed_state(const Dims& dims, int rank, std::uint64_t seed);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix random_unitary(int d, std::mt19937_64& rng);
CMatrix random_unitary(int d, std::uint64_t seed);
CVector random_complex_gaussian(std::size_t n, std::mt19937_64& rng);

/// Parses "bell", "ghz:<n>", "w:<n>", "werner:<p>", "random_pure:<dims>:<seed>",
/// "random_mixed:<dims>:<rank>:<seed>"; dims are comma separated, e.g. "2,2".
State make_named_state(std::string_view spec);

/// Independent sub-seed for the `index`-th stream derived from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace entunit
