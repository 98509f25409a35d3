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

#include <cstdint>
#include <string>
#include <vector>

#include "entunit/quantum_state.hpp"

namespace entunit {

enum class MeasureKind { exact, upper_bound, lower_bound };

const char* to_string(MeasureKind kind);

/// An entanglement value in ebits together with how it was obtained.
struct MeasureValue {
  double value = 0.0;
  MeasureKind kind = MeasureKind::exact;
  std::string method;
  double tolerance = 0.0;
};

/// A pure-state ensemble {p_i, |ψ_i⟩} realizing a mixed state.
struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> components;

  CMatrix mixture() const;
  /// Σ p_i S(tr_B |ψ_i⟩⟨ψ_i|).
  double average_entanglement(const Cut& cut) const;
};

MeasureValue pure_state_entanglement(const PureState& psi, const Cut& cut);

/// Two-qubit concurrence via the spin-flipped overlap matrix. λ_i are the
/// singular values of τ_ij = v_iᵀ (σ_y⊗σ_y) v_j with v_i = √μ_i |e_i⟩ the
/// subnormalized eigenvectors of ρ; these equal the square roots of the
/// eigenvalues of ρ ρ̃ but avoid taking square roots of rounding noise.
double concurrence(const DensityMatrix& rho);

/// h((1 + √(1 − C²)) / 2).
double eof_from_concurrence(double c);

/// Closed-form two-qubit entanglement of formation.
MeasureValue eof_two_qubit(const DensityMatrix& rho);

struct RoofOptions {
  /// Number of ensemble members; 0 selects rank(ρ) + 2.
  int ensemble_size = 0;
  int restarts = 8;
  int max_iters = 20000;
  /// A restart stops once its best value improves by less than `tol` over a
  /// window of iterations.
  double tol = 1e-10;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct RoofResult {
  MeasureValue value;
  Decomposition decomposition;
  int rank = 0;
  int ensemble_size = 0;
  /// Final value reached by each restart, in restart order.
  std::vector<double> restart_values;
};

/// Upper bound on the convex roof of the pure-state entanglement, found by
/// searching ensembles |ψ̃_i⟩ = Σ_j T_ij √μ_j |e_j⟩ over isometries T.
/// Deterministic in `opts.seed` regardless of `opts.workers`.
RoofResult convex_roof_eof(const DensityMatrix& rho, const Cut& cut, const RoofOptions& opts = {});

struct DistillableOptions {
  /// Adds the hashing lower bound max(0, S(ρ_B) − S(ρ)).
  bool hashing = false;
  RoofOptions roof;
};

struct DistillableBounds {
  MeasureValue lower;
  MeasureValue upper;
};

DistillableBounds distillable_bounds(const PureState& psi, const Cut& cut);
/// Rank-one inputs are treated as pure. Otherwise the upper end is the best
/// available entanglement of formation value.
DistillableBounds distillable_bounds(const DensityMatrix& rho, const Cut& cut, const DistillableOptions& opts = {});

}  // namespace entunit
