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

// Exact state-vector simulation of two-party LOCC protocols on qubits.
//
// Every qubit has an owner. Local gates and measurements may only touch the
// acting party's qubits; the only operations that cross the Alice/Bob
// boundary are declared resources (a shared Bell pair, or sending a qubit).
// Violations throw LoccViolation at the offending step.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "entunit/quantum_state.hpp"

namespace entunit {

enum class Party { alice, bob };
enum class Basis { z, x };

const char* to_string(Party p);

class LoccViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct LocalUnitaryStep {
  Party party;
  std::vector<int> qubits;
  std::string gate;
};

struct MeasurementStep {
  Party party;
  int qubit;
  Basis basis;
  int outcome;
  /// Probability of this outcome conditioned on all earlier outcomes.
  double probability;
};

struct ClassicalMessageStep {
  Party from;
  Party to;
  std::vector<int> bits;
};

enum class ResourceKind { ebit, qubit_transmission };

struct ResourceStep {
  ResourceKind kind;
  std::vector<int> qubits;
  Party from;
  Party to;
};

using ProtocolStep = std::variant<LocalUnitaryStep, MeasurementStep, ClassicalMessageStep, ResourceStep>;

struct ResourceTotals {
  int ebits_consumed = 0;
  int cbits_alice_to_bob = 0;
  int cbits_bob_to_alice = 0;
  int qubits_transmitted = 0;

  bool operator==(const ResourceTotals&) const = default;
  ResourceTotals& operator+=(const ResourceTotals& o);
};

struct ProtocolTranscript {
  std::string protocol;
  std::vector<Party> initial_owners;
  std::vector<ProtocolStep> steps;
  ResourceTotals totals;
  std::vector<int> input_qubits;
  std::vector<int> outcomes;
  /// Product of the conditional outcome probabilities.
  double branch_probability = 1.0;
  std::vector<int> output_qubits;
  /// Normalized joint state of all qubits after the last step.
  CVector joint_state;
  /// State of the output register; absent on a zero-probability branch.
  std::optional<PureState> output_state;
  /// Unnormalized output operator tr_rest(|ψ_b⟩⟨ψ_b|); sums over branches to
  /// the channel output.
  CMatrix output_operator;
};

/// Supplies measurement outcomes: seeded sampling, or a forced sequence for
/// exhaustive branch expansion.
class OutcomeSource {
 public:
  static OutcomeSource sampled(std::uint64_t seed);
  static OutcomeSource forced(std::vector<int> outcomes);

  int next(double probability_of_zero);

 private:
  OutcomeSource() = default;
  std::optional<std::mt19937_64> rng_;
  std::vector<int> forced_;
  std::size_t cursor_ = 0;
};

class LoccSimulator {
 public:
  /// All qubits start in |0⟩. Qubit 0 is the most significant bit.
  LoccSimulator(std::string protocol, std::vector<Party> owners, OutcomeSource outcomes);

  int num_qubits() const noexcept { return static_cast<int>(owners_.size()); }
  Party owner(int q) const { return owners_.at(static_cast<std::size_t>(q)); }
  const CVector& state() const noexcept { return state_; }

  /// Places the protocol input on `qubits` before the first step. The input
  /// may span both parties; it is setup, not an operation of the protocol.
  void load_input(const std::vector<int>& qubits, const CVector& amplitudes);

  /// Local preparation of a normalized state on fresh qubits all owned by
  /// `party`.
  void prepare(Party party, const std::vector<int>& qubits, const CVector& amplitudes, std::string label);

  /// Declared resource: a Bell pair (|00⟩ + |11⟩)/√2 on a fresh Alice qubit
  /// and a fresh Bob qubit.
  void share_ebit(int alice_qubit, int bob_qubit);
  /// Declared resource: hands a qubit to the other party.
  void transmit(int qubit, Party from, Party to);

  /// Applies a unitary to `qubits` (first listed is most significant).
  void apply(Party party, const std::vector<int>& qubits, const CMatrix& u, std::string gate);
  void h(Party p, int q) { apply(p, {q}, gates::hadamard(), "h"); }
  void x(Party p, int q) { apply(p, {q}, gates::pauli_x(), "x"); }
  void z(Party p, int q) { apply(p, {q}, gates::pauli_z(), "z"); }
  void cnot(Party p, int control, int target);
  void cz(Party p, int a, int b);

  /// Projective measurement; an X-basis measurement leaves the qubit in |±⟩.
  int measure(Party party, int qubit, Basis basis);
  void send(Party from, Party to, std::vector<int> bits);

  ProtocolTranscript finish(std::vector<int> output_qubits) &&;

 private:
  void require_owned(Party party, const std::vector<int>& qubits, const char* what) const;
  void require_fresh(int q) const;
  void embed(const std::vector<int>& qubits, const CVector& amplitudes);

  std::vector<Party> owners_;
  CVector state_;  // unnormalized; squared norm is the branch probability
  OutcomeSource outcomes_;
  ProtocolTranscript transcript_;
};

/// A protocol together with the static shape needed to expand its branches
/// and reconstruct its channel.
struct ProtocolSpec {
  std::string name;
  int input_qubits;
  int measurements;
  std::function<ProtocolTranscript(const PureState& input, OutcomeSource outcomes)> run;
};

ProtocolSpec teleport_protocol();
ProtocolSpec nonlocal_cz_protocol();

/// Runs every outcome sequence; probabilities of the returned branches sum to 1.
std::vector<ProtocolTranscript> expand_branches(const ProtocolSpec& spec, const PureState& input);

/// Teleports a one-qubit state through one shared Bell pair (seeded branch).
ProtocolTranscript teleport(const PureState& input, std::uint64_t seed);
/// Controlled-phase between Alice's control (subsystem 0 of the input) and
/// Bob's target (subsystem 1) using one Bell pair and one bit each way.
ProtocolTranscript nonlocal_cz(const PureState& joint_input, std::uint64_t seed);

/// Replays ownership through the transcript: every local step touches only
/// the acting party's qubits, and only resource steps cross the boundary.
bool respects_locc(const ProtocolTranscript& t);
/// Resource totals recomputed from the individual steps.
ResourceTotals recount_resources(const ProtocolTranscript& t);

// ---------------------------------------------------------------------------
// Channels

/// Linear map on a d_in-dimensional input register, stored through its
/// action on the operator basis |i⟩⟨j| and as the Choi matrix
/// J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|).
struct ChannelMatrix {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<CMatrix> basis_action;  // index i * in_dim + j
  CMatrix choi;

  static ChannelMatrix from_basis_action(int in_dim, int out_dim, std::vector<CMatrix> action);
  static ChannelMatrix unitary(const CMatrix& u);

  CMatrix apply(const CMatrix& rho) const;
  double min_choi_eigenvalue() const;
  /// max |tr_out J − I|.
  double trace_preservation_error() const;
};

/// Reconstructs the channel of `spec` from full-branch runs on the product
/// inputs {|0⟩, |1⟩, |+⟩, |+i⟩}^⊗n by linear inversion.
ChannelMatrix induced_channel(const ProtocolSpec& spec);

/// `second` after `first`.
ChannelMatrix compose(const ChannelMatrix& second, const ChannelMatrix& first);

/// ⟨⟨U| J |U⟩⟩ / d², the overlap with the ideal unitary channel.
double channel_process_fidelity(const ChannelMatrix& channel, const CMatrix& ideal);

// ---------------------------------------------------------------------------
// Resource conversions

enum class Reduction { creation_via_ebits, ebits_via_qubit_channel, communication_via_distilled_ebits };

const char* to_string(Reduction r);
Reduction parse_reduction(std::string_view name);

struct ReductionReport {
  Reduction direction;
  std::vector<ProtocolTranscript> units;
  ResourceTotals totals;
  /// Per unit: fidelity of what was delivered against what was intended.
  std::vector<double> unit_fidelities;
  double min_fidelity = 1.0;
};

/// `count` is the number of units for the two rate demos; `target` is the
/// two-qubit pure state for the creation demo (ignored otherwise).
ReductionReport reduction_demo(Reduction direction, int count, const std::optional<PureState>& target,
                               std::uint64_t seed);

}  // namespace entunit
