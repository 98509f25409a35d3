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

#include "entunit/locc_sim.hpp"

#include <algorithm>

namespace entunit {

const char* to_string(Party p) { return p == Party::alice ? "alice" : "bob"; }

ResourceTotals& ResourceTotals::operator+=(const ResourceTotals& o) {
  ebits_consumed += o.ebits_consumed;
  cbits_alice_to_bob += o.cbits_alice_to_bob;
  cbits_bob_to_alice += o.cbits_bob_to_alice;
  qubits_transmitted += o.qubits_transmitted;
  return *this;
}

// ---------------------------------------------------------------------------
// OutcomeSource

OutcomeSource OutcomeSource::sampled(std::uint64_t seed) {
  OutcomeSource s;
  s.rng_.emplace(seed);
  return s;
}

OutcomeSource OutcomeSource::forced(std::vector<int> outcomes) {
  OutcomeSource s;
  s.forced_ = std::move(outcomes);
  return s;
}

int OutcomeSource::next(double probability_of_zero) {
  if (rng_) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return u(*rng_) < probability_of_zero ? 0 : 1;
  }
  if (cursor_ >= forced_.size()) throw std::out_of_range("forced outcome sequence exhausted");
  return forced_[cursor_++];
}

// ---------------------------------------------------------------------------
// LoccSimulator

namespace {

inline std::size_t bit_of(int n, int q) { return std::size_t{1} << (n - 1 - q); }

}  // namespace

LoccSimulator::LoccSimulator(std::string protocol, std::vector<Party> owners, OutcomeSource outcomes)
    : owners_(std::move(owners)), outcomes_(std::move(outcomes)) {
  if (owners_.empty() || owners_.size() > 20) throw std::invalid_argument("simulator supports 1..20 qubits");
  state_ = CVector::Zero(Eigen::Index{1} << owners_.size());
  state_(0) = 1.0;
  transcript_.protocol = std::move(protocol);
  transcript_.initial_owners = owners_;
}

void LoccSimulator::require_owned(Party party, const std::vector<int>& qubits, const char* what) const {
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits()) throw std::out_of_range("qubit index out of range");
    if (owners_[q] != party) {
      throw LoccViolation(std::string(what) + " by " + to_string(party) + " on qubit " + std::to_string(q) +
                          " held by " + to_string(owners_[q]));
    }
  }
}

void LoccSimulator::require_fresh(int q) const {
  const std::size_t mask = bit_of(num_qubits(), q);
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    if ((static_cast<std::size_t>(i) & mask) && std::abs(state_(i)) > 1e-14) {
      throw std::logic_error("qubit " + std::to_string(q) + " is not in |0>");
    }
  }
}

void LoccSimulator::embed(const std::vector<int>& qubits, const CVector& amplitudes) {
  for (int q : qubits) require_fresh(q);
  const int n = num_qubits();
  const auto k = static_cast<int>(qubits.size());
  if (amplitudes.size() != (Eigen::Index{1} << k)) throw std::invalid_argument("prepared state has wrong size");
  CVector out = CVector::Zero(state_.size());
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    if (state_(i) == Complex(0.0)) continue;
    for (Eigen::Index s = 0; s < amplitudes.size(); ++s) {
      std::size_t idx = static_cast<std::size_t>(i);
      for (int b = 0; b < k; ++b) {
        if ((static_cast<std::size_t>(s) >> (k - 1 - b)) & 1U) idx |= bit_of(n, qubits[b]);
      }
      out(static_cast<Eigen::Index>(idx)) += state_(i) * amplitudes(s);
    }
  }
  state_ = std::move(out);
}

void LoccSimulator::load_input(const std::vector<int>& qubits, const CVector& amplitudes) {
  if (!transcript_.steps.empty() || !transcript_.input_qubits.empty()) {
    throw std::logic_error("input must be loaded before the first protocol step");
  }
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits()) throw std::out_of_range("qubit index out of range");
  }
  embed(qubits, amplitudes);
  transcript_.input_qubits = qubits;
}

void LoccSimulator::prepare(Party party, const std::vector<int>& qubits, const CVector& amplitudes,
                            std::string label) {
  require_owned(party, qubits, "preparation");
  embed(qubits, amplitudes);
  transcript_.steps.emplace_back(LocalUnitaryStep{party, qubits, std::move(label)});
}

void LoccSimulator::share_ebit(int alice_qubit, int bob_qubit) {
  require_owned(Party::alice, {alice_qubit}, "ebit endpoint");
  require_owned(Party::bob, {bob_qubit}, "ebit endpoint");
  require_fresh(alice_qubit);
  require_fresh(bob_qubit);
  const int n = num_qubits();
  const std::size_t ma = bit_of(n, alice_qubit), mb = bit_of(n, bob_qubit);
  const double r = 1.0 / std::sqrt(2.0);
  CVector out = CVector::Zero(state_.size());
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    if (state_(i) == Complex(0.0)) continue;
    out(i) += r * state_(i);
    out(static_cast<Eigen::Index>(static_cast<std::size_t>(i) | ma | mb)) += r * state_(i);
  }
  state_ = std::move(out);
  transcript_.steps.emplace_back(ResourceStep{ResourceKind::ebit, {alice_qubit, bob_qubit}, Party::alice, Party::bob});
  transcript_.totals.ebits_consumed += 1;
}

void LoccSimulator::transmit(int qubit, Party from, Party to) {
  require_owned(from, {qubit}, "transmission");
  owners_[qubit] = to;
  transcript_.steps.emplace_back(ResourceStep{ResourceKind::qubit_transmission, {qubit}, from, to});
  transcript_.totals.qubits_transmitted += 1;
}

void LoccSimulator::apply(Party party, const std::vector<int>& qubits, const CMatrix& u, std::string gate) {
  require_owned(party, qubits, "local unitary");
  const int n = num_qubits();
  const auto k = static_cast<int>(qubits.size());
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (u.rows() != sub || !is_unitary(u)) throw std::invalid_argument("gate is not a unitary on the listed qubits");
  std::size_t mask = 0;
  std::vector<std::size_t> offsets(static_cast<std::size_t>(sub), 0);
  for (int b = 0; b < k; ++b) mask |= bit_of(n, qubits[b]);
  for (Eigen::Index s = 0; s < sub; ++s)
    for (int b = 0; b < k; ++b)
      if ((static_cast<std::size_t>(s) >> (k - 1 - b)) & 1U) offsets[s] |= bit_of(n, qubits[b]);

  CVector in(sub), res(sub);
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    if (static_cast<std::size_t>(i) & mask) continue;
    for (Eigen::Index s = 0; s < sub; ++s) in(s) = state_(static_cast<Eigen::Index>(i + offsets[s]));
    res.noalias() = u * in;
    for (Eigen::Index s = 0; s < sub; ++s) state_(static_cast<Eigen::Index>(i + offsets[s])) = res(s);
  }
  transcript_.steps.emplace_back(LocalUnitaryStep{party, qubits, std::move(gate)});
}

void LoccSimulator::cnot(Party p, int control, int target) {
  CMatrix m = CMatrix::Identity(4, 4);
  m(2, 2) = m(3, 3) = 0.0;
  m(2, 3) = m(3, 2) = 1.0;
  apply(p, {control, target}, m, "cnot");
}

void LoccSimulator::cz(Party p, int a, int b) {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = -1.0;
  apply(p, {a, b}, m, "cz");
}

int LoccSimulator::measure(Party party, int qubit, Basis basis) {
  require_owned(party, {qubit}, "measurement");
  const int n = num_qubits();
  const std::size_t mask = bit_of(n, qubit);
  // Rotate into the computational basis without recording a separate step.
  auto rotate = [&] {
    const double r = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < state_.size(); ++i) {
      if (static_cast<std::size_t>(i) & mask) continue;
      const auto j = static_cast<Eigen::Index>(static_cast<std::size_t>(i) | mask);
      const Complex a = state_(i), b = state_(j);
      state_(i) = r * (a + b);
      state_(j) = r * (a - b);
    }
  };
  if (basis == Basis::x) rotate();

  double total = 0.0, zero = 0.0;
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    const double w = std::norm(state_(i));
    total += w;
    if (!(static_cast<std::size_t>(i) & mask)) zero += w;
  }
  const double p0 = total > 0.0 ? zero / total : 1.0;
  const int outcome = outcomes_.next(p0);
  for (Eigen::Index i = 0; i < state_.size(); ++i) {
    const bool one = (static_cast<std::size_t>(i) & mask) != 0;
    if (one != (outcome == 1)) state_(i) = 0.0;
  }
  if (basis == Basis::x) rotate();

  const double prob = outcome == 0 ? p0 : 1.0 - p0;
  transcript_.steps.emplace_back(MeasurementStep{party, qubit, basis, outcome, prob});
  transcript_.outcomes.push_back(outcome);
  transcript_.branch_probability *= prob;
  return outcome;
}

void LoccSimulator::send(Party from, Party to, std::vector<int> bits) {
  if (from == to) throw std::invalid_argument("a message needs distinct endpoints");
  const int nbits = static_cast<int>(bits.size());
  (from == Party::alice ? transcript_.totals.cbits_alice_to_bob : transcript_.totals.cbits_bob_to_alice) += nbits;
  transcript_.steps.emplace_back(ClassicalMessageStep{from, to, std::move(bits)});
}

ProtocolTranscript LoccSimulator::finish(std::vector<int> output_qubits) && {
  ProtocolTranscript t = std::move(transcript_);
  std::sort(output_qubits.begin(), output_qubits.end());
  t.output_qubits = output_qubits;
  const int n = num_qubits();
  const double norm2 = state_.squaredNorm();
  const auto out_dim = Eigen::Index{1} << output_qubits.size();

  if (static_cast<int>(output_qubits.size()) == n) {
    t.output_operator = state_ * state_.adjoint();
  } else {
    const PureState raw(Unchecked{}, state_, Dims(static_cast<std::size_t>(n), 2));
    t.output_operator = reduced_state(raw, Cut::from_side_a(output_qubits, n), Side::A).matrix();
  }
  t.joint_state = norm2 > 0.0 ? CVector(state_ / std::sqrt(norm2)) : state_;
  if (norm2 > 1e-300) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(t.output_operator / norm2);
    CVector v = es.eigenvectors().col(out_dim - 1);
    t.output_state.emplace(Unchecked{}, v.normalized(), Dims(output_qubits.size(), 2));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Protocols

namespace {

void require_qubits(const PureState& s, int n, const char* who) {
  if (s.dims() != Dims(static_cast<std::size_t>(n), 2)) {
    throw std::invalid_argument(std::string(who) + ": input must be " + std::to_string(n) + " qubit(s)");
  }
}

// Qubits: 0 input (Alice), 1 Alice's Bell half, 2 Bob's Bell half.
ProtocolTranscript run_teleport(const PureState& input, OutcomeSource outcomes) {
  require_qubits(input, 1, "teleport");
  constexpr Party A = Party::alice, B = Party::bob;
  LoccSimulator sim("teleport", {A, A, B}, std::move(outcomes));
  sim.load_input({0}, input.amplitudes());
  sim.share_ebit(1, 2);
  sim.cnot(A, 0, 1);
  sim.h(A, 0);
  const int a = sim.measure(A, 0, Basis::z);
  const int b = sim.measure(A, 1, Basis::z);
  sim.send(A, B, {a, b});
  if (b) sim.x(B, 2);
  if (a) sim.z(B, 2);
  return std::move(sim).finish({2});
}

// Qubits: 0 control (Alice), 1 target (Bob), 2 Alice's Bell half, 3 Bob's.
// Alice copies the control into the pair, Bob applies the phase from his
// half onto the target (CNOT conjugated by Hadamards on the target), then
// erases his half with an X measurement whose sign Alice repairs.
ProtocolTranscript run_nonlocal_cz(const PureState& input, OutcomeSource outcomes) {
  require_qubits(input, 2, "nonlocal_cz");
  constexpr Party A = Party::alice, B = Party::bob;
  LoccSimulator sim("nonlocal_cz", {A, B, A, B}, std::move(outcomes));
  sim.load_input({0, 1}, input.amplitudes());
  sim.share_ebit(2, 3);
  sim.cnot(A, 0, 2);
  const int c1 = sim.measure(A, 2, Basis::z);
  sim.send(A, B, {c1});
  if (c1) sim.x(B, 3);
  sim.h(B, 1);
  sim.cnot(B, 3, 1);
  sim.h(B, 1);
  const int c2 = sim.measure(B, 3, Basis::x);
  sim.send(B, A, {c2});
  if (c2) sim.z(A, 0);
  return std::move(sim).finish({0, 1});
}

}  // namespace

ProtocolSpec teleport_protocol() { return {"teleport", 1, 2, run_teleport}; }
ProtocolSpec nonlocal_cz_protocol() { return {"nonlocal_cz", 2, 2, run_nonlocal_cz}; }

std::vector<ProtocolTranscript> expand_branches(const ProtocolSpec& spec, const PureState& input) {
  std::vector<ProtocolTranscript> out;
  const int k = spec.measurements;
  for (int mask = 0; mask < (1 << k); ++mask) {
    std::vector<int> forced(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) forced[b] = (mask >> (k - 1 - b)) & 1;
    out.push_back(spec.run(input, OutcomeSource::forced(std::move(forced))));
  }
  return out;
}

ProtocolTranscript teleport(const PureState& input, std::uint64_t seed) {
  return run_teleport(input, OutcomeSource::sampled(seed));
}

ProtocolTranscript nonlocal_cz(const PureState& joint_input, std::uint64_t seed) {
  return run_nonlocal_cz(joint_input, OutcomeSource::sampled(seed));
}

bool respects_locc(const ProtocolTranscript& t) {
  std::vector<Party> owners = t.initial_owners;
  auto owned = [&](Party p, const std::vector<int>& qs) {
    return std::all_of(qs.begin(), qs.end(), [&](int q) {
      return q >= 0 && q < static_cast<int>(owners.size()) && owners[q] == p;
    });
  };
  for (const auto& step : t.steps) {
    const bool ok = std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LocalUnitaryStep>) {
            return owned(s.party, s.qubits);
          } else if constexpr (std::is_same_v<T, MeasurementStep>) {
            return owned(s.party, {s.qubit});
          } else if constexpr (std::is_same_v<T, ClassicalMessageStep>) {
            return s.from != s.to;
          } else {
            if (s.kind == ResourceKind::ebit) {
              return s.qubits.size() == 2 && owned(Party::alice, {s.qubits[0]}) && owned(Party::bob, {s.qubits[1]});
            }
            if (s.qubits.size() != 1 || !owned(s.from, s.qubits)) return false;
            owners[s.qubits[0]] = s.to;
            return true;
          }
        },
        step);
    if (!ok) return false;
  }
  return true;
}

ResourceTotals recount_resources(const ProtocolTranscript& t) {
  ResourceTotals r;
  for (const auto& step : t.steps) {
    if (const auto* m = std::get_if<ClassicalMessageStep>(&step)) {
      (m->from == Party::alice ? r.cbits_alice_to_bob : r.cbits_bob_to_alice) += static_cast<int>(m->bits.size());
    } else if (const auto* res = std::get_if<ResourceStep>(&step)) {
      (res->kind == ResourceKind::ebit ? r.ebits_consumed : r.qubits_transmitted) += 1;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Channels

ChannelMatrix ChannelMatrix::from_basis_action(int in_dim, int out_dim, std::vector<CMatrix> action) {
  if (static_cast<int>(action.size()) != in_dim * in_dim) throw std::invalid_argument("incomplete basis action");
  ChannelMatrix c;
  c.in_dim = in_dim;
  c.out_dim = out_dim;
  c.choi = CMatrix::Zero(in_dim * out_dim, in_dim * out_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      const CMatrix& e = action[i * in_dim + j];
      if (e.rows() != out_dim || e.cols() != out_dim) throw std::invalid_argument("basis action has wrong size");
      c.choi.block(i * out_dim, j * out_dim, out_dim, out_dim) = e;
    }
  c.basis_action = std::move(action);
  return c;
}

ChannelMatrix ChannelMatrix::unitary(const CMatrix& u) {
  const auto d = static_cast<int>(u.rows());
  std::vector<CMatrix> action;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) action.push_back(u.col(i) * u.col(j).adjoint());
  return from_basis_action(d, d, std::move(action));
}

CMatrix ChannelMatrix::apply(const CMatrix& rho) const {
  if (rho.rows() != in_dim || rho.cols() != in_dim) throw std::invalid_argument("channel input has wrong size");
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) out += rho(i, j) * basis_action[i * in_dim + j];
  return out;
}

double ChannelMatrix::min_choi_eigenvalue() const {
  return hermitian_eigenvalues(0.5 * (choi + choi.adjoint())).minCoeff();
}

double ChannelMatrix::trace_preservation_error() const {
  double err = 0.0;
  for (int i = 0; i < in_dim; ++i)
    for (int j = 0; j < in_dim; ++j) {
      const Complex want = i == j ? 1.0 : 0.0;
      err = std::max(err, std::abs(basis_action[i * in_dim + j].trace() - want));
    }
  return err;
}

namespace {

// |0⟩, |1⟩, |+⟩, |+i⟩.
CVector tomography_ket(int k) {
  const double r = 1.0 / std::sqrt(2.0);
  CVector v(2);
  switch (k) {
    case 0: v << 1, 0; break;
    case 1: v << 0, 1; break;
    case 2: v << r, r; break;
    default: v << r, Complex(0, r); break;
  }
  return v;
}

// |i⟩⟨j| = Σ_k c[i][j][k] P_k over the projectors onto the kets above.
Complex tomography_coefficient(int i, int j, int k) {
  const Complex half(0.5, 0.5), half_conj(0.5, -0.5);
  if (i == j) return k == i ? 1.0 : 0.0;
  if (i == 0) {  // |0⟩⟨1| = P+ + i P+i − (1+i)/2 (P0 + P1)
    const Complex c[4] = {-half, -half, 1.0, Complex(0, 1)};
    return c[k];
  }
  const Complex c[4] = {-half_conj, -half_conj, 1.0, Complex(0, -1)};
  return c[k];
}

}  // namespace

ChannelMatrix induced_channel(const ProtocolSpec& spec) {
  const int n = spec.input_qubits;
  const int d = 1 << n;
  const int settings = 1 << (2 * n);  // 4^n product inputs

  std::vector<CMatrix> outputs;
  int out_dim = 0;
  for (int s = 0; s < settings; ++s) {
    CVector ket = CVector::Ones(1);
    for (int q = 0; q < n; ++q) ket = kron(ket, tomography_ket((s >> (2 * (n - 1 - q))) & 3));
    const PureState input(Unchecked{}, ket, Dims(static_cast<std::size_t>(n), 2));
    CMatrix sum;
    for (const auto& branch : expand_branches(spec, input)) {
      sum = sum.size() == 0 ? branch.output_operator : CMatrix(sum + branch.output_operator);
    }
    out_dim = static_cast<int>(sum.rows());
    outputs.push_back(std::move(sum));
  }

  std::vector<CMatrix> action;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(out_dim, out_dim);
      for (int s = 0; s < settings; ++s) {
        Complex coeff = 1.0;
        for (int q = 0; q < n; ++q) {
          const int shift = n - 1 - q;
          coeff *= tomography_coefficient((i >> shift) & 1, (j >> shift) & 1, (s >> (2 * shift)) & 3);
        }
        if (coeff != Complex(0.0)) e += coeff * outputs[s];
      }
      action.push_back(std::move(e));
    }
  return ChannelMatrix::from_basis_action(d, out_dim, std::move(action));
}

ChannelMatrix compose(const ChannelMatrix& second, const ChannelMatrix& first) {
  if (first.out_dim != second.in_dim) throw std::invalid_argument("channel dimensions do not compose");
  std::vector<CMatrix> action;
  for (const CMatrix& e : first.basis_action) action.push_back(second.apply(e));
  return ChannelMatrix::from_basis_action(first.in_dim, second.out_dim, std::move(action));
}

double channel_process_fidelity(const ChannelMatrix& channel, const CMatrix& ideal) {
  const auto d = static_cast<int>(ideal.rows());
  if (ideal.cols() != d || channel.in_dim != d || channel.out_dim != d) {
    throw std::invalid_argument("channel_process_fidelity: dimension mismatch");
  }
  CVector vec_u = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) vec_u.segment(i * d, d) = ideal.col(i);
  const double f = (vec_u.adjoint() * channel.choi * vec_u)(0, 0).real() / (static_cast<double>(d) * d);
  return std::clamp(f, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Resource conversions

const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::creation_via_ebits:
      return "creation_via_ebits";
    case Reduction::ebits_via_qubit_channel:
      return "ebits_via_qubit_channel";
    case Reduction::communication_via_distilled_ebits:
      return "communication_via_distilled_ebits";
  }
  return "unknown";
}

Reduction parse_reduction(std::string_view name) {
  for (Reduction r : {Reduction::creation_via_ebits, Reduction::ebits_via_qubit_channel,
                      Reduction::communication_via_distilled_ebits}) {
    if (name == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown reduction '" + std::string(name) + "'");
}

namespace {

// Alice makes a Bell pair locally and sends one half through the channel.
ProtocolTranscript bell_pair_over_qubit_channel() {
  constexpr Party A = Party::alice, B = Party::bob;
  LoccSimulator sim("bell_over_qubit_channel", {A, A}, OutcomeSource::forced({}));
  sim.h(A, 0);
  sim.cnot(A, 0, 1);
  sim.transmit(1, A, B);
  return std::move(sim).finish({0, 1});
}

// Alice prepares the whole target on two of her qubits, then teleports the
// second one to Bob. Qubits: 0, 1 target (Alice), 2 Alice's Bell half, 3 Bob's.
ProtocolTranscript create_by_teleporting_half(const PureState& target, std::uint64_t seed) {
  constexpr Party A = Party::alice, B = Party::bob;
  LoccSimulator sim("creation_via_ebits", {A, A, A, B}, OutcomeSource::sampled(seed));
  sim.prepare(A, {0, 1}, target.amplitudes(), "prepare_target");
  sim.share_ebit(2, 3);
  sim.cnot(A, 1, 2);
  sim.h(A, 1);
  const int a = sim.measure(A, 1, Basis::z);
  const int b = sim.measure(A, 2, Basis::z);
  sim.send(A, B, {a, b});
  if (b) sim.x(B, 3);
  if (a) sim.z(B, 3);
  return std::move(sim).finish({0, 3});
}

double delivered_fidelity(const ProtocolTranscript& t, const PureState& want) {
  if (!t.output_state) return 0.0;
  return fidelity(*t.output_state, want);
}

}  // namespace

ReductionReport reduction_demo(Reduction direction, int count, const std::optional<PureState>& target,
                               std::uint64_t seed) {
  ReductionReport report;
  report.direction = direction;
  auto add = [&](ProtocolTranscript t, double f) {
    report.totals += t.totals;
    report.unit_fidelities.push_back(f);
    report.min_fidelity = std::min(report.min_fidelity, f);
    report.units.push_back(std::move(t));
  };

  switch (direction) {
    case Reduction::creation_via_ebits: {
      if (!target || target->dims() != Dims{2, 2}) {
        throw std::invalid_argument("creation_via_ebits needs a two-qubit pure target");
      }
      ProtocolTranscript t = create_by_teleporting_half(*target, seed);
      const double f = delivered_fidelity(t, *target);
      add(std::move(t), f);
      break;
    }
    case Reduction::ebits_via_qubit_channel: {
      if (count < 1) throw std::invalid_argument("count must be >= 1");
      const PureState bell = bell_state();
      for (int k = 0; k < count; ++k) {
        ProtocolTranscript t = bell_pair_over_qubit_channel();
        const double f = delivered_fidelity(t, bell);
        add(std::move(t), f);
      }
      break;
    }
    case Reduction::communication_via_distilled_ebits: {
      if (count < 1) throw std::invalid_argument("count must be >= 1");
      for (int k = 0; k < count; ++k) {
        const PureState message = random_pure_state({2}, derive_seed(seed, 2 * static_cast<std::uint64_t>(k)));
        ProtocolTranscript t = teleport(message, derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1));
        const double f = delivered_fidelity(t, message);
        add(std::move(t), f);
      }
      break;
    }
  }
  return report;
}

}  // namespace entunit
