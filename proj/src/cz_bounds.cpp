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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "entunit/comp_entanglement.hpp"

namespace entunit {

// ---------------------------------------------------------------------------
// Circuits

void apply_1q(CVector& psi, int n, int q, const Matrix2c& u) {
  const std::size_t mask = std::size_t{1} << (n - 1 - q);
  for (std::size_t i = 0; i < static_cast<std::size_t>(psi.size()); ++i) {
    if (i & mask) continue;
    const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | mask);
    const Complex a = psi(i0), b = psi(i1);
    psi(i0) = u(0, 0) * a + u(0, 1) * b;
    psi(i1) = u(1, 0) * a + u(1, 1) * b;
  }
}

void apply_cz(CVector& psi, int n, int i, int j) {
  const std::size_t mask = (std::size_t{1} << (n - 1 - i)) | (std::size_t{1} << (n - 1 - j));
  for (std::size_t k = 0; k < static_cast<std::size_t>(psi.size()); ++k) {
    if ((k & mask) == mask) psi(static_cast<Eigen::Index>(k)) = -psi(static_cast<Eigen::Index>(k));
  }
}

Circuit::Circuit(int num_qubits) : n_(num_qubits) {
  if (n_ < 1 || n_ > 20) throw std::invalid_argument("circuit supports 1..20 qubits");
}

void Circuit::local(int q, const Matrix2c& u, std::string name) {
  if (q < 0 || q >= n_) throw std::out_of_range("gate qubit out of range");
  if (!is_unitary(u)) throw ValidationError("unitary", "local gate is not unitary within 1e-9");
  gates_.push_back({Gate::Kind::local, q, -1, u, std::move(name)});
}

void Circuit::cz(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw std::out_of_range("gate qubit out of range");
  if (i == j) throw std::invalid_argument("cz needs two distinct qubits");
  gates_.push_back({Gate::Kind::cz, std::min(i, j), std::max(i, j), Matrix2c::Identity(), "cz"});
  ++cost_;
}

void Circuit::cnot(int control, int target) {
  local(target, gates::hadamard(), "h");
  cz(control, target);
  local(target, gates::hadamard(), "h");
}

void Circuit::append(const Circuit& other, const std::vector<int>& qubits) {
  if (static_cast<int>(qubits.size()) != other.num_qubits()) throw std::invalid_argument("qubit map has wrong size");
  for (const Gate& g : other.gates()) {
    if (g.kind == Gate::Kind::cz) {
      cz(qubits[g.a], qubits[g.b]);
    } else {
      local(qubits[g.a], g.u, g.name);
    }
  }
}

CVector Circuit::apply(const CVector& in) const {
  if (in.size() != (Eigen::Index{1} << n_)) throw std::invalid_argument("circuit input has wrong size");
  CVector psi = in;
  for (const Gate& g : gates_) {
    if (g.kind == Gate::Kind::cz) {
      apply_cz(psi, n_, g.a, g.b);
    } else {
      apply_1q(psi, n_, g.a, g.u);
    }
  }
  return psi;
}

CVector Circuit::simulate() const {
  CVector zero = CVector::Zero(Eigen::Index{1} << n_);
  zero(0) = 1.0;
  return apply(zero);
}

namespace {

int require_qubit_state(const PureState& psi, int max_qubits, const char* who) {
  const Dims& d = psi.dims();
  if (std::any_of(d.begin(), d.end(), [](int x) { return x != 2; })) {
    throw std::invalid_argument(std::string(who) + ": state must be on qubits");
  }
  const int n = psi.num_subsystems();
  if (n > max_qubits) {
    throw std::invalid_argument(std::string(who) + ": at most " + std::to_string(max_qubits) + " qubits");
  }
  return n;
}

double overlap_fidelity(const CVector& a, const CVector& b) { return std::norm(a.dot(b)); }

}  // namespace

// ---------------------------------------------------------------------------
// Lower bound: covering integer program

std::vector<Cut> all_bipartitions(int n) {
  std::vector<Cut> cuts;
  if (n < 2) return cuts;
  // Side A is qubit 0 plus the qubits selected by `mask` among 1..n-1.
  const unsigned full = (1U << (n - 1)) - 1;
  for (unsigned mask = 0; mask < full; ++mask) {
    std::vector<int> a{0};
    for (int q = 1; q < n; ++q)
      if (mask & (1U << (q - 1))) a.push_back(q);
    cuts.push_back(Cut::from_side_a(std::move(a), n));
  }
  return cuts;
}

namespace {

// max hᵀy subject to Gᵀy <= 1, y >= 0, by tableau simplex with Bland's rule.
// The origin is feasible, so no phase one is needed. On success `x` holds the
// prices of the Gᵀy <= 1 rows, an optimal solution of min 1ᵀx, Gx >= h, x >= 0.
struct DualLp {
  enum class Status { optimal, unbounded };
  Status status;
  double value = 0.0;
  std::vector<double> x;
};

DualLp solve_dual(const std::vector<std::vector<double>>& g_rows, const std::vector<double>& h, int num_x) {
  constexpr double eps = 1e-10;
  const int ny = static_cast<int>(g_rows.size());
  const int cols = ny + num_x;  // y, then slacks
  // Constraint p: Σ_r G[r][p] y_r + s_p = 1.
  std::vector<std::vector<double>> t(static_cast<std::size_t>(num_x), std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(static_cast<std::size_t>(num_x));
  for (int p = 0; p < num_x; ++p) {
    for (int r = 0; r < ny; ++r) t[p][r] = g_rows[r][p];
    t[p][ny + p] = 1.0;
    t[p][cols] = 1.0;
    basis[p] = ny + p;
  }
  std::vector<double> z(cols + 1, 0.0);  // reduced costs; z[cols] = objective
  for (int r = 0; r < ny; ++r) z[r] = -h[r];

  for (;;) {
    int enter = -1;
    for (int c = 0; c < cols; ++c)
      if (z[c] < -eps) {
        enter = c;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 0; p < num_x; ++p) {
      if (t[p][enter] <= eps) continue;
      const double ratio = t[p][cols] / t[p][enter];
      if (ratio < best - eps || (ratio <= best + eps && leave >= 0 && basis[p] < basis[leave])) {
        best = ratio;
        leave = p;
      }
    }
    if (leave < 0) return {DualLp::Status::unbounded, 0.0, {}};
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (int p = 0; p < num_x; ++p) {
      if (p == leave || t[p][enter] == 0.0) continue;
      const double f = t[p][enter];
      for (int c = 0; c <= cols; ++c) t[p][c] -= f * t[leave][c];
    }
    const double f = z[enter];
    for (int c = 0; c <= cols; ++c) z[c] -= f * t[leave][c];
    basis[leave] = enter;
  }
  DualLp out{DualLp::Status::optimal, z[cols], std::vector<double>(static_cast<std::size_t>(num_x))};
  for (int p = 0; p < num_x; ++p) out.x[p] = std::max(0.0, z[ny + p]);
  return out;
}

class CoverSolver {
 public:
  CoverSolver(std::vector<std::vector<double>> cover, std::vector<double> rhs, int num_x)
      : cover_(std::move(cover)), rhs_(std::move(rhs)), num_x_(num_x) {}

  std::vector<int> solve() {
    std::vector<int> lo(num_x_, 0), hi(num_x_, -1);  // hi < 0: unbounded
    branch(lo, hi);
    if (best_value_ == std::numeric_limits<int>::max()) throw std::logic_error("covering program has no solution");
    return best_;
  }

 private:
  void branch(const std::vector<int>& lo, const std::vector<int>& hi) {
    std::vector<std::vector<double>> rows = cover_;
    std::vector<double> h = rhs_;
    for (int p = 0; p < num_x_; ++p) {
      std::vector<double> e(num_x_, 0.0);
      if (lo[p] > 0) {
        e[p] = 1.0;
        rows.push_back(e);
        h.push_back(lo[p]);
      }
      if (hi[p] >= 0) {
        e[p] = -1.0;
        rows.push_back(e);
        h.push_back(-hi[p]);
      }
    }
    const DualLp lp = solve_dual(rows, h, num_x_);
    if (lp.status == DualLp::Status::unbounded) return;  // the node is infeasible
    const int bound = static_cast<int>(std::ceil(lp.value - 1e-7));
    if (bound >= best_value_) return;

    // Rounding up keeps every covering row satisfied and respects the
    // integer upper limits, so it is always a feasible incumbent.
    std::vector<int> rounded(num_x_);
    int total = 0, frac = -1;
    double most = 0.0;
    for (int p = 0; p < num_x_; ++p) {
      const double v = lp.x[p];
      const double dist = std::abs(v - std::round(v));
      rounded[p] = dist < 1e-7 ? static_cast<int>(std::round(v)) : static_cast<int>(std::ceil(v));
      total += rounded[p];
      if (dist >= 1e-7 && std::min(v - std::floor(v), std::ceil(v) - v) > most) {
        most = std::min(v - std::floor(v), std::ceil(v) - v);
        frac = p;
      }
    }
    if (total < best_value_) {
      best_value_ = total;
      best_ = rounded;
    }
    if (frac < 0 || bound >= best_value_) return;

    const int f = static_cast<int>(std::floor(lp.x[frac]));
    std::vector<int> down_hi = hi;
    down_hi[frac] = f;
    branch(lo, down_hi);
    std::vector<int> up_lo = lo;
    up_lo[frac] = f + 1;
    branch(up_lo, hi);
  }

  std::vector<std::vector<double>> cover_;
  std::vector<double> rhs_;
  int num_x_;
  int best_value_ = std::numeric_limits<int>::max();
  std::vector<int> best_;
};

bool crosses(const Cut& cut, int i, int j) {
  const auto& a = cut.side_a();
  const bool ia = std::binary_search(a.begin(), a.end(), i);
  const bool ja = std::binary_search(a.begin(), a.end(), j);
  return ia != ja;
}

}  // namespace

LowerBound cz_lower_bound(const PureState& psi, double rank_threshold) {
  const int n = require_qubit_state(psi, kMaxLowerBoundQubits, "cz_lower_bound");
  LowerBound out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.pairs.emplace_back(i, j);
  out.allocation.assign(out.pairs.size(), 0);

  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (Cut& cut : all_bipartitions(n)) {
    const int rank = schmidt_rank(psi, cut, rank_threshold);
    const int need = rank <= 1 ? 0 : static_cast<int>(std::bit_width(static_cast<unsigned>(rank - 1)));
    if (need > 0) {
      std::vector<double> row(out.pairs.size(), 0.0);
      for (std::size_t p = 0; p < out.pairs.size(); ++p)
        if (crosses(cut, out.pairs[p].first, out.pairs[p].second)) row[p] = 1.0;
      rows.push_back(std::move(row));
      rhs.push_back(need);
    }
    out.cuts.push_back({std::move(cut), rank, need});
  }
  if (rows.empty()) return out;

  out.allocation = CoverSolver(rows, rhs, static_cast<int>(out.pairs.size())).solve();
  for (int x : out.allocation) out.value += x;
  for (const auto& c : out.cuts) {
    int have = 0;
    for (std::size_t p = 0; p < out.pairs.size(); ++p)
      if (crosses(c.cut, out.pairs[p].first, out.pairs[p].second)) have += out.allocation[p];
    if (have < c.required) throw std::logic_error("covering solution violates a cut requirement");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Upper bound: constructive synthesis

namespace {

struct Factor {
  std::vector<int> qubits;  // sorted global indices
  CVector amplitudes;
};

void factorize(const CVector& v, const std::vector<int>& qubits, std::vector<Factor>& out) {
  const int k = static_cast<int>(qubits.size());
  if (k > 1) {
    const PureState local(Unchecked{}, v, Dims(static_cast<std::size_t>(k), 2));
    for (const Cut& cut : all_bipartitions(k)) {
      if (schmidt_rank(local, cut) != 1) continue;
      const SchmidtDecomposition sd = schmidt_decompose(local, cut);
      std::vector<int> qa, qb;
      for (int q : cut.side_a()) qa.push_back(qubits[q]);
      for (int q : cut.side_b()) qb.push_back(qubits[q]);
      factorize(sd.left[0].normalized(), qa, out);
      factorize(sd.right[0].normalized(), qb, out);
      return;
    }
  }
  out.push_back({qubits, v});
}

// Unitary whose first column is the normalized qubit state v.
Matrix2c column_unitary(const CVector& v) {
  Matrix2c u;
  u << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  return u;
}

enum class Axis { y, z };

// Rotation on `target` by thetas[c], c the value of `controls` read with
// controls[0] most significant. Gray-code decomposition with 2^m CNOTs,
// collapsing to a single rotation when all angles agree.
void uniformly_controlled_rotation(Circuit& c, Axis axis, const std::vector<int>& controls, int target,
                                   const std::vector<double>& thetas) {
  auto rot = [&](double a) {
    if (std::abs(a) < 1e-14) return;
    c.local(target, axis == Axis::y ? gates::ry(a) : gates::rz(a), axis == Axis::y ? "ry" : "rz");
  };
  const bool uniform =
      std::all_of(thetas.begin(), thetas.end(), [&](double t) { return std::abs(t - thetas[0]) < 1e-14; });
  if (controls.empty() || uniform) {
    rot(thetas[0]);
    return;
  }
  const int m = static_cast<int>(controls.size());
  const std::size_t count = std::size_t{1} << m;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t gi = i ^ (i >> 1);
    double alpha = 0.0;
    for (std::size_t j = 0; j < count; ++j) alpha += (std::popcount(j & gi) % 2 ? -1.0 : 1.0) * thetas[j];
    rot(alpha / static_cast<double>(count));
    const int bit = i + 1 == count ? m - 1 : std::countr_zero(i + 1);
    c.cnot(controls[m - 1 - bit], target);
  }
}

Circuit synthesize_generic(const CVector& v, int k) {
  Circuit c(k);
  const auto dim = static_cast<std::size_t>(v.size());
  std::vector<double> r2(dim), phase(dim, 0.0);
  for (std::size_t x = 0; x < dim; ++x) r2[x] = std::norm(v(static_cast<Eigen::Index>(x)));

  for (int q = 0; q < k; ++q) {
    std::vector<int> controls;
    for (int t = 0; t < q; ++t) controls.push_back(t);
    const std::size_t prefixes = std::size_t{1} << q;
    const std::size_t tail = std::size_t{1} << (k - q - 1);
    std::vector<double> thetas(prefixes);
    for (std::size_t p = 0; p < prefixes; ++p) {
      double p0 = 0.0, p1 = 0.0;
      for (std::size_t s = 0; s < tail; ++s) {
        p0 += r2[((p << 1) | 0) * tail + s];
        p1 += r2[((p << 1) | 1) * tail + s];
      }
      thetas[p] = 2.0 * std::atan2(std::sqrt(p1), std::sqrt(p0));
    }
    uniformly_controlled_rotation(c, Axis::y, controls, q, thetas);
  }

  std::size_t ref = 0;
  while (ref < dim && r2[ref] < 1e-28) ++ref;
  bool uniform_phase = true;
  for (std::size_t x = 0; x < dim; ++x) {
    if (r2[x] < 1e-28) continue;
    phase[x] = std::arg(v(static_cast<Eigen::Index>(x)));
    if (std::abs(std::polar(1.0, phase[x]) - std::polar(1.0, phase[ref])) > 1e-12) uniform_phase = false;
  }
  if (uniform_phase) return c;

  // diag(e^{iφ0}, e^{iφ1}) = e^{i(φ0+φ1)/2} Rz(φ1 − φ0), peeled off from the
  // last qubit upward.
  std::vector<double> level = phase;
  for (int q = k - 1; q >= 0; --q) {
    const std::size_t prefixes = std::size_t{1} << q;
    std::vector<double> thetas(prefixes), next(prefixes);
    for (std::size_t p = 0; p < prefixes; ++p) {
      thetas[p] = level[2 * p + 1] - level[2 * p];
      next[p] = 0.5 * (level[2 * p] + level[2 * p + 1]);
    }
    std::vector<int> controls;
    for (int t = 0; t < q; ++t) controls.push_back(t);
    uniformly_controlled_rotation(c, Axis::z, controls, q, thetas);
    level = std::move(next);
  }
  c.local(0, std::polar(1.0, level[0]) * Matrix2c::Identity(), "phase");
  return c;
}

bool is_ghz_form(const CVector& v) {
  const Eigen::Index last = v.size() - 1;
  for (Eigen::Index i = 1; i < last; ++i)
    if (std::abs(v(i)) > 1e-12) return false;
  return true;
}

Circuit synthesize_factor(const CVector& v, int k, std::string& strategy) {
  Circuit c(k);
  if (k == 1) {
    strategy = "product";
    c.local(0, column_unitary(v), "prep");
    return c;
  }
  if (is_ghz_form(v)) {
    strategy = "ghz";
    CVector head(2);
    head << v(0), v(v.size() - 1);
    c.local(0, column_unitary(head), "prep");
    for (int q = 1; q < k; ++q) c.cnot(0, q);
    return c;
  }
  if (k == 2) {
    const PureState local(Unchecked{}, v, {2, 2});
    const SchmidtDecomposition sd = schmidt_decompose(local, Cut({0}, {1}, 2));
    if (sd.rank() == 2) {
      strategy = "schmidt_2q";
      CVector head(2);
      head << sd.coefficients(0), sd.coefficients(1);
      c.local(0, column_unitary(head.normalized()), "prep");
      c.cnot(0, 1);
      Matrix2c ua, ub;
      ua << sd.left[0], sd.left[1];
      ub << sd.right[0], sd.right[1];
      c.local(0, ua, "schmidt_a");
      c.local(1, ub, "schmidt_b");
      return c;
    }
  }
  strategy = "uniformly_controlled";
  return synthesize_generic(v, k);
}

}  // namespace

UpperBound cz_upper_bound(const PureState& psi) {
  const int n = require_qubit_state(psi, kMaxSynthesisQubits, "cz_upper_bound");
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[q] = q;
  std::vector<Factor> factors;
  factorize(psi.amplitudes(), all, factors);

  UpperBound out;
  out.witness = Circuit(n);
  for (const Factor& f : factors) {
    std::string strategy;
    const Circuit part = synthesize_factor(f.amplitudes, static_cast<int>(f.qubits.size()), strategy);
    out.witness.append(part, f.qubits);
    out.strategies.push_back(std::move(strategy));
  }
  out.value = out.witness.cost();
  out.fidelity = overlap_fidelity(psi.amplitudes(), out.witness.simulate());
  if (!(out.fidelity >= kWitnessFidelity)) {
    throw std::runtime_error("synthesis failure: witness fidelity " + std::to_string(out.fidelity));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact search

namespace {

Matrix2c angles_unitary(const double* a) {
  return std::polar(1.0, a[0]) * gates::rz(a[1]) * gates::ry(a[2]) * gates::rz(a[3]);
}

struct Op {
  bool is_cz;
  int a, b;  // cz qubits, or a = qubit of a local slot
};

struct RunResult {
  double fidelity = 0.0;
  std::vector<double> angles;
};

class SkeletonOptimizer {
 public:
  SkeletonOptimizer(int n, const std::vector<std::pair<int, int>>& czs, const CVector& target, int max_sweeps)
      : n_(n), target_(target), max_sweeps_(max_sweeps) {
    for (int q = 0; q < n; ++q) ops_.push_back({false, q, -1});
    for (const auto& [i, j] : czs) {
      ops_.push_back({true, i, j});
      ops_.push_back({false, i, -1});
      ops_.push_back({false, j, -1});
    }
    for (const Op& op : ops_)
      if (!op.is_cz) ++slots_;
  }

  int slots() const { return slots_; }

  RunResult run(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uni(-std::numbers::pi, std::numbers::pi);
    std::vector<double> ang(static_cast<std::size_t>(4 * slots_));
    for (double& a : ang) a = uni(rng);

    double f = fidelity(ang);
    for (int sweep = 0; sweep < max_sweeps_; ++sweep) {
      const double before = f;
      f = sweep_once(ang);
      if (f >= 1.0 - 1e-12 || f - before < 1e-13) break;
    }
    return {f, std::move(ang)};
  }

  Circuit to_circuit(const std::vector<double>& ang) const {
    Circuit c(n_);
    int s = 0;
    for (const Op& op : ops_) {
      if (op.is_cz) {
        c.cz(op.a, op.b);
      } else {
        c.local(op.a, angles_unitary(&ang[4 * s++]));
      }
    }
    return c;
  }

 private:
  CVector zero() const {
    CVector v = CVector::Zero(Eigen::Index{1} << n_);
    v(0) = 1.0;
    return v;
  }

  void apply_op(CVector& v, const Op& op, const double* a) const {
    if (op.is_cz) {
      apply_cz(v, n_, op.a, op.b);
    } else {
      apply_1q(v, n_, op.a, angles_unitary(a));
    }
  }

  double fidelity(const std::vector<double>& ang) const {
    CVector v = zero();
    int s = 0;
    for (const Op& op : ops_) apply_op(v, op, op.is_cz ? nullptr : &ang[4 * s++]);
    return overlap_fidelity(target_, v);
  }

  // One coordinate pass. For each slot, the fidelity is |⟨b|U v⟩|² with v the
  // state before the slot and b the target pulled back through later ops.
  double sweep_once(std::vector<double>& ang) const {
    const auto num_ops = ops_.size();
    std::vector<int> slot_of(num_ops, -1);
    for (int t = 0, s = 0; t < static_cast<int>(num_ops); ++t)
      if (!ops_[t].is_cz) slot_of[t] = s++;

    std::vector<CVector> back(num_ops);
    back[num_ops - 1] = target_;
    for (std::size_t t = num_ops - 1; t > 0; --t) {
      CVector b = back[t];
      const Op& op = ops_[t];
      if (op.is_cz) {
        apply_cz(b, n_, op.a, op.b);
      } else {
        apply_1q(b, n_, op.a, angles_unitary(&ang[4 * slot_of[t]]).adjoint());
      }
      back[t - 1] = std::move(b);
    }

    CVector v = zero();
    double f = 0.0;
    for (std::size_t t = 0; t < num_ops; ++t) {
      const Op& op = ops_[t];
      if (!op.is_cz) {
        double* a = &ang[4 * slot_of[t]];
        auto objective = [&](int which, double value) {
          const double keep = a[which];
          a[which] = value;
          CVector w = v;
          apply_1q(w, n_, op.a, angles_unitary(a));
          a[which] = keep;
          return overlap_fidelity(back[t], w);
        };
        for (int which = 0; which < 4; ++which) f = line_search(a, which, objective);
      }
      apply_op(v, op, op.is_cz ? nullptr : &ang[4 * slot_of[t]]);
    }
    return f;
  }

  // The objective is a sinusoid of period 2π in each angle. The best of eight
  // samples lies within π/8 of the maximum, so the maximum is bracketed by
  // ±π/4 around it and the bracket is unimodal for golden-section search.
  template <class F>
  static double line_search(double* a, int which, F& objective) {
    constexpr double pi = std::numbers::pi;
    double best_x = a[which], best_f = objective(which, a[which]);
    for (int s = 1; s < 8; ++s) {
      const double x = a[which] + s * pi / 4;
      const double fx = objective(which, x);
      if (fx > best_f) best_f = fx, best_x = x;
    }
    constexpr double inv_phi = 0.6180339887498949;
    double lo = best_x - pi / 4, hi = best_x + pi / 4;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(which, x1), f2 = objective(which, x2);
    for (int it = 0; it < 48; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2, f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = objective(which, x2);
      } else {
        hi = x2;
        x2 = x1, f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = objective(which, x1);
      }
    }
    const double mid = 0.5 * (lo + hi), fm = objective(which, mid);
    if (fm >= best_f) {
      a[which] = std::remainder(mid, 2 * pi);
      return fm;
    }
    a[which] = std::remainder(best_x, 2 * pi);
    return best_f;
  }

  int n_;
  CVector target_;
  int max_sweeps_;
  std::vector<Op> ops_;
  int slots_ = 0;
};

struct SkeletonOutcome {
  bool success = false;
  double fidelity = 0.0;
  int runs = 0;
  std::vector<double> angles;
};

}  // namespace

SearchResult exact_min_cz_search(const PureState& psi, int max_k, const SearchOptions& opts) {
  const int n = require_qubit_state(psi, 3, "exact_min_cz_search");
  if (max_k < 0 || max_k > 4) throw std::invalid_argument("exact_min_cz_search: max_k must be in 0..4");
  if (opts.restarts < 1) throw std::invalid_argument("exact_min_cz_search: restarts must be >= 1");

  SearchResult out;
  out.lower = cz_lower_bound(psi, opts.rank_threshold).value;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  for (int k = out.lower; k <= max_k; ++k) {
    if (k > 0 && pairs.empty()) break;
    std::size_t skeletons = 1;
    for (int i = 0; i < k; ++i) skeletons *= pairs.size();
    const long long planned = static_cast<long long>(skeletons) * opts.restarts;
    if (out.optimizations + planned > opts.budget) {
      out.status = "budget exceeded";
      return out;
    }

    auto skeleton = [&](std::size_t idx) {
      std::vector<std::pair<int, int>> czs(static_cast<std::size_t>(k));
      for (int i = k - 1; i >= 0; --i) {
        czs[i] = pairs[idx % pairs.size()];
        idx /= pairs.size();
      }
      return czs;
    };
    std::vector<SkeletonOutcome> results(skeletons);
    auto evaluate = [&](std::size_t idx) {
      const SkeletonOptimizer opt(n, skeleton(idx), psi.amplitudes(), opts.max_sweeps);
      const std::uint64_t base = derive_seed(derive_seed(opts.seed, static_cast<std::uint64_t>(k)), idx);
      SkeletonOutcome& res = results[idx];
      for (int r = 0; r < opts.restarts; ++r) {
        std::mt19937_64 rng(derive_seed(base, static_cast<std::uint64_t>(r)));
        RunResult run = opt.run(rng);
        ++res.runs;
        if (run.fidelity > res.fidelity) {
          res.fidelity = run.fidelity;
          res.angles = std::move(run.angles);
        }
        if (res.fidelity >= kWitnessFidelity) {
          res.success = true;
          break;
        }
      }
    };

    const int workers = std::clamp(opts.workers, 1, static_cast<int>(skeletons));
    if (workers == 1) {
      for (std::size_t idx = 0; idx < skeletons; ++idx) {
        evaluate(idx);
        if (results[idx].success) break;
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t idx = next++; idx < skeletons; idx = next++) evaluate(idx);
        });
      }
    }

    // Canonical order: the first successful skeleton wins regardless of how
    // many workers ran.
    for (std::size_t idx = 0; idx < skeletons; ++idx) {
      out.optimizations += results[idx].runs;
      out.best_fidelity = std::max(out.best_fidelity, results[idx].fidelity);
      if (!results[idx].success) continue;
      const SkeletonOptimizer opt(n, skeleton(idx), psi.amplitudes(), opts.max_sweeps);
      Circuit witness = opt.to_circuit(results[idx].angles);
      out.best_fidelity = overlap_fidelity(psi.amplitudes(), witness.simulate());
      out.count = k;
      out.witness = std::move(witness);
      out.certified = k == out.lower;
      out.status = out.certified ? "certified" : "numerical upper bound";
      return out;
    }
  }
  out.status = "not found up to max_k";
  return out;
}

CZBoundReport cz_bound_report(const PureState& psi, std::string label, std::optional<int> search_max_k,
                              const SearchOptions& opts) {
  CZBoundReport r{std::move(label), cz_lower_bound(psi, opts.rank_threshold), cz_upper_bound(psi), std::nullopt};
  if (r.lower.value > r.upper.value) throw std::logic_error("lower bound exceeds witness cost");
  if (search_max_k) r.search = exact_min_cz_search(psi, *search_max_k, opts);
  return r;
}

}  // namespace entunit
