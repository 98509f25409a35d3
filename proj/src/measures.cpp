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

#include "entunit/measures.hpp"

#include <algorithm>
#include <numbers>
#include <thread>

namespace entunit {

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::exact:
      return "exact";
    case MeasureKind::upper_bound:
      return "upper_bound";
    case MeasureKind::lower_bound:
      return "lower_bound";
  }
  return "unknown";
}

CMatrix Decomposition::mixture() const {
  if (components.empty()) return {};
  const auto n = static_cast<Eigen::Index>(components.front().dim());
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const CVector& v = components[i].amplitudes();
    m += weights[i] * v * v.adjoint();
  }
  return m;
}

double Decomposition::average_entanglement(const Cut& cut) const {
  double total = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    total += weights[i] * von_neumann_entropy(reduced_state(components[i], cut, Side::A));
  }
  return total;
}

MeasureValue pure_state_entanglement(const PureState& psi, const Cut& cut) {
  const double s = von_neumann_entropy(reduced_state(psi, cut, Side::A));
  return {s, MeasureKind::exact, "reduced_entropy", 1e-12};
}

namespace {

void require_two_qubits(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw std::invalid_argument("concurrence requires a two-qubit state with dims [2,2]");
}

CMatrix spin_flip() {
  return kron(gates::pauli_y(), gates::pauli_y());
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const RVector mu = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix v = es.eigenvectors() * mu.asDiagonal();
  const CMatrix tau = v.transpose() * spin_flip() * v;
  // Singular values come back in decreasing order; ties are irrelevant here.
  const RVector lambda = Eigen::JacobiSVD<CMatrix>(tau).singularValues();
  const double c = lambda(0) - lambda(1) - lambda(2) - lambda(3);
  return std::clamp(c, 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

MeasureValue eof_two_qubit(const DensityMatrix& rho) {
  return {eof_from_concurrence(concurrence(rho)), MeasureKind::exact, "wootters_closed_form", 1e-9};
}

// ---------------------------------------------------------------------------
// Convex roof search

namespace {

// Cost of one unnormalized ensemble member: p S(tr_B |ψ⟩⟨ψ| / p).
class MemberCost {
 public:
  MemberCost(const Dims& dims, const Cut& cut)
      : table_(bipartite_index_table(dims, cut)),
        da_(static_cast<Eigen::Index>(total_dim(side_dims(dims, cut.side_a())))),
        db_(static_cast<Eigen::Index>(total_dim(side_dims(dims, cut.side_b())))),
        block_(da_, db_) {}

  double operator()(const CVector& v) {
    const double p = v.squaredNorm();
    if (p < 1e-300) return 0.0;
    for (Eigen::Index a = 0; a < da_; ++a)
      for (Eigen::Index b = 0; b < db_; ++b) block_(a, b) = v(static_cast<Eigen::Index>(table_[a * db_ + b]));
    if (da_ == 2 || db_ == 2) return p * qubit_side_entropy(p);
    const CMatrix red = da_ <= db_ ? CMatrix(block_ * block_.adjoint()) : CMatrix(block_.adjoint() * block_);
    return p * spectral_entropy(hermitian_eigenvalues(red) / p);
  }

 private:
  // One side is a qubit: the reduced state there is 2x2 with a closed-form spectrum.
  double qubit_side_entropy(double p) const {
    Eigen::Matrix2cd r = da_ == 2 ? Eigen::Matrix2cd(block_ * block_.adjoint())
                                  : Eigen::Matrix2cd(block_.adjoint() * block_);
    const double a = r(0, 0).real() / p, d = r(1, 1).real() / p;
    const double off = std::norm(r(0, 1)) / (p * p);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + off));
    const double lo = std::clamp(0.5 * (a + d) - disc, 0.0, 1.0);
    return binary_entropy(lo);
  }

  std::vector<std::size_t> table_;
  Eigen::Index da_, db_;
  CMatrix block_;
};

struct RestartOutcome {
  double value = 0.0;
  CMatrix isometry;  // m x r
};

RestartOutcome run_restart(const CMatrix& basis, MemberCost cost, int m, const RoofOptions& opts,
                           std::uint64_t seed) {
  const auto r = basis.cols();
  std::mt19937_64 rng(seed);
  CMatrix t = random_unitary(m, rng).leftCols(r);

  auto member = [&](Eigen::Index i) -> CVector { return basis * t.row(i).transpose(); };
  std::vector<double> costs(static_cast<std::size_t>(m));
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += costs[i] = cost(member(i));

  std::uniform_int_distribution<int> pick(0, m - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  double step = 0.5;
  const int window = 100 * m;
  double window_start = total;
  Eigen::RowVectorXcd ri, rk;
  for (int iter = 1; iter <= opts.max_iters && m > 1; ++iter) {
    const int i = pick(rng);
    int k = pick(rng);
    while (k == i) k = pick(rng);
    const double theta = step * normal(rng);
    const Complex e = std::polar(1.0, phase(rng));
    const double c = std::cos(theta), s = std::sin(theta);
    // Complex Givens rotation on rows (i, k) keeps the columns of T orthonormal.
    ri = c * t.row(i) - e * s * t.row(k);
    rk = std::conj(e) * s * t.row(i) + c * t.row(k);
    const double ci = cost(basis * ri.transpose());
    const double ck = cost(basis * rk.transpose());
    if (ci + ck < costs[i] + costs[k] - 1e-15) {
      total += (ci + ck) - (costs[i] + costs[k]);
      costs[i] = ci;
      costs[k] = ck;
      t.row(i) = ri;
      t.row(k) = rk;
      step = std::min(step * 1.25, 1.5);
    } else {
      step *= 0.95;
    }
    if (iter % window == 0) {
      if (window_start - total < opts.tol) break;
      window_start = total;
    }
  }

  // Re-orthonormalize against accumulated rounding before reporting.
  Eigen::HouseholderQR<CMatrix> qr(t);
  CMatrix q = CMatrix(qr.householderQ()).leftCols(r);
  const CMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < r; ++j) {
    const Complex d = rr(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  t = q;
  double final_total = 0.0;
  for (int i = 0; i < m; ++i) final_total += cost(member(i));
  return {final_total, std::move(t)};
}

}  // namespace

RoofResult convex_roof_eof(const DensityMatrix& rho, const Cut& cut, const RoofOptions& opts) {
  if (rho.dim() > 64) throw std::invalid_argument("convex_roof_eof: total dimension exceeds 64");
  if (opts.restarts < 1) throw std::invalid_argument("convex_roof_eof: restarts must be >= 1");
  if (cut.num_subsystems() != rho.num_subsystems()) throw ValidationError("cut", "cut does not match state");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index j = es.eigenvalues().size() - 1; j >= 0; --j) {
    if (es.eigenvalues()(j) > 1e-11) support.push_back(j);
  }
  const int rank = static_cast<int>(support.size());
  const int m = opts.ensemble_size == 0 ? rank + 2 : opts.ensemble_size;
  if (m < rank) throw std::invalid_argument("insufficient ensemble");

  CMatrix basis(static_cast<Eigen::Index>(rho.dim()), rank);
  for (int j = 0; j < rank; ++j) {
    basis.col(j) = std::sqrt(es.eigenvalues()(support[j])) * es.eigenvectors().col(support[j]);
  }

  const MemberCost proto(rho.dims(), cut);
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  auto work = [&](int first, int stride) {
    for (int r = first; r < opts.restarts; r += stride) {
      outcomes[r] = run_restart(basis, proto, m, opts, derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
    }
  };
  const int workers = std::clamp(opts.workers, 1, opts.restarts);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  RoofResult result;
  result.rank = rank;
  result.ensemble_size = m;
  std::size_t best = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    result.restart_values.push_back(outcomes[r].value);
    if (outcomes[r].value < outcomes[best].value) best = r;
  }

  const CMatrix& t = outcomes[best].isometry;
  for (int i = 0; i < m; ++i) {
    CVector v = basis * t.row(i).transpose();
    const double p = v.squaredNorm();
    if (p <= 1e-14) continue;
    result.decomposition.weights.push_back(p);
    result.decomposition.components.emplace_back(Unchecked{}, v / std::sqrt(p), rho.dims());
  }
  const double value = result.decomposition.average_entanglement(cut);
  result.value = {std::max(value, 0.0), MeasureKind::upper_bound, "convex_roof_search", opts.tol};
  return result;
}

// ---------------------------------------------------------------------------
// Distillable entanglement bounds

DistillableBounds distillable_bounds(const PureState& psi, const Cut& cut) {
  const MeasureValue e = pure_state_entanglement(psi, cut);
  MeasureValue lower = e, upper = e;
  lower.method = upper.method = "pure_state_entropy";
  return {lower, upper};
}

DistillableBounds distillable_bounds(const DensityMatrix& rho, const Cut& cut, const DistillableOptions& opts) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (es.eigenvalues()(top) >= 1.0 - kValidationTol) {
    CVector v = es.eigenvectors().col(top);
    v.normalize();
    return distillable_bounds(PureState(Unchecked{}, std::move(v), rho.dims()), cut);
  }

  DistillableBounds out;
  if (rho.dims() == Dims{2, 2}) {
    out.upper = eof_two_qubit(rho);
    out.upper.kind = MeasureKind::upper_bound;
  } else {
    out.upper = convex_roof_eof(rho, cut, opts.roof).value;
  }
  out.lower = {0.0, MeasureKind::lower_bound, "trivial", 0.0};
  if (opts.hashing) {
    const double sb = von_neumann_entropy(partial_trace(rho, cut, Side::B));
    const double coherent = sb - von_neumann_entropy(rho);
    out.lower = {std::max(0.0, coherent), MeasureKind::lower_bound, "hashing", 1e-12};
  }
  return out;
}

}  // namespace entunit
