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

#include "entunit/quantum_state.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <string>

namespace entunit {

namespace {

void validate_dims(const Dims& dims, std::size_t expected_size) {
  if (dims.empty()) throw ValidationError("dims", "subsystem list is empty");
  for (int d : dims) {
    if (d < 2) throw ValidationError("dims", "every subsystem dimension must be >= 2");
  }
  if (total_dim(dims) != expected_size) {
    throw ValidationError("dims", "product of dims " + std::to_string(total_dim(dims)) +
                                      " does not match size " + std::to_string(expected_size));
  }
}

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

Dims select_dims(const Dims& dims, const std::vector<int>& idx) {
  Dims out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(dims[i]);
  return out;
}

}  // namespace

std::vector<std::size_t> bipartite_index_table(const Dims& dims, const Cut& cut) {
  if (cut.num_subsystems() != static_cast<int>(dims.size())) {
    throw ValidationError("cut", "cut covers " + std::to_string(cut.num_subsystems()) +
                                     " subsystems but the state has " + std::to_string(dims.size()));
  }
  const auto strides = strides_of(dims);
  auto offsets = [&](const std::vector<int>& side) {
    Dims sd = select_dims(dims, side);
    std::size_t n = total_dim(sd);
    std::vector<std::size_t> off(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t rem = i;
      for (int k = static_cast<int>(side.size()) - 1; k >= 0; --k) {
        off[i] += (rem % sd[k]) * strides[side[k]];
        rem /= sd[k];
      }
    }
    return off;
  };
  const auto off_a = offsets(cut.side_a());
  const auto off_b = offsets(cut.side_b());
  std::vector<std::size_t> table(off_a.size() * off_b.size());
  for (std::size_t a = 0; a < off_a.size(); ++a)
    for (std::size_t b = 0; b < off_b.size(); ++b) table[a * off_b.size() + b] = off_a[a] + off_b[b];
  return table;
}

Dims side_dims(const Dims& dims, const std::vector<int>& side) { return select_dims(dims, side); }

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("named_state", std::string("cannot parse ") + what + " from '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) {
    throw ValidationError("named_state", std::string("cannot parse ") + what + " from '" + s + "'");
  }
  return v;
}

Dims parse_dims(const std::string& s) {
  Dims dims;
  for (const auto& p : split(s, ',')) dims.push_back(static_cast<int>(parse_int(p, "dims")));
  return dims;
}

}  // namespace

std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         [](std::size_t acc, int d) { return acc * static_cast<std::size_t>(d); });
}

// ---------------------------------------------------------------------------
// PureState / DensityMatrix

PureState::PureState(CVector amplitudes, Dims dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  validate_dims(dims_, dim());
  if (!amplitudes_.allFinite()) throw ValidationError("norm", "amplitudes are not finite");
  const double n2 = amplitudes_.squaredNorm();
  if (std::abs(n2 - 1.0) > kValidationTol) {
    throw ValidationError("norm", "squared norm " + std::to_string(n2) + " differs from 1");
  }
}

PureState PureState::basis(Dims dims, std::size_t index) {
  const std::size_t n = total_dim(dims);
  if (index >= n) throw ValidationError("basis", "index out of range");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), std::move(dims));
}

DensityMatrix PureState::projector() const {
  return DensityMatrix(Unchecked{}, amplitudes_ * amplitudes_.adjoint(), dims_);
}

DensityMatrix::DensityMatrix(CMatrix matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("square", "matrix is not square");
  validate_dims(dims_, dim());
  if (!matrix_.allFinite()) throw ValidationError("hermitian", "matrix entries are not finite");
  const double herm = hermitian_deviation(matrix_);
  if (herm > kValidationTol) {
    throw ValidationError("hermitian", "deviation from conjugate transpose " + std::to_string(herm));
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > kValidationTol) {
    throw ValidationError("trace", "trace " + std::to_string(tr) + " differs from 1");
  }
  const double min_eig = hermitian_eigenvalues(matrix_).minCoeff();
  if (min_eig < -kValidationTol) {
    throw ValidationError("psd", "minimum eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const auto n = static_cast<Eigen::Index>(total_dim(dims));
  return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n), std::move(dims));
}

// ---------------------------------------------------------------------------
// Cut

Cut::Cut(std::vector<int> side_a, std::vector<int> side_b, int num_subsystems)
    : side_a_(std::move(side_a)), side_b_(std::move(side_b)), n_(num_subsystems) {
  if (side_a_.empty() || side_b_.empty()) throw ValidationError("cut", "both sides must be nonempty");
  std::sort(side_a_.begin(), side_a_.end());
  std::sort(side_b_.begin(), side_b_.end());
  std::vector<int> seen(static_cast<std::size_t>(std::max(n_, 0)), 0);
  for (const auto* side : {&side_a_, &side_b_}) {
    for (int i : *side) {
      if (i < 0 || i >= n_) throw ValidationError("cut", "subsystem index " + std::to_string(i) + " out of range");
      if (seen[i]++) throw ValidationError("cut", "subsystem index " + std::to_string(i) + " appears twice");
    }
  }
  if (side_a_.size() + side_b_.size() != static_cast<std::size_t>(n_)) {
    throw ValidationError("cut", "sides do not cover every subsystem");
  }
}

Cut Cut::from_side_a(std::vector<int> side_a, int num_subsystems) {
  std::vector<int> side_b;
  for (int i = 0; i < num_subsystems; ++i) {
    if (std::find(side_a.begin(), side_a.end(), i) == side_a.end()) side_b.push_back(i);
  }
  return Cut(std::move(side_a), std::move(side_b), num_subsystems);
}

// ---------------------------------------------------------------------------
// Products and reductions

PureState tensor_product(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return PureState(kron(a.amplitudes(), b.amplitudes()), std::move(dims));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), std::move(dims));
}

State tensor_product(const State& a, const State& b) {
  if (a.index() != b.index()) throw std::invalid_argument("kind mismatch");
  return std::visit(
      [&](const auto& x) -> State {
        using T = std::decay_t<decltype(x)>;
        return tensor_product(x, std::get<T>(b));
      },
      a);
}

DensityMatrix to_density(const State& s) {
  if (const auto* p = std::get_if<PureState>(&s)) return p->projector();
  return std::get<DensityMatrix>(s);
}

CMatrix bipartite_matrix(const PureState& psi, const Cut& cut) {
  const auto table = bipartite_index_table(psi.dims(), cut);
  const auto da = static_cast<Eigen::Index>(total_dim(select_dims(psi.dims(), cut.side_a())));
  const auto db = static_cast<Eigen::Index>(total_dim(select_dims(psi.dims(), cut.side_b())));
  CMatrix m(da, db);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index b = 0; b < db; ++b) m(a, b) = psi.amplitudes()(static_cast<Eigen::Index>(table[a * db + b]));
  return m;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const Cut& cut, Side keep) {
  const auto table = bipartite_index_table(rho.dims(), cut);
  const Dims dims_a = select_dims(rho.dims(), cut.side_a());
  const Dims dims_b = select_dims(rho.dims(), cut.side_b());
  const auto da = static_cast<Eigen::Index>(total_dim(dims_a));
  const auto db = static_cast<Eigen::Index>(total_dim(dims_b));
  const CMatrix& m = rho.matrix();
  auto at = [&](Eigen::Index a, Eigen::Index b) { return static_cast<Eigen::Index>(table[a * db + b]); };

  CMatrix out;
  if (keep == Side::A) {
    out = CMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index b = 0; b < db; ++b) out(i, j) += m(at(i, b), at(j, b));
  } else {
    out = CMatrix::Zero(db, db);
    for (Eigen::Index i = 0; i < db; ++i)
      for (Eigen::Index j = 0; j < db; ++j)
        for (Eigen::Index a = 0; a < da; ++a) out(i, j) += m(at(a, i), at(a, j));
  }
  return DensityMatrix(Unchecked{}, std::move(out), keep == Side::A ? dims_a : dims_b);
}

DensityMatrix reduced_state(const PureState& psi, const Cut& cut, Side keep) {
  const CMatrix m = bipartite_matrix(psi, cut);
  if (keep == Side::A) {
    return DensityMatrix(Unchecked{}, m * m.adjoint(), select_dims(psi.dims(), cut.side_a()));
  }
  return DensityMatrix(Unchecked{}, m.transpose() * m.conjugate(), select_dims(psi.dims(), cut.side_b()));
}

CVector SchmidtDecomposition::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(total_dim(dims_a) * total_dim(dims_b));
  CVector v = CVector::Zero(n);
  for (std::size_t k = 0; k < rank(); ++k) v += coefficients(static_cast<Eigen::Index>(k)) * kron(left[k], right[k]);
  return v;
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, const Cut& cut) {
  const CMatrix m = bipartite_matrix(psi, cut);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  SchmidtDecomposition out;
  out.dims_a = select_dims(psi.dims(), cut.side_a());
  out.dims_b = select_dims(psi.dims(), cut.side_b());
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) > 1e-12) ++keep;
  out.coefficients = s.head(keep);
  for (Eigen::Index k = 0; k < keep; ++k) {
    out.left.push_back(svd.matrixU().col(k));
    out.right.push_back(svd.matrixV().col(k).conjugate());
  }
  return out;
}

int schmidt_rank(const PureState& psi, const Cut& cut, double threshold) {
  const CMatrix m = bipartite_matrix(psi, cut);
  Eigen::JacobiSVD<CMatrix> svd(m);
  return static_cast<int>((svd.singularValues().array() >= threshold).count());
}

// ---------------------------------------------------------------------------
// Entropy and fidelity

double spectral_entropy(const RVector& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues) {
    if (l > 1e-12) s -= l * std::log2(l);
  }
  const double smax = std::log2(static_cast<double>(eigenvalues.size()));
  return std::clamp(s, 0.0, smax);
}

double von_neumann_entropy(const DensityMatrix& rho) { return spectral_entropy(rho.spectrum()); }

namespace {

// E diag(√μ) with eigenvalues below 1e-12 dropped, so that V V† = ρ on its
// numerical support.
CMatrix spectral_factor(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    if (es.eigenvalues()(j) > 1e-12) keep.push_back(j);
  }
  CMatrix v(m.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    v.col(static_cast<Eigen::Index>(k)) = std::sqrt(es.eigenvalues()(keep[k])) * es.eigenvectors().col(keep[k]);
  }
  return v;
}

}  // namespace

// tr √(√ρ σ √ρ) = ‖√ρ √σ‖₁ = ‖V_ρ† V_σ‖₁, which is symmetric by construction.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("fidelity: dimension mismatch");
  const CMatrix overlap = spectral_factor(rho.matrix()).adjoint() * spectral_factor(sigma.matrix());
  if (overlap.size() == 0) return 0.0;
  const double root_trace = Eigen::JacobiSVD<CMatrix>(overlap).singularValues().sum();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

double fidelity(const PureState& psi, const PureState& phi) {
  if (psi.dims() != phi.dims()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::clamp(std::norm(psi.amplitudes().dot(phi.amplitudes())), 0.0, 1.0);
}

PureState apply_local_unitary(const PureState& psi, int subsystem, const CMatrix& u) {
  const Dims& dims = psi.dims();
  if (subsystem < 0 || subsystem >= psi.num_subsystems()) throw std::invalid_argument("subsystem out of range");
  const int d = dims[subsystem];
  if (u.rows() != d || !is_unitary(u)) throw std::invalid_argument("local operator is not a unitary of matching size");
  const std::size_t right = strides_of(dims)[subsystem];
  const std::size_t left = psi.dim() / (right * d);
  CVector out(psi.amplitudes().size());
  CVector slice(d);
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      const std::size_t base = l * d * right + r;
      for (int k = 0; k < d; ++k) slice(k) = psi.amplitudes()(static_cast<Eigen::Index>(base + k * right));
      const CVector res = u * slice;
      for (int k = 0; k < d; ++k) out(static_cast<Eigen::Index>(base + k * right)) = res(k);
    }
  }
  return PureState(Unchecked{}, std::move(out), dims);
}

// ---------------------------------------------------------------------------
// Named states

PureState bell_state() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), {2, 2});
}

PureState ghz_state(int n) {
  if (n < 2 || n > 12) throw ValidationError("named_state", "ghz requires 2 <= n <= 12");
  const auto dim = Eigen::Index{1} << n;
  CVector v = CVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return PureState(std::move(v), Dims(static_cast<std::size_t>(n), 2));
}

PureState w_state(int n) {
  if (n < 2 || n > 12) throw ValidationError("named_state", "w requires 2 <= n <= 12");
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  for (int k = 0; k < n; ++k) v(Eigen::Index{1} << k) = 1.0 / std::sqrt(static_cast<double>(n));
  return PureState(std::move(v), Dims(static_cast<std::size_t>(n), 2));
}

DensityMatrix werner_state(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("named_state", "werner requires 0 <= p <= 1");
  const CMatrix bell = bell_state().projector().matrix();
  return DensityMatrix(p * bell + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0, {2, 2});
}

CVector random_complex_gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& z : v) {
    const double re = normal(rng);
    z = Complex(re, normal(rng));
  }
  return v;
}

PureState random_pure_state(const Dims& dims, std::uint64_t seed) {
  validate_dims(dims, total_dim(dims));
  std::mt19937_64 rng(seed);
  CVector v = random_complex_gaussian(total_dim(dims), rng);
  v.normalize();
  return PureState(std::move(v), dims);
}

DensityMatrix random_mixed_state(const Dims& dims, int rank, std::uint64_t seed) {
  validate_dims(dims, total_dim(dims));
  const std::size_t n = total_dim(dims);
  if (rank < 1 || static_cast<std::size_t>(rank) > n) {
    throw ValidationError("named_state", "random_mixed requires 1 <= rank <= dim");
  }
  std::mt19937_64 rng(seed);
  CMatrix g(static_cast<Eigen::Index>(n), rank);
  for (int k = 0; k < rank; ++k) g.col(k) = random_complex_gaussian(n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho), dims);
}

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  CMatrix z(d, d);
  for (int c = 0; c < d; ++c) z.col(c) = random_complex_gaussian(static_cast<std::size_t>(d), rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int k = 0; k < d; ++k) {
    const Complex rk = r(k, k);
    const double mag = std::abs(rk);
    q.col(k) *= mag > 0 ? rk / mag : Complex(1.0);
  }
  return q;
}

CMatrix random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(d, rng);
}

State make_named_state(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts[0];
  auto expect = [&](std::size_t n) {
    if (parts.size() != n) {
      throw ValidationError("named_state", "wrong number of fields in '" + std::string(spec) + "'");
    }
  };
  if (name == "bell") {
    expect(1);
    return bell_state();
  }
  if (name == "ghz") {
    expect(2);
    return ghz_state(static_cast<int>(parse_int(parts[1], "n")));
  }
  if (name == "w") {
    expect(2);
    return w_state(static_cast<int>(parse_int(parts[1], "n")));
  }
  if (name == "werner") {
    expect(2);
    return werner_state(parse_double(parts[1], "p"));
  }
  if (name == "random_pure") {
    expect(3);
    return random_pure_state(parse_dims(parts[1]), static_cast<std::uint64_t>(parse_int(parts[2], "seed")));
  }
  if (name == "random_mixed") {
    expect(4);
    return random_mixed_state(parse_dims(parts[1]), static_cast<int>(parse_int(parts[2], "rank")),
                              static_cast<std::uint64_t>(parse_int(parts[3], "seed")));
  }
  throw ValidationError("named_state", "unknown state name '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace entunit
