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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "entunit/quantum_state.hpp"

using namespace entunit;

namespace {

PureState ket0() { return PureState::basis({2}, 0); }
PureState ket1() { return PureState::basis({2}, 1); }
PureState ket_plus() {
  CVector v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return PureState(v, {2});
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("state validation rejects malformed inputs") {
  CVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(PureState(v, {2}), ValidationError);
  CHECK_THROWS_AS(PureState(CVector::Ones(1), {1}), ValidationError);
  CHECK_THROWS_AS(PureState(CVector::Zero(4), {}), ValidationError);
  CHECK_THROWS_AS(PureState(ket0().amplitudes(), {2, 2}), ValidationError);

  CMatrix nonherm = CMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(nonherm, {2}), ValidationError);
  CMatrix trace2 = CMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(trace2, {2}), ValidationError);
  CMatrix neg = CMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  try {
    DensityMatrix bad(neg, {2});
    FAIL("negative spectrum accepted");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "psd");
  }
}

TEST_CASE("cut validation") {
  CHECK_NOTHROW(Cut({0}, {1, 2}, 3));
  CHECK_THROWS_AS(Cut({}, {0, 1}, 2), ValidationError);
  CHECK_THROWS_AS(Cut({0}, {0, 1}, 2), ValidationError);
  CHECK_THROWS_AS(Cut({0}, {2}, 2), ValidationError);
  CHECK_THROWS_AS(Cut({0}, {1}, 3), ValidationError);
  const Cut c = Cut::from_side_a({2, 0}, 4);
  CHECK(c.side_a() == std::vector<int>{0, 2});
  CHECK(c.side_b() == std::vector<int>{1, 3});
  // A cut for the wrong number of subsystems is rejected when applied.
  CHECK_THROWS_AS(partial_trace(bell_state().projector(), Cut({0}, {1, 2}, 3), Side::A), ValidationError);
}

TEST_CASE("tensor_product") {
  const PureState k01 = tensor_product(ket0(), ket1());
  CHECK(k01.dims() == Dims{2, 2});
  CHECK(std::abs(k01.amplitudes()(1) - Complex(1.0)) < 1e-15);
  CHECK(k01.amplitudes().norm() == doctest::Approx(1.0));

  const DensityMatrix rho = random_mixed_state({2, 2}, 3, 5);
  const DensityMatrix big = tensor_product(rho, ket0().projector());
  CHECK(big.dims() == Dims{2, 2, 2});
  CHECK(std::abs(big.matrix().trace() - Complex(1.0)) < 1e-12);

  const DensityMatrix half = DensityMatrix::maximally_mixed({2});
  const DensityMatrix quarter = tensor_product(half, half);
  CHECK(max_abs(quarter.matrix() - CMatrix::Identity(4, 4) / 4.0) < 1e-15);

  const State a = ket0();
  const State b = half;
  try {
    tensor_product(a, b);
    FAIL("mixed kinds accepted");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "kind mismatch");
  }
  CHECK(std::holds_alternative<PureState>(tensor_product(a, a)));
}

TEST_CASE("partial_trace") {
  const Cut cut({0}, {1}, 2);
  const DensityMatrix red = partial_trace(bell_state().projector(), cut, Side::A);
  CHECK(max_abs(red.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const DensityMatrix rho_b = random_mixed_state({2}, 2, 11);
  const DensityMatrix joint = tensor_product(ket0().projector(), rho_b);
  CHECK(max_abs(partial_trace(joint, cut, Side::A).matrix() - ket0().projector().matrix()) < 1e-15);
  CHECK(max_abs(partial_trace(joint, cut, Side::B).matrix() - rho_b.matrix()) < 1e-15);

  SUBCASE("agrees with the Schmidt basis-weighted reduced matrix") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const PureState psi = random_pure_state({2, 2}, seed);
      const CMatrix traced = partial_trace(psi.projector(), cut, Side::A).matrix();
      const SchmidtDecomposition sd = schmidt_decompose(psi, cut);
      CMatrix from_schmidt = CMatrix::Zero(2, 2);
      for (std::size_t k = 0; k < sd.rank(); ++k) {
        const double l = sd.coefficients(static_cast<Eigen::Index>(k));
        from_schmidt += l * l * sd.left[k] * sd.left[k].adjoint();
      }
      CHECK(max_abs(traced - from_schmidt) < 1e-10);
    }
  }

  SUBCASE("non-contiguous cuts follow big-endian subsystem ordering") {
    // |0⟩_0 |1⟩_1 |+⟩_2 traced over subsystem 1 leaves |0⟩⟨0| ⊗ |+⟩⟨+|.
    const PureState psi = tensor_product(tensor_product(ket0(), ket1()), ket_plus());
    const DensityMatrix kept = partial_trace(psi.projector(), Cut({0, 2}, {1}, 3), Side::A);
    const CMatrix want = kron(ket0().projector().matrix(), ket_plus().projector().matrix());
    CHECK(max_abs(kept.matrix() - want) < 1e-15);
  }

  SUBCASE("trace and positivity are preserved") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const DensityMatrix rho = random_mixed_state({2, 3, 2}, 1 + static_cast<int>(seed % 6), seed);
      for (const Cut& c : {Cut({0}, {1, 2}, 3), Cut({1}, {0, 2}, 3), Cut({0, 2}, {1}, 3)}) {
        for (Side s : {Side::A, Side::B}) {
          const DensityMatrix r = partial_trace(rho, c, s);
          CHECK(std::abs(r.matrix().trace().real() - 1.0) < 1e-12);
          CHECK(r.spectrum().minCoeff() >= -1e-9);
          CHECK(hermitian_deviation(r.matrix()) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("schmidt_decompose") {
  const Cut cut({0}, {1}, 2);
  const SchmidtDecomposition bell = schmidt_decompose(bell_state(), cut);
  REQUIRE(bell.rank() == 2);
  CHECK(bell.coefficients(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(bell.coefficients(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const SchmidtDecomposition prod = schmidt_decompose(tensor_product(ket0(), ket_plus()), cut);
  REQUIRE(prod.rank() == 1);
  CHECK(prod.coefficients(0) == doctest::Approx(1.0).epsilon(1e-14));

  SUBCASE("squared coefficients equal the spectrum of the reduced state") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const PureState psi = random_pure_state({2, 2, 2}, seed);
      const Cut c({0}, {1, 2}, 3);
      const SchmidtDecomposition sd = schmidt_decompose(psi, c);
      RVector eig = hermitian_eigenvalues(partial_trace(psi.projector(), c, Side::A).matrix());
      std::sort(eig.data(), eig.data() + eig.size(), std::greater<>());
      REQUIRE(sd.rank() == 2);
      for (Eigen::Index k = 0; k < 2; ++k) CHECK(std::abs(sd.coefficients(k) * sd.coefficients(k) - eig(k)) < 1e-10);
    }
  }

  SUBCASE("reconstruction and orthonormality") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const PureState psi = random_pure_state({3, 2, 2}, seed);
      const Cut c({1}, {0, 2}, 3);
      const SchmidtDecomposition sd = schmidt_decompose(psi, c);
      CHECK(sd.rank() <= 2);
      CHECK(std::abs(sd.coefficients.squaredNorm() - 1.0) < 1e-9);
      const CMatrix m = bipartite_matrix(psi, c);
      CVector flat(m.size());
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = 0; b < m.cols(); ++b) flat(a * m.cols() + b) = m(a, b);
      CHECK(std::norm(flat.dot(sd.reconstruct())) >= 1 - 1e-10);
      for (std::size_t i = 0; i < sd.rank(); ++i)
        for (std::size_t j = 0; j < sd.rank(); ++j) {
          const double want = i == j ? 1.0 : 0.0;
          CHECK(std::abs(sd.left[i].dot(sd.left[j]) - want) < 1e-9);
          CHECK(std::abs(sd.right[i].dot(sd.right[j]) - want) < 1e-9);
        }
    }
  }
}

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed({2})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(von_neumann_entropy(random_pure_state({2, 3}, 4).projector()) == doctest::Approx(0.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 7.0 / 8.0;
  d(1, 1) = 1.0 / 8.0;
  const double oracle = -(7.0 / 8.0) * std::log2(7.0 / 8.0) - (1.0 / 8.0) * std::log2(1.0 / 8.0);
  CHECK(std::abs(oracle - 0.5435644431995964) < 1e-15);
  CHECK(std::abs(von_neumann_entropy(DensityMatrix(d, {2})) - oracle) < 1e-12);
}

TEST_CASE("fidelity") {
  CHECK(fidelity(ket0().projector(), ket1().projector()) == doctest::Approx(0.0));
  CHECK(fidelity(ket0().projector(), ket_plus().projector()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fidelity(ket0(), ket_plus()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(fidelity(ket0().projector(), bell_state().projector()), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DensityMatrix rho = random_mixed_state({2, 2}, 1 + static_cast<int>(seed % 4), seed);
    const DensityMatrix sigma = random_mixed_state({2, 2}, 1 + static_cast<int>((seed + 1) % 4), seed + 100);
    CHECK(fidelity(rho, rho) >= 1 - 1e-10);
    CHECK(std::abs(fidelity(rho, sigma) - fidelity(sigma, rho)) < 1e-10);

    const PureState psi = random_pure_state({2, 2}, seed);
    const PureState phi = random_pure_state({2, 2}, seed + 50);
    const double overlap = std::norm(psi.amplitudes().dot(phi.amplitudes()));
    CHECK(std::abs(fidelity(psi.projector(), phi.projector()) - overlap) < 1e-10);
  }
}

TEST_CASE("named states") {
  const PureState bell = bell_state();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(bell.amplitudes()(0) - r) < 1e-15);
  CHECK(std::abs(bell.amplitudes()(1)) < 1e-15);
  CHECK(std::abs(bell.amplitudes()(2)) < 1e-15);
  CHECK(std::abs(bell.amplitudes()(3) - r) < 1e-15);

  CHECK(max_abs(werner_state(1.0).matrix() - bell.projector().matrix()) < 1e-15);
  CHECK_THROWS_AS(werner_state(1.5), ValidationError);
  CHECK_THROWS_AS(ghz_state(1), ValidationError);
  CHECK_THROWS_AS(random_mixed_state({2, 2}, 0, 1), ValidationError);

  CHECK(random_pure_state({2, 2}, 7).amplitudes() == random_pure_state({2, 2}, 7).amplitudes());
  CHECK(random_pure_state({2, 2}, 7).amplitudes() != random_pure_state({2, 2}, 8).amplitudes());
  CHECK(random_mixed_state({2, 2}, 2, 3).matrix() == random_mixed_state({2, 2}, 2, 3).matrix());

  const State ghz = make_named_state("ghz:3");
  CHECK(std::get<PureState>(ghz).dims() == Dims{2, 2, 2});
  const State w = make_named_state("werner:0.25");
  CHECK(std::get<DensityMatrix>(w).matrix()(0, 0).real() == doctest::Approx(0.25 * 0.5 + 0.75 / 4));
  CHECK(std::get<PureState>(make_named_state("random_pure:2,3:9")).dims() == Dims{2, 3});
  CHECK(std::get<DensityMatrix>(make_named_state("random_mixed:2,2:3:9")).dims() == Dims{2, 2});
  CHECK_THROWS_AS(make_named_state("nonsense"), ValidationError);
  CHECK_THROWS_AS(make_named_state("ghz:x"), ValidationError);
  CHECK_THROWS_AS(make_named_state("werner"), ValidationError);
}

TEST_CASE("entropy symmetry across every cut of random pure states") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const PureState psi = random_pure_state({2, 3, 2}, seed);
    for (const Cut& c : {Cut({0}, {1, 2}, 3), Cut({1}, {0, 2}, 3), Cut({2}, {0, 1}, 3)}) {
      const double sa = von_neumann_entropy(reduced_state(psi, c, Side::A));
      const double sb = von_neumann_entropy(reduced_state(psi, c, Side::B));
      CHECK(std::abs(sa - sb) < 1e-9);
      CHECK(std::abs(sa - von_neumann_entropy(partial_trace(psi.projector(), c, Side::A))) < 1e-10);
    }
  }
}

TEST_CASE("Schmidt coefficients are invariant under local unitaries") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const PureState psi = random_pure_state({2, 2, 2}, seed);
    const Cut c({0, 1}, {2}, 3);
    PureState moved = psi;
    for (int k = 0; k < 3; ++k) moved = apply_local_unitary(moved, k, random_unitary(2, rng));
    const RVector before = schmidt_decompose(psi, c).coefficients;
    const RVector after = schmidt_decompose(moved, c).coefficients;
    REQUIRE(before.size() == after.size());
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("schmidt_rank thresholding") {
  CHECK(schmidt_rank(bell_state(), Cut({0}, {1}, 2)) == 2);
  CHECK(schmidt_rank(tensor_product(ket0(), ket_plus()), Cut({0}, {1}, 2)) == 1);
  CHECK(schmidt_rank(ghz_state(4), Cut({0, 1}, {2, 3}, 4)) == 2);
  CHECK(schmidt_rank(random_pure_state({2, 2, 2, 2}, 3), Cut({0, 1}, {2, 3}, 4)) == 4);
}
