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

#include <bit>
#include <cmath>

#include "entunit/comp_entanglement.hpp"
#include "test_support.hpp"

using namespace entunit;

namespace {

// Brute force over allocations x_p in 0..cap for the covering program,
// recomputing the cut requirements from scratch.
int covering_oracle(const PureState& psi, int cap) {
  const int n = psi.num_subsystems();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  struct Req {
    unsigned side_a;
    int need;
  };
  std::vector<Req> reqs;
  for (unsigned mask = 1; mask < (1U << n) - 1; ++mask) {
    if (!(mask & 1U)) continue;
    std::vector<int> a;
    for (int q = 0; q < n; ++q)
      if (mask & (1U << q)) a.push_back(q);
    const Cut cut = Cut::from_side_a(a, n);
    Eigen::JacobiSVD<CMatrix> svd(bipartite_matrix(psi, cut));
    int rank = 0;
    for (double s : svd.singularValues()) rank += s >= 1e-7;
    int need = 0;
    while ((1 << need) < rank) ++need;
    reqs.push_back({mask, need});
  }
  const std::size_t p = pairs.size();
  std::vector<int> x(p, 0);
  int best = 1 << 20;
  for (;;) {
    int total = 0;
    for (int v : x) total += v;
    if (total < best) {
      bool ok = true;
      for (const Req& r : reqs) {
        int have = 0;
        for (std::size_t k = 0; k < p; ++k) {
          const bool ia = r.side_a & (1U << pairs[k].first), ja = r.side_a & (1U << pairs[k].second);
          if (ia != ja) have += x[k];
        }
        if (have < r.need) ok = false;
      }
      if (ok) best = total;
    }
    std::size_t k = 0;
    while (k < p && x[k] == cap) x[k++] = 0;
    if (k == p) break;
    ++x[k];
  }
  return best;
}

PureState product_state(int n, std::uint64_t seed) {
  PureState psi = random_pure_state({2}, seed);
  for (int q = 1; q < n; ++q) psi = tensor_product(psi, random_pure_state({2}, seed + 100 * q));
  return psi;
}

PureState random_local_rotation(const PureState& psi, std::uint64_t seed) {
  PureState out = psi;
  for (int q = 0; q < psi.num_subsystems(); ++q) out = apply_local_unitary(out, q, random_unitary(2, seed + q));
  return out;
}

double witness_fidelity(const Circuit& c, const PureState& psi) {
  return std::norm(psi.amplitudes().dot(c.simulate()));
}

PureState cz_applied(const PureState& psi, int i, int j) {
  CVector v = psi.amplitudes();
  apply_cz(v, psi.num_subsystems(), i, j);
  return PureState(v, psi.dims());
}

}  // namespace

TEST_CASE("circuit simulation") {
  Circuit c(2);
  c.local(0, gates::hadamard(), "h");
  c.cnot(0, 1);
  CHECK(c.cost() == 1);
  CHECK(witness_fidelity(c, bell_state()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(c.cz(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(c.cz(0, 2), std::out_of_range);
  Matrix2c bad = Matrix2c::Identity();
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(c.local(0, bad), ValidationError);
}

TEST_CASE("one crossing cz at most doubles the Schmidt rank") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    // Low-rank starting points make the doubling visible.
    const PureState psi = seed % 2 ? product_state(4, seed) : tensor_product(bell_state(), product_state(2, seed));
    const PureState rotated = random_local_rotation(psi, seed);
    const int i = static_cast<int>(seed % 4), j = static_cast<int>((seed / 4 + 1 + seed % 4) % 4);
    if (i == j) continue;
    const PureState after = cz_applied(rotated, i, j);
    for (const Cut& cut : all_bipartitions(4)) {
      CHECK(schmidt_rank(after, cut) <= 2 * schmidt_rank(rotated, cut));
    }
  }
}

TEST_CASE("cz_lower_bound examples") {
  CHECK(cz_lower_bound(product_state(3, 5)).value == 0);
  CHECK(cz_lower_bound(bell_state()).value == 1);
  const LowerBound ghz = cz_lower_bound(ghz_state(3));
  CHECK(ghz.value == 2);
  CHECK(ghz.cuts.size() == 3);
  for (const auto& c : ghz.cuts) {
    CHECK(c.schmidt_rank == 2);
    CHECK(c.required == 1);
  }
  const LowerBound w = cz_lower_bound(w_state(3));
  CHECK(w.value == 2);
  CHECK(cz_lower_bound(ghz_state(6)).value == 5);
  CHECK_THROWS_AS(cz_lower_bound(ghz_state(11)), std::invalid_argument);
  CHECK_THROWS_AS(cz_lower_bound(PureState::basis({3, 2}, 0)), std::invalid_argument);
  CHECK(all_bipartitions(5).size() == 15);
}

TEST_CASE("cz_lower_bound agrees with a brute-force covering search") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const PureState psi = random_pure_state({2, 2, 2, 2}, seed);
    CHECK(cz_lower_bound(psi).value == covering_oracle(psi, 2));
  }
  const PureState pairs = tensor_product(bell_state(), bell_state());
  CHECK(cz_lower_bound(pairs).value == covering_oracle(pairs, 2));
  CHECK(cz_lower_bound(pairs).value == 2);
  const PureState mixed_ranks = tensor_product(random_pure_state({2, 2, 2}, 4), PureState::basis({2}, 1));
  CHECK(cz_lower_bound(mixed_ranks).value == covering_oracle(mixed_ranks, 2));
}

TEST_CASE("cz_lower_bound handles the largest supported size") {
  const LowerBound lb = cz_lower_bound(random_pure_state(Dims(10, 2), 1));
  CHECK(lb.cuts.size() == 511);
  // Every qubit needs one crossing gate, so at least ceil(10 / 2).
  CHECK(lb.value >= 5);
  int total = 0;
  for (int x : lb.allocation) total += x;
  CHECK(total == lb.value);
}

TEST_CASE("cz_upper_bound") {
  const UpperBound ghz = cz_upper_bound(ghz_state(3));
  CHECK(ghz.value == 2);
  CHECK(ghz.witness.cost() == 2);
  CHECK(witness_fidelity(ghz.witness, ghz_state(3)) >= 1.0 - 1e-6);
  CHECK(cz_upper_bound(bell_state()).value == 1);
  CHECK(cz_upper_bound(product_state(4, 2)).value == 0);
  const PureState chain = tensor_product(bell_state(), tensor_product(bell_state(), bell_state()));
  CHECK(cz_upper_bound(chain).value == 3);
  CHECK_THROWS_AS(cz_upper_bound(ghz_state(9)), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (int n = 2; n <= 5; ++n) {
      const PureState psi = random_pure_state(Dims(static_cast<std::size_t>(n), 2), seed);
      const UpperBound ub = cz_upper_bound(psi);
      CHECK(ub.value == ub.witness.cost());
      CHECK(witness_fidelity(ub.witness, psi) >= 1.0 - 1e-6);
      CHECK(cz_lower_bound(psi).value <= ub.value);
    }
  }
  // Real amplitudes skip the phase stage.
  const UpperBound w = cz_upper_bound(w_state(3));
  CHECK(witness_fidelity(w.witness, w_state(3)) >= 1.0 - 1e-6);
  CHECK(w.value >= 2);
  const UpperBound big = cz_upper_bound(random_pure_state(Dims(8, 2), 3));
  CHECK(witness_fidelity(big.witness, random_pure_state(Dims(8, 2), 3)) >= 1.0 - 1e-6);
}

TEST_CASE("exact_min_cz_search") {
  SearchOptions opts;
  opts.seed = 11;
  const SearchResult ghz = exact_min_cz_search(ghz_state(3), 3, opts);
  REQUIRE(ghz.count);
  CHECK(*ghz.count == 2);
  CHECK(ghz.certified);
  CHECK(ghz.status == "certified");
  REQUIRE(ghz.witness);
  CHECK(ghz.witness->cost() == 2);
  CHECK(witness_fidelity(*ghz.witness, ghz_state(3)) >= 1.0 - 1e-6);

  const SearchResult prod = exact_min_cz_search(product_state(3, 8), 2, opts);
  REQUIRE(prod.count);
  CHECK(*prod.count == 0);
  CHECK(prod.certified);

  const SearchResult bell = exact_min_cz_search(bell_state(), 2, opts);
  REQUIRE(bell.count);
  CHECK(*bell.count == 1);

  const SearchResult w = exact_min_cz_search(w_state(3), 3, opts);
  CHECK(w.lower == 2);
  MESSAGE("W(3) search: " << w.status << ", best fidelity " << w.best_fidelity);
  if (w.count) {
    CHECK(*w.count >= 2);
    CHECK(w.certified == (*w.count == 2));
    CHECK(witness_fidelity(*w.witness, w_state(3)) >= 1.0 - 1e-6);
  }

  CHECK_THROWS_AS(exact_min_cz_search(ghz_state(4), 3, opts), std::invalid_argument);
  CHECK_THROWS_AS(exact_min_cz_search(ghz_state(3), 5, opts), std::invalid_argument);

  SearchOptions tight = opts;
  tight.budget = 5;
  const SearchResult starved = exact_min_cz_search(ghz_state(3), 3, tight);
  CHECK_FALSE(starved.count);
  CHECK(starved.status == "budget exceeded");

  const SearchResult short_k = exact_min_cz_search(ghz_state(3), 1, opts);
  CHECK_FALSE(short_k.count);
  CHECK(short_k.status == "not found up to max_k");
}

TEST_CASE("search result does not depend on the worker count") {
  SearchOptions one;
  one.seed = 3;
  SearchOptions many = one;
  many.workers = 4;
  const PureState psi = random_local_rotation(ghz_state(3), 21);
  const SearchResult a = exact_min_cz_search(psi, 3, one);
  const SearchResult b = exact_min_cz_search(psi, 3, many);
  CHECK(a.count == b.count);
  CHECK(a.best_fidelity == b.best_fidelity);
  CHECK(a.optimizations == b.optimizations);
}

TEST_CASE("soundness sandwich and local-unitary invariance") {
  SearchOptions opts;
  opts.seed = 5;
  const std::vector<PureState> states = {
      ghz_state(3), tensor_product(bell_state(), PureState::basis({2}, 1)), product_state(3, 4), bell_state()};
  for (std::size_t s = 0; s < states.size(); ++s) {
    const PureState& psi = states[s];
    const int lower = cz_lower_bound(psi).value;
    const SearchResult base = exact_min_cz_search(psi, 3, opts);
    REQUIRE(base.count);
    const int upper = cz_upper_bound(psi).value;
    CHECK(lower <= *base.count);
    CHECK(*base.count <= upper);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const PureState moved = random_local_rotation(psi, 40 * s + seed);
      CHECK(cz_lower_bound(moved).value == lower);
      const SearchResult r = exact_min_cz_search(moved, 3, opts);
      REQUIRE(r.count);
      CHECK(*r.count == *base.count);
      CHECK(r.certified == base.certified);
      CHECK(*r.count <= cz_upper_bound(moved).value);
    }
  }
}

TEST_CASE("rank threshold is stable under x/÷10 for the suite states") {
  std::vector<PureState> states = {ghz_state(3), w_state(3), bell_state(), product_state(3, 2),
                                   build_graph_function_state(3, hamiltonian_cycle_oracle).state};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) states.push_back(random_pure_state({2, 2, 2, 2}, seed));
  for (const PureState& psi : states) {
    for (const Cut& cut : all_bipartitions(psi.num_subsystems())) {
      const int r = schmidt_rank(psi, cut, 1e-7);
      CHECK(schmidt_rank(psi, cut, 1e-6) == r);
      CHECK(schmidt_rank(psi, cut, 1e-8) == r);
    }
    CHECK(cz_lower_bound(psi, 1e-6).value == cz_lower_bound(psi, 1e-8).value);
  }
}

TEST_CASE("hamiltonian_cycle_oracle") {
  const Adjacency k3 = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  const Adjacency path = {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}};
  CHECK(hamiltonian_cycle_oracle(k3) == 1);
  CHECK(hamiltonian_cycle_oracle(path) == 0);
  Adjacency k4(4, std::vector<int>(4, 1));
  for (int i = 0; i < 4; ++i) k4[i][i] = 0;
  CHECK(hamiltonian_cycle_oracle(k4) == 1);
  k4[0][1] = k4[1][0] = 0;
  CHECK(hamiltonian_cycle_oracle(k4) == 1);
  CHECK(hamiltonian_cycle_oracle({{0, 1}, {1, 0}}) == 0);

  for (int n = 3; n <= 5; ++n) {
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << num_edge_slots(n)); ++g) {
      const Adjacency adj = graph_from_index(n, g);
      REQUIRE(adj == test_support::graph_from_index(n, g));
      CHECK(hamiltonian_cycle_oracle(adj) == static_cast<int>(test_support::has_hamiltonian_cycle_dfs(adj)));
    }
  }
}

TEST_CASE("graph function state") {
  const GraphFunctionState s3 = build_graph_function_state(3, hamiltonian_cycle_oracle);
  CHECK(s3.num_graphs == 8);
  CHECK(std::count(s3.f_table.begin(), s3.f_table.end(), 1) == 1);
  CHECK(s3.f_table[7] == 1);  // all three edges
  int nonzero = 0;
  for (Eigen::Index i = 0; i < s3.state.amplitudes().size(); ++i) {
    const Complex a = s3.state.amplitudes()(i);
    if (std::abs(a) > 0.0) {
      ++nonzero;
      CHECK(std::abs(a - 1.0 / std::sqrt(8.0)) < 1e-15);
      CHECK(static_cast<int>(i % 2) == s3.f_table[i / 2]);
    }
  }
  CHECK(nonzero == 8);

  const DensityMatrix fn = reduced_state(s3.state, s3.function_cut(), Side::A);
  CHECK(std::abs(fn.matrix()(0, 0).real() - 7.0 / 8.0) < 1e-15);
  CHECK(std::abs(fn.matrix()(1, 1).real() - 1.0 / 8.0) < 1e-15);
  const auto prof = graph_state_entanglement_profile(s3, {s3.function_cut()});
  CHECK(std::abs(prof[0].entropy - 0.5435644431995964) < 1e-9);

  const GraphFunctionState s2 = build_graph_function_state(2, hamiltonian_cycle_oracle);
  CHECK(s2.num_graphs == 2);
  CHECK(s2.f_table == std::vector<int>{0, 0});

  const GraphFunctionState s4 = build_graph_function_state(4, hamiltonian_cycle_oracle);
  CHECK(s4.num_graphs == 64);
  CHECK(s4.state.dim() == 128);
  // K4 is the last index; K4 minus the (0,1) edge clears the top bit.
  CHECK(s4.f_table[63] == 1);
  CHECK(s4.f_table[31] == 1);

  const GraphFunctionState zero = build_graph_function_state(4, named_graph_oracle("const0"));
  CHECK(graph_state_entanglement_profile(zero, {zero.function_cut()})[0].entropy < 1e-12);
  const std::vector<Cut> edge_cuts = {Cut::from_side_a({0, 1, 2}, 7), Cut::from_side_a({0, 5}, 7)};
  for (const auto& ce : graph_state_entanglement_profile(zero, edge_cuts)) CHECK(ce.entropy < 1e-12);

  CHECK_THROWS_AS(build_graph_function_state(6, hamiltonian_cycle_oracle), std::invalid_argument);
  CHECK_THROWS_AS(build_graph_function_state(1, hamiltonian_cycle_oracle), std::invalid_argument);
  CHECK_THROWS_AS(named_graph_oracle("clique"), std::invalid_argument);
}

TEST_CASE("function-cut entropy equals h(q) and the classical mutual information") {
  for (int n = 2; n <= 5; ++n) {
    for (const char* name : {"hamiltonian", "parity", "const0"}) {
      const GraphOracle f = named_graph_oracle(name);
      const std::uint64_t m = std::uint64_t{1} << num_edge_slots(n);
      int ones = 0;
      for (std::uint64_t g = 0; g < m; ++g) {
        const auto adj = test_support::graph_from_index(n, g);
        const std::string_view nm(name);
        int bit = 0;
        if (nm == "hamiltonian") bit = test_support::has_hamiltonian_cycle_dfs(adj);
        if (nm == "parity") {
          int e = 0;
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e += adj[i][j];
          bit = e % 2;
        }
        ones += bit;
      }
      const double q = static_cast<double>(ones) / static_cast<double>(m);
      const double hq = q > 0.0 && q < 1.0 ? -q * std::log2(q) - (1 - q) * std::log2(1 - q) : 0.0;

      const GraphFunctionState gfs = build_graph_function_state(n, f);
      const double quantum = graph_state_entanglement_profile(gfs, {gfs.function_cut()})[0].entropy;
      const ClassicalDistribution cd = classical_distribution(n, f);
      CHECK(std::abs(cd.q - q) < 1e-15);
      CHECK(std::abs(quantum - hq) < 1e-9);
      CHECK(std::abs(cd.mutual_information - hq) < 1e-9);
      CHECK(std::abs(cd.mutual_information - quantum) < 1e-9);
    }
  }
  const ClassicalDistribution par = classical_distribution(3, named_graph_oracle("parity"));
  CHECK(par.q == 0.5);
  CHECK(std::abs(par.mutual_information - 1.0) < 1e-12);
  CHECK(classical_distribution(4, named_graph_oracle("const0")).mutual_information == doctest::Approx(0.0));
  const ClassicalDistribution ham = classical_distribution(3, hamiltonian_cycle_oracle);
  CHECK(ham.q == 0.125);
  CHECK(std::abs(ham.mutual_information - 0.5435644431995964) < 1e-9);
  double total = 0.0;
  for (const auto& row : ham.p) total += row[0] + row[1];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}
