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

// Controlled-phase cost of preparing pure qubit states from |0...0⟩ with free
// local unitaries, and the graph-function states built from graph
// predicates.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entunit/quantum_state.hpp"

namespace entunit {

// ---------------------------------------------------------------------------
// Circuits

struct Gate {
  enum class Kind { local, cz };
  Kind kind;
  int a;
  int b;  // second qubit for cz, -1 for local gates
  Matrix2c u;
  std::string name;
};

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  /// Number of cz gates.
  int cost() const noexcept { return cost_; }

  void local(int q, const Matrix2c& u, std::string name = "u");
  void cz(int i, int j);
  /// CNOT as H(target) cz H(target); costs one cz.
  void cnot(int control, int target);

  /// Appends `other` with its qubit i mapped to `qubits[i]`.
  void append(const Circuit& other, const std::vector<int>& qubits);

  CVector apply(const CVector& in) const;
  /// Output on |0...0⟩.
  CVector simulate() const;

 private:
  int n_;
  int cost_ = 0;
  std::vector<Gate> gates_;
};

/// Applies a single-qubit gate in place (qubit 0 is the most significant bit).
void apply_1q(CVector& psi, int n, int q, const Matrix2c& u);
void apply_cz(CVector& psi, int n, int i, int j);

// ---------------------------------------------------------------------------
// Lower bound

/// One cz crossing a cut at most doubles the Schmidt rank across it, so a cut
/// of rank r needs at least ceil(log2 r) crossing gates.
struct CutRequirement {
  Cut cut;
  int schmidt_rank;
  int required;
};

struct LowerBound {
  int value = 0;
  std::vector<CutRequirement> cuts;
  /// Pairs (i, j), i < j, and an optimal integer allocation of gates to them.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> allocation;
};

inline constexpr int kMaxLowerBoundQubits = 10;

/// Exact optimum of the covering program min Σ x_ij subject to, for every
/// bipartition, Σ_{(i,j) crossing} x_ij >= ceil(log2 rank).
LowerBound cz_lower_bound(const PureState& psi, double rank_threshold = kSchmidtRankThreshold);

/// All 2^(n-1) - 1 bipartitions, side A always containing qubit 0.
std::vector<Cut> all_bipartitions(int n);

// ---------------------------------------------------------------------------
// Upper bound

struct UpperBound {
  int value = 0;
  Circuit witness{1};
  double fidelity = 0.0;
  /// Strategy per product factor, e.g. "product", "schmidt_2q", "ghz", "uniformly_controlled".
  std::vector<std::string> strategies;
};

inline constexpr int kMaxSynthesisQubits = 8;
inline constexpr double kWitnessFidelity = 1.0 - 1e-6;

/// Splits the target into product factors, uses hand counts for recognized
/// forms and uniformly controlled rotations otherwise. The witness is
/// simulated; std::runtime_error if it misses the target.
UpperBound cz_upper_bound(const PureState& psi);

// ---------------------------------------------------------------------------
// Exact search

struct SearchOptions {
  int restarts = 6;
  int max_sweeps = 200;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Total local optimizations (skeleton x restart) allowed.
  long long budget = 20000;
  double rank_threshold = kSchmidtRankThreshold;
};

struct SearchResult {
  std::optional<int> count;
  bool certified = false;
  int lower = 0;
  /// "certified", "numerical upper bound", "not found up to max_k", "budget exceeded".
  std::string status;
  double best_fidelity = 0.0;
  std::optional<Circuit> witness;
  long long optimizations = 0;
};

/// For k = lower..max_k, tries every placement of k cz gates with local
/// unitaries (4 angles each) before, between, and on the touched qubits after
/// each cz. Up to 3 qubits and max_k <= 4.
SearchResult exact_min_cz_search(const PureState& psi, int max_k, const SearchOptions& opts = {});

struct CZBoundReport {
  std::string label;
  LowerBound lower;
  UpperBound upper;
  std::optional<SearchResult> search;
};

CZBoundReport cz_bound_report(const PureState& psi, std::string label, std::optional<int> search_max_k,
                              const SearchOptions& opts = {});

// ---------------------------------------------------------------------------
// Graph-function states

using Adjacency = std::vector<std::vector<int>>;
using GraphOracle = std::function<int(const Adjacency&)>;

inline int num_edge_slots(int n) { return n * (n - 1) / 2; }

/// Graph `g` with edge (i, j) taken in upper-triangle row order; the first
/// edge (0, 1) is the most significant bit of g.
Adjacency graph_from_index(int n, std::uint64_t g);

/// 1 iff some cyclic ordering of all vertices has every consecutive pair
/// adjacent. Graphs are simple, so fewer than 3 vertices never qualify.
int hamiltonian_cycle_oracle(const Adjacency& adj);

/// "hamiltonian", "parity" (edge count), "const0".
GraphOracle named_graph_oracle(std::string_view name);

struct GraphFunctionState {
  int n_vertices = 0;
  std::uint64_t num_graphs = 0;
  std::vector<int> f_table;
  /// Edge qubits first, function qubit last.
  PureState state;

  int num_edges() const { return num_edge_slots(n_vertices); }
  int function_qubit() const { return num_edges(); }
  Cut function_cut() const;
};

inline constexpr int kMaxGraphVertices = 5;

GraphFunctionState build_graph_function_state(int n_vertices, const GraphOracle& f);

struct ClassicalDistribution {
  int n_vertices = 0;
  std::uint64_t num_graphs = 0;
  /// p[g][x]
  std::vector<std::array<double, 2>> p;
  double q = 0.0;  // fraction of graphs with f = 1
  double entropy_graph = 0.0;
  double entropy_x = 0.0;
  double joint_entropy = 0.0;
  double mutual_information = 0.0;
};

ClassicalDistribution classical_distribution(int n_vertices, const GraphOracle& f);

struct CutEntropy {
  Cut cut;
  double entropy;
};

std::vector<CutEntropy> graph_state_entanglement_profile(const GraphFunctionState& gfs,
                                                         const std::vector<Cut>& cuts);

}  // namespace entunit
