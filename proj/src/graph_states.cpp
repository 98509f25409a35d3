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
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entunit/comp_entanglement.hpp"

namespace entunit {

Adjacency graph_from_index(int n, std::uint64_t g) {
  const int e = num_edge_slots(n);
  Adjacency adj(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) adj[i][j] = adj[j][i] = static_cast<int>((g >> (e - 1 - k)) & 1U);
  return adj;
}

int hamiltonian_cycle_oracle(const Adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  if (n > 8) throw std::invalid_argument("hamiltonian_cycle_oracle: at most 8 vertices");
  if (n < 3) return 0;
  // Vertex 0 is fixed as the start of the cycle; permute the rest.
  std::vector<int> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), 1);
  do {
    int prev = 0;
    bool ok = true;
    for (int v : order) {
      if (!adj[prev][v]) {
        ok = false;
        break;
      }
      prev = v;
    }
    if (ok && adj[prev][0]) return 1;
  } while (std::next_permutation(order.begin(), order.end()));
  return 0;
}

GraphOracle named_graph_oracle(std::string_view name) {
  if (name == "hamiltonian") return hamiltonian_cycle_oracle;
  if (name == "parity") {
    return [](const Adjacency& adj) {
      int edges = 0;
      for (std::size_t i = 0; i < adj.size(); ++i)
        for (std::size_t j = i + 1; j < adj.size(); ++j) edges += adj[i][j];
      return edges % 2;
    };
  }
  if (name == "const0") return [](const Adjacency&) { return 0; };
  throw std::invalid_argument("unknown graph function '" + std::string(name) + "'");
}

Cut GraphFunctionState::function_cut() const {
  return Cut::from_side_a({function_qubit()}, function_qubit() + 1);
}

namespace {

void require_vertices(int n) {
  if (n < 2 || n > kMaxGraphVertices) {
    throw std::invalid_argument("graph functions need 2.." + std::to_string(kMaxGraphVertices) + " vertices");
  }
}

std::vector<int> tabulate(int n, const GraphOracle& f, std::uint64_t m) {
  std::vector<int> table(m);
  for (std::uint64_t g = 0; g < m; ++g) {
    const int bit = f(graph_from_index(n, g));
    if (bit != 0 && bit != 1) throw std::invalid_argument("graph function must return 0 or 1");
    table[g] = bit;
  }
  return table;
}

double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

}  // namespace

GraphFunctionState build_graph_function_state(int n_vertices, const GraphOracle& f) {
  require_vertices(n_vertices);
  const std::uint64_t m = std::uint64_t{1} << num_edge_slots(n_vertices);
  std::vector<int> table = tabulate(n_vertices, f, m);
  CVector amp = CVector::Zero(static_cast<Eigen::Index>(2 * m));
  const double a = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::uint64_t g = 0; g < m; ++g) amp(static_cast<Eigen::Index>(2 * g + table[g])) = a;
  PureState state(std::move(amp), Dims(static_cast<std::size_t>(num_edge_slots(n_vertices) + 1), 2));
  return {n_vertices, m, std::move(table), std::move(state)};
}

ClassicalDistribution classical_distribution(int n_vertices, const GraphOracle& f) {
  require_vertices(n_vertices);
  ClassicalDistribution d;
  d.n_vertices = n_vertices;
  d.num_graphs = std::uint64_t{1} << num_edge_slots(n_vertices);
  const std::vector<int> table = tabulate(n_vertices, f, d.num_graphs);
  const double w = 1.0 / static_cast<double>(d.num_graphs);
  d.p.assign(d.num_graphs, {0.0, 0.0});
  std::vector<double> pg(d.num_graphs, 0.0), joint;
  std::array<double, 2> px{0.0, 0.0};
  for (std::uint64_t g = 0; g < d.num_graphs; ++g) {
    d.p[g][table[g]] = w;
    for (int x = 0; x < 2; ++x) {
      pg[g] += d.p[g][x];
      px[x] += d.p[g][x];
      joint.push_back(d.p[g][x]);
    }
  }
  d.q = px[1];
  d.entropy_graph = shannon(pg);
  d.entropy_x = shannon({px[0], px[1]});
  d.joint_entropy = shannon(joint);
  d.mutual_information = d.entropy_graph + d.entropy_x - d.joint_entropy;
  return d;
}

std::vector<CutEntropy> graph_state_entanglement_profile(const GraphFunctionState& gfs,
                                                         const std::vector<Cut>& cuts) {
  std::vector<CutEntropy> out;
  for (const Cut& cut : cuts) {
    if (cut.num_subsystems() != gfs.state.num_subsystems()) {
      throw std::invalid_argument("cut does not match the graph-function state");
    }
    const Side smaller = cut.side_a().size() <= cut.side_b().size() ? Side::A : Side::B;
    out.push_back({cut, von_neumann_entropy(reduced_state(gfs.state, cut, smaller))});
  }
  return out;
}

}  // namespace entunit
