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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "entunit/comp_entanglement.hpp"
#include "entunit/locc_sim.hpp"
#include "entunit/measures.hpp"
#include "entunit/unit_calculus.hpp"
#include "test_support.hpp"

using namespace entunit;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << what;
      ok = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

bool criterion(int id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget_s > 0.0 && secs >= budget_s) {
    std::ostringstream s;
    s << "runtime " << secs << " s exceeds " << budget_s << " s";
    c.require(false, s.str());
  }
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.ok ? "" : " -- ",
              c.detail.str().c_str());
  std::fflush(stdout);
  return c.ok;
}

MeasureRecord random_record(std::mt19937_64& rng, const char* label) {
  std::uniform_real_distribution<double> f(0.01, 5.0), frac(0.0, 1.0);
  const double formation = f(rng);
  return {label, formation, formation * frac(rng)};
}

CMatrix cz() {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

}  // namespace

int main() {
  const Cut two({0}, {1}, 2);
  bool all = true;

  all &= criterion(1, "pure-state EoF equals reduced entropy on 500 states", 5.0, [&](Check& c) {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 500; ++seed) {
      const PureState psi = random_pure_state({2, 2}, seed);
      worst = std::max(worst, std::abs(eof_two_qubit(psi.projector()).value - pure_state_entanglement(psi, two).value));
    }
    c.require(worst <= 1e-6, "max deviation " + std::to_string(worst));
  });

  all &= criterion(2, "convex roof within [closed - 1e-9, closed + 5e-3] on 20 mixed states", 120.0, [&](Check& c) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const int rank = 2 + static_cast<int>(seed % 3);
      const DensityMatrix rho = random_mixed_state({2, 2}, rank, 1000 + seed);
      RoofOptions opts;
      opts.seed = seed;
      const double roof = convex_roof_eof(rho, two, opts).value.value;
      const double closed = eof_two_qubit(rho).value;
      std::ostringstream s;
      s << "seed " << seed << " rank " << rank << ": roof " << roof << " vs closed " << closed;
      c.require(roof >= closed - 1e-9 && roof <= closed + 5e-3, s.str());
    }
  });

  all &= criterion(3, "10 separable mixtures give convex roof <= 1e-4", 0.0, [&](Check& c) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DensityMatrix rho = test_support::separable_mixture(2 + static_cast<int>(seed % 5), seed);
      RoofOptions opts;
      opts.seed = seed;
      const double roof = convex_roof_eof(rho, two, opts).value.value;
      c.require(roof <= 1e-4, "seed " + std::to_string(seed) + ": " + std::to_string(roof));
    }
  });

  all &= criterion(4, "unit calculus certificates and special values", 1.0, [&](Check& c) {
    const RatioCertificate r = ratio_certificate(MeasureRecord("sigma", 2, 1));
    c.require(r.sigma_unit_ratio == 2.0 && r.bell_unit_ratio == 1.0, "ratios for (2, 1)");
    c.require(r.gap == 1.0 && r.ratio_problem_present, "gap/flag for (2, 1)");
    const RatioCertificate b = ratio_certificate(MeasureRecord::bell());
    c.require(b.gap == 0.0 && !b.ratio_problem_present, "Bell gap");
    std::mt19937_64 rng(4);
    const MeasureRecord bell = MeasureRecord::bell();
    for (int i = 0; i < 1000; ++i) {
      const MeasureRecord s = random_record(rng, "sigma");
      if (s.formation() == 0.0) continue;
      const SpecialValues sv = special_values(s);
      c.require(sigma_formation_bounds(s, s).contains(sv.formation_sigma_sigma, 1e-12) &&
                    sigma_distillable_bounds(s, s).contains(sv.distillable_sigma_sigma, 1e-12) &&
                    sigma_formation_bounds(bell, s).contains(sv.formation_sigma_bell, 1e-12) &&
                    sigma_distillable_bounds(bell, s).contains(sv.distillable_sigma_bell, 1e-12),
                "special value outside its interval");
    }
  });

  all &= criterion(5, "teleport and nonlocal CZ exact under full-branch tomography", 5.0, [&](Check& c) {
    const double ft = channel_process_fidelity(induced_channel(teleport_protocol()), CMatrix::Identity(2, 2));
    const double fc = channel_process_fidelity(induced_channel(nonlocal_cz_protocol()), cz());
    c.require(std::abs(ft - 1.0) <= 1e-10, "teleport process fidelity " + std::to_string(ft));
    c.require(std::abs(fc - 1.0) <= 1e-10, "nonlocal CZ process fidelity " + std::to_string(fc));
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      for (const auto& t : expand_branches(teleport_protocol(), random_pure_state({2}, seed))) {
        c.require(t.totals == ResourceTotals{1, 2, 0, 0}, "teleport totals");
      }
      for (const auto& t : expand_branches(nonlocal_cz_protocol(), random_pure_state({2, 2}, seed))) {
        c.require(t.totals == ResourceTotals{1, 1, 1, 0}, "nonlocal CZ totals");
        c.require(t.totals.cbits_alice_to_bob + t.totals.cbits_bob_to_alice == 2, "nonlocal CZ cbits");
      }
    }
  });

  all &= criterion(6, "CZ bounds: GHZ(3) certified at 2, Bell at 1, products at 0", 60.0, [&](Check& c) {
    SearchOptions opts;
    opts.seed = 1;
    const CZBoundReport ghz = cz_bound_report(ghz_state(3), "ghz:3", 3, opts);
    c.require(ghz.lower.value == 2, "GHZ lower " + std::to_string(ghz.lower.value));
    c.require(ghz.upper.value == 2 && ghz.upper.witness.cost() == 2, "GHZ witness cost");
    c.require(ghz.upper.fidelity >= 1.0 - 1e-6, "GHZ witness fidelity");
    c.require(ghz.search && ghz.search->count == 2 && ghz.search->certified, "GHZ search");

    const CZBoundReport bell = cz_bound_report(bell_state(), "bell", 2, opts);
    c.require(bell.lower.value == 1 && bell.upper.value == 1 && bell.search->count == 1, "Bell");
    c.require(bell.upper.fidelity >= 1.0 - 1e-6, "Bell witness fidelity");

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      PureState p = random_pure_state({2}, seed);
      for (int q = 1; q < 3; ++q) p = tensor_product(p, random_pure_state({2}, 10 * seed + q));
      const CZBoundReport prod = cz_bound_report(p, "product", 2, opts);
      c.require(prod.lower.value == 0 && prod.upper.value == 0 && prod.search->count == 0, "product");
    }
  });

  all &= criterion(7, "graph-function states against the enumeration oracle", 10.0, [&](Check& c) {
    int ones = 0;
    for (std::uint64_t g = 0; g < 8; ++g) ones += test_support::has_hamiltonian_cycle_dfs(test_support::graph_from_index(3, g));
    const double q = ones / 8.0;
    const double hq = -q * std::log2(q) - (1 - q) * std::log2(1 - q);
    const GraphFunctionState s3 = build_graph_function_state(3, hamiltonian_cycle_oracle);
    const double e3 = graph_state_entanglement_profile(s3, {s3.function_cut()})[0].entropy;
    c.require(std::abs(e3 - hq) <= 1e-9, "n=3 function-cut entropy " + std::to_string(e3));

    const auto t0 = Clock::now();
    const GraphFunctionState s4 = build_graph_function_state(4, hamiltonian_cycle_oracle);
    std::vector<Cut> cuts = {s4.function_cut()};
    for (int e = 0; e < s4.num_edges(); ++e) cuts.push_back(Cut::from_side_a({e}, s4.num_edges() + 1));
    const auto prof4 = graph_state_entanglement_profile(s4, cuts);
    c.require(std::chrono::duration<double>(Clock::now() - t0).count() < 10.0, "n=4 build/profile runtime");
    c.require(s4.num_graphs == 64 && s4.state.dim() == 128, "n=4 sizes");

    c.require(std::abs(classical_distribution(3, hamiltonian_cycle_oracle).mutual_information - e3) <= 1e-9,
              "n=3 classical vs quantum");
    c.require(std::abs(classical_distribution(4, hamiltonian_cycle_oracle).mutual_information - prof4[0].entropy) <=
                  1e-9,
              "n=4 classical vs quantum");
  });

  all &= criterion(8, "structural invariants", 0.0, [&](Check& c) {
    const std::vector<std::pair<Dims, std::vector<int>>> shapes = {
        {{2, 2}, {0}}, {{2, 3}, {0}}, {{3, 4}, {0}}, {{2, 2, 2}, {0, 2}}, {{2, 3, 2}, {1}}};
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const auto& [dims, side] = shapes[seed % shapes.size()];
      const PureState psi = random_pure_state(dims, seed);
      const Cut cut = Cut::from_side_a(side, static_cast<int>(dims.size()));
      const double sa = von_neumann_entropy(reduced_state(psi, cut, Side::A));
      const double sb = von_neumann_entropy(reduced_state(psi, cut, Side::B));
      c.require(std::abs(sa - sb) <= 1e-9, "entropy symmetry, seed " + std::to_string(seed));
    }
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      const Dims dims = seed % 2 ? Dims{2, 3} : Dims{2, 2, 2};
      const PureState psi = random_pure_state(dims, 500 + seed);
      const Cut cut = Cut::from_side_a({0}, static_cast<int>(dims.size()));
      PureState moved = psi;
      for (int s = 0; s < static_cast<int>(dims.size()); ++s) {
        moved = apply_local_unitary(moved, s, random_unitary(dims[s], 900 * seed + s));
      }
      const RVector before = schmidt_decompose(psi, cut).coefficients;
      const RVector after = schmidt_decompose(moved, cut).coefficients;
      c.require(before.size() == after.size() && (before - after).cwiseAbs().maxCoeff() <= 1e-9,
                "Schmidt invariance, seed " + std::to_string(seed));
    }
    std::mt19937_64 rng(10);
    for (int i = 0; i < 10000; ++i) {
      const MeasureRecord rho = random_record(rng, "rho");
      MeasureRecord sigma = random_record(rng, "sigma");
      const SigmaUnitBounds b = sigma_unit_bounds(rho, sigma);
      c.require(!b.formation.empty() && !b.distillable.empty(), "empty interval");
    }
  });

  return all ? 0 : 1;
}
