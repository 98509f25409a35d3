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

#include "entunit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "entunit/locc_sim.hpp"
#include "entunit/measures.hpp"
#include "entunit/unit_calculus.hpp"

namespace entunit::cli {

// ---------------------------------------------------------------------------
// State files

namespace {

Json complex_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("state_file_schema", "complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Dims parse_dims_field(const Json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw ValidationError("state_file_schema", "\"dims\" must be a nonempty array of integers");
  }
  Dims dims;
  for (const Json& d : j["dims"]) {
    if (!d.is_number_integer()) throw ValidationError("state_file_schema", "dims must be integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

}  // namespace

Json state_to_json(const State& s) {
  Json j = Json::object();
  if (const auto* psi = std::get_if<PureState>(&s)) {
    j["dims"] = psi->dims();
    j["kind"] = "pure";
    Json amps = Json::array();
    for (const Complex& z : psi->amplitudes()) amps.push_back(complex_pair(z));
    j["amplitudes"] = std::move(amps);
  } else {
    const auto& rho = std::get<DensityMatrix>(s);
    j["dims"] = rho.dims();
    j["kind"] = "mixed";
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) row.push_back(complex_pair(rho.matrix()(r, c)));
      rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
  }
  return j;
}

State state_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("state_file_schema", "state file must hold a JSON object");
  if (j.contains("named")) {
    if (!j["named"].is_string()) throw ValidationError("state_file_schema", "\"named\" must be a string");
    return make_named_state(j["named"].get<std::string>());
  }
  const Dims dims = parse_dims_field(j);
  std::string kind;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ValidationError("state_file_schema", "\"kind\" must be a string");
    kind = j["kind"].get<std::string>();
  } else {
    kind = j.contains("matrix") ? "mixed" : "pure";
  }
  if (kind == "pure") {
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
      throw ValidationError("state_file_schema", "pure states need an \"amplitudes\" array");
    }
    CVector v(static_cast<Eigen::Index>(j["amplitudes"].size()));
    for (std::size_t i = 0; i < j["amplitudes"].size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j["amplitudes"][i]);
    return PureState(std::move(v), dims);
  }
  if (kind == "mixed") {
    if (!j.contains("matrix") || !j["matrix"].is_array()) {
      throw ValidationError("state_file_schema", "mixed states need a \"matrix\" array");
    }
    const Json& rows = j["matrix"];
    const auto n = static_cast<Eigen::Index>(rows.size());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const Json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ValidationError("state_file_schema", "density matrix must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
    }
    return DensityMatrix(std::move(m), dims);
  }
  throw ValidationError("state_file_schema", "\"kind\" must be \"pure\" or \"mixed\"");
}

State read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("state_file_readable", "cannot open '" + path + "'");
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ValidationError("state_file_json", "'" + path + "' is not valid JSON");
  return state_from_json(j);
}

void write_state_file(const State& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << state_to_json(s).dump(2) << '\n';
}

State resolve_state(const std::string& arg) {
  const bool looks_like_file = arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0;
  if (looks_like_file || std::filesystem::is_regular_file(arg)) return read_state_file(arg);
  return make_named_state(arg);
}

// ---------------------------------------------------------------------------
// Cuts, circuits, numbers

namespace {

std::vector<int> parse_index_list(std::string_view text, std::string_view whole) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string_view tok = text.substr(start, end - start);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string_view::npos) {
      throw UsageError("malformed cut '" + std::string(whole) + "'; expected e.g. 0,1/2");
    }
    out.push_back(std::stoi(std::string(tok)));
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string cut_to_string(const Cut& c) { return join(c.side_a()) + "/" + join(c.side_b()); }

}  // namespace

Cut parse_cut(std::string_view text, int num_subsystems) {
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos || text.find('/', slash + 1) != std::string_view::npos) {
    throw UsageError("malformed cut '" + std::string(text) + "'; exactly one '/' is required");
  }
  return Cut(parse_index_list(text.substr(0, slash), text), parse_index_list(text.substr(slash + 1), text),
             num_subsystems);
}

Json circuit_to_json(const Circuit& c) {
  Json gates = Json::array();
  for (const Gate& g : c.gates()) {
    Json gj = Json::object();
    gj["name"] = g.name;
    if (g.kind == Gate::Kind::cz) {
      gj["qubits"] = {g.a, g.b};
    } else {
      gj["qubits"] = {g.a};
      gj["unitary"] = Json::array({Json::array({complex_pair(g.u(0, 0)), complex_pair(g.u(0, 1))}),
                                   Json::array({complex_pair(g.u(1, 0)), complex_pair(g.u(1, 1))})});
    }
    gates.push_back(std::move(gj));
  }
  Json j = Json::object();
  j["num_qubits"] = c.num_qubits();
  j["cz_count"] = c.cost();
  j["gates"] = std::move(gates);
  return j;
}

Json normalize_numbers(const Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;  // no negative zero
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const Json& x : j) out.push_back(normalize_numbers(x));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = normalize_numbers(v);
    return out;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct Globals {
  double tol = 1e-10;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out_path;
};

struct Report {
  Json inputs = Json::object();
  Json results = Json::object();
  Json tolerances = Json::object();
  Json warnings = Json::array();
  std::string summary;
};

std::uint64_t require_seed(const Globals& g, const char* command) {
  if (!g.seed) throw UsageError(std::string(command) + " is randomized; pass --seed");
  return *g.seed;
}

Json measure_json(const MeasureValue& m) {
  Json j = Json::object();
  j["value"] = m.value;
  j["kind"] = to_string(m.kind);
  j["method"] = m.method;
  j["tolerance"] = m.tolerance;
  return j;
}

Cut default_cut(const std::optional<std::string>& text, int n) {
  if (text) return parse_cut(*text, n);
  if (n == 2) return Cut({0}, {1}, 2);
  throw UsageError("--cut is required for states with more than two subsystems");
}

Json formatting_tolerances() {
  Json t = Json::object();
  t["validation"] = kValidationTol;
  t["schmidt_rank_threshold"] = kSchmidtRankThreshold;
  return t;
}

// measure ------------------------------------------------------------------

struct MeasureArgs {
  std::string state;
  std::optional<std::string> cut;
  bool hashing = false;
  std::string emit_state;
};

Report cmd_measure(const MeasureArgs& a, const Globals& g) {
  Report r;
  const State s = resolve_state(a.state);
  const Dims dims = std::visit([](const auto& x) { return x.dims(); }, s);
  const Cut cut = default_cut(a.cut, static_cast<int>(dims.size()));
  r.inputs["state"] = a.state;
  r.inputs["cut"] = cut_to_string(cut);
  r.inputs["hashing"] = a.hashing;
  r.results["dims"] = dims;
  r.tolerances = formatting_tolerances();

  if (const auto* psi = std::get_if<PureState>(&s)) {
    const MeasureValue e = pure_state_entanglement(*psi, cut);
    const SchmidtDecomposition sd = schmidt_decompose(*psi, cut);
    r.results["kind"] = "pure";
    r.results["entanglement"] = e.value;
    r.results["entanglement_measure"] = measure_json(e);
    r.results["schmidt_rank"] = schmidt_rank(*psi, cut);
    r.results["schmidt_coefficients"] = std::vector<double>(sd.coefficients.begin(), sd.coefficients.end());
    const DistillableBounds d = distillable_bounds(*psi, cut);
    r.results["distillable"] = {{"lower", measure_json(d.lower)}, {"upper", measure_json(d.upper)}};
    r.summary = "entanglement " + std::to_string(e.value) + " ebits across " + cut_to_string(cut);
  } else {
    const auto& rho = std::get<DensityMatrix>(s);
    r.results["kind"] = "mixed";
    r.results["purity"] = rho.purity();
    r.results["entropy"] = von_neumann_entropy(rho);
    r.results["entropy_a"] = von_neumann_entropy(partial_trace(rho, cut, Side::A));
    r.results["entropy_b"] = von_neumann_entropy(partial_trace(rho, cut, Side::B));
    DistillableOptions opts;
    opts.hashing = a.hashing;
    if (dims == Dims{2, 2}) {
      const MeasureValue eof = eof_two_qubit(rho);
      r.results["concurrence"] = concurrence(rho);
      r.results["entanglement_of_formation"] = measure_json(eof);
      r.summary = "entanglement of formation " + std::to_string(eof.value) + " ebits";
    } else {
      opts.roof.seed = require_seed(g, "measure on a mixed state outside two qubits");
      opts.roof.workers = g.workers;
      r.warnings.push_back("formation bound from a convex-roof search; it is an upper bound");
      r.summary = "distillable bounds from a convex-roof search";
    }
    const DistillableBounds d = distillable_bounds(rho, cut, opts);
    r.results["distillable"] = {{"lower", measure_json(d.lower)}, {"upper", measure_json(d.upper)}};
  }
  if (!a.emit_state.empty()) {
    write_state_file(s, a.emit_state);
    r.inputs["emit_state"] = a.emit_state;
  }
  return r;
}

// roof ---------------------------------------------------------------------

struct RoofArgs {
  std::string state;
  std::optional<std::string> cut;
  int ensemble_size = 0;
  int restarts = RoofOptions{}.restarts;
  int max_iters = RoofOptions{}.max_iters;
};

Report cmd_roof(const RoofArgs& a, const Globals& g) {
  Report r;
  const DensityMatrix rho = to_density(resolve_state(a.state));
  const Cut cut = default_cut(a.cut, rho.num_subsystems());
  RoofOptions opts;
  opts.ensemble_size = a.ensemble_size;
  opts.restarts = a.restarts;
  opts.max_iters = a.max_iters;
  opts.tol = g.tol;
  opts.seed = require_seed(g, "roof");
  opts.workers = g.workers;

  r.inputs["state"] = a.state;
  r.inputs["cut"] = cut_to_string(cut);
  r.inputs["ensemble_size"] = a.ensemble_size;
  r.inputs["restarts"] = a.restarts;
  r.inputs["max_iters"] = a.max_iters;
  r.tolerances = formatting_tolerances();
  r.tolerances["roof_tol"] = opts.tol;

  const RoofResult res = convex_roof_eof(rho, cut, opts);
  r.results["entanglement_of_formation"] = measure_json(res.value);
  r.results["rank"] = res.rank;
  r.results["ensemble_size"] = res.ensemble_size;
  r.results["restart_values"] = res.restart_values;
  r.results["decomposition_weights"] = res.decomposition.weights;
  if (rho.dims() == Dims{2, 2}) {
    const MeasureValue closed = eof_two_qubit(rho);
    r.results["closed_form"] = measure_json(closed);
    r.results["gap_to_closed_form"] = res.value.value - closed.value;
  }
  r.warnings.push_back("convex-roof search value is an upper bound on the entanglement of formation");
  r.summary = "convex-roof value " + std::to_string(res.value.value) + " ebits";
  return r;
}

// units --------------------------------------------------------------------

MeasureRecord parse_record(const std::string& text, const std::string& label) {
  std::optional<double> f, d;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("record '" + text + "' must look like F=x,D=y");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    char* end = nullptr;
    const double x = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0') throw UsageError("'" + val + "' is not a number in '" + text + "'");
    if (key == "F") {
      f = x;
    } else if (key == "D") {
      d = x;
    } else {
      throw UsageError("unknown key '" + key + "' in '" + text + "'");
    }
  }
  if (!f || !d) throw UsageError("record '" + text + "' needs both F and D");
  return {label, *f, *d};
}

Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

struct UnitsArgs {
  std::string sigma;
  std::optional<std::string> rho;
  double threshold = kRatioThreshold;
};

Report cmd_units(const UnitsArgs& a, const Globals&) {
  Report r;
  const MeasureRecord sigma = parse_record(a.sigma, "sigma");
  r.inputs["sigma"] = a.sigma;
  if (a.rho) r.inputs["rho"] = *a.rho;
  r.inputs["threshold"] = a.threshold;
  r.tolerances["ratio_threshold"] = a.threshold;

  const SpecialValues sv = special_values(sigma);
  r.results["special_values"] = {{"formation_sigma_sigma", sv.formation_sigma_sigma},
                                 {"distillable_sigma_sigma", sv.distillable_sigma_sigma},
                                 {"formation_sigma_bell", sv.formation_sigma_bell},
                                 {"distillable_sigma_bell", sv.distillable_sigma_bell}};
  const RatioCertificate c = ratio_certificate(sigma, a.threshold);
  r.results["certificate"] = {{"sigma_unit_ratio", c.sigma_unit_ratio},
                              {"bell_unit_ratio", c.bell_unit_ratio},
                              {"formation_sigma_unit_ratio", c.formation_sigma_unit_ratio},
                              {"formation_bell_unit_ratio", c.formation_bell_unit_ratio},
                              {"gap", c.gap},
                              {"ratio_problem_present", c.ratio_problem_present}};
  if (sigma.distillable() == 0.0) r.warnings.push_back("unit has D = 0; the F_sigma upper end is unbounded");
  if (a.rho) {
    const MeasureRecord rho = parse_record(*a.rho, "rho");
    const SigmaUnitBounds b = sigma_unit_bounds(rho, sigma);
    r.results["formation_interval"] = interval_json(b.formation);
    r.results["distillable_interval"] = interval_json(b.distillable);
  }
  r.summary = "ratio gap " + std::to_string(c.gap) + (c.ratio_problem_present ? " (unit dependent)" : "");
  return r;
}

// protocol -----------------------------------------------------------------

Json party_json(Party p) { return to_string(p); }

Json totals_json(const ResourceTotals& t) {
  return {{"ebits_consumed", t.ebits_consumed},
          {"cbits_alice_to_bob", t.cbits_alice_to_bob},
          {"cbits_bob_to_alice", t.cbits_bob_to_alice},
          {"qubits_transmitted", t.qubits_transmitted}};
}

Json transcript_json(const ProtocolTranscript& t) {
  Json steps = Json::array();
  for (const auto& step : t.steps) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          Json j = Json::object();
          if constexpr (std::is_same_v<T, LocalUnitaryStep>) {
            j["type"] = "local_unitary";
            j["party"] = party_json(s.party);
            j["qubits"] = s.qubits;
            j["gate"] = s.gate;
          } else if constexpr (std::is_same_v<T, MeasurementStep>) {
            j["type"] = "measurement";
            j["party"] = party_json(s.party);
            j["qubit"] = s.qubit;
            j["basis"] = s.basis == Basis::z ? "z" : "x";
            j["outcome"] = s.outcome;
            j["probability"] = s.probability;
          } else if constexpr (std::is_same_v<T, ClassicalMessageStep>) {
            j["type"] = "classical_message";
            j["from"] = party_json(s.from);
            j["to"] = party_json(s.to);
            j["bits"] = s.bits;
          } else {
            j["type"] = s.kind == ResourceKind::ebit ? "ebit" : "qubit_transmission";
            j["qubits"] = s.qubits;
            j["from"] = party_json(s.from);
            j["to"] = party_json(s.to);
          }
          steps.push_back(std::move(j));
        },
        step);
  }
  Json owners = Json::array();
  for (Party p : t.initial_owners) owners.push_back(party_json(p));
  Json j = Json::object();
  j["protocol"] = t.protocol;
  j["initial_owners"] = std::move(owners);
  j["input_qubits"] = t.input_qubits;
  j["steps"] = std::move(steps);
  j["outcomes"] = t.outcomes;
  j["branch_probability"] = t.branch_probability;
  j["output_qubits"] = t.output_qubits;
  j["resource_totals"] = totals_json(t.totals);
  j["respects_locc"] = respects_locc(t);
  return j;
}

CMatrix cz_unitary() {
  CMatrix m = CMatrix::Identity(4, 4);
  m(3, 3) = -1.0;
  return m;
}

struct ProtocolArgs {
  std::string name;
  std::optional<std::string> state;
  int count = 1;
  bool verify = false;
};

PureState protocol_input(const std::optional<std::string>& arg, int qubits, std::uint64_t seed, Report& r) {
  if (!arg) {
    r.inputs["state"] = "random_pure:" + std::string(qubits == 1 ? "2" : "2,2") + ":" + std::to_string(seed);
    return random_pure_state(Dims(static_cast<std::size_t>(qubits), 2), seed);
  }
  r.inputs["state"] = *arg;
  const State s = resolve_state(*arg);
  const auto* psi = std::get_if<PureState>(&s);
  if (!psi) throw ValidationError("protocol_input", "protocol inputs must be pure states");
  return *psi;
}

Report cmd_protocol(const ProtocolArgs& a, const Globals& g) {
  Report r;
  const std::uint64_t seed = require_seed(g, "protocol");
  r.inputs["protocol"] = a.name;
  r.inputs["verify"] = a.verify;
  r.tolerances["branch_fidelity"] = 1e-10;
  r.tolerances["channel"] = 1e-9;

  const std::string prefix = "reduction:";
  if (a.name.rfind(prefix, 0) == 0) {
    const Reduction dir = parse_reduction(a.name.substr(prefix.size()));
    std::optional<PureState> target;
    if (dir == Reduction::creation_via_ebits) {
      if (!a.state) throw UsageError("reduction:creation_via_ebits needs --state with a two-qubit pure target");
      target = protocol_input(a.state, 2, seed, r);
      r.warnings.push_back("single-copy demo: costs 1 ebit per copy, not the asymptotic entanglement of formation");
    } else {
      r.inputs["count"] = a.count;
    }
    const ReductionReport rep = reduction_demo(dir, a.count, target, seed);
    Json units = Json::array();
    for (const auto& t : rep.units) units.push_back(transcript_json(t));
    r.results["direction"] = to_string(rep.direction);
    r.results["resource_totals"] = totals_json(rep.totals);
    r.results["unit_fidelities"] = rep.unit_fidelities;
    r.results["min_fidelity"] = rep.min_fidelity;
    r.results["units"] = std::move(units);
    r.summary = std::string(to_string(dir)) + ": " + std::to_string(rep.units.size()) + " unit(s), min fidelity " +
                std::to_string(rep.min_fidelity);
    return r;
  }

  ProtocolSpec spec;
  CMatrix ideal;
  if (a.name == "teleport") {
    spec = teleport_protocol();
    ideal = CMatrix::Identity(2, 2);
  } else if (a.name == "nonlocal-cz") {
    spec = nonlocal_cz_protocol();
    ideal = cz_unitary();
  } else {
    throw UsageError("unknown protocol '" + a.name + "'; use teleport, nonlocal-cz or reduction:<name>");
  }
  const PureState input = protocol_input(a.state, spec.input_qubits, seed, r);
  const PureState expected(Unchecked{}, ideal * input.amplitudes(), input.dims());

  const ProtocolTranscript t = spec.run(input, OutcomeSource::sampled(seed));
  r.results["transcript"] = transcript_json(t);
  const double f = t.output_state ? fidelity(*t.output_state, expected) : 0.0;
  r.results["output_fidelity"] = f;
  r.summary = a.name + ": fidelity " + std::to_string(f);

  if (a.verify) {
    const auto branches = expand_branches(spec, input);
    double total = 0.0, worst = 1.0;
    bool local = true;
    for (const auto& b : branches) {
      total += b.branch_probability;
      if (b.branch_probability > 1e-14) worst = std::min(worst, b.output_state ? fidelity(*b.output_state, expected) : 0.0);
      local = local && respects_locc(b);
    }
    const ChannelMatrix ch = induced_channel(spec);
    r.results["verification"] = {{"branches", branches.size()},
                                 {"branch_probability_sum", total},
                                 {"min_branch_fidelity", worst},
                                 {"all_branches_respect_locc", local},
                                 {"process_fidelity", channel_process_fidelity(ch, ideal)},
                                 {"min_choi_eigenvalue", ch.min_choi_eigenvalue()},
                                 {"trace_preservation_error", ch.trace_preservation_error()}};
    r.summary += ", process fidelity " + std::to_string(channel_process_fidelity(ch, ideal));
  }
  return r;
}

// synth --------------------------------------------------------------------

Json search_json(const SearchResult& s) {
  Json j = Json::object();
  j["count"] = s.count ? Json(*s.count) : Json(nullptr);
  j["certified"] = s.certified;
  j["status"] = s.status;
  j["lower"] = s.lower;
  j["best_fidelity"] = s.best_fidelity;
  j["optimizations"] = s.optimizations;
  j["witness"] = s.witness ? circuit_to_json(*s.witness) : Json(nullptr);
  return j;
}

struct SynthArgs {
  std::string state;
  std::optional<int> max_k;
  int restarts = SearchOptions{}.restarts;
  double rank_threshold = kSchmidtRankThreshold;
};

Report cmd_synth(const SynthArgs& a, const Globals& g) {
  Report r;
  SearchOptions opts;
  opts.seed = require_seed(g, "synth");
  opts.workers = g.workers;
  opts.restarts = a.restarts;
  opts.rank_threshold = a.rank_threshold;
  const State s = resolve_state(a.state);
  const auto* psi = std::get_if<PureState>(&s);
  if (!psi) throw ValidationError("synth_input", "synth needs a pure target state");

  r.inputs["state"] = a.state;
  r.inputs["max_k"] = a.max_k ? Json(*a.max_k) : Json(nullptr);
  r.inputs["restarts"] = a.restarts;
  r.tolerances["rank_threshold"] = a.rank_threshold;
  r.tolerances["witness_fidelity"] = kWitnessFidelity;

  const CZBoundReport rep = cz_bound_report(*psi, a.state, a.max_k, opts);
  Json cuts = Json::array();
  for (const auto& c : rep.lower.cuts) {
    cuts.push_back({{"cut", cut_to_string(c.cut)}, {"schmidt_rank", c.schmidt_rank}, {"required", c.required}});
  }
  Json alloc = Json::array();
  for (std::size_t p = 0; p < rep.lower.pairs.size(); ++p) {
    if (rep.lower.allocation[p] == 0) continue;
    alloc.push_back({{"pair", {rep.lower.pairs[p].first, rep.lower.pairs[p].second}},
                     {"count", rep.lower.allocation[p]}});
  }
  r.results["label"] = rep.label;
  r.results["lower"] = {{"value", rep.lower.value}, {"cuts", std::move(cuts)}, {"allocation", std::move(alloc)}};
  r.results["upper"] = {{"value", rep.upper.value},
                        {"strategies", rep.upper.strategies},
                        {"witness_fidelity", rep.upper.fidelity},
                        {"witness", circuit_to_json(rep.upper.witness)}};
  r.results["search"] = rep.search ? search_json(*rep.search) : Json(nullptr);
  r.warnings.push_back("counts are single-copy exact preparation costs; the asymptotic per-copy ratio is not computed");
  r.warnings.push_back("ancilla-assisted preparation is not modeled by either bound");
  r.summary = "cz count in [" + std::to_string(rep.lower.value) + ", " + std::to_string(rep.upper.value) + "]";
  if (rep.search && rep.search->count) {
    r.summary += ", search " + std::to_string(*rep.search->count) + " (" + rep.search->status + ")";
  }
  return r;
}

// graphstate ---------------------------------------------------------------

struct GraphArgs {
  int n = 3;
  std::string f = "hamiltonian";
  std::string profile = "fn-cut";
  std::vector<std::string> cuts;
};

Report cmd_graphstate(const GraphArgs& a, const Globals&) {
  Report r;
  const GraphOracle f = named_graph_oracle(a.f);
  r.inputs["n"] = a.n;
  r.inputs["f"] = a.f;
  r.inputs["profile"] = a.profile;
  r.inputs["cuts"] = a.cuts;
  r.tolerances["entropy_cutoff"] = 1e-12;

  const GraphFunctionState gfs = build_graph_function_state(a.n, f);
  const ClassicalDistribution cd = classical_distribution(a.n, f);
  const int qubits = gfs.state.num_subsystems();
  std::vector<Cut> cuts;
  if (a.profile == "fn-cut") {
    cuts.push_back(gfs.function_cut());
  } else if (a.profile == "edges") {
    for (int e = 0; e < gfs.num_edges(); ++e) cuts.push_back(Cut::from_side_a({e}, qubits));
  } else if (a.profile != "none") {
    throw UsageError("--profile must be fn-cut, edges or none");
  }
  for (const auto& text : a.cuts) cuts.push_back(parse_cut(text, qubits));

  Json profile = Json::array();
  for (const CutEntropy& ce : graph_state_entanglement_profile(gfs, cuts)) {
    profile.push_back({{"cut", cut_to_string(ce.cut)}, {"entropy", ce.entropy}});
  }
  const int ones = static_cast<int>(std::count(gfs.f_table.begin(), gfs.f_table.end(), 1));
  r.results["num_graphs"] = gfs.num_graphs;
  r.results["edge_qubits"] = gfs.num_edges();
  r.results["state_dim"] = gfs.state.dim();
  r.results["f_ones"] = ones;
  r.results["q"] = cd.q;
  r.results["classical"] = {{"entropy_graph", cd.entropy_graph},
                            {"entropy_x", cd.entropy_x},
                            {"joint_entropy", cd.joint_entropy},
                            {"mutual_information", cd.mutual_information}};
  r.results["profile"] = std::move(profile);
  if (a.f == "hamiltonian" && a.n < 3) {
    r.warnings.push_back("simple graphs on fewer than 3 vertices have no Hamiltonian cycle");
  }
  r.summary = "M = " + std::to_string(gfs.num_graphs) + ", q = " + std::to_string(cd.q) +
              ", I(G;X) = " + std::to_string(cd.mutual_information);
  return r;
}

// ---------------------------------------------------------------------------

void emit(const Json& doc, const Globals& g, std::ostream& out) {
  const std::string text = normalize_numbers(doc).dump(2) + "\n";
  if (g.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.out_path);
  if (!f) throw std::runtime_error("cannot write '" + g.out_path + "'");
  f << text;
}

Json report_json(const std::string& command, const Report& r, const Globals& g) {
  Json j = Json::object();
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["inputs"] = r.inputs;
  j["results"] = r.results;
  j["tolerances"] = r.tolerances;
  j["seed"] = g.seed ? Json(*g.seed) : Json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

Json error_json(const std::string& command, const std::string& invariant, const std::string& message) {
  Json j = Json::object();
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["error"] = {{"invariant", invariant}, {"message", message}};
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures, unit calculus, LOCC protocols and CZ-cost bounds", "entunit"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--tol", g.tol, "Convergence tolerance for iterative searches");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every randomized step");
  app.add_option("--workers", g.workers, "Worker threads for parallel searches")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_path, "Write the report to this path instead of stdout");

  MeasureArgs measure;
  auto* m = app.add_subcommand("measure", "Pure-state and two-qubit measures, distillable bounds");
  m->add_option("--state", measure.state, "Named state or state file")->required();
  m->add_option("--cut", measure.cut, "Bipartition, e.g. 0,1/2");
  m->add_flag("--hashing", measure.hashing, "Add the hashing lower bound for mixed states");
  m->add_option("--emit-state", measure.emit_state, "Also write the parsed state as a state file");

  RoofArgs roof;
  auto* ro = app.add_subcommand("roof", "Convex-roof search for the entanglement of formation");
  ro->add_option("--state", roof.state, "Named state or state file")->required();
  ro->add_option("--cut", roof.cut, "Bipartition, e.g. 0/1");
  ro->add_option("--ensemble-size", roof.ensemble_size, "Ensemble members (0: rank + 2)");
  ro->add_option("--restarts", roof.restarts, "Random restarts")->check(CLI::PositiveNumber);
  ro->add_option("--max-iters", roof.max_iters, "Iteration cap per restart")->check(CLI::PositiveNumber);

  UnitsArgs units;
  auto* u = app.add_subcommand("units", "Bounds in a sigma unit and the ratio certificate");
  u->add_option("--sigma", units.sigma, "Unit record, F=x,D=y")->required();
  u->add_option("--rho", units.rho, "Target record, F=x,D=y");
  u->add_option("--threshold", units.threshold, "Gap threshold for the certificate");

  ProtocolArgs protocol;
  auto* p = app.add_subcommand("protocol", "Run an LOCC protocol");
  p->add_option("name", protocol.name, "teleport | nonlocal-cz | reduction:<name>")->required();
  p->add_option("--state", protocol.state, "Input (or target) pure state");
  p->add_option("--count", protocol.count, "Units for the rate demos")->check(CLI::PositiveNumber);
  p->add_flag("--verify", protocol.verify, "Expand all branches and reconstruct the channel");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "Lower and upper bounds on the cz count");
  sy->add_option("--state", synth.state, "Target pure qubit state")->required();
  sy->add_option("--max-k", synth.max_k, "Run the exact search up to this many cz gates");
  sy->add_option("--restarts", synth.restarts, "Restarts per skeleton")->check(CLI::PositiveNumber);
  sy->add_option("--rank-threshold", synth.rank_threshold, "Singular values at or above this count toward rank");

  GraphArgs graph;
  auto* gs = app.add_subcommand("graphstate", "Graph-function state and its classical counterpart");
  gs->add_option("--n", graph.n, "Number of vertices")->required();
  gs->add_option("--f", graph.f, "hamiltonian | parity | const0");
  gs->add_option("--profile", graph.profile, "fn-cut | edges | none");
  gs->add_option("--cut", graph.cuts, "Extra cuts over the edge and function qubits");

  std::vector<std::string> storage{"entunit"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsageError;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Report r;
    if (command == "measure") {
      r = cmd_measure(measure, g);
    } else if (command == "roof") {
      r = cmd_roof(roof, g);
    } else if (command == "units") {
      r = cmd_units(units, g);
    } else if (command == "protocol") {
      r = cmd_protocol(protocol, g);
    } else if (command == "synth") {
      r = cmd_synth(synth, g);
    } else {
      r = cmd_graphstate(graph, g);
    }
    emit(report_json(command, r, g), g, out);
    err << command << ": " << r.summary << "\n";
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ValidationError& e) {
    emit(error_json(command, e.invariant(), e.what()), g, out);
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    emit(error_json(command, "input", e.what()), g, out);
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

}  // namespace entunit::cli
