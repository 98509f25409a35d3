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

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "entunit/comp_entanglement.hpp"
#include "entunit/quantum_state.hpp"

namespace entunit::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2 };

/// Malformed command line; exits with kUsageError.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one command line (without the program name). The JSON report goes to
/// `out` unless --out names a file; summaries and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// State files: {"dims", "kind": "pure", "amplitudes": [[re, im], ...]},
// {"dims", "kind": "mixed", "matrix": [[[re, im], ...], ...]}, or
// {"named": "<spec>"} for anything make_named_state accepts.
Json state_to_json(const State& s);
State state_from_json(const Json& j);
State read_state_file(const std::string& path);
void write_state_file(const State& s, const std::string& path);

/// A state argument: a path to a state file if one exists (or the argument
/// ends in .json), otherwise a named-state spec.
State resolve_state(const std::string& arg);

/// "0,1/2,3": indices left of the slash form side A.
Cut parse_cut(std::string_view text, int num_subsystems);

Json circuit_to_json(const Circuit& c);

/// Rounds every floating-point value to 12 significant digits; non-finite
/// values become the strings "inf", "-inf", "nan".
Json normalize_numbers(const Json& j);

}  // namespace entunit::cli
