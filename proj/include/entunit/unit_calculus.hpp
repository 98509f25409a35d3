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

#include <limits>
#include <string>

namespace entunit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Formation and distillable entanglement of a labeled state, in ebits
/// (Bell pair = 1). Construction enforces 0 <= D <= F.
class MeasureRecord {
 public:
  MeasureRecord(std::string label, double formation, double distillable);

  static MeasureRecord bell() { return {"bell", 1.0, 1.0}; }

  const std::string& label() const noexcept { return label_; }
  double formation() const noexcept { return formation_; }
  double distillable() const noexcept { return distillable_; }

 private:
  std::string label_;
  double formation_;
  double distillable_;
};

/// Closed interval; `hi` may be +∞.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const noexcept { return lo > hi; }
  bool contains(double x, double eps = 0.0) const noexcept {
    return x >= lo - eps && (hi == kInfinity || x <= hi + eps);
  }
  bool is_point(double eps = 0.0) const noexcept { return hi - lo <= eps; }
};

struct SigmaUnitBounds {
  std::string target_label;
  std::string unit_label;
  Interval formation;
  Interval distillable;
};

/// Bounds on F_σ(ρ) from D(ρ) <= F_σ(ρ) D(σ) <= F(ρ) <= F_σ(ρ) F(σ):
/// [max(D(ρ)/D(σ), F(ρ)/F(σ)), F(ρ)/D(σ)]. When D(σ) = 0 the constraints
/// involving D(σ) carry no information and the upper end is +∞.
/// Throws std::invalid_argument("degenerate unit") if F(σ) = 0.
Interval sigma_formation_bounds(const MeasureRecord& rho, const MeasureRecord& sigma);

/// Bounds on D_σ(ρ) from D_σ(ρ) D(σ) <= D(ρ) <= D_σ(ρ) F(σ) <= F(ρ):
/// [D(ρ)/F(σ), min(D(ρ)/D(σ), F(ρ)/F(σ))].
Interval sigma_distillable_bounds(const MeasureRecord& rho, const MeasureRecord& sigma);

SigmaUnitBounds sigma_unit_bounds(const MeasureRecord& rho, const MeasureRecord& sigma);

struct SpecialValues {
  double formation_sigma_sigma = 1.0;    // F_σ(σ)
  double distillable_sigma_sigma = 1.0;  // D_σ(σ)
  double formation_sigma_bell = 1.0;     // F_σ(Bell) = 1/D(σ), +∞ if D(σ) = 0
  double distillable_sigma_bell = 1.0;   // D_σ(Bell) = 1/F(σ)
};

SpecialValues special_values(const MeasureRecord& sigma);

inline constexpr double kRatioThreshold = 1e-9;

/// Witness of unit dependence for a candidate unit σ.
///
/// Distillable side: D_σ(σ)/D_σ(Bell) = F(σ) against D(σ)/D(Bell) = D(σ).
/// Formation side:   F_σ(σ)/F_σ(Bell) = D(σ) against F(σ)/F(Bell) = F(σ).
/// Both sides differ exactly when F(σ) − D(σ) exceeds the threshold.
struct RatioCertificate {
  std::string unit_label;
  double sigma_unit_ratio = 0.0;
  double bell_unit_ratio = 0.0;
  double formation_sigma_unit_ratio = 0.0;
  double formation_bell_unit_ratio = 0.0;
  double gap = 0.0;
  double threshold = kRatioThreshold;
  bool ratio_problem_present = false;
};

RatioCertificate ratio_certificate(const MeasureRecord& sigma, double threshold = kRatioThreshold);

}  // namespace entunit
