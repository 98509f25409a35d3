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

#include "entunit/unit_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entunit/linalg.hpp"

namespace entunit {

MeasureRecord::MeasureRecord(std::string label, double formation, double distillable)
    : label_(std::move(label)), formation_(formation), distillable_(distillable) {
  if (!std::isfinite(formation_) || !std::isfinite(distillable_)) {
    throw ValidationError("measure_record", "values must be finite");
  }
  if (distillable_ < 0.0) throw ValidationError("measure_record", "D must be >= 0");
  if (distillable_ > formation_) throw ValidationError("measure_record", "D must not exceed F");
}

namespace {

void require_unit(const MeasureRecord& sigma) {
  if (sigma.formation() == 0.0) throw std::invalid_argument("degenerate unit");
}

}  // namespace

Interval sigma_formation_bounds(const MeasureRecord& rho, const MeasureRecord& sigma) {
  require_unit(sigma);
  const double fs = sigma.formation(), ds = sigma.distillable();
  double lo = rho.formation() / fs;
  double hi = kInfinity;
  if (ds > 0.0) {
    lo = std::max(lo, rho.distillable() / ds);
    hi = rho.formation() / ds;
  }
  return {lo, hi};
}

Interval sigma_distillable_bounds(const MeasureRecord& rho, const MeasureRecord& sigma) {
  require_unit(sigma);
  const double fs = sigma.formation(), ds = sigma.distillable();
  const double lo = rho.distillable() / fs;
  double hi = rho.formation() / fs;
  if (ds > 0.0) hi = std::min(hi, rho.distillable() / ds);
  return {lo, hi};
}

SigmaUnitBounds sigma_unit_bounds(const MeasureRecord& rho, const MeasureRecord& sigma) {
  return {rho.label(), sigma.label(), sigma_formation_bounds(rho, sigma), sigma_distillable_bounds(rho, sigma)};
}

SpecialValues special_values(const MeasureRecord& sigma) {
  require_unit(sigma);
  SpecialValues v;
  v.formation_sigma_bell = sigma.distillable() > 0.0 ? 1.0 / sigma.distillable() : kInfinity;
  v.distillable_sigma_bell = 1.0 / sigma.formation();
  return v;
}

RatioCertificate ratio_certificate(const MeasureRecord& sigma, double threshold) {
  const SpecialValues sv = special_values(sigma);
  const MeasureRecord bell = MeasureRecord::bell();
  RatioCertificate c;
  c.unit_label = sigma.label();
  c.sigma_unit_ratio = sv.distillable_sigma_sigma / sv.distillable_sigma_bell;
  c.bell_unit_ratio = sigma.distillable() / bell.distillable();
  c.formation_sigma_unit_ratio = sv.formation_sigma_sigma / sv.formation_sigma_bell;
  c.formation_bell_unit_ratio = sigma.formation() / bell.formation();
  c.gap = sigma.formation() - sigma.distillable();
  c.threshold = threshold;
  c.ratio_problem_present = c.gap > threshold;
  return c;
}

}  // namespace entunit
