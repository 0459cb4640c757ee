// Copyright 2026 The Hypercone Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <vector>

#include "hypercone/conesurf.hpp"

namespace hc {

/// Delaunay surface at flow parameter t.
struct FlowState {
  ConeSurface surface;
  double t = 0;
};

struct StepLog {
  double min_defect = 0;      // after rescaling, before any correction
  int corrective_flips = 0;   // flips needed to restore Delaunay
};

/// Rescales every edge by sinh(l'/2) = e^dt sinh(l/2). Defects are invariant
/// under this rule, so the surface stays Delaunay; float drift below
/// -1e-10 is repaired by flipping and logged.
FlowState flow_step(const FlowState& state, double dt, StepLog* log = nullptr);

/// Per-vertex exponents: sinh(l'/2) = exp(dt (w_u + w_v) / 2) sinh(l/2).
FlowState flow_step_weighted(const FlowState& state, double dt,
                             const std::vector<double>& w,
                             StepLog* log = nullptr);

struct FlowSample {
  double t;
  std::vector<double> kappa;
  double min_defect;
};

struct ConvexFlow {
  ConeSurface surface;
  double t_star = 0;
  std::vector<FlowSample> trace;
  int drift_steps = 0;  // steps that needed corrective flips
};

/// Flows until every cone angle is below 2 pi. Throws NotReached past t_max.
ConvexFlow flow_to_convex(const ConeSurface& s, double dt = 0.05,
                          double t_max = 20.0);

/// CSV with columns t, kappa_0..kappa_{n-1}, min_defect.
void write_flow_csv(std::ostream& out, const std::vector<FlowSample>& trace);

}  // namespace hc
