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

#include "hypercone/conflow.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "hypercone/delaunay.hpp"
#include "hypercone/errors.hpp"

namespace hc {

namespace {

double grow(double l, double factor) {
  return 2 * std::asinh(factor * std::sinh(0.5 * l));
}

FlowState finish_step(ConeSurface s, double t, StepLog* log) {
  for (int t2 = 0; t2 < s.num_tris(); ++t2)
    if (!is_triangle(s.side_length(3 * t2), s.side_length(3 * t2 + 1),
                     s.side_length(3 * t2 + 2)))
      throw DegenerateTriangle("flow step broke triangle " + std::to_string(t2));
  StepLog l;
  l.min_defect = min_defect(s);
  if (l.min_defect < -kDefectTolerance) {
    auto run = make_delaunay_run(s);
    l.corrective_flips = static_cast<int>(run.flipped.size());
    s = std::move(run.surface);
  }
  if (log) *log = l;
  return {std::move(s), t};
}

}  // namespace

FlowState flow_step(const FlowState& state, double dt, StepLog* log) {
  ConeSurface s = state.surface;
  const double f = std::exp(dt);
  for (double& l : s.length) l = grow(l, f);
  return finish_step(std::move(s), state.t + dt, log);
}

FlowState flow_step_weighted(const FlowState& state, double dt,
                             const std::vector<double>& w, StepLog* log) {
  ConeSurface s = state.surface;
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_rep[e];
    s.length[e] =
        grow(s.length[e], std::exp(0.5 * dt * (w[s.origin(h)] + w[s.target(h)])));
  }
  return finish_step(std::move(s), state.t + dt, log);
}

ConvexFlow flow_to_convex(const ConeSurface& s, double dt, double t_max) {
  ConvexFlow out;
  FlowState st{make_delaunay(s), 0.0};
  auto sample = [&] {
    out.trace.push_back({st.t, cone_angles(st.surface), min_defect(st.surface)});
  };
  sample();
  while (!is_convex(st.surface)) {
    if (st.t + dt > t_max + 1e-12) {
      std::string prof;
      for (double k : cone_angles(st.surface)) prof += " " + fmt17(k);
      throw NotReached("t_max " + fmt17(t_max) + " reached; kappa:" + prof);
    }
    StepLog log;
    FlowState next = flow_step(st, dt, &log);
    if (log.corrective_flips > 0) {
      ++out.drift_steps;
      if (log.corrective_flips > st.surface.num_edges())
        throw FlipBudgetExceeded("corrective pass needed " +
                                 std::to_string(log.corrective_flips) + " flips");
      // Back off and retry the step at half size.
      if (dt > 1e-6) {
        dt *= 0.5;
        continue;
      }
    }
    st = std::move(next);
    sample();
  }
  out.surface = st.surface;
  out.t_star = st.t;
  return out;
}

void write_flow_csv(std::ostream& out, const std::vector<FlowSample>& trace) {
  out << "# hcone flow v1\n";
  out << "t";
  const size_t n = trace.empty() ? 0 : trace.front().kappa.size();
  for (size_t v = 0; v < n; ++v) out << ",kappa_" << v;
  out << ",min_defect\n";
  for (const auto& r : trace) {
    out << fmt17(r.t);
    for (double k : r.kappa) out << "," << fmt17(k);
    out << "," << fmt17(r.min_defect) << "\n";
  }
}

}  // namespace hc
