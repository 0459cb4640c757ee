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

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <vector>

#include "hypercone/conesurf.hpp"

namespace hc {

/// Certified enclosure [lower, upper] of a real quantity.
struct IntervalEstimate {
  double lower = 0;
  double upper = std::numeric_limits<double>::infinity();

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Homology labels: for each half-side, the change in intersection numbers
/// with a basis of 2g primal cycles when crossing it from its own triangle
/// into its partner. Antisymmetric under glue.
std::vector<Eigen::VectorXi> crossing_labels(const ConeSurface& s);

struct SystoleOptions {
  double tolerance = 1e-2;  // stop refining once upper - lower is below this
  long max_arcs = 400000;   // size budget of the refined graph
  /// Optional early exit, checked after every refinement level.
  std::function<bool(const IntervalEstimate&)> sufficient;
};

/// Encloses the length of the shortest loop that is non-trivial in
/// homology, when it is at most cap; returns [cap, inf) otherwise. On the
/// torus these are exactly the non-contractible loops.
IntervalEstimate systole(const ConeSurface& s, double cap,
                         const SystoleOptions& opt = {});

/// Encloses sup_p d(p, V) for the vertex set flagged in V, with width at
/// most eps.
IntervalEstimate sparsity(const ConeSurface& s, const std::vector<char>& V,
                          double eps);
/// Sparsity of the cone points.
IntervalEstimate cone_sparsity(const ConeSurface& s, double eps);

/// Radius of a disk guaranteed inside every right-angled hexagon whose
/// alternate sides are all at least D.
double hexagon_disk_bound(double D);
/// delta(Delta): pants with boundary lengths >= Delta contain a point at
/// distance >= delta from the boundary. Tabulated, continuous, nondecreasing.
double delta_of(double Delta);

enum class Balance { Yes, No, Unknown };
const char* to_string(Balance b);

struct BalanceReport {
  Balance verdict = Balance::Unknown;
  IntervalEstimate sys, cosp;
  double delta_lower = 0;  // delta(sys.lower)
  double delta_upper = 0;  // delta(sys.upper)
};

/// Yes iff cosp.upper < delta(sys.lower); No iff cosp.lower >= delta(sys.upper).
BalanceReport is_balanced(const ConeSurface& s, double eps, double cap);

}  // namespace hc
