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

#include <vector>

#include "hypercone/conesurf.hpp"

namespace hc {

inline constexpr double kDefectTolerance = 1e-10;

/// Sum over the two triangles at e of (s1^2 + s2^2 - s0^2) / (s1 s2) with
/// s_k = sinh(l_k / 2), s0 on e. Non-negative on every edge iff Delaunay.
double delaunay_defect(const ConeSurface& s, int e);
std::vector<double> delaunay_defects(const ConeSurface& s);
double min_defect(const ConeSurface& s);
bool is_delaunay(const ConeSurface& s, double tol = kDefectTolerance);

/// Replaces edge e by the other diagonal of its quadrilateral. Throws
/// FlipRejected unless the defect is negative.
ConeSurface flip(const ConeSurface& s, int e);
/// True when the two triangles at e form a strictly convex quadrilateral, so
/// that flipping e keeps the metric.
bool is_flippable(const ConeSurface& s, int e);

/// Same without the defect precondition; e must border two triangles.
ConeSurface flip_unchecked(const ConeSurface& s, int e);

struct DelaunayRun {
  ConeSurface surface;
  std::vector<int> flipped;  // edge ids in flip order
};

/// Flips the most negative edge until all defects are >= -tol.
DelaunayRun make_delaunay_run(const ConeSurface& s, double tol = kDefectTolerance);
ConeSurface make_delaunay(const ConeSurface& s);

struct DelaunayCell {
  std::vector<int> tris;
  std::vector<int> merged_edges;
  CircleKind kind = CircleKind::Circle;
  double radius = 0;  // circumradius when kind == Circle
  double spread = 0;  // max deviation of vertex distances from the radius
};

/// Merges triangles across edges with |defect| <= tol and checks that each
/// cell is inscribed within 10 * tol.
std::vector<DelaunayCell> decomposition(const ConeSurface& s, double tol = 1e-8);

}  // namespace hc
