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

// Incremental convex hull of points of H^3 shared by mhull and torusreal.
// Points are accessed through a frame callback so that callers can supply
// coordinates in an isometric frame adapted to each small group of points.

#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypercone/hyptrig.hpp"

namespace hc::detail {

/// Writes hyperboloid coordinates of points ids[j] to out[j], all in one
/// common frame. The frame should keep the first two points near its origin.
using FrameFn = std::function<void(std::span<const int> ids, MVector* out)>;

struct CoreEdge {
  int u, v;
  int left, right;  // facet with u -> v on its boundary, and its neighbour
  double dihedral;
};

struct HullCore {
  std::vector<std::array<int, 3>> triangles;  // outward oriented
  std::vector<int> triangle_facet;
  std::vector<std::vector<int>> facets;  // counterclockwise seen from outside
  std::vector<int> vertices;
  std::vector<CoreEdge> edges;
  std::vector<std::string> diagnostics;
};

/// Unit spacelike functional through a, b, c, positive beyond the face when
/// (a, b, c) is counterclockwise seen from outside.
MVector plane_normal(const MVector& a, const MVector& b, const MVector& c);

HullCore convex_hull(int n, const FrameFn& frame, double merge_tolerance);

}  // namespace hc::detail
