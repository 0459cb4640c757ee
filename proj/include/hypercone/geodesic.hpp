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

/// Exact shortest-path distances on a triangulated surface by window
/// unfolding. Paths bend only at vertices flagged as targets, so the result
/// is exact when every non-target vertex is flat or convex. Open sides
/// (glue == -1) are allowed and stop propagation.
struct GeodesicResult {
  double distance;     // +inf when nothing is reached within the radius
  int target = -1;     // vertex reached
  long windows = 0;    // windows processed
  bool complete = true;  // false if the window cap was hit
};

/// From a point given in the develop_triangle(s, tri) frame.
GeodesicResult distance_to_vertices(const ConeSurface& s, int tri, const Vec3& p,
                                    const std::vector<char>& target,
                                    double radius, long window_cap = 4000000);

/// From vertex src (all its corners) to the vertices flagged in target.
GeodesicResult vertex_distance(const ConeSurface& s, int src,
                               const std::vector<char>& target, double radius,
                               long window_cap = 4000000);

}  // namespace hc
