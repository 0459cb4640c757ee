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

#include <string>
#include <vector>

#include "hypercone/conesurf.hpp"
#include "hypercone/hyptrig.hpp"

namespace hc {

/// Klein-model point to the hyperboloid. Throws OutsideBall unless |k| < 1.
HPoint lift(const Eigen::Vector3d& k);

/// Planar face of the hull, a convex polygon listed counterclockwise seen
/// from outside.
struct HullFacet {
  std::vector<int> verts;  // indices into HullComplex::points
  MVector normal;          // unit spacelike, <normal, v> = 0 on the face,
                           // negative inside the hull
};

struct HullEdge {
  int u, v;         // point indices; u -> v runs along facet `left`
  int left, right;  // facets on either side
  double dihedral;  // exterior dihedral angle in [0, pi)
};

/// Boundary of the geodesic convex hull of finitely many points of H^3: the
/// part of the Minkowski convex hull seen from the origin, centrally
/// projected. Faces are maximal planar polygons.
struct HullComplex {
  std::vector<HPoint> points;  // the input
  std::vector<int> vertices;   // hull vertices, increasing
  std::vector<HullFacet> facets;
  std::vector<HullEdge> edges;
  std::vector<std::string> diagnostics;  // near-coplanar merges

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Faces with normals closer than this (as an angle) are merged.
inline constexpr double kCoplanarTolerance = 1e-9;

/// Throws DegenerateSpan for fewer than 4 points or a flat configuration.
HullComplex visible_hull(const std::vector<HPoint>& points);

/// Fan-triangulated boundary with the induced metric. vertex_point, when
/// given, receives the input index of each surface vertex. Throws NotSphere
/// if the facets do not close up into a sphere.
ConeSurface boundary_metric(const HullComplex& h,
                            std::vector<int>* vertex_point = nullptr);

/// Exterior dihedral angle of every edge, in edge order.
std::vector<double> dihedral_angles(const HullComplex& h);

/// A point strictly inside the hull.
HPoint interior_point(const HullComplex& h);

struct RayHit {
  int facet = -1;
  double distance = 0;  // along the geodesic ray
  HPoint point;
};

/// First facet met by the geodesic ray from `from` (inside the hull) with
/// unit tangent `dir` (<dir, from> = 0, <dir, dir> = 1).
RayHit first_hit(const HullComplex& h, const HPoint& from, const MVector& dir);

// HPTS text format.
std::string to_hpts(const std::vector<HPoint>& points);
std::vector<HPoint> parse_hpts(const std::string& text);
std::vector<HPoint> read_hpts_file(const std::string& path);

}  // namespace hc
