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
#include <array>
#include <string>
#include <vector>

#include "hypercone/hyptrig.hpp"

namespace hc {

/// A half-side is side s of triangle t, encoded as 3 * t + s. Side s runs
/// from corner s to corner (s + 1) % 3, and triangles are counterclockwise,
/// so the triangle lies on the left of each of its sides.
inline int half_side(int tri, int side) { return 3 * tri + side; }
inline int tri_of(int h) { return h / 3; }
inline int side_of(int h) { return h % 3; }
inline int next_in_tri(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
inline int prev_in_tri(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }

/// Closed oriented triangulated surface with a hyperbolic cone-metric given
/// by one length per glued edge. All vertices are marked.
struct ConeSurface {
  int nv = 0;
  std::vector<std::array<int, 3>> tris;
  std::vector<int> glue;       // half-side -> partner half-side, -1 if open
  std::vector<int> edge;       // half-side -> edge id
  std::vector<double> length;  // edge id -> length
  std::vector<int> edge_rep;   // edge id -> one of its half-sides
  /// Optional per half-side displacement in an abelian cover, antisymmetric
  /// under glue and summing to zero around each triangle. Flips keep it
  /// consistent. Empty when unused.
  std::vector<Eigen::Vector2d> tag;
  /// Problems found while assembling raw input (reported by validate).
  std::vector<std::string> assembly_issues;

  int num_tris() const { return static_cast<int>(tris.size()); }
  int num_edges() const { return static_cast<int>(length.size()); }
  int num_half_sides() const { return 3 * num_tris(); }

  int origin(int h) const { return tris[tri_of(h)][side_of(h)]; }
  int target(int h) const { return tris[tri_of(h)][(side_of(h) + 1) % 3]; }
  double side_length(int h) const { return length[edge[h]]; }
};

/// Assembles a surface from corner triples, gluing pairs of half-sides and
/// one length per pair. Problems are recorded, not thrown.
ConeSurface assemble(int nv, const std::vector<std::array<int, 3>>& tris,
                     const std::vector<std::pair<int, int>>& gluings,
                     const std::vector<double>& pair_lengths);

enum class DiagnosticKind {
  BadVertexId,
  BadGluing,
  BadOrientation,
  BadLink,
  BadLength,
  TriangleInequality,
  Assembly,
};

struct Diagnostic {
  DiagnosticKind kind;
  int triangle;  // -1 when not tied to a triangle
  std::string message;
};

std::vector<Diagnostic> validate(const ConeSurface& s);
bool is_valid(const ConeSurface& s);

/// Interior angle at corner c of triangle t.
double corner_angle(const ConeSurface& s, int t, int c);
/// All three corner angles of triangle t.
std::array<double, 3> tri_angles(const ConeSurface& s, int t);

/// Corners (as half-sides leaving the vertex) around v in counterclockwise
/// order.
std::vector<int> corners_around(const ConeSurface& s, int v);

double cone_angle(const ConeSurface& s, int v);
std::vector<double> cone_angles(const ConeSurface& s);

/// Vertices whose cone angle is within this of 2 pi are flat.
inline constexpr double kFlatTolerance = 1e-9;

struct ConvexityReport {
  bool convex = true;
  std::vector<int> flat;    // kappa == 2 pi within kFlatTolerance
  std::vector<int> reflex;  // kappa > 2 pi
};

ConvexityReport convexity(const ConeSurface& s);
bool is_convex(const ConeSurface& s);

/// Cone points: vertices that are not flat.
std::vector<int> cone_points(const ConeSurface& s);

double area(const ConeSurface& s);
int euler_characteristic(const ConeSurface& s);
/// sum_v (2 pi - kappa_v) - area - 2 pi chi; zero for any valid surface.
double gauss_bonnet_residual(const ConeSurface& s);

/// Develops triangle t into H^2 with corner 0 at the origin and corner 1 on
/// the positive x axis.
std::array<Vec3, 3> develop_triangle(const ConeSurface& s, int t);

/// Splits every edge at its midpoint and every triangle into four. New
/// vertices are flat.
ConeSurface midpoint_refine(const ConeSurface& s);

/// Inserts a flat vertex at the developed point of triangle t with the given
/// Klein-model barycentric weights.
ConeSurface insert_vertex(const ConeSurface& s, int t,
                          const Eigen::Vector3d& weights);

/// Same surface with triangles renumbered by perm (new index of old t).
ConeSurface relabel_triangles(const ConeSurface& s, const std::vector<int>& perm);

// HCS text format.
std::string to_hcs(const ConeSurface& s);
ConeSurface parse_hcs(const std::string& text);
ConeSurface read_hcs_file(const std::string& path);
void write_hcs_file(const ConeSurface& s, const std::string& path);

/// Formats a real with 17 significant digits.
std::string fmt17(double v);

}  // namespace hc
