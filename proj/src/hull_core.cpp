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

#include "hull_core.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "hypercone/conesurf.hpp"
#include "hypercone/errors.hpp"

namespace hc::detail {

namespace {

constexpr double kNearSign = 1e-12;

long long key(int u, int v) {
  return (static_cast<long long>(u) << 32) | static_cast<unsigned>(v);
}

Eigen::Matrix4d unit_rows(const MVector* P) {
  Eigen::Matrix4d M;
  for (int r = 0; r < 4; ++r) M.row(r) = P[r].transpose() / P[r].norm();
  return M;
}

class Geometry {
 public:
  Geometry(int n, const FrameFn& frame) : n_(n), frame_(frame) {}

  /// det of the four points with rows scaled to unit length: positive when d
  /// lies beyond the counterclockwise face (a, b, c).
  double volume(int a, int b, int c, int d) const {
    const std::array<int, 4> ids{a, b, c, d};
    MVector P[4];
    frame_(ids, P);
    return unit_rows(P).determinant();
  }

  int sign(int a, int b, int c, int d) const {
    const std::array<int, 4> ids{a, b, c, d};
    MVector P[4];
    frame_(ids, P);
    const Eigen::Matrix4d M = unit_rows(P);
    const double v = M.determinant();
    if (std::abs(v) >= kNearSign) return v > 0 ? 1 : -1;
    // Re-evaluate small determinants in extended precision.
    const long double w = M.cast<long double>().determinant();
    return (w > 0) - (w < 0);
  }

  double distance(int a, int b) const {
    const std::array<int, 2> ids{a, b};
    MVector P[2];
    frame_(ids, P);
    return hdist(P[0], P[1]);
  }

  /// Smallest singular value of the three unit rows; zero when collinear.
  double spread(int a, int b, int c) const {
    const std::array<int, 3> ids{a, b, c};
    MVector P[3];
    frame_(ids, P);
    Eigen::Matrix<double, 3, 4> M;
    for (int r = 0; r < 3; ++r) M.row(r) = P[r].transpose() / P[r].norm();
    const Eigen::Matrix3d gram = M * M.transpose();
    const double low = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(gram).eigenvalues()(0);
    return std::sqrt(std::max(0.0, low));
  }

  /// Exterior angle along u -> v between the face (u, v, w) and the face
  /// (v, u, z), measured in the tangent space at the edge midpoint.
  double exterior_angle(int u, int v, int w, int z) const {
    const std::array<int, 4> ids{u, v, w, z};
    MVector P[4];
    frame_(ids, P);
    const MVector n1 = plane_normal(P[0], P[1], P[2]);
    const MVector n2 = plane_normal(P[1], P[0], P[3]);
    const MVector m = HPoint::normalize(P[0] + P[1]).vec();
    const Eigen::Vector3d s = m.tail<3>();
    const double s2 = s.squaredNorm();
    Mat4 T = Mat4::Identity();
    T(0, 0) = m(0);
    T.block<1, 3>(0, 1) = -s.transpose();
    T.block<3, 1>(1, 0) = -s;
    if (s2 > 0) T.block<3, 3>(1, 1) += (m(0) - 1) / s2 * s * s.transpose();
    const Eigen::Vector3d a = (T * n1).tail<3>(), b = (T * n2).tail<3>();
    return std::atan2(a.cross(b).norm(), a.dot(b));
  }

  int size() const { return n_; }

 private:
  int n_;
  const FrameFn& frame_;
};

using Tri = std::array<int, 3>;

std::vector<Tri> hull_triangles(const Geometry& G) {
  const int n = G.size();
  if (n < 4) throw DegenerateSpan("need at least 4 points, got " + std::to_string(n));
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0;
  for (int i = 1; i < n; ++i) {
    const double d = G.distance(i0, i);
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0 || best < 1e-12) throw DegenerateSpan("all points coincide");
  best = 0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    const double d = G.spread(i0, i1, i);
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0 || best < 1e-12) throw DegenerateSpan("points are collinear");
  best = 0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    const double d = std::abs(G.volume(i0, i1, i2, i));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0 || best < 1e-12) throw DegenerateSpan("points lie in one plane");
  if (G.volume(i0, i1, i2, i3) > 0) std::swap(i1, i2);

  std::vector<Tri> faces{{i0, i1, i2}, {i0, i3, i1}, {i1, i3, i2}, {i2, i3, i0}};
  std::vector<char> alive(4, 1);
  for (int p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (size_t f = 0; f < faces.size(); ++f)
      if (alive[f] && G.sign(faces[f][0], faces[f][1], faces[f][2], p) > 0)
        visible.push_back(static_cast<int>(f));
    if (visible.empty()) continue;
    std::unordered_set<long long> dir_edges;
    for (int f : visible)
      for (int k = 0; k < 3; ++k) dir_edges.insert(key(faces[f][k], faces[f][(k + 1) % 3]));
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) {
      alive[f] = 0;
      for (int k = 0; k < 3; ++k) {
        const int u = faces[f][k], v = faces[f][(k + 1) % 3];
        if (!dir_edges.count(key(v, u))) horizon.push_back({u, v});
      }
    }
    for (const auto& [u, v] : horizon) {
      faces.push_back({u, v, p});
      alive.push_back(1);
    }
  }
  std::vector<Tri> out;
  for (size_t f = 0; f < faces.size(); ++f)
    if (alive[f]) out.push_back(faces[f]);
  return out;
}

int third(const Tri& t, int u, int v) {
  for (int x : t)
    if (x != u && x != v) return x;
  return -1;
}

}  // namespace

MVector plane_normal(const MVector& a, const MVector& b, const MVector& c) {
  Eigen::Matrix4d M;
  M.row(0) = a.transpose() / a.norm();
  M.row(1) = b.transpose() / b.norm();
  M.row(2) = c.transpose() / c.norm();
  MVector w;
  for (int i = 0; i < 4; ++i) {
    M.row(3) = MVector::Unit(i).transpose();
    w(i) = M.determinant();
  }
  MVector n = minkowski_gram<double, 4>() * w;
  const double q = mdot(n, n);
  if (!(q > 0)) throw DegenerateSpan("support plane is not spacelike");
  return n / std::sqrt(q);
}

HullCore convex_hull(int n, const FrameFn& frame, double merge_tolerance) {
  const Geometry G(n, frame);
  HullCore h;
  h.triangles = hull_triangles(G);
  const auto& tris = h.triangles;
  const int T = static_cast<int>(tris.size());

  std::unordered_map<long long, int> face_of;
  for (int f = 0; f < T; ++f)
    for (int k = 0; k < 3; ++k) face_of[key(tris[f][k], tris[f][(k + 1) % 3])] = f;
  std::vector<int> root(T);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  std::unordered_map<long long, double> angle_at;
  for (int f = 0; f < T; ++f)
    for (int k = 0; k < 3; ++k) {
      const int u = tris[f][k], v = tris[f][(k + 1) % 3];
      if (u > v) continue;
      const auto it = face_of.find(key(v, u));
      if (it == face_of.end()) throw DegenerateSpan("open hull edge");
      const int g = it->second;
      const double th = G.exterior_angle(u, v, third(tris[f], u, v), third(tris[g], u, v));
      angle_at[key(u, v)] = th;
      if (th > 1e-3 * merge_tolerance && th < 1e3 * merge_tolerance)
        h.diagnostics.push_back("NearCoplanar: edge " + std::to_string(u) + "-" +
                                std::to_string(v) + " at angle " + fmt17(th) +
                                (th <= merge_tolerance ? " merged" : " kept"));
      if (th <= merge_tolerance) root[find(f)] = find(g);
    }

  std::map<int, int> group_id;
  for (int f = 0; f < T; ++f) group_id.emplace(find(f), static_cast<int>(group_id.size()));
  const int F = static_cast<int>(group_id.size());
  h.triangle_facet.resize(T);
  std::vector<std::unordered_map<int, int>> next(F);
  for (int f = 0; f < T; ++f) {
    const int g = h.triangle_facet[f] = group_id[find(f)];
    for (int k = 0; k < 3; ++k) {
      const int u = tris[f][k], v = tris[f][(k + 1) % 3];
      if (group_id[find(face_of[key(v, u)])] != g) next[g][u] = v;
    }
  }
  std::vector<std::vector<int>> cycles(F);
  std::unordered_map<int, std::unordered_set<int>> facets_at;
  for (int g = 0; g < F; ++g) {
    const int start = std::min_element(next[g].begin(), next[g].end())->first;
    int u = start;
    do {
      cycles[g].push_back(u);
      facets_at[u].insert(g);
      u = next[g].at(u);
    } while (u != start && cycles[g].size() <= next[g].size());
    if (u != start || cycles[g].size() != next[g].size())
      throw DegenerateSpan("merged face is not a simple polygon");
  }
  // Points inside a hull edge are not vertices.
  std::vector<char> is_vertex(n, 0);
  for (const auto& [v, fs] : facets_at)
    if (fs.size() >= 3) is_vertex[v] = 1;
  h.facets.resize(F);
  for (int g = 0; g < F; ++g)
    for (int v : cycles[g])
      if (is_vertex[v]) h.facets[g].push_back(v);
  for (int i = 0; i < n; ++i)
    if (is_vertex[i]) h.vertices.push_back(i);

  std::unordered_map<long long, int> facet_of;
  for (int g = 0; g < F; ++g) {
    const auto& V = h.facets[g];
    for (size_t k = 0; k < V.size(); ++k) facet_of[key(V[k], V[(k + 1) % V.size()])] = g;
  }
  for (int g = 0; g < F; ++g) {
    const auto& V = h.facets[g];
    for (size_t k = 0; k < V.size(); ++k) {
      const int u = V[k], v = V[(k + 1) % V.size()];
      if (u > v) continue;
      const auto it = facet_of.find(key(v, u));
      if (it == facet_of.end()) throw DegenerateSpan("facet edge without a partner");
      // A polygon edge may span several collinear triangle edges; its angle
      // is that of the first piece.
      const int w = next[g].at(u);
      const double th = angle_at.at(key(std::min(u, w), std::max(u, w)));
      h.edges.push_back({u, v, g, it->second, th});
    }
  }
  return h;
}

}  // namespace hc::detail
