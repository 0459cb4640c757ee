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

#include "hypercone/conesurf.hpp"

#include <cmath>
#include <numbers>

#include "hypercone/errors.hpp"

namespace hc {

ConeSurface assemble(int nv, const std::vector<std::array<int, 3>>& tris,
                     const std::vector<std::pair<int, int>>& gluings,
                     const std::vector<double>& pair_lengths) {
  ConeSurface s;
  s.nv = nv;
  s.tris = tris;
  const int H = s.num_half_sides();
  s.glue.assign(H, -1);
  s.edge.assign(H, -1);
  for (size_t k = 0; k < gluings.size(); ++k) {
    const auto [h, g] = gluings[k];
    if (h < 0 || g < 0 || h >= H || g >= H) {
      s.assembly_issues.push_back("gluing refers to a missing side");
      continue;
    }
    if (h == g) {
      s.assembly_issues.push_back("side " + std::to_string(side_of(h)) +
                                  " of triangle " + std::to_string(tri_of(h)) +
                                  " glued to itself");
      continue;
    }
    if (s.glue[h] != -1 || s.glue[g] != -1) {
      const int u = s.glue[h] != -1 ? h : g;
      s.assembly_issues.push_back("side " + std::to_string(side_of(u)) +
                                  " of triangle " + std::to_string(tri_of(u)) +
                                  " used twice");
      continue;
    }
    const int e = s.num_edges();
    s.glue[h] = g;
    s.glue[g] = h;
    s.edge[h] = s.edge[g] = e;
    s.edge_rep.push_back(h);
    s.length.push_back(k < pair_lengths.size()
                           ? pair_lengths[k]
                           : std::numeric_limits<double>::quiet_NaN());
  }
  return s;
}

std::vector<Diagnostic> validate(const ConeSurface& s) {
  std::vector<Diagnostic> out;
  auto add = [&](DiagnosticKind k, int t, std::string m) {
    out.push_back({k, t, std::move(m)});
  };
  for (const auto& m : s.assembly_issues) add(DiagnosticKind::Assembly, -1, m);
  if (s.nv <= 0 || s.tris.empty())
    add(DiagnosticKind::BadVertexId, -1, "empty surface");
  std::vector<char> used(std::max(s.nv, 0), 0);
  for (int t = 0; t < s.num_tris(); ++t)
    for (int v : s.tris[t]) {
      if (v < 0 || v >= s.nv)
        add(DiagnosticKind::BadVertexId, t,
            "vertex id " + std::to_string(v) + " out of range");
      else
        used[v] = 1;
    }
  for (int v = 0; v < s.nv; ++v)
    if (!used[v])
      add(DiagnosticKind::BadVertexId, -1,
          "vertex " + std::to_string(v) + " has no corner");
  const int H = s.num_half_sides();
  if (static_cast<int>(s.glue.size()) != H ||
      static_cast<int>(s.edge.size()) != H)
    add(DiagnosticKind::BadGluing, -1, "gluing table has the wrong size");
  if (!out.empty()) return out;

  for (int h = 0; h < H; ++h) {
    const int g = s.glue[h];
    if (g < 0 || g >= H || g == h || s.glue[g] != h) {
      add(DiagnosticKind::BadGluing, tri_of(h),
          "side " + std::to_string(side_of(h)) + " of triangle " +
              std::to_string(tri_of(h)) + " is not glued to exactly one side");
      continue;
    }
    if (s.edge[h] < 0 || s.edge[h] >= s.num_edges() || s.edge[h] != s.edge[g])
      add(DiagnosticKind::BadGluing, tri_of(h),
          "glued sides of triangle " + std::to_string(tri_of(h)) +
              " carry different edges");
  }
  if (!out.empty()) return out;

  for (int h = 0; h < H; ++h) {
    const int g = s.glue[h];
    if (s.origin(g) != s.target(h) || s.target(g) != s.origin(h))
      add(DiagnosticKind::BadOrientation, tri_of(h),
          "side " + std::to_string(side_of(h)) + " of triangle " +
              std::to_string(tri_of(h)) + " is glued against orientation");
  }
  if (!out.empty()) return out;

  // One corner cycle per vertex.
  std::vector<char> seen(H, 0);
  std::vector<int> cycles(s.nv, 0);
  for (int h = 0; h < H; ++h) {
    if (seen[h]) continue;
    ++cycles[s.origin(h)];
    for (int c = h; !seen[c]; c = s.glue[prev_in_tri(c)]) seen[c] = 1;
  }
  for (int v = 0; v < s.nv; ++v)
    if (cycles[v] != 1)
      add(DiagnosticKind::BadLink, -1,
          "link of vertex " + std::to_string(v) + " has " +
              std::to_string(cycles[v]) + " cycles");

  for (int e = 0; e < s.num_edges(); ++e) {
    const double L = s.length[e];
    if (!(L > 0) || !std::isfinite(L))
      add(DiagnosticKind::BadLength, tri_of(s.edge_rep[e]),
          "edge " + std::to_string(e) + " of triangle " +
              std::to_string(tri_of(s.edge_rep[e])) +
              " has non-positive length");
  }
  if (!out.empty()) return out;

  for (int t = 0; t < s.num_tris(); ++t) {
    const double a = s.side_length(3 * t), b = s.side_length(3 * t + 1),
                 c = s.side_length(3 * t + 2);
    if (!is_triangle(a, b, c))
      add(DiagnosticKind::TriangleInequality, t,
          "triangle " + std::to_string(t) + " violates the triangle inequality (" +
              fmt17(a) + ", " + fmt17(b) + ", " + fmt17(c) + ")");
  }
  return out;
}

bool is_valid(const ConeSurface& s) { return validate(s).empty(); }

std::array<double, 3> tri_angles(const ConeSurface& s, int t) {
  const auto A = triangle_angles(s.side_length(3 * t), s.side_length(3 * t + 1),
                                 s.side_length(3 * t + 2));
  return {A[1], A[2], A[0]};
}

double corner_angle(const ConeSurface& s, int t, int c) {
  return tri_angles(s, t)[c];
}

std::vector<int> corners_around(const ConeSurface& s, int v) {
  int start = -1;
  for (int h = 0; h < s.num_half_sides(); ++h)
    if (s.origin(h) == v) {
      start = h;
      break;
    }
  std::vector<int> out;
  if (start < 0) return out;
  int c = start;
  do {
    out.push_back(c);
    c = s.glue[prev_in_tri(c)];
  } while (c != start);
  return out;
}

double cone_angle(const ConeSurface& s, int v) {
  double k = 0;
  for (int c : corners_around(s, v)) k += corner_angle(s, tri_of(c), side_of(c));
  return k;
}

std::vector<double> cone_angles(const ConeSurface& s) {
  std::vector<double> k(s.nv, 0.0);
  for (int t = 0; t < s.num_tris(); ++t) {
    const auto A = tri_angles(s, t);
    for (int c = 0; c < 3; ++c) k[s.tris[t][c]] += A[c];
  }
  return k;
}

ConvexityReport convexity(const ConeSurface& s) {
  ConvexityReport r;
  const auto k = cone_angles(s);
  for (int v = 0; v < s.nv; ++v) {
    const double d = k[v] - 2 * std::numbers::pi;
    if (std::abs(d) <= kFlatTolerance) {
      r.flat.push_back(v);
    } else if (d > 0) {
      r.reflex.push_back(v);
      r.convex = false;
    }
  }
  return r;
}

bool is_convex(const ConeSurface& s) { return convexity(s).convex; }

std::vector<int> cone_points(const ConeSurface& s) {
  std::vector<int> out;
  const auto k = cone_angles(s);
  for (int v = 0; v < s.nv; ++v)
    if (std::abs(k[v] - 2 * std::numbers::pi) > kFlatTolerance) out.push_back(v);
  return out;
}

double area(const ConeSurface& s) {
  double a = 0;
  for (int t = 0; t < s.num_tris(); ++t) {
    const auto A = tri_angles(s, t);
    a += std::numbers::pi - A[0] - A[1] - A[2];
  }
  return a;
}

int euler_characteristic(const ConeSurface& s) {
  return s.nv - s.num_edges() + s.num_tris();
}

double gauss_bonnet_residual(const ConeSurface& s) {
  double sum = 0;
  for (double k : cone_angles(s)) sum += 2 * std::numbers::pi - k;
  return sum - area(s) - 2 * std::numbers::pi * euler_characteristic(s);
}

std::array<Vec3, 3> develop_triangle(const ConeSurface& s, int t) {
  const double a0 = corner_angle(s, t, 0);
  return {Vec3(1, 0, 0), h2_polar(s.side_length(3 * t), 0.0),
          h2_polar(s.side_length(3 * t + 2), a0)};
}

ConeSurface midpoint_refine(const ConeSurface& s) {
  const int T = s.num_tris();
  std::vector<std::array<int, 3>> tris;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  auto mid = [&](int t, int side) { return s.nv + s.edge[3 * t + side]; };
  // Half of side k of t: first runs from corner k to the midpoint.
  auto first = [](int t, int k) {
    static constexpr int sub[3] = {0, 1, 2};
    return half_side(4 * t + sub[k], k);
  };
  auto second = [](int t, int k) {
    static constexpr int sub[3] = {1, 2, 0};
    return half_side(4 * t + sub[k], k);
  };
  for (int t = 0; t < T; ++t) {
    const auto& v = s.tris[t];
    const int m0 = mid(t, 0), m1 = mid(t, 1), m2 = mid(t, 2);
    tris.push_back({v[0], m0, m2});
    tris.push_back({m0, v[1], m1});
    tris.push_back({m2, m1, v[2]});
    tris.push_back({m0, m1, m2});
    const auto P = develop_triangle(s, t);
    const Vec3 q0 = h2_normalize(P[0] + P[1]), q1 = h2_normalize(P[1] + P[2]),
               q2 = h2_normalize(P[2] + P[0]);
    const int c = 4 * t + 3;
    pairs.push_back({half_side(4 * t, 1), half_side(c, 2)});
    lens.push_back(hdist(q0, q2));
    pairs.push_back({half_side(4 * t + 1, 2), half_side(c, 0)});
    lens.push_back(hdist(q0, q1));
    pairs.push_back({half_side(4 * t + 2, 0), half_side(c, 1)});
    lens.push_back(hdist(q1, q2));
  }
  for (int h = 0; h < s.num_half_sides(); ++h) {
    const int g = s.glue[h];
    if (h > g) continue;
    const double L = 0.5 * s.side_length(h);
    pairs.push_back({first(tri_of(h), side_of(h)), second(tri_of(g), side_of(g))});
    lens.push_back(L);
    pairs.push_back({second(tri_of(h), side_of(h)), first(tri_of(g), side_of(g))});
    lens.push_back(L);
  }
  return assemble(s.nv + s.num_edges(), tris, pairs, lens);
}

ConeSurface insert_vertex(const ConeSurface& s, int t,
                          const Eigen::Vector3d& weights) {
  const auto P = develop_triangle(s, t);
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i)
    k += weights(i) / weights.sum() * P[i].tail<2>() / P[i](0);
  const Vec3 p = Vec3(1, k(0), k(1)) / std::sqrt(1 - k.squaredNorm());
  const int T = s.num_tris();
  const int nv = s.nv;
  std::vector<std::array<int, 3>> tris = s.tris;
  const auto& v = s.tris[t];
  const int sub[3] = {t, T, T + 1};
  tris[t] = {v[0], v[1], nv};
  tris.push_back({v[1], v[2], nv});
  tris.push_back({v[2], v[0], nv});
  auto remap = [&](int h) {
    return tri_of(h) == t ? half_side(sub[side_of(h)], 0) : h;
  };
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_rep[e];
    pairs.push_back({remap(h), remap(s.glue[h])});
    lens.push_back(s.length[e]);
  }
  for (int i = 0; i < 3; ++i) {
    pairs.push_back({half_side(sub[i], 1), half_side(sub[(i + 1) % 3], 2)});
    lens.push_back(hdist(p, P[(i + 1) % 3]));
  }
  return assemble(nv + 1, tris, pairs, lens);
}

ConeSurface relabel_triangles(const ConeSurface& s,
                              const std::vector<int>& perm) {
  ConeSurface r = s;
  auto map = [&](int h) { return half_side(perm[tri_of(h)], side_of(h)); };
  for (int t = 0; t < s.num_tris(); ++t) r.tris[perm[t]] = s.tris[t];
  for (int h = 0; h < s.num_half_sides(); ++h) {
    r.glue[map(h)] = map(s.glue[h]);
    r.edge[map(h)] = s.edge[h];
    if (!s.tag.empty()) r.tag[map(h)] = s.tag[h];
  }
  for (int e = 0; e < s.num_edges(); ++e) r.edge_rep[e] = map(s.edge_rep[e]);
  return r;
}

}  // namespace hc
