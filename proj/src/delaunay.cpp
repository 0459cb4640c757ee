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

#include "hypercone/delaunay.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "hypercone/errors.hpp"

namespace hc {

namespace {

double half_term(const ConeSurface& s, int h) {
  const double s0 = std::sinh(0.5 * s.side_length(h));
  const double s1 = std::sinh(0.5 * s.side_length(next_in_tri(h)));
  const double s2 = std::sinh(0.5 * s.side_length(prev_in_tri(h)));
  return (s1 * s1 + s2 * s2 - s0 * s0) / (s1 * s2);
}

}  // namespace

double delaunay_defect(const ConeSurface& s, int e) {
  const int h = s.edge_rep[e];
  return half_term(s, h) + half_term(s, s.glue[h]);
}

std::vector<double> delaunay_defects(const ConeSurface& s) {
  std::vector<double> d(s.num_edges());
  for (int e = 0; e < s.num_edges(); ++e) d[e] = delaunay_defect(s, e);
  return d;
}

double min_defect(const ConeSurface& s) {
  double m = std::numeric_limits<double>::infinity();
  for (int e = 0; e < s.num_edges(); ++e) m = std::min(m, delaunay_defect(s, e));
  return m;
}

bool is_delaunay(const ConeSurface& s, double tol) { return min_defect(s) >= -tol; }

bool is_flippable(const ConeSurface& s, int e) {
  const int h = s.edge_rep[e], g = s.glue[h];
  if (tri_of(h) == tri_of(g)) return false;
  const auto A = tri_angles(s, tri_of(h));
  const auto B = tri_angles(s, tri_of(g));
  const int si = side_of(h), tj = side_of(g);
  return A[si] + B[(tj + 1) % 3] < std::numbers::pi &&
         A[(si + 1) % 3] + B[tj] < std::numbers::pi;
}

ConeSurface flip_unchecked(const ConeSurface& s, int e) {
  const int h = s.edge_rep[e], g = s.glue[h];
  const int i = tri_of(h), j = tri_of(g);
  if (i == j) throw FlipRejected("edge " + std::to_string(e) + " borders one triangle twice");
  const int si = side_of(h), tj = side_of(g);
  auto hs = [](int t, int k) { return half_side(t, k % 3); };

  // Law of cosines at v_s in the cancellation-free form
  // sinh^2(d/2) = sinh^2((a-b)/2) + sinh a sinh b sin^2(theta/2).
  const double a = s.side_length(hs(i, si + 2)), b = s.side_length(hs(j, tj + 1));
  const double theta = tri_angles(s, i)[si] + tri_angles(s, j)[(tj + 1) % 3];
  const double sh = std::sinh(0.5 * (a - b)), sn = std::sin(0.5 * theta);
  const double diag =
      2 * std::asinh(std::sqrt(sh * sh + std::sinh(a) * std::sinh(b) * sn * sn));

  const int p = s.tris[i][(si + 2) % 3], q = s.tris[j][(tj + 2) % 3];
  const int vs = s.tris[i][si], vs1 = s.tris[i][(si + 1) % 3];

  std::vector<int> map(s.num_half_sides());
  std::iota(map.begin(), map.end(), 0);
  map[hs(i, si + 2)] = half_side(i, 0);
  map[hs(j, tj + 1)] = half_side(i, 1);
  map[hs(j, tj + 2)] = half_side(j, 0);
  map[hs(i, si + 1)] = half_side(j, 1);

  ConeSurface r = s;
  r.tris[i] = {p, vs, q};
  r.tris[j] = {q, vs1, p};
  for (int x = 0; x < s.num_half_sides(); ++x) {
    if (x == h || x == g) continue;
    r.glue[map[x]] = map[s.glue[x]];
    r.edge[map[x]] = s.edge[x];
    if (!s.tag.empty()) r.tag[map[x]] = s.tag[x];
  }
  const int di = half_side(i, 2), dj = half_side(j, 2);
  r.glue[di] = dj;
  r.glue[dj] = di;
  r.edge[di] = r.edge[dj] = e;
  r.length[e] = diag;
  if (!s.tag.empty()) {
    r.tag[di] = -(r.tag[half_side(i, 0)] + r.tag[half_side(i, 1)]);
    r.tag[dj] = -r.tag[di];
  }
  for (int x = 0; x < r.num_half_sides(); ++x) r.edge_rep[r.edge[x]] = x;
  for (int t : {i, j})
    if (!is_triangle(r.side_length(half_side(t, 0)), r.side_length(half_side(t, 1)),
                     r.side_length(half_side(t, 2))))
      throw DegenerateTriangle("flip of edge " + std::to_string(e) +
                               " produced a degenerate triangle");
  return r;
}

ConeSurface flip(const ConeSurface& s, int e) {
  const double d = delaunay_defect(s, e);
  if (!(d < 0))
    throw FlipRejected("edge " + std::to_string(e) + " has defect " + fmt17(d));
  return flip_unchecked(s, e);
}

DelaunayRun make_delaunay_run(const ConeSurface& s, double tol) {
  DelaunayRun run{s, {}};
  const long E = s.num_edges();
  const long budget = 100 * E * E;
  for (;;) {
    int worst = -1;
    double wd = -tol;
    for (int e = 0; e < E; ++e) {
      const double d = delaunay_defect(run.surface, e);
      if (d < wd) {
        wd = d;
        worst = e;
      }
    }
    if (worst < 0) return run;
    if (static_cast<long>(run.flipped.size()) >= budget)
      throw FlipBudgetExceeded(std::to_string(budget) + " flips");
    run.surface = flip_unchecked(run.surface, worst);
    run.flipped.push_back(worst);
  }
}

ConeSurface make_delaunay(const ConeSurface& s) { return make_delaunay_run(s).surface; }

std::vector<DelaunayCell> decomposition(const ConeSurface& s, double tol) {
  const auto defect = delaunay_defects(s);
  for (int e = 0; e < s.num_edges(); ++e)
    if (defect[e] < -tol)
      throw NotDelaunay("edge " + std::to_string(e) + " has defect " +
                        fmt17(defect[e]));

  const int T = s.num_tris();
  std::vector<int> parent(T);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<char> merged(s.num_edges(), 0);
  for (int e = 0; e < s.num_edges(); ++e) {
    if (std::abs(defect[e]) > tol) continue;
    const int h = s.edge_rep[e];
    merged[e] = 1;
    parent[find(tri_of(h))] = find(tri_of(s.glue[h]));
  }

  std::vector<int> cell_of(T, -1);
  std::vector<DelaunayCell> cells;
  for (int t = 0; t < T; ++t) {
    const int r = find(t);
    if (cell_of[r] < 0) {
      cell_of[r] = static_cast<int>(cells.size());
      cells.emplace_back();
    }
    cells[cell_of[r]].tris.push_back(t);
  }
  for (int e = 0; e < s.num_edges(); ++e)
    if (merged[e]) cells[cell_of[find(tri_of(s.edge_rep[e]))]].merged_edges.push_back(e);

  for (auto& cell : cells) {
    // Develop the cell across merged edges, breadth first.
    std::vector<std::array<Vec3, 3>> pos(T);
    std::vector<char> placed(T, 0);
    const int root = cell.tris.front();
    pos[root] = develop_triangle(s, root);
    placed[root] = 1;
    std::vector<int> queue{root};
    std::vector<Vec3> pts(pos[root].begin(), pos[root].end());
    for (size_t k = 0; k < queue.size(); ++k) {
      const int t = queue[k];
      for (int side = 0; side < 3; ++side) {
        const int h = half_side(t, side);
        if (!merged[s.edge[h]]) continue;
        const int g = s.glue[h], u = tri_of(g);
        if (placed[u]) continue;
        const int c = side_of(g);
        // g runs target(h) -> origin(h).
        pos[u][c] = pos[t][(side + 1) % 3];
        pos[u][(c + 1) % 3] = pos[t][side];
        pos[u][(c + 2) % 3] =
            h2_third_point(pos[u][c], pos[u][(c + 1) % 3],
                           s.side_length(half_side(u, (c + 2) % 3)),
                           s.side_length(half_side(u, (c + 1) % 3)));
        placed[u] = 1;
        queue.push_back(u);
        pts.push_back(pos[u][(c + 2) % 3]);
      }
    }
    Eigen::Matrix3d M;
    for (int r = 0; r < 3; ++r) M.row(r) << -pts[r](0), pts[r](1), pts[r](2);
    const Vec3 c = M.fullPivLu().solve(Vec3::Constant(-1.0));
    const double q = mdot(c, c);
    const double rel = q / c.squaredNorm();
    if (rel < -1e-12) {
      const Vec3 ctr = c / std::sqrt(-q);
      cell.kind = CircleKind::Circle;
      cell.radius = hdist(ctr, pts[0]);
      for (const Vec3& p : pts)
        cell.spread = std::max(cell.spread, std::abs(hdist(ctr, p) - cell.radius));
    } else {
      cell.kind = rel <= 1e-12 ? CircleKind::Horocycle : CircleKind::Hypercycle;
      cell.radius = std::numeric_limits<double>::infinity();
      for (const Vec3& p : pts)
        cell.spread = std::max(cell.spread, std::abs(mdot(p, c) + 1.0));
    }
    if (cell.spread > 10 * tol)
      throw NotDelaunay("cell with " + std::to_string(cell.tris.size()) +
                        " triangles is not inscribed (spread " +
                        fmt17(cell.spread) + ")");
  }
  return cells;
}

}  // namespace hc
