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

#include "hypercone/sysbal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <queue>

#include "hypercone/errors.hpp"
#include "hypercone/geodesic.hpp"

namespace hc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec3 along(const Vec3& a, const Vec3& b, double u) {
  return std::cosh(u) * a + std::sinh(u) * h2_direction(a, b);
}

double point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  return hdist(p, h2_nearest_on_segment(a, b, p));
}

// Distance between two geodesic segments of one triangle that do not cross
// in their interiors; the minimum is then attained at an endpoint.
double segment_segment(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                       const Vec3& b1) {
  return std::min({point_segment(a0, b0, b1), point_segment(a1, b0, b1),
                   point_segment(b0, a0, a1), point_segment(b1, a0, a1)});
}

struct Slot {
  int node;
  int h;  // half-side the node sits on, in this triangle
  Vec3 e0, e1, mid;
};

// Nodes are sub-segments of edges; an arc joins two slots on different sides
// of one triangle, since a geodesic leaves a triangle through another side.
struct LoopGraph {
  int num_nodes = 0;
  int dim = 0;
  std::vector<int> mu;  // half-side -> dim labels
  std::vector<std::vector<Slot>> slots;
  std::vector<std::vector<double>> w;  // per triangle, row-major slots x slots
  std::vector<std::vector<std::pair<int, int>>> node_slots;  // (tri, index)
  std::vector<char> root;
};

LoopGraph build_graph(const ConeSurface& s, const std::vector<Eigen::VectorXi>& L,
                      const std::vector<int>& n, bool lower) {
  LoopGraph g;
  g.dim = L.empty() ? 0 : static_cast<int>(L[0].size());
  std::vector<int> offset(s.num_edges() + 1, 0);
  for (int e = 0; e < s.num_edges(); ++e) offset[e + 1] = offset[e] + n[e];
  g.num_nodes = offset.back();
  g.mu.assign(static_cast<size_t>(s.num_half_sides()) * g.dim, 0);
  g.root.assign(g.num_nodes, 0);
  for (int h = 0; h < s.num_half_sides(); ++h) {
    const int e = s.edge[h];
    if (h != s.edge_rep[e])
      for (int i = 0; i < g.dim; ++i) g.mu[h * g.dim + i] = L[h](i);
    if (L[h].any())
      for (int k = 0; k < n[e]; ++k) g.root[offset[e] + k] = 1;
  }
  g.slots.resize(s.num_tris());
  g.w.resize(s.num_tris());
  g.node_slots.resize(g.num_nodes);
  for (int t = 0; t < s.num_tris(); ++t) {
    const auto P = develop_triangle(s, t);
    auto& sl = g.slots[t];
    for (int c = 0; c < 3; ++c) {
      const int h = half_side(t, c);
      const int e = s.edge[h];
      const double len = s.length[e];
      const bool fwd = h == s.edge_rep[e];
      const Vec3& A = fwd ? P[c] : P[(c + 1) % 3];
      const Vec3& B = fwd ? P[(c + 1) % 3] : P[c];
      for (int k = 0; k < n[e]; ++k) {
        const double u0 = len * k / n[e], u1 = len * (k + 1) / n[e];
        Slot x{offset[e] + k, h, along(A, B, u0), along(A, B, u1),
               along(A, B, 0.5 * (u0 + u1))};
        g.node_slots[x.node].push_back({t, static_cast<int>(sl.size())});
        sl.push_back(x);
      }
    }
    const size_t m = sl.size();
    auto& W = g.w[t];
    W.assign(m * m, 0.0);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = i + 1; j < m; ++j) {
        if (sl[i].h == sl[j].h) continue;
        const double d = lower ? segment_segment(sl[i].e0, sl[i].e1, sl[j].e0,
                                                 sl[j].e1)
                               : hdist(sl[i].mid, sl[j].mid);
        W[i * m + j] = W[j * m + i] = d;
      }
  }
  return g;
}

// Shortest closed walk with a nonzero label: for each root, a shortest-path
// tree plus one closing arc. Processed roots are removed from later searches.
double shortest_nonzero_loop(const LoopGraph& g, double cap) {
  double best = kInf;
  const int D = g.dim;
  std::vector<double> dist(g.num_nodes);
  std::vector<int> label(static_cast<size_t>(g.num_nodes) * D);
  std::vector<char> done(g.num_nodes), removed(g.num_nodes, 0);
  std::vector<int> touched;
  using Item = std::pair<double, int>;
  std::vector<int> cand(D);
  for (int r = 0; r < g.num_nodes; ++r) {
    if (!g.root[r]) continue;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[r] = 0;
    std::fill(label.begin() + r * D, label.begin() + (r + 1) * D, 0);
    pq.push({0.0, r});
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (done[u] || du > dist[u]) continue;
      const double limit = std::min(best, cap);
      if (2 * du > limit) break;
      done[u] = 1;
      for (const auto& [t, i] : g.node_slots[u]) {
        const auto& sl = g.slots[t];
        const size_t m = sl.size();
        const int hu = sl[i].h;
        for (size_t j = 0; j < m; ++j) {
          if (sl[j].h == hu) continue;
          const int v = sl[j].node;
          if (removed[v]) continue;
          const double w = g.w[t][i * m + j];
          const int hv = sl[j].h;
          bool differs = false;
          for (int k = 0; k < D; ++k) {
            cand[k] = label[u * D + k] + g.mu[hv * D + k] - g.mu[hu * D + k];
            if (done[v] && cand[k] != label[v * D + k]) differs = true;
          }
          if (done[v]) {
            if (differs) {
              const double len = du + w + dist[v];
              if (len <= cap) best = std::min(best, len);
            }
            continue;
          }
          if (du + w < dist[v]) {
            dist[v] = du + w;
            std::copy(cand.begin(), cand.end(), label.begin() + v * D);
            if (2 * dist[v] <= std::min(best, cap)) pq.push({dist[v], v});
          }
        }
      }
    }
    removed[r] = 1;
  }
  return best;
}

}  // namespace

std::vector<Eigen::VectorXi> crossing_labels(const ConeSurface& s) {
  const int E = s.num_edges();
  // Primal spanning tree by breadth-first search from vertex 0.
  std::vector<std::vector<int>> out(s.nv);
  for (int h = 0; h < s.num_half_sides(); ++h) out[s.origin(h)].push_back(h);
  std::vector<int> parent_edge(s.nv, -1), depth(s.nv, -1), parent(s.nv, -1);
  std::vector<char> in_tree(E, 0);
  std::deque<int> q{0};
  depth[0] = 0;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int h : out[v]) {
      const int w = s.target(h);
      if (depth[w] >= 0) continue;
      depth[w] = depth[v] + 1;
      parent[w] = v;
      parent_edge[w] = s.edge[h];
      in_tree[s.edge[h]] = 1;
      q.push_back(w);
    }
  }
  // Dual spanning tree over triangles avoiding primal tree edges.
  std::vector<char> in_cotree(E, 0), seen(s.num_tris(), 0);
  q = {0};
  seen[0] = 1;
  while (!q.empty()) {
    const int t = q.front();
    q.pop_front();
    for (int c = 0; c < 3; ++c) {
      const int h = half_side(t, c);
      if (in_tree[s.edge[h]]) continue;
      const int u = tri_of(s.glue[h]);
      if (seen[u]) continue;
      seen[u] = 1;
      in_cotree[s.edge[h]] = 1;
      q.push_back(u);
    }
  }
  std::vector<int> leftover;
  for (int e = 0; e < E; ++e)
    if (!in_tree[e] && !in_cotree[e]) leftover.push_back(e);
  const int D = static_cast<int>(leftover.size());

  // Coefficients of z_l = l + tree path from target back to origin.
  Eigen::MatrixXi coef = Eigen::MatrixXi::Zero(E, D);
  auto climb = [&](int v, int col, int sign) {
    while (parent[v] >= 0) {
      const int e = parent_edge[v];
      const int along_up = s.origin(s.edge_rep[e]) == v ? 1 : -1;
      coef(e, col) += sign * along_up;
      v = parent[v];
    }
  };
  for (int i = 0; i < D; ++i) {
    const int e = leftover[i];
    const int rep = s.edge_rep[e];
    coef(e, i) += 1;
    climb(s.target(rep), i, 1);
    climb(s.origin(rep), i, -1);
  }
  std::vector<Eigen::VectorXi> L(s.num_half_sides());
  for (int h = 0; h < s.num_half_sides(); ++h) {
    const int e = s.edge[h];
    L[h] = coef.row(e).transpose() * (h == s.edge_rep[e] ? 1 : -1);
  }
  return L;
}

IntervalEstimate systole(const ConeSurface& s, double cap,
                         const SystoleOptions& opt) {
  const auto L = crossing_labels(s);
  if (L.empty() || L[0].size() == 0) return {cap, kInf};
  double pitch = 0;
  for (double l : s.length) pitch = std::max(pitch, l);
  IntervalEstimate out{0.0, kInf};
  bool first = true;
  for (;;) {
    std::vector<int> n(s.num_edges());
    for (int e = 0; e < s.num_edges(); ++e)
      n[e] = std::max(1, static_cast<int>(std::ceil(s.length[e] / pitch)));
    long arcs = 0;
    for (int t = 0; t < s.num_tris(); ++t) {
      long m = 0;
      for (int c = 0; c < 3; ++c) m += n[s.edge[half_side(t, c)]];
      arcs += m * m;
    }
    if (!first && arcs > opt.max_arcs) break;
    first = false;
    const double lo = shortest_nonzero_loop(build_graph(s, L, n, true), cap);
    if (lo == kInf) return {cap, kInf};
    out.lower = std::max(out.lower, lo);
    const double up = shortest_nonzero_loop(build_graph(s, L, n, false), cap);
    out.upper = std::min(out.upper, up);
    if (out.upper - out.lower <= opt.tolerance) break;
    if (opt.sufficient && opt.sufficient(out)) break;
    pitch *= 0.5;
  }
  return out;
}

IntervalEstimate sparsity(const ConeSurface& s, const std::vector<char>& V,
                          double eps) {
  if (std::none_of(V.begin(), V.end(), [](char c) { return c != 0; }))
    return {kInf, kInf};
  double best = 0;
  for (int t = 0; t < s.num_tris(); ++t) {
    const auto P = develop_triangle(s, t);
    const Eigen::Vector2d K[3] = {P[0].tail<2>() / P[0](0),
                                  P[1].tail<2>() / P[1](0),
                                  P[2].tail<2>() / P[2](0)};
    // Samples are pulled towards the centroid by a factor 1 - kShrink so that
    // none lies on a side; the displacement is charged to the net radius.
    constexpr double kShrink = 1e-9;
    const Eigen::Vector2d G = (K[0] + K[1] + K[2]) / 3.0;
    auto lift = [](const Eigen::Vector2d& k) {
      return Vec3(Vec3(1.0, k(0), k(1)) / std::sqrt(1.0 - k.squaredNorm()));
    };
    auto grid = [&](int i, int j, int m) -> Eigen::Vector2d {
      return (K[0] * (m - i - j) + K[1] * i + K[2] * j) / static_cast<double>(m);
    };
    auto at = [&](int i, int j, int m) { return lift(grid(i, j, m)); };
    auto sample = [&](int i, int j, int m) {
      return lift((1.0 - kShrink) * grid(i, j, m) + kShrink * G);
    };
    double shift = 0;
    for (int c = 0; c < 3; ++c)
      shift = std::max(shift, hdist(P[c], lift((1.0 - kShrink) * K[c] + kShrink * G)));
    // Dyadic subdivision in the Klein model until every piece is small.
    int m = 1;
    for (;;) {
      double longest = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; i + j < m; ++j) {
          const Vec3 a = at(i, j, m), b = at(i + 1, j, m), c = at(i, j + 1, m);
          longest = std::max({longest, hdist(a, b), hdist(b, c), hdist(c, a)});
          if (i + j + 1 < m) {
            const Vec3 d = at(i + 1, j + 1, m);
            longest = std::max({longest, hdist(b, d), hdist(c, d)});
          }
        }
      if (longest + shift <= eps) break;
      m *= 2;
    }
    for (int i = 0; i <= m; ++i)
      for (int j = 0; i + j <= m; ++j) {
        const Vec3 p = sample(i, j, m);
        double direct = kInf;
        for (int c = 0; c < 3; ++c)
          if (V[s.tris[t][c]]) direct = std::min(direct, hdist(p, P[c]));
        if (direct <= best) continue;
        const auto r = distance_to_vertices(s, t, p, V, direct);
        best = std::max(best, std::min(direct, r.distance));
      }
  }
  return {best, best + eps};
}

IntervalEstimate cone_sparsity(const ConeSurface& s, double eps) {
  std::vector<char> V(s.nv, 0);
  for (int v : cone_points(s)) V[v] = 1;
  return sparsity(s, V, eps);
}

double hexagon_disk_bound(double D) {
  D = std::min(D, 40.0);
  auto f = [D](double d1) {
    const double d3 = std::atanh(1.0 / (2.0 * std::cosh(d1)));
    return std::min(right_triangle_inradius(D, d1),
                    right_triangle_inradius(0.5 * D, d3));
  };
  // The first term grows and the second shrinks with d1.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 1e-9, hi = 20.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max(f1, f2);
}

namespace {

struct DeltaTable {
  static constexpr double kFirst = 1e-4;
  static constexpr int kPerOctave = 8;
  std::vector<double> x, y;

  DeltaTable() {
    for (double d = kFirst; d <= 100.0; d *= std::exp2(1.0 / kPerOctave))
      x.push_back(d);
    y.resize(x.size());
    // Running minimum from the right keeps the table nondecreasing and below
    // the pointwise bound.
    double run = kInf;
    for (size_t k = x.size(); k-- > 0;) {
      run = std::min(run, hexagon_disk_bound(0.5 * x[k]));
      y[k] = run;
    }
  }
};

const DeltaTable& delta_table() {
  static const DeltaTable table;
  return table;
}

}  // namespace

double delta_of(double Delta) {
  const auto& T = delta_table();
  const size_t K = T.x.size();
  if (!(Delta > 0)) return 0.0;
  if (Delta >= T.x[K - 1]) return T.y[K - 2];
  if (Delta < T.x[1]) return T.y[0] * Delta / T.x[1];
  // On [x_k, x_{k+1}] run from y_{k-1} to y_k, below the bound at x_k.
  const size_t k = std::upper_bound(T.x.begin(), T.x.end(), Delta) - T.x.begin() - 1;
  const double u = (Delta - T.x[k]) / (T.x[k + 1] - T.x[k]);
  return T.y[k - 1] + u * (T.y[k] - T.y[k - 1]);
}

const char* to_string(Balance b) {
  switch (b) {
    case Balance::Yes:
      return "yes";
    case Balance::No:
      return "no";
    default:
      return "unknown";
  }
}

BalanceReport is_balanced(const ConeSurface& s, double eps, double cap) {
  if (!is_convex(s)) throw NotConvex("metric has a reflex vertex");
  BalanceReport r;
  r.cosp = cone_sparsity(s, eps);
  SystoleOptions opt;
  opt.sufficient = [&r](const IntervalEstimate& sys) {
    return r.cosp.upper < delta_of(sys.lower) || r.cosp.lower >= delta_of(sys.upper);
  };
  r.sys = systole(s, cap, opt);
  r.delta_lower = delta_of(r.sys.lower);
  r.delta_upper = delta_of(r.sys.upper);
  if (r.cosp.upper < r.delta_lower)
    r.verdict = Balance::Yes;
  else if (r.cosp.lower >= r.delta_upper)
    r.verdict = Balance::No;
  return r;
}

}  // namespace hc
