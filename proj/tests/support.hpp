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

// Coordinate oracles and surface generators shared by the test binaries.
// Oracles here avoid the library's trig formulas: figures are built by
// walking frames or by bisection on raw hyperboloid distances.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "hypercone/conesurf.hpp"
#include "hypercone/hyptrig.hpp"

namespace hc::testing {

using Mat3 = Eigen::Matrix3d;

inline Mat3 boost2(double L) {
  Mat3 T = Mat3::Identity();
  T(0, 0) = T(1, 1) = std::cosh(L);
  T(0, 1) = T(1, 0) = std::sinh(L);
  return T;
}

inline Mat3 rot2(double th) {
  Mat3 R = Mat3::Identity();
  R(1, 1) = R(2, 2) = std::cos(th);
  R(1, 2) = -std::sin(th);
  R(2, 1) = std::sin(th);
  return R;
}

/// Walks a closed polygon in H^2: advance by lengths[i], then turn left by
/// turns[i]. Returns the distance of the final frame from the identity.
inline double walk_closure(const std::vector<double>& lengths,
                           const std::vector<double>& turns) {
  Mat3 F = Mat3::Identity();
  for (size_t i = 0; i < lengths.size(); ++i)
    F = F * boost2(lengths[i]) * rot2(turns[i]);
  return (F - Mat3::Identity()).cwiseAbs().maxCoeff();
}

/// Vertices visited by the same walk, starting at the origin.
inline std::vector<Vec3> walk_points(const std::vector<double>& lengths,
                                     const std::vector<double>& turns) {
  Mat3 F = Mat3::Identity();
  std::vector<Vec3> out{Vec3(1, 0, 0)};
  for (size_t i = 0; i < lengths.size(); ++i) {
    F = F * boost2(lengths[i]) * rot2(turns[i]);
    out.push_back(F.col(0));
  }
  return out;
}

inline double raw_dist(const Vec3& p, const Vec3& q) {
  return std::acosh(std::max(1.0, p(0) * q(0) - p.tail<2>().dot(q.tail<2>())));
}

/// Angle at the origin-moved vertex: translate p to the origin by the boost
/// that fixes the geodesic through it, then read Euclidean angles.
inline double raw_angle(const Vec3& p, const Vec3& q, const Vec3& r) {
  const double d = std::acosh(p(0));
  const double th = std::atan2(p(2), p(1));
  const Mat3 M = boost2(-d) * rot2(-th);
  const Vec3 q0 = M * q, r0 = M * r;
  double a = std::atan2(q0(2), q0(1)) - std::atan2(r0(2), r0(1));
  a = std::fmod(std::abs(a), 2 * std::numbers::pi);
  return a > std::numbers::pi ? 2 * std::numbers::pi - a : a;
}

/// Triangle with sides l0, l1, l2 placed by bisection: corner 0 at the
/// origin, corner 1 on the x axis, corner 2 above it.
inline std::array<Vec3, 3> bisect_triangle(double l0, double l1, double l2) {
  const Vec3 P0(1, 0, 0);
  const Vec3 P1(std::cosh(l2), std::sinh(l2), 0);
  auto at = [&](double th) {
    return Vec3(std::cosh(l1), std::sinh(l1) * std::cos(th),
                std::sinh(l1) * std::sin(th));
  };
  double lo = 0, hi = std::numbers::pi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (raw_dist(P1, at(mid)) < l0 ? lo : hi) = mid;
  }
  return {P0, P1, at(0.5 * (lo + hi))};
}

/// Lorentz matrix of a random orientation preserving isometry of H^3.
inline Eigen::Matrix4d random_isometry(std::mt19937_64& rng, double spread = 1.5) {
  std::uniform_real_distribution<double> U(-1, 1);
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix3d R =
        Eigen::AngleAxisd(std::numbers::pi * U(rng),
                          Eigen::Vector3d(U(rng), U(rng), U(rng)).normalized())
            .toRotationMatrix();
    Eigen::Matrix4d Q = Eigen::Matrix4d::Identity();
    Q.bottomRightCorner<3, 3>() = R;
    const double b = spread * U(rng);
    Eigen::Matrix4d B = Eigen::Matrix4d::Identity();
    B(0, 0) = B(1, 1) = std::cosh(b);
    B(0, 1) = B(1, 0) = std::sinh(b);
    A = A * Q * B;
  }
  return A;
}

// ---------------------------------------------------------------------------
// Surfaces.

/// Two triangles glued side k to side k: a torus with one vertex.
inline ConeSurface one_vertex_torus(double l0, double l1, double l2) {
  return assemble(1, {{0, 0, 0}, {0, 0, 0}},
                  {{half_side(0, 0), half_side(1, 0)},
                   {half_side(0, 1), half_side(1, 1)},
                   {half_side(0, 2), half_side(1, 2)}},
                  {l0, l1, l2});
}

/// Glues triangles along matching reversed vertex pairs; vertex pairs must
/// determine edges uniquely.
inline ConeSurface glue_by_vertices(int nv,
                                    const std::vector<std::array<int, 3>>& tris,
                                    const std::function<double(int, int)>& len) {
  std::map<std::pair<int, int>, int> open;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int s = 0; s < 3; ++s) {
      const int u = tris[t][s], v = tris[t][(s + 1) % 3];
      auto it = open.find({v, u});
      if (it != open.end()) {
        pairs.push_back({it->second, half_side(t, s)});
        lens.push_back(len(u, v));
        open.erase(it);
      } else {
        open[{u, v}] = half_side(t, s);
      }
    }
  return assemble(nv, tris, pairs, lens);
}

/// m x k grid torus (m, k >= 3) with lengths base * (1 + jitter * U(-1,1)).
inline ConeSurface grid_torus(int m, int k, double base, double jitter,
                              std::mt19937_64& rng) {
  std::vector<std::array<int, 3>> tris;
  auto id = [&](int i, int j) { return ((i + m) % m) * k + (j + k) % k; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  std::uniform_real_distribution<double> U(-1, 1);
  std::map<std::pair<int, int>, double> L;
  return glue_by_vertices(m * k, tris, [&](int u, int v) {
    const auto key = std::minmax(u, v);
    auto it = L.find(key);
    if (it == L.end()) it = L.emplace(key, base * (1 + jitter * U(rng))).first;
    return it->second;
  });
}

/// One-vertex genus-2 surface: fan triangulation of the octagon
/// a b a^-1 b^-1 c d c^-1 d^-1 with all lengths L.
inline ConeSurface genus2_octagon(double L) {
  std::vector<std::array<int, 3>> tris(6, {0, 0, 0});
  auto oct = [](int k) {
    if (k == 0) return half_side(0, 0);
    if (k == 7) return half_side(5, 2);
    return half_side(k - 1, 1);
  };
  std::vector<std::pair<int, int>> pairs{
      {oct(0), oct(2)}, {oct(1), oct(3)}, {oct(4), oct(6)}, {oct(5), oct(7)}};
  for (int k = 2; k <= 6; ++k)
    pairs.push_back({half_side(k - 2, 2), half_side(k - 1, 0)});
  return assemble(1, tris, pairs, std::vector<double>(pairs.size(), L));
}

/// Multiplies every length by (1 + jitter * U(-1,1)), retrying until all
/// triangles stay valid.
inline ConeSurface jitter_lengths(const ConeSurface& s, double jitter,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  for (int attempt = 0; attempt < 100; ++attempt) {
    ConeSurface r = s;
    for (double& l : r.length) l *= 1 + jitter * U(rng);
    if (is_valid(r)) return r;
    jitter *= 0.7;
  }
  return s;
}

/// Adds random interior vertices until the surface has nv vertices.
inline ConeSurface grow_vertices(ConeSurface s, int nv, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.2, 1.0);
  while (s.nv < nv) {
    // Split the largest triangle to keep shapes reasonable.
    int best = 0;
    double amax = -1;
    for (int t = 0; t < s.num_tris(); ++t) {
      const auto A = tri_angles(s, t);
      const double a = std::numbers::pi - A[0] - A[1] - A[2];
      if (a > amax) {
        amax = a;
        best = t;
      }
    }
    s = insert_vertex(s, best, Eigen::Vector3d(U(rng), U(rng), U(rng)));
  }
  return s;
}

/// Two-vertex torus: one-vertex torus with a vertex inserted in triangle 0
/// whose spokes are shortened until its cone angle is 2 pi + excess.
inline ConeSurface nonconvex_torus(double l, double excess,
                                   const Eigen::Vector3d& w = {1, 1.3, 0.8}) {
  const ConeSurface base = insert_vertex(one_vertex_torus(l, l * 1.1, l * 0.95), 0, w);
  auto scaled = [&](double f) {
    ConeSurface r = base;
    for (int h = 0; h < r.num_half_sides(); ++h)
      if (r.origin(h) == 1) r.length[r.edge[h]] = base.length[base.edge[h]] * f;
    return r;
  };
  double lo = 0.5, hi = 1.0;  // cone angle decreases in f
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    ConeSurface r = scaled(mid);
    const bool ok = is_valid(r);
    (ok && cone_angle(r, 1) < 2 * std::numbers::pi + excess ? hi : lo) = mid;
  }
  return scaled(hi);
}

/// Corpus of tori and genus-2 surfaces used by the property tests.
inline std::vector<ConeSurface> surface_corpus(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<ConeSurface> out;
  for (int i = 0; out.size() < static_cast<size_t>(count); ++i) {
    ConeSurface s;
    switch (i % 4) {
      case 0: {
        const double l = 0.5 + 1.5 * U(rng);
        s = jitter_lengths(one_vertex_torus(l, l, l), 0.3, rng);
        break;
      }
      case 1:
        s = grid_torus(3 + i % 2, 3, 0.4 + U(rng), 0.15, rng);
        break;
      case 2:
        s = jitter_lengths(
            grow_vertices(genus2_octagon(1.0 + U(rng)), 20, rng), 0.05, rng);
        break;
      default:
        s = jitter_lengths(
            grow_vertices(one_vertex_torus(1.2, 1.2, 1.2), 2 + i % 5, rng),
            0.05, rng);
        break;
    }
    if (is_valid(s)) out.push_back(s);
  }
  return out;
}


/// Regular tetrahedron boundary with side l: a sphere with four cone points.
inline ConeSurface tetrahedron(double l) {
  return glue_by_vertices(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}},
                          [l](int, int) { return l; });
}

/// Double cover in which crossing h switches sheets iff flip[h].
inline ConeSurface double_cover(const ConeSurface& s, const std::vector<char>& flip) {
  const int T = s.num_tris();
  auto lift = [&](int h, int sheet) { return 3 * (T * sheet + tri_of(h)) + side_of(h); };
  // Corners of the cover, merged around vertices.
  std::vector<int> root(6 * T);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return root[x] == x ? x : root[x] = find(root[x]);
  };
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int h = 0; h < s.num_half_sides(); ++h) {
      const int g = s.glue[h];
      const int other = sheet ^ (flip[h] ? 1 : 0);
      // origin(h) is target(g), and target(h) is origin(g).
      root[find(lift(h, sheet))] = find(lift(next_in_tri(g), other));
      root[find(lift(next_in_tri(h), sheet))] = find(lift(g, other));
    }
  std::map<int, int> ids;
  std::vector<std::array<int, 3>> tris(2 * T);
  for (int c = 0; c < 6 * T; ++c) {
    auto it = ids.emplace(find(c), static_cast<int>(ids.size())).first;
    tris[c / 3][c % 3] = it->second;
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int h = 0; h < s.num_half_sides(); ++h) {
      const int a = lift(h, sheet), b = lift(s.glue[h], sheet ^ (flip[h] ? 1 : 0));
      if (a < b) {
        pairs.push_back({a, b});
        lens.push_back(s.side_length(h));
      }
    }
  return assemble(static_cast<int>(ids.size()), tris, pairs, lens);
}

/// Orthonormal frame at p with first tangent pointing at q.
inline Mat3 frame_at(const Vec3& p, const Vec3& q) {
  const Vec3 u = h2_direction(p, q);
  Vec3 n = minkowski_gram<double, 3>() * p.cross(u);
  n /= std::sqrt(mdot(n, n));
  Mat3 F;
  F << p, u, n;
  return F;
}

inline Mat3 frame_inverse(const Mat3& F) {
  const Mat3 J = minkowski_gram<double, 3>();
  return J * F.transpose() * J;
}

struct StripLoop {
  double length;  // translation length of the holonomy
  bool embedded;  // the axis crosses every edge of the strip
};

/// Develops the triangles met by the cyclic crossing word (each half-side
/// leaves the triangle entered by the previous one) and reads off the
/// closed geodesic of the holonomy.
inline StripLoop strip_loop(const ConeSurface& s, const std::vector<int>& word) {
  Mat3 M = Mat3::Identity();
  std::vector<std::pair<Vec3, Vec3>> sides;
  for (int h : word) {
    const auto P = develop_triangle(s, tri_of(h));
    const Vec3 a = M * P[side_of(h)], b = M * P[(side_of(h) + 1) % 3];
    sides.push_back({a, b});
    const int g = s.glue[h];
    const auto Q = develop_triangle(s, tri_of(g));
    const Mat3 from = frame_at(Q[side_of(g)], Q[(side_of(g) + 1) % 3]);
    const Mat3 to = frame_at(b, a);
    M = to * frame_inverse(from);
  }
  StripLoop out{std::acosh(std::max(1.0, 0.5 * (M.trace() - 1.0))), false};
  Eigen::EigenSolver<Mat3> es(M);
  std::vector<Vec3> null;
  for (int i = 0; i < 3; ++i)
    if (std::abs(es.eigenvalues()(i).imag()) < 1e-12 &&
        std::abs(std::log(std::abs(es.eigenvalues()(i).real()))) > 1e-9)
      null.push_back(es.eigenvectors().col(i).real());
  if (null.size() != 2) return out;
  const Vec3 n = minkowski_gram<double, 3>() * null[0].cross(null[1]);
  out.embedded = true;
  for (const auto& [a, b] : sides)
    if (mdot(a, n) * mdot(b, n) >= 0) out.embedded = false;
  return out;
}

/// Largest inscribed disk radius of a convex polygon, by Nelder-Mead on the
/// smallest signed side distance from several starts.
inline double max_inradius(const std::vector<Vec3>& poly) {
  const size_t m = poly.size();
  Vec3 centre = Vec3::Zero();
  for (const auto& p : poly) centre += p;
  centre = h2_normalize(centre);
  std::vector<Vec3> normal(m);
  for (size_t i = 0; i < m; ++i) {
    Vec3 n = minkowski_gram<double, 3>() * poly[i].cross(poly[(i + 1) % m]);
    n /= std::sqrt(mdot(n, n));
    normal[i] = mdot(centre, n) < 0 ? Vec3(-n) : n;
  }
  auto f = [&](const Eigen::Vector2d& k) {
    if (k.squaredNorm() >= 1) return -1e9;
    const Vec3 p = Vec3(1, k(0), k(1)) / std::sqrt(1 - k.squaredNorm());
    double v = 1e9;
    for (const auto& n : normal) v = std::min(v, std::asinh(mdot(p, n)));
    return v;
  };
  double best = -1e9;
  std::vector<Vec3> starts{centre};
  for (size_t i = 0; i < m; i += 2)
    starts.push_back(h2_normalize(centre + poly[i] + poly[(i + 1) % m]));
  for (const Vec3& st : starts) {
    std::array<Eigen::Vector2d, 3> x;
    x[0] = st.tail<2>() / st(0);
    const double step = 0.1 * (1 - x[0].norm());
    x[1] = x[0] + Eigen::Vector2d(step, 0);
    x[2] = x[0] + Eigen::Vector2d(0, step);
    std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
    for (int it = 0; it < 400; ++it) {
      if ((x[1] - x[0]).norm() + (x[2] - x[0]).norm() < 1e-12) break;
      std::array<int, 3> o{0, 1, 2};
      std::sort(o.begin(), o.end(), [&](int a, int b) { return fx[a] > fx[b]; });
      const Eigen::Vector2d c = 0.5 * (x[o[0]] + x[o[1]]);
      const Eigen::Vector2d r = c + (c - x[o[2]]);
      const double fr = f(r);
      if (fr > fx[o[0]]) {
        const Eigen::Vector2d e = c + 2 * (c - x[o[2]]);
        const double fe = f(e);
        if (fe > fr) {
          x[o[2]] = e;
          fx[o[2]] = fe;
        } else {
          x[o[2]] = r;
          fx[o[2]] = fr;
        }
      } else if (fr > fx[o[1]]) {
        x[o[2]] = r;
        fx[o[2]] = fr;
      } else {
        const Eigen::Vector2d k = 0.5 * (c + x[o[2]]);
        const double fk = f(k);
        if (fk > fx[o[2]]) {
          x[o[2]] = k;
          fx[o[2]] = fk;
        } else {
          for (int j : {o[1], o[2]}) {
            x[j] = 0.5 * (x[j] + x[o[0]]);
            fx[j] = f(x[j]);
          }
        }
      }
    }
    best = std::max({best, fx[0], fx[1], fx[2]});
  }
  return best;
}

/// Vertices of the right-angled hexagon with alternate sides a, b, c, with
/// the other sides from the hexagon law; closure is the returned residual.
inline std::vector<Vec3> hexagon_points(double a, double b, double c,
                                        double* closure = nullptr) {
  const auto H = hexagon_complete(a, b, c);
  const double q = 0.5 * std::numbers::pi;
  const std::vector<double> sides{H.a, H.gamma, H.b, H.alpha, H.c, H.beta};
  const std::vector<double> turns(6, q);
  if (closure) *closure = walk_closure(sides, turns);
  auto pts = walk_points(sides, turns);
  pts.pop_back();
  return pts;
}

}  // namespace hc::testing
