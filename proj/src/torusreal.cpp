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

#include "hypercone/torusreal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "hull_core.hpp"
#include "hypercone/delaunay.hpp"
#include "hypercone/errors.hpp"
#include "text_io.hpp"

namespace hc {

namespace {

using std::numbers::pi;

double wrap_angle(double x) { return std::remainder(x, 2 * pi); }

/// 2 asinh(sqrt(h / 2)) recovers d from h = cosh d - 1 without cancellation.
double from_half_excess(double h) { return 2 * std::asinh(std::sqrt(std::max(0.0, h) / 2)); }

double sinh2_half(double v) {
  const double s = std::sinh(v / 2);
  return 2 * s * s;
}

using Polygon = std::vector<OrbitLabel>;

/// Rotates a cycle to start at its smallest label.
Polygon canonical_cycle(Polygon p) {
  std::rotate(p.begin(), std::min_element(p.begin(), p.end()), p.end());
  return p;
}

Polygon shifted(Polygon p, int dk) {
  for (auto& l : p) l.k += dk;
  return p;
}

struct OrbitHull {
  std::set<Polygon> orbits;
  double axis_distance = std::numeric_limits<double>::infinity();
};

OrbitHull orbit_hull(const TorusConfig& c, int K, double tol) {
  const int n = c.size();
  const int N = (2 * K + 1) * n;
  auto label = [&](int id) { return OrbitLabel{id / n - K, id % n}; };
  const detail::FrameFn frame = [&](std::span<const int> ids, MVector* out) {
    const double mid = ids.size() == 1 ? place(c, label(ids[0])).t
                                       : 0.5 * (place(c, label(ids[0])).t + place(c, label(ids[1])).t);
    for (size_t j = 0; j < ids.size(); ++j) {
      const OrbitPlace p = place(c, label(ids[j]));
      const double t = p.t - mid;
      out[j] = MVector(std::cosh(p.x) * std::cosh(t), std::cosh(p.x) * std::sinh(t),
                       std::sinh(p.x) * std::cos(p.theta), std::sinh(p.x) * std::sin(p.theta));
    }
  };
  detail::HullCore core;
  try {
    core = detail::convex_hull(N, frame, tol);
  } catch (const DegenerateSpan& e) {
    throw DegenerateConfig(std::string("orbit hull collapses: ") + e.what());
  }
  OrbitHull out;
  for (const auto& F : core.facets) {
    Polygon poly;
    for (int id : F) poly.push_back(label(id));
    const bool central = std::any_of(poly.begin(), poly.end(), [](auto& l) { return l.k == 0; });
    if (!central) continue;
    // Distance from the axis to the facet plane, invariant along the axis.
    const std::array<int, 3> ids{F[0], F[1], F[2]};
    MVector P[3];
    frame(ids, P);
    const MVector nrm = detail::plane_normal(P[0], P[1], P[2]);
    const double q = nrm(0) * nrm(0) - nrm(1) * nrm(1);
    out.axis_distance = std::min(out.axis_distance, q > 0 ? std::asinh(std::sqrt(q)) : 0.0);
    int kmin = poly[0].k;
    for (const auto& l : poly) kmin = std::min(kmin, l.k);
    out.orbits.insert(canonical_cycle(shifted(poly, -kmin)));
  }
  return out;
}

int turns_between(const TorusConfig& c, const OrbitLabel& p, const OrbitLabel& q) {
  const double ta = place(c, p).theta, tb = place(c, q).theta;
  return static_cast<int>(std::lround((ta + wrap_angle(tb - ta) - tb) / (2 * pi)));
}

ConeSurface quotient_surface(const TorusConfig& c, const std::set<Polygon>& orbits) {
  struct Half {
    OrbitLabel from, to;
  };
  std::vector<std::array<int, 3>> tris;
  std::vector<Half> halves;
  for (const auto& poly : orbits)
    for (size_t j = 1; j + 1 < poly.size(); ++j) {
      const std::array<OrbitLabel, 3> T{poly[0], poly[j], poly[j + 1]};
      tris.push_back({T[0].vertex, T[1].vertex, T[2].vertex});
      for (int s = 0; s < 3; ++s) halves.push_back({T[s], T[(s + 1) % 3]});
    }
  std::vector<bool> seen(c.size(), false);
  for (const auto& T : tris)
    for (int v : T) seen[v] = true;
  for (int v = 0; v < c.size(); ++v)
    if (!seen[v]) throw DegenerateConfig("vertex " + std::to_string(v) + " is not extreme in the orbit hull");
  std::map<std::array<int, 3>, int> open;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  for (int h = 0; h < static_cast<int>(halves.size()); ++h) {
    const auto& H = halves[h];
    const std::array<int, 3> fwd{H.from.vertex, H.to.vertex, H.to.k - H.from.k};
    const std::array<int, 3> rev{H.to.vertex, H.from.vertex, H.from.k - H.to.k};
    const auto it = open.find(rev);
    if (it != open.end()) {
      pairs.push_back({it->second, h});
      lens.push_back(orbit_distance(c, H.from, H.to));
      open.erase(it);
    } else if (!open.emplace(fwd, h).second) {
      throw DegenerateConfig("orbit hull edge used twice");
    }
  }
  if (!open.empty()) throw DegenerateConfig("orbit hull facets do not close up");
  ConeSurface s = assemble(c.size(), tris, pairs, lens);
  if (!s.assembly_issues.empty() || !is_valid(s) || euler_characteristic(s) != 0)
    throw DegenerateConfig("orbit hull boundary is not a torus");
  s.tag.resize(halves.size());
  for (int h = 0; h < static_cast<int>(halves.size()); ++h)
    s.tag[h] = Eigen::Vector2d(halves[h].to.k - halves[h].from.k,
                               turns_between(c, halves[h].from, halves[h].to));
  return s;
}

/// Point at distances dp, dq from p, q (|pq| = dpq), left or right of p -> q.
Vec3 third_point(const Vec3& p, const Vec3& q, double dpq, double dp, double dq, bool left) {
  const double A = triangle_angles(dq, dp, dpq)[0];
  const Vec3 u = h2_direction(p, q);
  Vec3 n = minkowski_gram<double, 3>() * p.cross(u);
  n /= std::sqrt(mdot(n, n));
  if ((h2_orient(p, u, n) < 0) == left) n = -n;
  return h2_normalize(std::cosh(dp) * p + std::sinh(dp) * (std::cos(A) * u + std::sin(A) * n));
}

/// Funnel shortest path through a developed sleeve; portals are (left, right).
double funnel_length(const Vec3& start, const Vec3& end,
                     std::vector<std::pair<Vec3, Vec3>> portals) {
  portals.push_back({end, end});
  std::vector<Vec3> path{start};
  Vec3 apex = start, left = start, right = start;
  size_t left_i = 0, right_i = 0;
  auto cross = [](const Vec3& a, const Vec3& b, const Vec3& p) { return h2_orient(a, b, p); };
  for (size_t i = 0; i < portals.size(); ++i) {
    const Vec3& pl = portals[i].first;
    const Vec3& pr = portals[i].second;
    if (cross(apex, right, pr) >= 0) {
      if (apex == right || cross(apex, left, pr) < 0) {
        right = pr;
        right_i = i;
      } else {
        path.push_back(left);
        apex = right = left;
        i = right_i = left_i;
        continue;
      }
    }
    if (cross(apex, left, pl) <= 0) {
      if (apex == left || cross(apex, right, pl) > 0) {
        left = pl;
        left_i = i;
      } else {
        path.push_back(right);
        apex = left = right;
        i = left_i = right_i;
        continue;
      }
    }
  }
  path.push_back(end);
  double len = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) len += hdist(path[i], path[i + 1]);
  return len;
}

/// With alpha = 0 each orbit runs parallel to the axis. Throws when the
/// orbits span only a plane, or when they fit in a half-space bounded by a
/// plane through the axis, so that the hull has unbounded facets.
void check_rotation(const TorusConfig& c) {
  if (std::remainder(c.alpha, 2 * pi) != 0) return;
  std::vector<double> angles;
  for (int i = 0; i < c.size(); ++i) angles.push_back(std::fmod(std::fmod(c.vertex(i).phi, 2 * pi) + 2 * pi, 2 * pi));
  std::sort(angles.begin(), angles.end());
  bool planar = true;
  double gap = angles.front() + 2 * pi - angles.back();
  for (size_t i = 0; i < angles.size(); ++i) {
    if (std::abs(std::remainder(angles[i] - angles[0], pi)) > 1e-12) planar = false;
    if (i > 0) gap = std::max(gap, angles[i] - angles[i - 1]);
  }
  if (planar) throw DegenerateConfig("alpha = 0 and all vertices lie in one plane through the axis");
  if (gap >= pi - 1e-12)
    throw NotStabilized("alpha = 0 and the axis lies on the boundary, so facets along it are unbounded");
}

}  // namespace

const TorusVertex& TorusConfig::vertex(int i) const {
  const int n1 = static_cast<int>(bank1.size());
  return i < n1 ? bank1[i] : bank2[i - n1];
}

void check_config(const TorusConfig& c) {
  if (!(c.a > 0)) throw DegenerateConfig("shift a must be positive, got " + fmt17(c.a));
  if (!std::isfinite(c.alpha)) throw DegenerateConfig("alpha is not finite");
  if (c.bank1.empty() || c.bank2.empty())
    throw DegenerateConfig("both banks need at least one vertex");
  for (int i = 0; i < c.size(); ++i) {
    const auto& v = c.vertex(i);
    if (!(v.x > 0)) throw DegenerateConfig("vertex " + std::to_string(i) + " lies on the axis");
    if (!std::isfinite(v.y) || !std::isfinite(v.phi))
      throw DegenerateConfig("vertex " + std::to_string(i) + " has non-finite coordinates");
  }
  if (c.bank1[0].y != 0 || c.bank1[0].phi != 0)
    throw DegenerateConfig("gauge requires y = phi = 0 at the first vertex");
}

LorentzIsometry generator(const TorusConfig& c) { return loxodromic(c.a, c.alpha); }

Eigen::VectorXd to_coords(const TorusConfig& c) {
  const int n = c.size();
  Eigen::VectorXd q(3 * n);
  int r = 0;
  for (int i = 0; i < n; ++i) q(r++) = c.vertex(i).x;
  for (int i = 1; i < n; ++i) q(r++) = c.vertex(i).y;
  for (int i = 1; i < n; ++i) q(r++) = c.vertex(i).phi;
  q(r++) = c.a;
  q(r++) = c.alpha;
  return q;
}

TorusConfig from_coords(const TorusConfig& shape, const Eigen::VectorXd& q) {
  TorusConfig c = shape;
  const int n = c.size();
  if (q.size() != 3 * n) throw DegenerateConfig("coordinate vector has the wrong size");
  auto at = [&](int i) -> TorusVertex& {
    const int n1 = static_cast<int>(c.bank1.size());
    return i < n1 ? c.bank1[i] : c.bank2[i - n1];
  };
  int r = 0;
  for (int i = 0; i < n; ++i) at(i).x = q(r++);
  for (int i = 1; i < n; ++i) at(i).y = q(r++);
  for (int i = 1; i < n; ++i) at(i).phi = q(r++);
  c.a = q(r++);
  c.alpha = q(r++);
  at(0).y = at(0).phi = 0;
  return c;
}

std::vector<std::string> coord_names(const TorusConfig& c) {
  const int n = c.size(), n1 = static_cast<int>(c.bank1.size());
  auto tag = [&](int i) {
    return i < n1 ? "1." + std::to_string(i + 1) : "2." + std::to_string(i - n1 + 1);
  };
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("x" + tag(i));
  for (int i = 1; i < n; ++i) out.push_back("y" + tag(i));
  for (int i = 1; i < n; ++i) out.push_back("phi" + tag(i));
  out.push_back("a");
  out.push_back("alpha");
  return out;
}

int coord_index(const TorusConfig& c, const std::string& name) {
  const auto names = coord_names(c);
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  for (const char* kind : {"x", "y", "phi"})
    if (name == kind)
      for (size_t i = 0; i < names.size(); ++i)
        if (names[i].rfind(kind, 0) == 0 && std::isdigit(static_cast<unsigned char>(names[i][name.size()])))
          return static_cast<int>(i);
  throw DegenerateConfig("unknown coordinate '" + name + "'");
}

std::vector<HPoint> orbit_points(const TorusConfig& c, int K) {
  std::vector<HPoint> out;
  for (int k = -K; k <= K; ++k)
    for (int i = 0; i < c.size(); ++i) {
      const OrbitPlace p = place(c, {k, i});
      out.push_back(from_cylindrical(p.x, p.t, p.theta));
    }
  return out;
}

OrbitPlace place(const TorusConfig& c, const OrbitLabel& p) {
  const auto& v = c.vertex(p.vertex);
  return {v.x, v.y + p.k * c.a, v.phi + p.k * c.alpha};
}

double orbit_distance(const TorusConfig& c, const OrbitLabel& p, const OrbitLabel& q) {
  const OrbitPlace A = place(c, p), B = place(c, q);
  const double h = sinh2_half(A.x - B.x) +
                   std::cosh(A.x) * std::cosh(B.x) * sinh2_half(B.t - A.t) +
                   std::sinh(A.x) * std::sinh(B.x) * 2 * std::pow(std::sin((B.theta - A.theta) / 2), 2);
  return from_half_excess(h);
}

InducedMetric induced_metric(const TorusConfig& c, int K, double merge_tolerance) {
  check_config(c);
  check_rotation(c);
  const OrbitHull h0 = orbit_hull(c, K, merge_tolerance);
  const OrbitHull h1 = orbit_hull(c, K + 1, merge_tolerance);
  if (h0.orbits != h1.orbits)
    throw NotStabilized("facets at the central copies differ between K = " + std::to_string(K) +
                        " and " + std::to_string(K + 1));
  InducedMetric m;
  m.surface = quotient_surface(c, h0.orbits);
  m.facets.assign(h0.orbits.begin(), h0.orbits.end());
  m.K = K;
  m.axis_distance = h0.axis_distance;
  return m;
}

InducedMetric induced_metric(const TorusConfig& c, const InducedOptions& opt) {
  for (int K = std::max(1, opt.K);; K *= 2) {
    try {
      return induced_metric(c, K, opt.merge_tolerance);
    } catch (const NotStabilized&) {
      if (std::remainder(c.alpha, 2 * pi) == 0) throw;
      if (2 * K > opt.max_K)
        throw NotStabilized("no stable facet complex up to K = " + std::to_string(K));
    }
  }
}

double wedge_shortest(double x1, double x2, double y) {
  const double h = sinh2_half(x1 + x2) + std::cosh(x1) * std::cosh(x2) * sinh2_half(y);
  return from_half_excess(h);
}

bool is_peculiar(const TorusConfig& c) {
  if (c.alpha != 0) return false;
  for (const auto& v : c.bank1)
    if (v.phi != c.bank1[0].phi) return false;
  for (const auto& v : c.bank2)
    if (v.phi != c.bank2[0].phi) return false;
  const double sep = std::fmod(std::abs(c.bank2[0].phi - c.bank1[0].phi), 2 * pi);
  return sep >= pi - 1e-15;
}

double strip_length(const TorusConfig& c, const InducedOptions& opt) {
  check_config(c);
  const TorusVertex& v1 = c.bank1[0];
  const TorusVertex& v2 = c.bank2[0];
  // The strip lies in the two half-planes, which unfold to one plane.
  if (is_peculiar(c)) return wedge_shortest(v1.x, v2.x, v2.y - v1.y);
  if (c.bank1.size() != 1 || c.bank2.size() != 1)
    throw DegenerateConfig("strip_length needs one vertex per bank");
  const InducedMetric m = induced_metric(c, opt);

  // Lifted triangles of the strip: bank-crossing edges sweep positively
  // from bank 1 to bank 2.
  using Tri = std::array<OrbitLabel, 3>;
  auto sweep = [&](const OrbitLabel& p, const OrbitLabel& q) {
    const OrbitLabel& a = p.vertex == 0 ? p : q;
    const OrbitLabel& b = p.vertex == 0 ? q : p;
    return wrap_angle(place(c, b).theta - place(c, a).theta);
  };
  int span = 0;
  std::vector<Tri> reps;
  for (const auto& poly : m.facets) {
    for (const auto& l : poly) span = std::max(span, l.k);
    for (size_t j = 1; j + 1 < poly.size(); ++j) {
      const Tri T{poly[0], poly[j], poly[j + 1]};
      double s = 0;
      for (int e = 0; e < 3; ++e)
        if (T[e].vertex != T[(e + 1) % 3].vertex) s += sweep(T[e], T[(e + 1) % 3]);
      if (s > 0) reps.push_back(T);
    }
  }
  const int R = 2 * span + 2;
  std::vector<Tri> tris;
  for (int j = -R; j <= R; ++j)
    for (const auto& T : reps) tris.push_back({shifted({T[0]}, j)[0], shifted({T[1]}, j)[0], shifted({T[2]}, j)[0]});
  const OrbitLabel L1{0, 0}, L2{0, 1};
  auto has = [](const Tri& T, const OrbitLabel& l) { return std::find(T.begin(), T.end(), l) != T.end(); };
  std::map<std::pair<OrbitLabel, OrbitLabel>, int> by_edge;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int e = 0; e < 3; ++e) by_edge[{tris[t][e], tris[t][(e + 1) % 3]}] = t;
  for (const auto& T : tris)
    if (has(T, L1) && has(T, L2)) return orbit_distance(c, L1, L2);

  // Breadth-first search from the fan of L1 to the fan of L2.
  std::vector<int> prev(tris.size(), -2);
  std::vector<int> queue;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    if (has(tris[t], L1)) prev[t] = -1, queue.push_back(t);
  int goal = -1;
  for (size_t qi = 0; qi < queue.size() && goal < 0; ++qi) {
    const int t = queue[qi];
    for (int e = 0; e < 3; ++e) {
      const auto it = by_edge.find({tris[t][(e + 1) % 3], tris[t][e]});
      if (it == by_edge.end() || prev[it->second] != -2) continue;
      prev[it->second] = t;
      if (has(tris[it->second], L2)) {
        goal = it->second;
        break;
      }
      queue.push_back(it->second);
    }
  }
  if (goal < 0) throw DegenerateConfig("strip does not connect the two vertices");
  std::vector<int> sleeve;
  for (int t = goal; t >= 0; t = prev[t]) sleeve.push_back(t);
  std::reverse(sleeve.begin(), sleeve.end());

  // Develop the sleeve with L1 at the origin.
  std::map<OrbitLabel, Vec3> pos;
  {
    Tri T = tris[sleeve[0]];
    while (!(T[0] == L1)) std::rotate(T.begin(), T.begin() + 1, T.end());
    pos[T[0]] = Vec3(1, 0, 0);
    pos[T[1]] = h2_polar(orbit_distance(c, T[0], T[1]), 0.0);
    pos[T[2]] = third_point(pos[T[0]], pos[T[1]], orbit_distance(c, T[0], T[1]),
                            orbit_distance(c, T[0], T[2]), orbit_distance(c, T[1], T[2]), true);
  }
  std::vector<std::pair<Vec3, Vec3>> portals;
  for (size_t i = 0; i + 1 < sleeve.size(); ++i) {
    const Tri& A = tris[sleeve[i]];
    const Tri& B = tris[sleeve[i + 1]];
    for (int e = 0; e < 3; ++e) {
      const OrbitLabel u = A[e], v = A[(e + 1) % 3];
      if (!has(B, u) || !has(B, v)) continue;
      portals.push_back({pos.at(v), pos.at(u)});
      OrbitLabel w{};
      for (const auto& l : B)
        if (!(l == u) && !(l == v)) w = l;
      if (!pos.count(w)) {
        // Place from the nearer end of the shared edge; w lies right of u -> v.
        const double du = orbit_distance(c, u, w), dv = orbit_distance(c, v, w);
        const double duv = orbit_distance(c, u, v);
        pos[w] = du <= dv ? third_point(pos.at(u), pos.at(v), duv, du, dv, false)
                          : third_point(pos.at(v), pos.at(u), duv, dv, du, true);
      }
      break;
    }
  }
  return funnel_length(pos.at(L1), pos.at(L2), portals);
}

StripReport est1_scan(const TorusConfig& c0, const std::vector<std::string>& directions,
                      const std::vector<double>& scales, const Est1Options& opt) {
  check_config(c0);
  if (!is_peculiar(c0)) throw DegenerateConfig("est1 needs a peculiar configuration");
  const Eigen::VectorXd q0 = to_coords(c0);
  const double l0 = strip_length(c0, opt.induced);
  StripReport report;
  for (const auto& dir : directions) {
    const int idx = coord_index(c0, dir);
    StripSeries S;
    S.direction = coord_names(c0)[idx];
    for (double s : scales) {
      Eigen::VectorXd q = q0;
      q(idx) += s;
      const TorusConfig c = from_coords(c0, q);
      StripRecord r;
      r.scale = s;
      r.l = strip_length(c, opt.induced);
      r.l_wedge = wedge_shortest(c.bank1[0].x, c.bank2[0].x, c.bank2[0].y - c.bank1[0].y);
      r.diff = std::abs(r.l - r.l_wedge);
      r.quotient = std::abs(r.l - l0) / s;
      S.records.push_back(r);
    }
    std::vector<StripRecord> sorted = S.records;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.scale > b.scale; });
    const size_t first = sorted.size() > static_cast<size_t>(opt.fit_last)
                             ? sorted.size() - opt.fit_last : 0;
    std::vector<double> X, Y;
    bool all_zero = true;
    for (size_t i = first; i < sorted.size(); ++i) {
      if (sorted[i].diff > opt.noise_floor) {
        all_zero = false;
        X.push_back(std::log(sorted[i].scale));
        Y.push_back(std::log(sorted[i].diff));
      }
    }
    S.fitted = static_cast<int>(X.size());
    if (all_zero) {
      S.vanishes = true;
      S.slope = std::numeric_limits<double>::infinity();
    } else if (X.size() < 2) {
      S.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double mx = std::accumulate(X.begin(), X.end(), 0.0) / X.size();
      const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / Y.size();
      double sxx = 0, sxy = 0;
      for (size_t i = 0; i < X.size(); ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
      }
      S.slope = sxy / sxx;
      double ss = 0;
      for (size_t i = 0; i < X.size(); ++i) {
        const double e = Y[i] - (my + S.slope * (X[i] - mx));
        ss += e * e;
      }
      S.residual = std::sqrt(ss / X.size());
    }
    report.series.push_back(std::move(S));
  }
  return report;
}

std::vector<EdgeKey> edge_keys(const ConeSurface& s) {
  auto tag = [&](int h) -> std::array<int, 2> {
    if (s.tag.empty()) return {0, 0};
    return {static_cast<int>(std::lround(s.tag[h](0))), static_cast<int>(std::lround(s.tag[h](1)))};
  };
  auto key = [&](int h) {
    const auto t = tag(h), n = tag(next_in_tri(h));
    return EdgeKey{s.origin(h), s.target(h), t[0], t[1], s.target(next_in_tri(h)),
                   t[0] + n[0], t[1] + n[1]};
  };
  std::vector<EdgeKey> out;
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_rep[e];
    const int g = s.glue[h];
    out.push_back(g < 0 ? key(h) : std::min(key(h), key(g)));
  }
  return out;
}

namespace {

struct Sample {
  std::vector<EdgeKey> keys;  // sorted
  Eigen::VectorXd lengths;    // in key order
};

Sample delaunay_sample(const TorusConfig& c, int K, double tol) {
  const ConeSurface D = make_delaunay(induced_metric(c, K, tol).surface);
  const auto keys = edge_keys(D);
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  Sample s;
  s.lengths.resize(keys.size());
  for (size_t r = 0; r < order.size(); ++r) {
    s.keys.push_back(keys[order[r]]);
    s.lengths(r) = D.length[order[r]];
  }
  for (size_t r = 1; r < s.keys.size(); ++r)
    if (!(s.keys[r - 1] < s.keys[r]))
      throw NoCombinatorialMatch("two Delaunay edges share endpoints and displacement");
  return s;
}

}  // namespace

TorusJacobian jacobian(const TorusConfig& c, const JacobianOptions& opt) {
  const InducedMetric m = induced_metric(c, opt.induced);
  if (!(m.axis_distance > opt.axis_threshold))
    throw NotStrictlyPolyhedral("axis within " + fmt17(m.axis_distance) + " of a facet plane");
  const double tol = opt.induced.merge_tolerance;
  const Sample base = delaunay_sample(c, m.K, tol);
  const Eigen::VectorXd q0 = to_coords(c);
  TorusJacobian out;
  out.edges = base.keys;
  out.lengths = base.lengths;
  out.K = m.K;
  out.J.resize(base.keys.size(), q0.size());
  for (int j = 0; j < q0.size(); ++j) {
    double h = opt.step;
    for (int attempt = 0;; ++attempt) {
      auto probe = [&](double d) -> std::optional<Eigen::VectorXd> {
        Eigen::VectorXd q = q0;
        q(j) += d;
        const Sample s = delaunay_sample(from_coords(c, q), m.K, tol);
        if (s.keys != base.keys) return std::nullopt;
        return s.lengths;
      };
      const auto p1 = probe(h), m1 = probe(-h), p2 = probe(2 * h), m2 = probe(-2 * h);
      if (p1 && m1 && p2 && m2) {
        const Eigen::VectorXd d1 = (*p1 - *m1) / (2 * h);
        const Eigen::VectorXd d2 = (*p2 - *m2) / (4 * h);
        out.J.col(j) = (4 * d1 - d2) / 3;
        break;
      }
      if (attempt >= opt.retries)
        throw TriangulationChanged("Delaunay edges change under a probe of " +
                                   coord_names(c)[j] + " at step " + fmt17(h));
      h /= 10;
    }
  }
  return out;
}

Eigen::VectorXd distance_gradient(const TorusConfig& c, const OrbitLabel& p, const OrbitLabel& q) {
  const int n = c.size();
  const OrbitPlace A = place(c, p), B = place(c, q);
  const double dt = B.t - A.t, dth = B.theta - A.theta;
  const double d = orbit_distance(c, p, q);
  const double sd = std::sinh(d);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3 * n);
  const double cxa = std::cosh(A.x), sxa = std::sinh(A.x), cxb = std::cosh(B.x), sxb = std::sinh(B.x);
  g(p.vertex) += (sxa * cxb * std::cosh(dt) - cxa * sxb * std::cos(dth)) / sd;
  g(q.vertex) += (cxa * sxb * std::cosh(dt) - sxa * cxb * std::cos(dth)) / sd;
  const double dC_dt = cxa * cxb * std::sinh(dt) / sd;
  const double dC_dth = sxa * sxb * std::sin(dth) / sd;
  const int ybase = n - 1, phibase = 2 * n - 2;
  if (q.vertex > 0) g(ybase + q.vertex) += dC_dt, g(phibase + q.vertex) += dC_dth;
  if (p.vertex > 0) g(ybase + p.vertex) -= dC_dt, g(phibase + p.vertex) -= dC_dth;
  g(3 * n - 2) += dC_dt * (q.k - p.k);
  g(3 * n - 1) += dC_dth * (q.k - p.k);
  return g;
}

Eigen::VectorXd matched_lengths(const ConeSurface& target, const ConeSurface& current) {
  const int E = target.num_edges();
  if (current.num_edges() != E || current.nv != target.nv)
    throw NoCombinatorialMatch("edge or vertex counts differ");
  Eigen::VectorXd out(E);
  if (!target.tag.empty() && !current.tag.empty()) {
    const auto tk = edge_keys(target), ck = edge_keys(current);
    std::map<EdgeKey, int> at;
    for (int e = 0; e < E; ++e) at[ck[e]] = e;
    for (int e = 0; e < E; ++e) {
      const auto it = at.find(tk[e]);
      if (it == at.end()) throw NoCombinatorialMatch("Delaunay edges of target and iterate differ");
      out(e) = current.length[it->second];
    }
    return out;
  }
  // Orientation and label preserving isomorphism, grown from half-side 0.
  const int H = target.num_half_sides();
  double best = std::numeric_limits<double>::infinity();
  for (int start = 0; start < current.num_half_sides(); ++start) {
    if (current.origin(start) != target.origin(0) || current.target(start) != target.target(0))
      continue;
    std::vector<int> map(H, -1);
    std::vector<int> stack{0};
    map[0] = start;
    bool ok = true;
    while (ok && !stack.empty()) {
      const int h = stack.back();
      stack.pop_back();
      const int images[2][2] = {{next_in_tri(h), next_in_tri(map[h])},
                                {target.glue[h], current.glue[map[h]]}};
      for (const auto& im : images) {
        const int a = im[0], b = im[1];
        if (a < 0 || b < 0) {
          ok = a == b;
          continue;
        }
        if (map[a] == -1) {
          if (current.origin(b) != target.origin(a) || current.target(b) != target.target(a)) ok = false;
          map[a] = b;
          stack.push_back(a);
        } else if (map[a] != b) {
          ok = false;
        }
      }
    }
    if (!ok || std::count(map.begin(), map.end(), -1) > 0) continue;
    Eigen::VectorXd cand(E);
    for (int e = 0; e < E; ++e) cand(e) = current.side_length(map[target.edge_rep[e]]);
    const double res = (cand - Eigen::Map<const Eigen::VectorXd>(target.length.data(), E))
                           .cwiseAbs().maxCoeff();
    if (res < best) best = res, out = cand;
  }
  if (!std::isfinite(best)) throw NoCombinatorialMatch("no label preserving isomorphism");
  return out;
}

RealizeResult realize(const ConeSurface& target, const TorusConfig& init, const RealizeOptions& opt) {
  check_config(init);
  const ConeSurface T = make_delaunay(target);
  const Eigen::VectorXd goal = Eigen::Map<const Eigen::VectorXd>(T.length.data(), T.num_edges());
  const double mtol = opt.jac.induced.merge_tolerance;
  int K = induced_metric(init, opt.jac.induced).K;
  auto residual_at = [&](const TorusConfig& c) -> Eigen::VectorXd {
    InducedMetric m;
    try {
      m = induced_metric(c, K, mtol);
    } catch (const NotStabilized&) {
      InducedOptions o = opt.jac.induced;
      o.K = K;
      m = induced_metric(c, o);
      K = m.K;
    }
    return matched_lengths(T, make_delaunay(m.surface)) - goal;
  };
  RealizeResult out;
  out.config = init;
  Eigen::VectorXd q = to_coords(init);
  Eigen::VectorXd r = residual_at(init);
  for (;; ++out.iterations) {
    out.residual = r.cwiseAbs().maxCoeff();
    out.history.push_back(out.residual);
    if (out.residual < opt.tol) return out;
    if (out.iterations >= opt.iters) throw Stalled("residual " + fmt17(out.residual) + " after " +
                                                   std::to_string(opt.iters) + " iterations");
    // Richardson-extrapolated forward model derivative.
    Eigen::MatrixXd J(r.size(), q.size());
    const double h = opt.jac.step;
    for (int j = 0; j < q.size(); ++j) {
      auto at = [&](double d) {
        Eigen::VectorXd p = q;
        p(j) += d;
        return residual_at(from_coords(init, p));
      };
      const Eigen::VectorXd d1 = (at(h) - at(-h)) / (2 * h);
      const Eigen::VectorXd d2 = (at(2 * h) - at(-2 * h)) / (4 * h);
      J.col(j) = (4 * d1 - d2) / 3;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / std::max(sv(sv.size() - 1), std::numeric_limits<double>::min());
    Eigen::VectorXd step;
    if (cond > opt.damping_condition) {
      const double lambda = 1e-6 * sv(0) * sv(0);
      const Eigen::MatrixXd A = J.transpose() * J + lambda * Eigen::MatrixXd::Identity(q.size(), q.size());
      step = -A.ldlt().solve(J.transpose() * r);
    } else {
      step = -svd.solve(r);
    }
    bool moved = false;
    for (double t = 1; t > 1e-4; t /= 2) {
      const Eigen::VectorXd qn = q + t * step;
      try {
        const TorusConfig cn = from_coords(init, qn);
        const Eigen::VectorXd rn = residual_at(cn);
        if (rn.norm() < r.norm()) {
          q = qn;
          r = rn;
          out.config = cn;
          moved = true;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (!moved) throw Stalled("no descent at residual " + fmt17(out.residual));
  }
}

std::vector<Generatrix> strip_generatrices(const TorusConfig& c, const InducedMetric& m) {
  std::set<std::pair<OrbitLabel, OrbitLabel>> seen;
  std::vector<Generatrix> out;
  for (const auto& poly : m.facets)
    for (size_t j = 0; j < poly.size(); ++j) {
      OrbitLabel p = poly[j], q = poly[(j + 1) % poly.size()];
      if (c.bank_of(p.vertex) == c.bank_of(q.vertex)) continue;
      if (c.bank_of(p.vertex) == 2) std::swap(p, q);
      const OrbitPlace A = place(c, p), B = place(c, q);
      if (!(wrap_angle(B.theta - A.theta) > 0)) continue;
      const int base = p.k;
      if (!seen.insert({shifted({p}, -base)[0], shifted({q}, -base)[0]}).second) continue;
      const auto& v1 = c.vertex(p.vertex);
      const auto& v2 = c.vertex(q.vertex);
      Generatrix g;
      g.p1 = p;
      g.p2 = q;
      g.dt = A.t - B.t;
      g.dtheta = B.theta - A.theta;
      g.bound = std::abs(((v2.phi - v1.phi - pi) * c.a - c.alpha * (v2.y - v1.y)) / (c.alpha * pi));
      out.push_back(g);
    }
  return out;
}

std::string to_htc(const TorusConfig& c) {
  std::ostringstream o;
  o << "HTC 1\n";
  o << "a " << fmt17(c.a) << " alpha " << fmt17(c.alpha) << "\n";
  for (int j = 1; j <= 2; ++j) {
    const auto& bank = j == 1 ? c.bank1 : c.bank2;
    o << "bank " << j << " " << bank.size() << "\n";
    for (const auto& v : bank)
      o << "v " << fmt17(v.x) << " " << fmt17(v.y) << " " << fmt17(v.phi) << "\n";
  }
  return o.str();
}

TorusConfig parse_htc(const std::string& text) {
  using detail::to_int;
  using detail::to_real;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  enum { Header, Shape, Bank, Done } state = Header;
  TorusConfig c;
  std::vector<TorusVertex>* bank = nullptr;
  int expect = 0, bank_no = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto w = detail::tokens(line);
    if (w.empty()) continue;
    const std::string where = "line " + std::to_string(ln) + ": ";
    if (state == Header) {
      if (w.size() != 2 || w[0] != "HTC" || w[1] != "1") throw ParseError(where + "expected 'HTC 1'");
      state = Shape;
    } else if (state == Shape) {
      if (w.size() != 4 || w[0] != "a" || w[2] != "alpha")
        throw ParseError(where + "expected 'a <a> alpha <alpha>'");
      c.a = to_real(w[1], ln);
      c.alpha = to_real(w[3], ln);
      state = Bank;
    } else if (w[0] == "bank") {
      if (expect != 0) throw ParseError(where + "bank " + std::to_string(bank_no) + " is short");
      if (w.size() != 3) throw ParseError(where + "expected 'bank <j> <n>'");
      const int j = to_int(w[1], ln);
      if (j != bank_no + 1 || j > 2) throw ParseError(where + "banks must be 1 then 2");
      bank_no = j;
      expect = to_int(w[2], ln);
      if (expect < 1) throw ParseError(where + "a bank needs at least one vertex");
      bank = j == 1 ? &c.bank1 : &c.bank2;
    } else if (w[0] == "v") {
      if (!bank || expect == 0) throw ParseError(where + "vertex outside a bank");
      if (w.size() != 4) throw ParseError(where + "'v' takes 3 fields");
      bank->push_back({to_real(w[1], ln), to_real(w[2], ln), to_real(w[3], ln)});
      --expect;
    } else {
      throw ParseError(where + "unknown record '" + w[0] + "'");
    }
  }
  if (state != Bank || bank_no != 2 || expect != 0) throw ParseError("incomplete HTC input");
  if (c.bank1[0].y != 0 || c.bank1[0].phi != 0)
    throw ParseError("the first vertex of bank 1 must have y = 0 and phi = 0");
  return c;
}

TorusConfig read_htc_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_htc(ss.str());
}

}  // namespace hc
