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

#include "hypercone/geodesic.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace hc {

namespace {

struct Window {
  int g;         // entry half-side of the triangle being entered
  Vec3 a, b;     // positions of origin(g), target(g)
  Vec3 x, y;     // visible part of segment ab, x nearer a
  Vec3 src;
  double sigma;  // distance already travelled before src
  double lower;  // lower bound on any path through this window
};

struct FartherFirst {
  bool operator()(const Window& l, const Window& r) const {
    return l.lower > r.lower;
  }
};

Vec3 meet(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& s) {
  // Intersection of geodesics pq and rs: both are planes through 0.
  Vec3 v = p.cross(q).cross(r.cross(s));
  if (v(0) < 0) v = -v;
  return h2_normalize(v);
}

class Propagator {
 public:
  Propagator(const ConeSurface& s, const std::vector<char>& target, double radius,
             long cap)
      : s_(s), target_(target), cap_(cap) {
    res_.distance = std::numeric_limits<double>::infinity();
    radius_ = radius;
  }

  void reach(int v, const Vec3& src, const Vec3& p, double sigma) {
    if (!target_[v]) return;
    const double d = sigma + hdist(src, p);
    if (d < res_.distance && d <= radius_) {
      res_.distance = d;
      res_.target = v;
    }
  }

  double bound() const { return std::min(res_.distance, radius_); }

  /// Enters the triangle across half-side h (whose endpoints sit at a, b).
  void push_across(int h, const Vec3& a, const Vec3& b, const Vec3& x,
                   const Vec3& y, const Vec3& src, double sigma) {
    const int g = s_.glue[h];
    if (g < 0) return;
    // g runs from target(h) to origin(h).
    Window w{g, b, a, Vec3(), Vec3(), src, sigma, 0.0};
    if (hdist(b, x) <= hdist(b, y)) {
      w.x = x;
      w.y = y;
    } else {
      w.x = y;
      w.y = x;
    }
    w.lower = sigma + hdist(src, h2_nearest_on_segment(w.x, w.y, src));
    if (!(w.lower < bound())) return;
    queue_.push(w);
  }

  void run() {
    while (!queue_.empty()) {
      const Window w = queue_.top();
      queue_.pop();
      if (w.lower >= bound()) return;
      if (++res_.windows > cap_) {
        res_.complete = false;
        return;
      }

      const int g = w.g;
      const int t = tri_of(g);
      const int hn = next_in_tri(g), hp = prev_in_tri(g);
      const Vec3 c = h2_third_point(w.a, w.b, s_.side_length(hp),
                                    s_.side_length(hn));
      const int vc = s_.target(hn);
      (void)t;
      const double oxy = h2_orient(w.src, w.x, w.y);
      const double cx = h2_orient(w.src, w.x, c) * oxy;
      const double cy = -h2_orient(w.src, w.y, c) * oxy;
      if (cx >= 0 && cy >= 0) {
        reach(vc, w.src, c, w.sigma);
        // Rays on the a side of src->c leave through c->a, the rest through b->c.
        const Vec3 xa = cx > 0 ? meet(w.src, w.x, c, w.a) : c;
        const Vec3 yb = cy > 0 ? meet(w.src, w.y, w.b, c) : c;
        if (cx > 0) push_across(hp, c, w.a, c, xa, w.src, w.sigma);
        if (cy > 0) push_across(hn, w.b, c, yb, c, w.src, w.sigma);
      } else if (cx < 0) {
        // c lies beyond the x ray: everything exits through b->c.
        push_across(hn, w.b, c, meet(w.src, w.y, w.b, c), meet(w.src, w.x, w.b, c),
                    w.src, w.sigma);
      } else {
        push_across(hp, c, w.a, meet(w.src, w.x, c, w.a), meet(w.src, w.y, c, w.a),
                    w.src, w.sigma);
      }
    }
  }

  GeodesicResult result() const { return res_; }

 private:
  const ConeSurface& s_;
  const std::vector<char>& target_;
  double radius_;
  long cap_;
  std::priority_queue<Window, std::vector<Window>, FartherFirst> queue_;
  GeodesicResult res_;
};

}  // namespace

GeodesicResult distance_to_vertices(const ConeSurface& s, int tri, const Vec3& p,
                                    const std::vector<char>& target,
                                    double radius, long window_cap) {
  Propagator prop(s, target, radius, window_cap);
  const auto P = develop_triangle(s, tri);
  for (int k = 0; k < 3; ++k) prop.reach(s.tris[tri][k], p, P[k], 0.0);
  for (int k = 0; k < 3; ++k) {
    const Vec3& a = P[k];
    const Vec3& b = P[(k + 1) % 3];
    prop.push_across(half_side(tri, k), a, b, a, b, p, 0.0);
  }
  prop.run();
  return prop.result();
}

GeodesicResult vertex_distance(const ConeSurface& s, int src,
                               const std::vector<char>& target, double radius,
                               long window_cap) {
  Propagator prop(s, target, radius, window_cap);
  for (int h : corners_around(s, src)) {
    const int t = tri_of(h), c = side_of(h);
    // Frame with src at the origin.
    const Vec3 o(1, 0, 0);
    const Vec3 b = h2_polar(s.side_length(h), 0.0);
    const Vec3 cpt = h2_third_point(o, b, s.side_length(prev_in_tri(h)),
                                    s.side_length(next_in_tri(h)));
    prop.reach(s.tris[t][(c + 1) % 3], o, b, 0.0);
    prop.reach(s.tris[t][(c + 2) % 3], o, cpt, 0.0);
    prop.push_across(next_in_tri(h), b, cpt, b, cpt, o, 0.0);
  }
  prop.run();
  return prop.result();
}

}  // namespace hc
