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

#include "hypercone/hyptrig.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace hc {

Cylindrical to_cylindrical(const HPoint& p) {
  const MVector& v = p.vec();
  const double r = std::hypot(v(2), v(3));
  return {std::asinh(r), 0.5 * std::log((v(0) + v(1)) / (v(0) - v(1))),
          std::atan2(v(3), v(2))};
}

double inradius(double l0, double l1, double l2) {
  if (!is_triangle(l0, l1, l2))
    throw DegenerateTriangle("inradius of a degenerate triangle");
  const double s = 0.5 * (l0 + l1 + l2);
  const double q =
      std::sinh(s - l0) * std::sinh(s - l1) * std::sinh(s - l2) / std::sinh(s);
  return std::atanh(std::sqrt(q));
}

double right_triangle_inradius(double x, double y) {
  if (!(x > 0 && y > 0))
    throw DegenerateTriangle("right triangle needs positive legs");
  if (x < y) std::swap(x, y);
  // s - l terms via sinh identities, free of cancellation for thin triangles.
  const double h = std::acosh(std::cosh(x) * std::cosh(y));
  const double s = 0.5 * (x + y + h);
  const double p = std::sinh(x) * std::sinh(y);
  const double sy = 0.5 * (h + x - y);
  const double sx = std::asinh(p / (2 * std::sinh(sy)));
  const double sh = std::asinh(p / (2 * std::sinh(s)));
  const double q = std::sinh(sx) * std::sinh(sy) * std::sinh(sh) / std::sinh(s);
  return std::atanh(std::sqrt(q));
}

Circumcircle circumcircle(double l0, double l1, double l2) {
  const auto A = triangle_angles(l0, l1, l2);
  Circumcircle out;
  out.vertices = {Vec3(1, 0, 0), h2_polar(l2, 0.0), h2_polar(l1, A[0])};
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i) {
    const Vec3& v = out.vertices[i];
    M.row(i) << -v(0), v(1), v(2);
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(M);
  if (!lu.isInvertible())
    throw DegenerateTriangle("collinear vertices in circumcircle");
  out.center = lu.solve(Vec3::Constant(-1.0));
  const double q = mdot(out.center, out.center);
  const double rel = q / out.center.squaredNorm();
  out.radius = std::numeric_limits<double>::infinity();
  if (rel < -1e-12) {
    out.kind = CircleKind::Circle;
    out.radius = acosh_checked(1.0 / std::sqrt(-q), "circumradius");
    out.center /= std::sqrt(-q);
  } else if (rel <= 1e-12) {
    out.kind = CircleKind::Horocycle;
  } else {
    out.kind = CircleKind::Hypercycle;
  }
  return out;
}

std::optional<double> circumradius(double l0, double l1, double l2) {
  const Circumcircle c = circumcircle(l0, l1, l2);
  if (c.kind != CircleKind::Circle) return std::nullopt;
  return c.radius;
}

Vec3 h2_polar(double r, double theta) {
  return Vec3(std::cosh(r), std::sinh(r) * std::cos(theta),
              std::sinh(r) * std::sin(theta));
}

Vec3 h2_normalize(const Vec3& v) { return v / std::sqrt(-mdot(v, v)); }

Vec3 h2_direction(const Vec3& p, const Vec3& q) {
  const Vec3 u = q + mdot(p, q) * p;
  return u / std::sqrt(mdot(u, u));
}

double h2_orient(const Vec3& p, const Vec3& q, const Vec3& r) {
  Eigen::Matrix3d M;
  M << p, q, r;
  return M.determinant();
}

Vec3 h2_third_point(const Vec3& p, const Vec3& q, double dp, double dq) {
  const double dpq = hdist(p, q);
  const double A = triangle_angles(dq, dp, dpq)[0];
  const Vec3 u = h2_direction(p, q);
  Vec3 n = minkowski_gram<double, 3>() * p.cross(u);
  n /= std::sqrt(mdot(n, n));
  if (h2_orient(p, u, n) < 0) n = -n;
  return std::cosh(dp) * p +
         std::sinh(dp) * (std::cos(A) * u + std::sin(A) * n);
}

double h2_angle(const Vec3& p, const Vec3& q, const Vec3& r) {
  return acos_checked(mdot(h2_direction(p, q), h2_direction(p, r)),
                      "h2_angle");
}

Vec3 h2_nearest_on_segment(const Vec3& a, const Vec3& b, const Vec3& p) {
  Vec3 m = minkowski_gram<double, 3>() * a.cross(b);
  m /= std::sqrt(mdot(m, m));
  const Vec3 f = h2_normalize(p - mdot(p, m) * m);
  // f lies between a and b iff it is a nonnegative combination of them.
  const double aa = mdot(a, a), ab = mdot(a, b), bb = mdot(b, b);
  const double fa = mdot(f, a), fb = mdot(f, b);
  const double det = aa * bb - ab * ab;
  const double wa = (fa * bb - fb * ab) / det, wb = (fb * aa - fa * ab) / det;
  if (wa >= 0 && wb >= 0) return f;
  return hdist(p, a) <= hdist(p, b) ? a : b;
}

Vec3 h2_project_convex(const std::vector<Vec3>& polygon, const Vec3& p) {
  const size_t n = polygon.size();
  bool inside = true;
  for (size_t i = 0; i < n; ++i)
    if (h2_orient(polygon[i], polygon[(i + 1) % n], p) < 0) inside = false;
  if (inside) return p;
  Vec3 best = polygon[0];
  double bd = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const Vec3 f = h2_nearest_on_segment(polygon[i], polygon[(i + 1) % n], p);
    const double d = hdist(p, f);
    if (d < bd) {
      bd = d;
      best = f;
    }
  }
  return best;
}

}  // namespace hc
