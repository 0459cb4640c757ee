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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hypercone/errors.hpp"

namespace hc {

/// Arguments of acosh/acos may leave their domain by at most this much before
/// the kernel reports an error instead of clamping.
inline constexpr double kClampBudget = 1e-9;

template <typename S>
using MVector_ = Eigen::Matrix<S, 4, 1>;  // (t, x, y, z) in R^{3,1}
using MVector = MVector_<double>;
using Vec3 = Eigen::Vector3d;  // (t, x, y) in R^{2,1}, or Klein coordinates
using Mat4 = Eigen::Matrix4d;

/// Minkowski form -u_t v_t + <u_s, v_s> for vectors of any length >= 2.
template <typename D1, typename D2>
typename D1::Scalar mdot(const Eigen::MatrixBase<D1>& u,
                         const Eigen::MatrixBase<D2>& v) {
  const Eigen::Index n = u.size();
  return -u(0) * v(0) + u.tail(n - 1).dot(v.tail(n - 1));
}

/// Minkowski Gram matrix J = diag(-1, 1, ..., 1).
template <typename S, int N>
Eigen::Matrix<S, N, N> minkowski_gram() {
  Eigen::Matrix<S, N, N> J = Eigen::Matrix<S, N, N>::Identity();
  J(0, 0) = S(-1);
  return J;
}

template <typename S>
S acosh_checked(S x, const char* where) {
  using std::acosh;
  if (x < S(1)) {
    if (S(1) - x > S(kClampBudget))
      throw ClampBudgetExceeded(std::string(where) + ": acosh argument " +
                                std::to_string(double(x)));
    return S(0);
  }
  return acosh(x);
}

template <typename S>
S acos_checked(S x, const char* where) {
  using std::acos;
  using std::abs;
  if (abs(x) > S(1)) {
    if (abs(x) - S(1) > S(kClampBudget))
      throw ClampBudgetExceeded(std::string(where) + ": acos argument " +
                                std::to_string(double(x)));
    x = x > 0 ? S(1) : S(-1);
  }
  return acos(x);
}

/// Point of the upper sheet of the hyperboloid <p,p> = -1.
template <typename S>
class HPoint_ {
 public:
  HPoint_() : p_(S(1), S(0), S(0), S(0)) {}

  /// Rescales a future timelike vector onto the hyperboloid. Vectors already
  /// on it up to rounding are kept as they are.
  static HPoint_ normalize(const MVector_<S>& v) {
    using std::abs;
    using std::sqrt;
    const S n = -mdot(v, v);
    if (!(n > S(0)) || !(v(0) > S(0)))
      throw ClampBudgetExceeded("HPoint::normalize: not future timelike");
    const S noise = S(8) * std::numeric_limits<S>::epsilon() * v.squaredNorm();
    HPoint_ h;
    h.p_ = abs(n - S(1)) <= noise ? v : MVector_<S>(v / sqrt(n));
    return h;
  }

  static HPoint_ origin() { return HPoint_(); }

  const MVector_<S>& vec() const { return p_; }
  S t() const { return p_(0); }

  /// Central projection to the Klein ball.
  Eigen::Matrix<S, 3, 1> klein() const { return p_.template tail<3>() / p_(0); }

 private:
  MVector_<S> p_;
};
using HPoint = HPoint_<double>;

template <typename S>
S dist(const HPoint_<S>& p, const HPoint_<S>& q) {
  return acosh_checked(-mdot(p.vec(), q.vec()), "dist");
}

/// Distance for raw hyperboloid vectors of any dimension (H^2 or H^3).
template <typename D1, typename D2>
typename D1::Scalar hdist(const Eigen::MatrixBase<D1>& p,
                          const Eigen::MatrixBase<D2>& q) {
  return acosh_checked(-mdot(p, q), "hdist");
}

/// Orientation preserving isometry of H^3 as a 4x4 Lorentz matrix.
template <typename S>
class LorentzIsometry_ {
 public:
  using Mat = Eigen::Matrix<S, 4, 4>;

  LorentzIsometry_() : A_(Mat::Identity()) {}
  explicit LorentzIsometry_(const Mat& A) : A_(A) {}

  const Mat& matrix() const { return A_; }

  HPoint_<S> operator()(const HPoint_<S>& p) const {
    return HPoint_<S>::normalize(A_ * p.vec());
  }
  MVector_<S> operator()(const MVector_<S>& v) const { return A_ * v; }

  LorentzIsometry_ operator*(const LorentzIsometry_& o) const {
    return LorentzIsometry_(A_ * o.A_);
  }

  LorentzIsometry_ inverse() const {
    const Mat J = minkowski_gram<S, 4>();
    return LorentzIsometry_(J * A_.transpose() * J);
  }

  /// Max entry of |A^T J A - J|, plus sheet and determinant checks.
  bool is_valid(S tol = S(1e-10)) const {
    using std::abs;
    const Mat J = minkowski_gram<S, 4>();
    const S err = (A_.transpose() * J * A_ - J).cwiseAbs().maxCoeff();
    return err <= tol * std::max(S(1), A_.cwiseAbs().maxCoeff()) &&
           A_(0, 0) > S(0) && abs(A_.determinant() - S(1)) <= S(1e-8);
  }

 private:
  Mat A_;
};
using LorentzIsometry = LorentzIsometry_<double>;

/// Translation by a along the axis {y = z = 0} composed with rotation by
/// alpha in the (y, z) plane. Commuting factors, so the group law is additive.
template <typename S>
LorentzIsometry_<S> loxodromic(S a, S alpha) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  Eigen::Matrix<S, 4, 4> A = Eigen::Matrix<S, 4, 4>::Zero();
  A(0, 0) = cosh(a);
  A(0, 1) = sinh(a);
  A(1, 0) = sinh(a);
  A(1, 1) = cosh(a);
  A(2, 2) = cos(alpha);
  A(2, 3) = -sin(alpha);
  A(3, 2) = sin(alpha);
  A(3, 3) = cos(alpha);
  return LorentzIsometry_<S>(A);
}

/// Point at distance x from the axis, foot at signed position y along it,
/// and angle phi about it.
template <typename S>
HPoint_<S> from_cylindrical(S x, S y, S phi) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  MVector_<S> v(cosh(x) * cosh(y), cosh(x) * sinh(y), sinh(x) * cos(phi),
                sinh(x) * sin(phi));
  return HPoint_<S>::normalize(v);
}

struct Cylindrical {
  double x, y, phi;
};
Cylindrical to_cylindrical(const HPoint& p);

// ---------------------------------------------------------------------------
// Trigonometry of right-angled figures.

template <typename S>
struct Trapezoid_ {
  S alpha;  // angle at p2, adjacent to side b
  S beta;   // angle at p1, adjacent to side a
  S gamma;  // length of q1q2
};
using Trapezoid = Trapezoid_<double>;

/// Trapezoid p1p2q2q1 with right angles at q1, q2, a = p1q1, b = p2q2,
/// c = p1p2.
template <typename S>
Trapezoid_<S> trapezoid_solve(S a, S b, S c) {
  using std::abs;
  using std::cosh;
  using std::sinh;
  if (!(a >= S(0)) || !(b >= S(0)) || !(c > S(0)))
    throw NonexistentTrapezoid("need a, b >= 0 and c > 0");
  const S ca = (sinh(b) * cosh(c) - sinh(a)) / (cosh(b) * sinh(c));
  const S cb = (sinh(a) * cosh(c) - sinh(b)) / (cosh(a) * sinh(c));
  const S cg = (sinh(a) * sinh(b) + cosh(c)) / (cosh(a) * cosh(b));
  if (abs(ca) > S(1) + S(kClampBudget) || abs(cb) > S(1) + S(kClampBudget) ||
      cg < S(1) - S(kClampBudget))
    throw NonexistentTrapezoid("angle formula leaves [-1, 1] for a=" +
                               std::to_string(double(a)) +
                               " b=" + std::to_string(double(b)) +
                               " c=" + std::to_string(double(c)));
  return {acos_checked(ca, "trapezoid"), acos_checked(cb, "trapezoid"),
          acosh_checked(cg, "trapezoid")};
}

template <typename S>
struct Pentagon_ {
  S a, b, alpha, c, beta;  // consecutive sides
};
using Pentagon = Pentagon_<double>;

/// Side opposite the corner between a and b in a right-angled pentagon.
template <typename S>
S pentagon_side(S a, S b) {
  using std::sinh;
  const S rhs = sinh(a) * sinh(b);
  if (!(a > S(0)) || !(b > S(0)) || !(rhs > S(1)))
    throw NoPentagon("sinh(a) sinh(b) = " + std::to_string(double(rhs)) +
                     " <= 1");
  return acosh_checked(rhs, "pentagon");
}

/// All five sides of the right-angled pentagon with consecutive sides a, b.
template <typename S>
Pentagon_<S> pentagon_complete(S a, S b) {
  using std::asinh;
  using std::cosh;
  using std::sinh;
  const S c = pentagon_side(a, b);
  return {a, b, asinh(cosh(a) / sinh(c)), c, asinh(cosh(b) / sinh(c))};
}

/// Right-angled hexagon with sides a, gamma, b, alpha, c, beta in cyclic
/// order. Returns alpha, the side opposite a.
template <typename S>
S hexagon_side(S a, S b, S c) {
  using std::cosh;
  using std::isfinite;
  using std::sinh;
  if (!(a > S(0)) || !(b > S(0)) || !(c > S(0)) || !isfinite(double(a)) ||
      !isfinite(double(b)) || !isfinite(double(c)))
    throw NoHexagon("alternate sides must be positive and finite");
  const S rhs = (cosh(b) * cosh(c) + cosh(a)) / (sinh(b) * sinh(c));
  if (!(rhs > S(1))) throw NoHexagon("right-hand side <= 1");
  return acosh_checked(rhs, "hexagon");
}

template <typename S>
struct Hexagon_ {
  S a, gamma, b, alpha, c, beta;  // cyclic order
};
using Hexagon = Hexagon_<double>;

template <typename S>
Hexagon_<S> hexagon_complete(S a, S b, S c) {
  return {a, hexagon_side(c, a, b), b, hexagon_side(a, b, c), c,
          hexagon_side(b, c, a)};
}

/// Kubota's identity for a quadrilateral with sides a, b, c, d in cyclic
/// order and diagonals x, y; zero exactly for inscribed quadrilaterals.
template <typename S>
S ptolemy_defect(S a, S b, S c, S d, S x, S y) {
  using std::sinh;
  const auto h = [](S v) { return sinh(v / S(2)); };
  return h(a) * h(c) + h(b) * h(d) - h(x) * h(y);
}

/// True when l0, l1, l2 are positive and satisfy strict triangle inequalities.
template <typename S>
bool is_triangle(S l0, S l1, S l2) {
  return l0 > S(0) && l1 > S(0) && l2 > S(0) && l0 < l1 + l2 &&
         l1 < l0 + l2 && l2 < l0 + l1;
}

/// Angles A_i opposite the sides l_i, by the half-angle tangent law.
template <typename S>
std::array<S, 3> triangle_angles(S l0, S l1, S l2) {
  using std::atan2;
  using std::sinh;
  using std::sqrt;
  if (!is_triangle(l0, l1, l2))
    throw DegenerateTriangle("lengths " + std::to_string(double(l0)) + ", " +
                             std::to_string(double(l1)) + ", " +
                             std::to_string(double(l2)));
  const S s = (l0 + l1 + l2) / S(2);
  const S ss = sinh(s);
  const S s0 = sinh(s - l0), s1 = sinh(s - l1), s2 = sinh(s - l2);
  return {S(2) * atan2(sqrt(s1 * s2), sqrt(ss * s0)),
          S(2) * atan2(sqrt(s0 * s2), sqrt(ss * s1)),
          S(2) * atan2(sqrt(s0 * s1), sqrt(ss * s2))};
}

/// Law of cosines: third side from two sides and the included angle.
template <typename S>
S side_from_angle(S b, S c, S A) {
  using std::cos;
  using std::cosh;
  using std::sinh;
  return acosh_checked(cosh(b) * cosh(c) - sinh(b) * sinh(c) * cos(A),
                       "side_from_angle");
}

/// Inradius of a triangle from its side lengths.
double inradius(double l0, double l1, double l2);

/// Inradius of a right triangle with legs x, y.
double right_triangle_inradius(double x, double y);

enum class CircleKind { Circle, Horocycle, Hypercycle };

struct Circumcircle {
  CircleKind kind;
  double radius;  // valid for kind == Circle
  Vec3 center;    // solution of the bisector system in R^{2,1}
  std::array<Vec3, 3> vertices;  // the coordinate construction used
};

/// Classifies the curve through the three vertices of the triangle with side
/// lengths l_i (l_i opposite vertex i).
Circumcircle circumcircle(double l0, double l1, double l2);

/// Radius when the circumscribed curve is a metric circle.
std::optional<double> circumradius(double l0, double l1, double l2);

// ---------------------------------------------------------------------------
// H^2 helpers on the hyperboloid in R^{2,1}.

/// Point at distance r from (1,0,0) in direction theta.
Vec3 h2_polar(double r, double theta);

/// Unit tangent at p pointing toward q.
Vec3 h2_direction(const Vec3& p, const Vec3& q);

/// Third vertex r with d(p, r) = dp, d(q, r) = dq, on the left of p -> q.
Vec3 h2_third_point(const Vec3& p, const Vec3& q, double dp, double dq);

/// Counterclockwise test in the Klein disk: det[p, q, r] > 0.
double h2_orient(const Vec3& p, const Vec3& q, const Vec3& r);

/// Angle at p between the geodesics toward q and r.
double h2_angle(const Vec3& p, const Vec3& q, const Vec3& r);

/// Nearest point of the geodesic segment [a, b] to p.
Vec3 h2_nearest_on_segment(const Vec3& a, const Vec3& b, const Vec3& p);

/// Nearest-point projection onto a convex polygon given counterclockwise.
Vec3 h2_project_convex(const std::vector<Vec3>& polygon, const Vec3& p);

/// Normalizes a future timelike vector of R^{2,1} onto the hyperboloid.
Vec3 h2_normalize(const Vec3& v);

}  // namespace hc
