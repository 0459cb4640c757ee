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

#include <random>

#include "doctest.h"
#include "hypercone/hyptrig.hpp"
#include "support.hpp"

using namespace hc;
using namespace hc::testing;
using std::numbers::pi;

TEST_CASE("dist") {
  const HPoint o;
  CHECK(dist(o, o) == 0.0);
  const HPoint q = HPoint::normalize(MVector(std::cosh(1.0), std::sinh(1.0), 0, 0));
  CHECK(dist(o, q) == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const LorentzIsometry g(random_isometry(rng));
    const HPoint p = g(o);
    const HPoint r = g(loxodromic(0.7, 0.0)(o));
    CHECK(std::abs(dist(p, r) - 0.7) < 1e-12);
    CHECK(dist(p, r) == dist(r, p));
  }
}

TEST_CASE("clamp budget is enforced") {
  CHECK(acosh_checked(1.0 - 1e-12, "t") == 0.0);
  CHECK_THROWS_AS(acosh_checked(1.0 - 1e-6, "t"), ClampBudgetExceeded);
  CHECK_THROWS_AS(acos_checked(1.0 + 1e-6, "t"), ClampBudgetExceeded);
}

TEST_CASE("trapezoid_solve") {
  SUBCASE("symmetric") {
    const auto T = trapezoid_solve(0.8, 0.8, 1.3);
    CHECK(T.alpha == doctest::Approx(T.beta).epsilon(1e-14));
  }
  SUBCASE("collapsed") {
    const auto T = trapezoid_solve(0.0, 0.0, 1.7);
    CHECK(T.gamma == doctest::Approx(1.7).epsilon(1e-14));
    CHECK(T.alpha == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(T.beta == doctest::Approx(pi / 2).epsilon(1e-14));
  }
  SUBCASE("frozen values and walk closure") {
    const auto T = trapezoid_solve(0.3, 0.5, 1.2);
    CHECK(T.alpha == doctest::Approx(1.1859473957224039).epsilon(1e-13));
    CHECK(T.beta == doctest::Approx(1.5516012220599882).epsilon(1e-13));
    CHECK(T.gamma == doctest::Approx(1.1016319769195215).epsilon(1e-13));
    CHECK(walk_closure({T.gamma, 0.5, 1.2, 0.3},
                       {pi / 2, pi - T.alpha, pi - T.beta, pi / 2}) < 1e-12);
    const auto P = walk_points({T.gamma, 0.5, 1.2, 0.3},
                               {pi / 2, pi - T.alpha, pi - T.beta, pi / 2});
    CHECK(raw_angle(P[2], P[1], P[3]) == doctest::Approx(T.alpha).epsilon(1e-12));
  }
  SUBCASE("sine law") {
    const double a = 0.4, b = 1.1, c = 2.0;
    const auto T = trapezoid_solve(a, b, c);
    CHECK(std::sin(T.alpha) / std::cosh(a) ==
          doctest::Approx(std::sinh(T.gamma) / std::sinh(c)).epsilon(1e-12));
    CHECK(std::sin(T.beta) / std::cosh(b) ==
          doctest::Approx(std::sinh(T.gamma) / std::sinh(c)).epsilon(1e-12));
  }
  SUBCASE("nonexistent") {
    CHECK_THROWS_AS(trapezoid_solve(0.0, 2.0, 0.5), NonexistentTrapezoid);
  }
}

TEST_CASE("pentagon_side") {
  const double a = std::asinh(std::sqrt(2.0));
  CHECK(pentagon_side(a, a) == doctest::Approx(std::acosh(2.0)).epsilon(1e-14));
  CHECK(pentagon_side(a, a) == doctest::Approx(1.3169578969248166).epsilon(1e-14));
  CHECK_THROWS_AS(pentagon_side(std::asinh(1.0), std::asinh(1.0)), NoPentagon);
  CHECK(pentagon_side(1.2, 0.9) == pentagon_side(0.9, 1.2));
  const auto P = pentagon_complete(1.2, 0.9);
  CHECK(walk_closure({P.a, P.b, P.alpha, P.c, P.beta},
                     std::vector<double>(5, pi / 2)) < 1e-12);
  // cosh c = coth(alpha) coth(beta)
  CHECK(std::cosh(P.c) == doctest::Approx(1 / std::tanh(P.alpha) /
                                          std::tanh(P.beta)).epsilon(1e-12));
}

TEST_CASE("hexagon_side") {
  CHECK(hexagon_side(1.0, 1.0, 1.0) ==
        doctest::Approx(1.7049128323580137).epsilon(1e-14));
  const auto H = hexagon_complete(1.0, 1.0, 1.0);
  CHECK(H.gamma == doctest::Approx(H.alpha).epsilon(1e-14));
  CHECK(H.beta == doctest::Approx(H.alpha).epsilon(1e-14));
  const auto G = hexagon_complete(0.3, 1.7, 0.9);
  CHECK(walk_closure({G.a, G.gamma, G.b, G.alpha, G.c, G.beta},
                     std::vector<double>(6, pi / 2)) < 1e-11);
  CHECK_THROWS_AS(hexagon_side(0.0, 1.0, 1.0), NoHexagon);
  CHECK_THROWS_AS(hexagon_side(-1.0, 1.0, 1.0), NoHexagon);
  // Tiny alternate sides still give a hexagon, with a long opposite side.
  CHECK(hexagon_side(1e-3, 1e-3, 1.0) > 7.0);
}

TEST_CASE("ptolemy_defect") {
  const double s = 0.9;
  const double x = 2 * std::asinh(std::sqrt(2.0) * std::sinh(s / 2));
  CHECK(std::abs(ptolemy_defect(s, s, s, s, x, x)) < 1e-14);

  const std::array<double, 4> th{0.3, 1.9, 3.0, 5.1};
  std::array<Vec3, 4> P;
  for (int i = 0; i < 4; ++i) P[i] = h2_polar(0.8, th[i]);
  auto d = [&](int i, int j) { return raw_dist(P[i], P[j]); };
  const double def =
      ptolemy_defect(d(0, 1), d(1, 2), d(2, 3), d(3, 0), d(0, 2), d(1, 3));
  CHECK(std::abs(def) < 1e-10);
  CHECK(ptolemy_defect(d(0, 1), d(1, 2), d(2, 3), d(3, 0), d(0, 2) + 0.1,
                       d(1, 3)) < 0);
}

TEST_CASE("triangle_angles") {
  const auto A = triangle_angles(1.0, 1.0, 1.0);
  CHECK(A[0] == doctest::Approx(0.91879787217802737).epsilon(1e-14));
  const auto P = bisect_triangle(1.0, 1.0, 1.0);
  CHECK(raw_angle(P[0], P[1], P[2]) == doctest::Approx(A[0]).epsilon(1e-12));

  const auto B = triangle_angles(0.7, 0.7, 1.1);
  CHECK(B[0] == doctest::Approx(B[1]).epsilon(1e-14));
  CHECK_THROWS_AS(triangle_angles(0.5, 0.7, 1.2), DegenerateTriangle);

  const auto C = triangle_angles(0.6, 1.3, 1.0);
  CHECK(C[0] + C[1] + C[2] < pi);
  CHECK(walk_closure({1.0, 0.6, 1.3}, {pi - C[1], pi - C[2], pi - C[0]}) < 1e-12);
}

TEST_CASE("circumradius") {
  SUBCASE("equilateral") {
    const auto c = circumcircle(1.0, 1.0, 1.0);
    REQUIRE(c.kind == CircleKind::Circle);
    for (const Vec3& v : c.vertices)
      CHECK(raw_dist(c.center, v) == doctest::Approx(c.radius).epsilon(1e-10));
  }
  SUBCASE("long thin triangle") {
    CHECK_FALSE(circumradius(5.0, 5.0, 9.9).has_value());
    CHECK(circumcircle(5.0, 5.0, 9.9).kind == CircleKind::Hypercycle);
  }
  SUBCASE("isosceles center on the axis") {
    // l0 = l1: the axis is the perpendicular bisector of side l2 = v0 v1.
    const auto c = circumcircle(0.9, 0.9, 1.4);
    REQUIRE(c.kind == CircleKind::Circle);
    CHECK(raw_dist(c.center, c.vertices[0]) ==
          doctest::Approx(raw_dist(c.center, c.vertices[1])).epsilon(1e-12));
    CHECK(raw_dist(c.center, c.vertices[2]) ==
          doctest::Approx(raw_dist(c.center, c.vertices[1])).epsilon(1e-12));
  }
}

TEST_CASE("loxodromic") {
  const auto g = loxodromic(0.9, 0.0);
  CHECK(g.is_valid());
  const HPoint p = from_cylindrical(0.0, 0.4, 0.0);
  CHECK(dist(p, g(p)) == doctest::Approx(0.9).epsilon(1e-13));

  const auto h = loxodromic(1.0, pi);
  CHECK(((h * h).matrix() - loxodromic(2.0, 0.0).matrix()).cwiseAbs().maxCoeff() <
        1e-12);
  const auto u = loxodromic(0.4, 0.3) * loxodromic(0.7, -1.1);
  CHECK((u.matrix() - loxodromic(1.1, -0.8).matrix()).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double x = 2 * U(rng), y = 4 * U(rng) - 2, ph = 6 * U(rng);
    const double a = 0.1 + 2 * U(rng), al = 6 * U(rng) - 3;
    const HPoint q = from_cylindrical(x, y, ph);
    const double d = dist(q, loxodromic(a, al)(q));
    const double rhs = std::cosh(x) * std::cosh(x) * std::cosh(a) -
                       std::sinh(x) * std::sinh(x) * std::cos(al);
    CHECK(std::cosh(d) == doctest::Approx(rhs).epsilon(1e-10));
  }
  const auto c = to_cylindrical(from_cylindrical(0.7, -0.3, 2.0));
  CHECK(c.x == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(c.phi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("asymptotic trapezoid bound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  int violations = 0;
  for (int i = 0; i < 2000; ++i) {
    const double c = 0.05 + 4 * U(rng);
    // Heights may have either sign: the quadrilateral can self-intersect.
    const double h1 = 3 * (2 * U(rng) - 1), h2 = 3 * (2 * U(rng) - 1);
    const Vec3 q1(1, 0, 0), q2(std::cosh(c), std::sinh(c), 0);
    const Vec3 e(0, 0, 1);
    const Vec3 p1 = std::cosh(h1) * q1 + std::sinh(h1) * e;
    const Vec3 p2 = std::cosh(h2) * q2 + std::sinh(h2) * e;
    const double w = U(rng);
    const Vec3 p = h2_normalize((1 - w) * p1 / p1(0) + w * p2 / p2(0));
    const Vec3 q = h2_normalize(p - p(2) * e);
    const double pq = std::asinh(std::abs(p(2)));
    const double bound = 2 * std::max(std::abs(h1) * std::exp(-raw_dist(q, q1)),
                                      std::abs(h2) * std::exp(-raw_dist(q, q2)));
    if (pq > bound + 1e-12) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("projection to a convex polygon shortens curves") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    // Regular-ish convex polygon in the Klein disk.
    const int n = 3 + trial % 5;
    const double r = 0.2 + 0.5 * U(rng);
    std::vector<Vec3> poly;
    for (int i = 0; i < n; ++i) {
      const double th = 2 * pi * (i + 0.3 * U(rng)) / n;
      poly.push_back(Vec3(1, r * std::cos(th), r * std::sin(th)) /
                     std::sqrt(1 - r * r));
    }
    std::vector<Vec3> line;
    for (int i = 0; i < 5; ++i) {
      const double th = 2 * pi * U(rng), rr = r + (0.95 - r) * U(rng);
      line.push_back(Vec3(1, rr * std::cos(th), rr * std::sin(th)) /
                     std::sqrt(1 - rr * rr));
    }
    double len = 0, plen = 0;
    for (size_t i = 0; i + 1 < line.size(); ++i) {
      len += raw_dist(line[i], line[i + 1]);
      Vec3 prev = h2_project_convex(poly, line[i]);
      for (int k = 1; k <= 200; ++k) {
        const double w = k / 200.0;
        const Vec3 x = h2_normalize((1 - w) * line[i] / line[i](0) +
                                    w * line[i + 1] / line[i + 1](0));
        const Vec3 px = h2_project_convex(poly, x);
        plen += raw_dist(prev, px);
        prev = px;
      }
    }
    CHECK(plen <= len + 1e-9);
  }
}

TEST_CASE("side reconstruction round trip") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.05, 3);
  int checked = 0;
  while (checked < 500) {
    const double l0 = U(rng), l1 = U(rng), l2 = U(rng);
    if (!is_triangle(l0, l1, l2)) continue;
    ++checked;
    const auto A = triangle_angles(l0, l1, l2);
    CHECK(side_from_angle(l1, l2, A[0]) == doctest::Approx(l0).epsilon(1e-10));
  }
}

TEST_CASE("inradius") {
  const double r = inradius(1.0, 1.0, 1.0);
  // The incircle touches side l2 = v0 v1 at its midpoint.
  const auto A = triangle_angles(1.0, 1.0, 1.0);
  CHECK(std::tanh(r) == doctest::Approx(std::sinh(0.5) * std::tan(A[0] / 2)).epsilon(1e-12));
  CHECK(right_triangle_inradius(1.0, 1.0) > 0);
}
