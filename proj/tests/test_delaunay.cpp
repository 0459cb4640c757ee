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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "hypercone/delaunay.hpp"
#include "support.hpp"

using namespace hc;
using namespace hc::testing;
using std::numbers::pi;

namespace {

/// One-vertex torus whose two triangles form a rectangle inscribed in a
/// circle of radius R; edge 2 is the diagonal.
ConeSurface inscribed_torus(double R, double th) {
  const Vec3 P0 = h2_polar(R, th), P1 = h2_polar(R, pi - th),
             P2 = h2_polar(R, pi + th);
  return one_vertex_torus(raw_dist(P0, P1), raw_dist(P1, P2), raw_dist(P2, P0));
}

std::vector<double> sorted_lengths(const ConeSurface& s) {
  auto l = s.length;
  std::sort(l.begin(), l.end());
  return l;
}

}  // namespace

TEST_CASE("defect of equilateral triangles") {
  const ConeSurface s = one_vertex_torus(0.8, 0.8, 0.8);
  for (int e = 0; e < 3; ++e)
    CHECK(delaunay_defect(s, e) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("inscribed quadrilateral has zero defect") {
  const ConeSurface s = inscribed_torus(0.9, 0.4);
  REQUIRE(is_valid(s));
  CHECK(std::abs(delaunay_defect(s, 2)) < 1e-10);
  const double a = s.length[0], b = s.length[1], x = s.length[2];
  // Opposite sides equal; both diagonals are diameters.
  CHECK(std::abs(ptolemy_defect(a, b, a, b, x, x)) < 1e-10);
  CHECK_THROWS_AS(flip(s, 2), FlipRejected);
  const ConeSurface f = flip_unchecked(s, 2);
  CHECK(std::abs(delaunay_defect(f, 2)) < 1e-10);
  CHECK(is_delaunay(f));
}

TEST_CASE("obtuse configuration has negative defect") {
  const ConeSurface s = one_vertex_torus(1, 1, 1.6);
  CHECK(delaunay_defect(s, 2) < 0);
  // Development oracle: the opposite vertex lies inside the circumdisk.
  const auto T = bisect_triangle(1, 1, 1.6);
  const auto c = circumcircle(1.0, 1.0, 1.6);
  REQUIRE(c.kind == CircleKind::Circle);
  // Neighbour across edge 2 (v0 v1) is the half-turn image about its midpoint.
  const Vec3 m = h2_normalize(T[0] + T[1]);
  const Vec3 apex = 2 * (-mdot(m, T[2])) * m - T[2];
  CHECK(raw_dist(c.center, apex) < c.radius);
}

TEST_CASE("flip") {
  const ConeSurface s = one_vertex_torus(1, 1.05, 1.9);
  const int e = 2;
  REQUIRE(delaunay_defect(s, e) < 0);
  const ConeSurface f = flip(s, e);
  REQUIRE(is_valid(f));
  CHECK(cone_angle(f, 0) == doctest::Approx(cone_angle(s, 0)).epsilon(1e-12));
  CHECK(area(f) == doctest::Approx(area(s)).epsilon(1e-12));
  CHECK(delaunay_defect(f, e) > 0);

  // Independent development: two bisected triangles across the shared side.
  // Triangle 0 has sides (1, 1.05, 1.9): corners v0 v1 v2, side 2 = v2 v0.
  // Place side 2 on the x axis from v0 to v2 and the apexes on either side.
  const double L = 1.9;
  // Apex v1 of triangle 0: distance 1 from v0 (side 0), 1.05 from v2 (side 1).
  auto apex = [&](double d0, double d2, double sign) {
    double lo = 0, hi = pi;
    const Vec3 V2(std::cosh(L), std::sinh(L), 0);
    auto at = [&](double th) { return Vec3(std::cosh(d0), std::sinh(d0) * std::cos(th),
                                          sign * std::sinh(d0) * std::sin(th)); };
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (raw_dist(V2, at(mid)) < d2 ? lo : hi) = mid;
    }
    return at(0.5 * (lo + hi));
  };
  // Triangle 1 is glued side k to side k, so across side 2 the neighbour is
  // the half-turn of triangle 0: its apex sits at distance 1.05 from v0 and
  // 1 from v2 on the other side.
  const Vec3 p = apex(1.0, 1.05, 1.0), q = apex(1.05, 1.0, -1.0);
  CHECK(f.length[e] == doctest::Approx(raw_dist(p, q)).epsilon(1e-12));

  const ConeSurface back = flip_unchecked(f, e);
  for (int k = 0; k < 3; ++k)
    CHECK(sorted_lengths(back)[k] ==
          doctest::Approx(sorted_lengths(s)[k]).epsilon(1e-12));
}

TEST_CASE("flips carry tags consistently") {
  std::mt19937_64 rng(21);
  ConeSurface s = grid_torus(3, 3, 0.9, 0.3, rng);
  s.tag.assign(s.num_half_sides(), Eigen::Vector2d::Zero());
  std::uniform_real_distribution<double> U(-1, 1);
  // Tags from a random potential are antisymmetric and sum to zero.
  std::vector<Eigen::Vector2d> pot(s.nv);
  for (auto& v : pot) v = {U(rng), U(rng)};
  for (int h = 0; h < s.num_half_sides(); ++h) s.tag[h] = pot[s.target(h)] - pot[s.origin(h)];
  const auto run = make_delaunay_run(jitter_lengths(s, 0.5, rng));
  const ConeSurface& r = run.surface;
  for (int h = 0; h < r.num_half_sides(); ++h) {
    CHECK((r.tag[h] + r.tag[r.glue[h]]).norm() < 1e-12);
    CHECK((r.tag[h] - (pot[r.target(h)] - pot[r.origin(h)])).norm() < 1e-12);
  }
}

TEST_CASE("make_delaunay") {
  SUBCASE("already Delaunay") {
    const ConeSurface s = one_vertex_torus(1, 1.1, 1.2);
    const auto run = make_delaunay_run(s);
    CHECK(run.flipped.empty());
    CHECK(run.surface.length == s.length);
  }
  SUBCASE("obtuse torus") {
    const ConeSurface s = one_vertex_torus(1, 1, 1.9);
    const ConeSurface d = make_delaunay(s);
    CHECK(min_defect(d) >= -1e-10);
    CHECK(cone_angle(d, 0) == doctest::Approx(cone_angle(s, 0)).epsilon(1e-9));
  }
  SUBCASE("corpus") {
    for (const auto& s : surface_corpus(40, 5)) {
      const auto run = make_delaunay_run(s);
      const ConeSurface& d = run.surface;
      CHECK(is_valid(d));
      CHECK(min_defect(d) >= -1e-10);
      CHECK(std::abs(area(d) - area(s)) < 1e-9);
      for (int v = 0; v < s.nv; ++v)
        CHECK(std::abs(cone_angle(d, v) - cone_angle(s, v)) < 1e-9);
      CHECK(make_delaunay_run(d).flipped.empty());
      CHECK(std::abs(gauss_bonnet_residual(d)) < 1e-9);
    }
  }
}

TEST_CASE("Delaunay triangulation is unique for strictly positive defects") {
  std::mt19937_64 rng(17);
  int compared = 0;
  for (const auto& s : surface_corpus(24, 31)) {
    const ConeSurface a = make_delaunay(s);
    if (min_defect(a) < 1e-6) continue;
    // A different flip order: start from a relabeled copy with a few
    // random (possibly non-improving) flips applied.
    std::vector<int> perm(s.num_tris());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ConeSurface t = relabel_triangles(a, perm);
    for (int k = 0; k < 3; ++k) {
      const int e = std::uniform_int_distribution<int>(0, t.num_edges() - 1)(rng);
      if (is_flippable(t, e)) t = flip_unchecked(t, e);
    }
    const ConeSurface b = make_delaunay(t);
    const auto la = sorted_lengths(a), lb = sorted_lengths(b);
    for (size_t k = 0; k < la.size(); ++k) {
      CHECK(std::abs(la[k] - lb[k]) < 1e-9);
    }
    ++compared;
  }
  CHECK(compared >= 5);
}

TEST_CASE("decomposition") {
  SUBCASE("generic") {
    std::mt19937_64 rng(3);
    const ConeSurface s = make_delaunay(grid_torus(3, 3, 0.9, 0.2, rng));
    const auto cells = decomposition(s);
    CHECK(cells.size() == static_cast<size_t>(s.num_tris()));
    for (const auto& c : cells) CHECK(c.tris.size() == 1);
  }
  SUBCASE("inscribed quadrilateral") {
    const ConeSurface s = inscribed_torus(0.7, 0.5);
    const auto cells = decomposition(s);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].tris.size() == 2);
    CHECK(cells[0].kind == CircleKind::Circle);
    CHECK(cells[0].radius == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(cells[0].spread < 1e-7);
    const double a = s.length[0], b = s.length[1], x = s.length[2];
    const double y = flip_unchecked(s, 2).length[2];
    CHECK(std::abs(ptolemy_defect(a, b, a, b, x, y)) < 1e-7);
  }
  SUBCASE("not Delaunay") {
    CHECK_THROWS_AS(decomposition(one_vertex_torus(1, 1, 1.9)), NotDelaunay);
  }
}
