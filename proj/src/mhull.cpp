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

#include "hypercone/mhull.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hypercone/errors.hpp"
#include "hull_core.hpp"
#include "text_io.hpp"

namespace hc {

namespace {

long long key(int u, int v) {
  return (static_cast<long long>(u) << 32) | static_cast<unsigned>(v);
}

}  // namespace


HPoint lift(const Eigen::Vector3d& k) {
  const double r2 = k.squaredNorm();
  if (!(r2 < 1)) throw OutsideBall("Klein point with |k|^2 = " + fmt17(r2));
  MVector v;
  v << 1.0, k;
  return HPoint::normalize(v / std::sqrt(1.0 - r2));
}

HullComplex visible_hull(const std::vector<HPoint>& points) {
  const detail::FrameFn frame = [&](std::span<const int> ids, MVector* out) {
    for (size_t j = 0; j < ids.size(); ++j) out[j] = points[ids[j]].vec();
  };
  detail::HullCore core =
      detail::convex_hull(static_cast<int>(points.size()), frame, kCoplanarTolerance);
  HullComplex h;
  h.points = points;
  h.vertices = std::move(core.vertices);
  h.diagnostics = std::move(core.diagnostics);
  h.facets.resize(core.facets.size());
  for (size_t g = 0; g < core.facets.size(); ++g) {
    h.facets[g].verts = std::move(core.facets[g]);
    h.facets[g].normal = MVector::Zero();
  }
  for (size_t t = 0; t < core.triangles.size(); ++t) {
    const auto& T = core.triangles[t];
    h.facets[core.triangle_facet[t]].normal += detail::plane_normal(
        points[T[0]].vec(), points[T[1]].vec(), points[T[2]].vec());
  }
  for (auto& F : h.facets) F.normal /= std::sqrt(mdot(F.normal, F.normal));
  for (const auto& e : core.edges) h.edges.push_back({e.u, e.v, e.left, e.right, e.dihedral});
  return h;
}

ConeSurface boundary_metric(const HullComplex& h, std::vector<int>* vertex_point) {
  std::unordered_map<int, int> id;
  for (int v : h.vertices) id.emplace(v, static_cast<int>(id.size()));
  std::vector<std::array<int, 3>> tris;
  for (const auto& F : h.facets) {
    if (F.verts.size() < 3) throw NotSphere("facet with fewer than 3 vertices");
    for (size_t k = 1; k + 1 < F.verts.size(); ++k)
      tris.push_back({id.at(F.verts[0]), id.at(F.verts[k]), id.at(F.verts[k + 1])});
  }
  std::unordered_map<long long, int> open;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> lens;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t)
    for (int s = 0; s < 3; ++s) {
      const int a = tris[t][s], b = tris[t][(s + 1) % 3];
      const auto it = open.find(key(b, a));
      if (it != open.end()) {
        pairs.push_back({it->second, half_side(t, s)});
        lens.push_back(dist(h.points[h.vertices[a]], h.points[h.vertices[b]]));
        open.erase(it);
      } else if (!open.emplace(key(a, b), half_side(t, s)).second) {
        throw NotSphere("edge used twice in the same direction");
      }
    }
  if (!open.empty()) throw NotSphere(std::to_string(open.size()) + " unmatched edges");
  ConeSurface s = assemble(static_cast<int>(id.size()), tris, pairs, lens);
  if (!is_valid(s) || euler_characteristic(s) != 2)
    throw NotSphere("facets do not form a sphere");
  if (vertex_point) *vertex_point = h.vertices;
  return s;
}

std::vector<double> dihedral_angles(const HullComplex& h) {
  std::vector<double> out;
  for (const auto& e : h.edges) out.push_back(e.dihedral);
  return out;
}

HPoint interior_point(const HullComplex& h) {
  MVector c = MVector::Zero();
  for (int v : h.vertices) c += h.points[v].vec();
  return HPoint::normalize(c);
}

RayHit first_hit(const HullComplex& h, const HPoint& from, const MVector& dir) {
  RayHit hit;
  hit.distance = std::numeric_limits<double>::infinity();
  for (int f = 0; f < h.num_facets(); ++f) {
    const MVector& n = h.facets[f].normal;
    const double s = mdot(n, dir);
    if (!(s > 0)) continue;
    const double r = -mdot(n, from.vec()) / s;
    if (!(r >= 0 && r < 1)) continue;
    const double t = std::atanh(r);
    if (t < hit.distance) {
      hit.distance = t;
      hit.facet = f;
    }
  }
  if (hit.facet >= 0)
    hit.point = HPoint::normalize(std::cosh(hit.distance) * from.vec() +
                                  std::sinh(hit.distance) * dir);
  return hit;
}

std::string to_hpts(const std::vector<HPoint>& points) {
  std::ostringstream o;
  o << "HPTS 1\n";
  for (const auto& p : points) {
    const MVector& v = p.vec();
    o << "p " << fmt17(v(0)) << " " << fmt17(v(1)) << " " << fmt17(v(2)) << " "
      << fmt17(v(3)) << "\n";
  }
  return o.str();
}

std::vector<HPoint> parse_hpts(const std::string& text) {
  using detail::to_real;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  bool header = false;
  std::vector<HPoint> out;
  while (std::getline(in, line)) {
    ++ln;
    const auto w = detail::tokens(line);
    if (w.empty()) continue;
    const std::string where = "line " + std::to_string(ln) + ": ";
    if (!header) {
      if (w.size() != 2 || w[0] != "HPTS" || w[1] != "1")
        throw ParseError(where + "expected 'HPTS 1'");
      header = true;
    } else if (w[0] == "p") {
      if (w.size() != 5) throw ParseError(where + "'p' takes 4 fields");
      MVector v;
      for (int i = 0; i < 4; ++i) v(i) = to_real(w[i + 1], ln);
      const double q = mdot(v, v);
      if (!(v(0) > 0) || std::abs(q + 1) > 1e-9 * v(0) * v(0))
        throw ParseError(where + "point is not on the hyperboloid");
      out.push_back(HPoint::normalize(v));
    } else if (w[0] == "k") {
      if (w.size() != 4) throw ParseError(where + "'k' takes 3 fields");
      const Eigen::Vector3d k(to_real(w[1], ln), to_real(w[2], ln), to_real(w[3], ln));
      if (!(k.squaredNorm() < 1)) throw ParseError(where + "Klein point outside the ball");
      out.push_back(lift(k));
    } else {
      throw ParseError(where + "unknown record '" + w[0] + "'");
    }
  }
  if (!header) throw ParseError("empty input, expected 'HPTS 1'");
  return out;
}

std::vector<HPoint> read_hpts_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_hpts(ss.str());
}

}  // namespace hc
