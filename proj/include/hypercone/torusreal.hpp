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

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hypercone/conesurf.hpp"
#include "hypercone/hyptrig.hpp"

namespace hc {

/// A vertex placed by distance x to the axis, foot position y along it and
/// angle phi about it.
struct TorusVertex {
  double x = 1, y = 0, phi = 0;
};

/// Convex solid torus with generator loxodromic(a, alpha) and two banks of
/// marked vertices. Gauge: the first vertex of bank 1 has y = phi = 0.
struct TorusConfig {
  double a = 1;
  double alpha = 0;
  std::vector<TorusVertex> bank1, bank2;

  int size() const { return static_cast<int>(bank1.size() + bank2.size()); }
  /// Vertices in order bank 1 then bank 2.
  const TorusVertex& vertex(int i) const;
  int bank_of(int i) const { return i < static_cast<int>(bank1.size()) ? 1 : 2; }
};

/// Throws DegenerateConfig unless a > 0, every x > 0, both banks are
/// non-empty and the gauge holds.
void check_config(const TorusConfig& c);

LorentzIsometry generator(const TorusConfig& c);

/// Free coordinates in the order x (all), y (all but the gauge vertex),
/// phi (likewise), a, alpha.
Eigen::VectorXd to_coords(const TorusConfig& c);
TorusConfig from_coords(const TorusConfig& shape, const Eigen::VectorXd& q);
/// Names such as x1.1, y2.1, phi2.1, a, alpha, in coordinate order.
std::vector<std::string> coord_names(const TorusConfig& c);
/// Index of a coordinate by name; the short names x, y and phi pick the
/// first coordinate of that kind.
int coord_index(const TorusConfig& c, const std::string& name);

/// gamma^k v for |k| <= K, at index (k + K) * n + i.
std::vector<HPoint> orbit_points(const TorusConfig& c, int K);

/// Orbit copy gamma^k of vertex i.
struct OrbitLabel {
  int k = 0;
  int vertex = 0;
  friend bool operator==(const OrbitLabel&, const OrbitLabel&) = default;
  friend auto operator<=>(const OrbitLabel&, const OrbitLabel&) = default;
};

struct InducedOptions {
  int K = 4;                 // first truncation tried
  int max_K = 64;            // doubling stops here
  double merge_tolerance = 1e-9;
};

/// Boundary of the orbit hull modulo gamma.
struct InducedMetric {
  /// Torus with one vertex per config vertex. Tags hold the displacement
  /// (gamma power, turns about the axis) of each half-side in the cover.
  ConeSurface surface;
  /// One representative per facet orbit, counterclockwise from outside,
  /// shifted so that the smallest gamma power is 0.
  std::vector<std::vector<OrbitLabel>> facets;
  int K = 0;
  /// Smallest distance from the axis to a facet plane.
  double axis_distance = 0;
};

/// Metric from the hull of orbit_points(c, K); throws NotStabilized(K)
/// unless the facet orbits at K and K + 1 agree.
InducedMetric induced_metric(const TorusConfig& c, int K, double merge_tolerance = 1e-9);
/// Doubles K from opt.K up to opt.max_K until stable.
InducedMetric induced_metric(const TorusConfig& c, const InducedOptions& opt = {});

/// Cylindrical position of an orbit copy: distance to axis, axial position,
/// and continuous angle.
struct OrbitPlace {
  double x, t, theta;
};
OrbitPlace place(const TorusConfig& c, const OrbitLabel& p);
/// Distance between two orbit copies, free of cancellation.
double orbit_distance(const TorusConfig& c, const OrbitLabel& p, const OrbitLabel& q);

/// Shortest arc between points at distances x1, x2 on opposite sides of a
/// line, with feet |y| apart.
double wedge_shortest(double x1, double x2, double y);

/// True when all bank-1 angles agree, all bank-2 angles agree, alpha = 0 and
/// the banks are at least pi apart.
bool is_peculiar(const TorusConfig& c);

/// Length of the shortest arc from the central copies of the first vertices
/// of the two banks across the strip that faces the axis.
double strip_length(const TorusConfig& c, const InducedOptions& opt = {});

struct StripRecord {
  double scale = 0;
  double l = 0;        // strip_length
  double l_wedge = 0;  // wedge_shortest
  double diff = 0;     // |l - l_wedge|
  double quotient = 0; // |l(s) - l(0)| / s
};

struct StripSeries {
  std::string direction;
  std::vector<StripRecord> records;
  double slope = 0;     // log-log slope of diff over the fitted scales
  double residual = 0;  // rms of the fit in log space
  int fitted = 0;       // number of scales used
  bool vanishes = false;  // diff below the noise floor at every scale
};

struct StripReport {
  std::vector<StripSeries> series;
};

struct Est1Options {
  int fit_last = 5;            // fit over the smallest scales
  double noise_floor = 1e-13;  // diffs at or below this count as zero
  InducedOptions induced;
};

/// Deforms the peculiar c0 along each named coordinate by each scale.
StripReport est1_scan(const TorusConfig& c0, const std::vector<std::string>& directions,
                      const std::vector<double>& scales, const Est1Options& opt = {});

/// Edges of the Delaunay triangulation of a torus, keyed by endpoint
/// vertices and cover displacement with a canonical orientation. The apex
/// of the triangle on the left, with its displacement from u, separates
/// edges that join the same lifts around a cone point.
struct EdgeKey {
  int u, v;
  int dk, turns;
  int w, wdk, wturns;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};
std::vector<EdgeKey> edge_keys(const ConeSurface& s);

struct JacobianOptions {
  double step = 1e-6;
  double axis_threshold = 1e-6;
  int retries = 3;
  InducedOptions induced;
};

struct TorusJacobian {
  Eigen::MatrixXd J;             // edges x coordinates
  std::vector<EdgeKey> edges;    // row keys
  Eigen::VectorXd lengths;       // Delaunay edge lengths at c
  int K = 0;
};

/// d(Delaunay edge lengths)/d(coords) by Richardson-extrapolated central
/// differences.
TorusJacobian jacobian(const TorusConfig& c, const JacobianOptions& opt = {});

/// Gradient of the extrinsic distance between two orbit copies.
Eigen::VectorXd distance_gradient(const TorusConfig& c, const OrbitLabel& p,
                                  const OrbitLabel& q);

struct RealizeOptions {
  int iters = 50;
  double tol = 1e-10;
  double damping_condition = 1e8;
  JacobianOptions jac;
};

struct RealizeResult {
  TorusConfig config;
  int iterations = 0;
  double residual = 0;  // max edge-length residual
  std::vector<double> history;
};

/// Gauss-Newton on Delaunay edge lengths. Throws NoCombinatorialMatch,
/// Stalled or DegenerateConfig.
RealizeResult realize(const ConeSurface& target, const TorusConfig& init,
                      const RealizeOptions& opt = {});

/// Delaunay edge lengths of the current config arranged in the order of the
/// target's Delaunay edges.
Eigen::VectorXd matched_lengths(const ConeSurface& target_delaunay,
                                const ConeSurface& current_delaunay);

/// Bank-crossing edges of the strip facing the axis, with the data of the
/// generatrix sign and slope bound.
struct Generatrix {
  OrbitLabel p1, p2;  // on bank 1 and bank 2
  double dt;          // t(p1) - t(p2)
  double dtheta;      // theta(p2) - theta(p1)
  double bound;       // |((phi - pi) a - alpha y) / (alpha pi)|
};
std::vector<Generatrix> strip_generatrices(const TorusConfig& c, const InducedMetric& m);

// HTC text format.
std::string to_htc(const TorusConfig& c);
TorusConfig parse_htc(const std::string& text);
TorusConfig read_htc_file(const std::string& path);

}  // namespace hc
