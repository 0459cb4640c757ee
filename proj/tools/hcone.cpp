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

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hypercone/conesurf.hpp"
#include "hypercone/conflow.hpp"
#include "hypercone/delaunay.hpp"
#include "hypercone/errors.hpp"
#include "hypercone/mhull.hpp"
#include "hypercone/sysbal.hpp"
#include "hypercone/torusreal.hpp"

namespace {

using hc::fmt17;

constexpr const char* kFormats = R"(CSV outputs (first line is a version tag):
  angles         # hcone angles v1: vertex,kappa,curvature
  flow           # hcone flow v1: t,kappa_0..kappa_{n-1},min_defect
  hull           # hcone hull v1: u,v,dihedral
  torus est1     # hcone est1 v1: direction,scale,log2_scale,l,l_wedge,diff,log_diff,quotient
  torus jacobian # hcone jacobian v1: u,v,dk,turns,w,wdk,wturns,length,<coordinates>
  torus realize  # hcone realize v1: iteration,residual
Footer lines start with '#'.)";

/// Run report: identical inputs, flags and seed give identical bytes.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs, results;

  void input(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    char ch;
    while (f.get(ch)) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    inputs.push_back({path, buf});
  }
  void result(const std::string& k, const std::string& v) { results.push_back({k, v}); }
  void result(const std::string& k, double v) { result(k, fmt17(v)); }

  void write(const std::string& path, const std::string& params, std::uint64_t seed) const {
    std::ofstream o(path);
    if (!o) throw hc::ParseError("cannot write " + path);
    o << "# hcone report v1\n";
    o << "command = " << command << "\n";
    o << "seed = " << seed << "\n";
    for (const auto& [p, d] : inputs) o << "input " << p << " fnv1a64 " << d << "\n";
    o << "[parameters]\n" << params;
    o << "[results]\n";
    for (const auto& [k, v] : results) o << k << " = " << v << "\n";
  }
};

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw hc::ParseError("cannot write " + path);
  return &file;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f;
  *open_out(path, f) << text;
}

/// "lo:hi" gives 2^-lo .. 2^-hi.
std::vector<double> parse_scales(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--scales", "expected lo:hi");
  int lo, hi;
  try {
    lo = std::stoi(spec.substr(0, colon));
    hi = std::stoi(spec.substr(colon + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--scales", "expected integers lo:hi");
  }
  if (lo > hi || lo < 0 || hi > 52) throw CLI::ValidationError("--scales", "need 0 <= lo <= hi <= 52");
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

int cmd_validate(const std::string& in, Report& rep) {
  const hc::ConeSurface s = hc::read_hcs_file(in);
  const auto diags = hc::validate(s);
  for (const auto& d : diags) {
    if (d.triangle >= 0)
      std::cout << "triangle " << d.triangle << ": " << d.message << "\n";
    else
      std::cout << d.message << "\n";
  }
  rep.result("problems", std::to_string(diags.size()));
  if (!diags.empty())
    throw hc::InvalidSurface(std::to_string(diags.size()) + " problem(s) in " + in);
  std::cout << "valid: nv " << s.nv << " nt " << s.num_tris() << " ne " << s.num_edges()
            << " chi " << hc::euler_characteristic(s) << "\n";
  return 0;
}

hc::ConeSurface read_valid(const std::string& in) {
  hc::ConeSurface s = hc::read_hcs_file(in);
  const auto diags = hc::validate(s);
  if (!diags.empty()) throw hc::InvalidSurface(in + ": " + diags.front().message);
  return s;
}

int cmd_angles(const std::string& in, const std::string& out, Report& rep) {
  const hc::ConeSurface s = read_valid(in);
  std::ofstream f;
  std::ostream& o = *open_out(out, f);
  o << "# hcone angles v1\nvertex,kappa,curvature\n";
  const auto k = hc::cone_angles(s);
  for (size_t v = 0; v < k.size(); ++v)
    o << v << "," << fmt17(k[v]) << "," << fmt17(2 * std::numbers::pi - k[v]) << "\n";
  o << "# area " << fmt17(hc::area(s)) << "\n";
  o << "# euler_characteristic " << hc::euler_characteristic(s) << "\n";
  o << "# gauss_bonnet_residual " << fmt17(hc::gauss_bonnet_residual(s)) << "\n";
  o << "# convex " << (hc::is_convex(s) ? 1 : 0) << "\n";
  rep.result("area", hc::area(s));
  rep.result("convex", hc::is_convex(s) ? "1" : "0");
  return 0;
}

int cmd_delaunay(const std::string& in, const std::string& out, bool cells, Report& rep) {
  const hc::ConeSurface s = read_valid(in);
  const hc::DelaunayRun run = hc::make_delaunay_run(s);
  write_text(out, hc::to_hcs(run.surface));
  std::cerr << "flips " << run.flipped.size() << "\n";
  rep.result("flips", std::to_string(run.flipped.size()));
  if (cells) {
    const auto D = hc::decomposition(run.surface);
    std::cerr << "cells " << D.size() << "\n";
    rep.result("cells", std::to_string(D.size()));
  }
  return 0;
}

int cmd_flow(const std::string& in, double dt, double t_max, const std::string& out,
             const std::string& csv, Report& rep) {
  const hc::ConeSurface s = read_valid(in);
  const hc::ConvexFlow F = hc::flow_to_convex(s, dt, t_max);
  std::ofstream f;
  std::ostream& o = *open_out(csv, f);
  hc::write_flow_csv(o, F.trace);
  o << "# t_star " << fmt17(F.t_star) << "\n";
  if (!out.empty()) hc::write_hcs_file(F.surface, out);
  rep.result("t_star", F.t_star);
  rep.result("drift_steps", std::to_string(F.drift_steps));
  return 0;
}

int cmd_balanced(const std::string& in, double eps, double cap, Report& rep) {
  const hc::ConeSurface s = read_valid(in);
  const hc::BalanceReport b = hc::is_balanced(s, eps, cap);
  std::cout << "verdict " << hc::to_string(b.verdict) << "\n";
  std::cout << "systole " << fmt17(b.sys.lower) << " " << fmt17(b.sys.upper) << "\n";
  std::cout << "cone_sparsity " << fmt17(b.cosp.lower) << " " << fmt17(b.cosp.upper) << "\n";
  std::cout << "delta " << fmt17(b.delta_lower) << " " << fmt17(b.delta_upper) << "\n";
  rep.result("verdict", hc::to_string(b.verdict));
  return 0;
}

int cmd_hull(const std::string& in, const std::string& out, Report& rep) {
  const auto pts = hc::read_hpts_file(in);
  const hc::HullComplex H = hc::visible_hull(pts);
  std::cout << "# hcone hull v1\nu,v,dihedral\n";
  for (const auto& e : H.edges) std::cout << e.u << "," << e.v << "," << fmt17(e.dihedral) << "\n";
  std::cout << "# vertices " << H.num_vertices() << " facets " << H.num_facets() << " edges "
            << H.num_edges() << "\n";
  for (const auto& d : H.diagnostics) std::cout << "# " << d << "\n";
  if (!out.empty()) hc::write_hcs_file(hc::boundary_metric(H), out);
  rep.result("vertices", std::to_string(H.num_vertices()));
  rep.result("facets", std::to_string(H.num_facets()));
  return 0;
}

int cmd_torus_metric(const std::string& in, const hc::InducedOptions& opt, const std::string& out,
                     Report& rep) {
  const hc::TorusConfig c = hc::read_htc_file(in);
  const hc::InducedMetric m = hc::induced_metric(c, opt);
  write_text(out, hc::to_hcs(m.surface));
  std::cerr << "K " << m.K << " axis_distance " << fmt17(m.axis_distance) << "\n";
  rep.result("K", std::to_string(m.K));
  rep.result("axis_distance", m.axis_distance);
  return 0;
}

int cmd_torus_realize(const std::string& target, const std::string& init,
                      const hc::RealizeOptions& opt, const std::string& out, Report& rep) {
  const hc::ConeSurface T = read_valid(target);
  const hc::TorusConfig c = hc::read_htc_file(init);
  const hc::RealizeResult r = hc::realize(T, c, opt);
  std::cout << "# hcone realize v1\niteration,residual\n";
  for (size_t i = 0; i < r.history.size(); ++i) std::cout << i << "," << fmt17(r.history[i]) << "\n";
  if (!out.empty()) write_text(out, hc::to_htc(r.config));
  std::cout << "# iterations " << r.iterations << " residual " << fmt17(r.residual) << "\n";
  rep.result("iterations", std::to_string(r.iterations));
  rep.result("residual", r.residual);
  return 0;
}

int cmd_torus_est1(const std::string& in, const std::vector<std::string>& dirs,
                   const std::string& scales, const hc::Est1Options& opt, Report& rep) {
  const hc::TorusConfig c = hc::read_htc_file(in);
  const hc::StripReport r = hc::est1_scan(c, dirs, parse_scales(scales), opt);
  std::cout << "# hcone est1 v1\ndirection,scale,log2_scale,l,l_wedge,diff,log_diff,quotient\n";
  for (const auto& S : r.series)
    for (const auto& q : S.records)
      std::cout << S.direction << "," << fmt17(q.scale) << "," << fmt17(std::log2(q.scale)) << ","
                << fmt17(q.l) << "," << fmt17(q.l_wedge) << "," << fmt17(q.diff) << ","
                << fmt17(q.diff > 0 ? std::log(q.diff) : -INFINITY) << "," << fmt17(q.quotient)
                << "\n";
  for (const auto& S : r.series) {
    std::cout << "# slope " << S.direction << " " << fmt17(S.slope) << " residual "
              << fmt17(S.residual) << " fitted " << S.fitted << " vanishes " << S.vanishes << "\n";
    rep.result("slope." + S.direction, S.slope);
  }
  return 0;
}

int cmd_torus_jacobian(const std::string& in, const hc::JacobianOptions& opt, Report& rep) {
  const hc::TorusConfig c = hc::read_htc_file(in);
  const hc::TorusJacobian J = hc::jacobian(c, opt);
  std::cout << "# hcone jacobian v1\nu,v,dk,turns,w,wdk,wturns,length";
  for (const auto& n : hc::coord_names(c)) std::cout << "," << n;
  std::cout << "\n";
  for (size_t e = 0; e < J.edges.size(); ++e) {
    const auto& k = J.edges[e];
    std::cout << k.u << "," << k.v << "," << k.dk << "," << k.turns << "," << k.w << "," << k.wdk
              << "," << k.wturns << "," << fmt17(J.lengths(e));
    for (int j = 0; j < J.J.cols(); ++j) std::cout << "," << fmt17(J.J(e, j));
    std::cout << "\n";
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J.J);
  const auto& sv = svd.singularValues();
  std::cout << "# rows " << J.J.rows() << " cols " << J.J.cols() << " sigma_min "
            << fmt17(sv(sv.size() - 1)) << " sigma_max " << fmt17(sv(0)) << "\n";
  rep.result("sigma_min", sv(sv.size() - 1));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic cone-metrics and their convex realizations"};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::uint64_t seed = 0;
  int threads = 1;
  std::string report_path;
  app.add_option("--seed", seed, "Seed for randomized steps")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--report", report_path, "Write a run report to this file");

  Report rep;
  std::function<int()> run;
  std::string in, out, csv, init;

  auto* validate = app.add_subcommand("validate", "Check an HCS surface");
  validate->add_option("input", in, "HCS file")->required()->check(CLI::ExistingFile);
  validate->callback([&] { run = [&] { return cmd_validate(in, rep); }; });

  auto* angles = app.add_subcommand("angles", "Cone angles as CSV");
  angles->add_option("input", in, "HCS file")->required()->check(CLI::ExistingFile);
  angles->add_option("-o,--output", out, "CSV file (default stdout)");
  angles->callback([&] { run = [&] { return cmd_angles(in, out, rep); }; });

  bool cells = false;
  auto* delaunay = app.add_subcommand("delaunay", "Delaunay triangulation by flips");
  delaunay->add_option("input", in, "HCS file")->required()->check(CLI::ExistingFile);
  delaunay->add_option("-o,--output", out, "HCS file (default stdout)");
  delaunay->add_flag("--cells", cells, "Also report the Delaunay cells");
  delaunay->callback([&] { run = [&] { return cmd_delaunay(in, out, cells, rep); }; });

  double dt = 0.05, t_max = 20;
  auto* flow = app.add_subcommand("flow", "Flow to a convex metric");
  flow->add_option("input", in, "HCS file")->required()->check(CLI::ExistingFile);
  flow->add_option("--dt", dt, "Step size")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("--t-max", t_max, "Time limit")->check(CLI::PositiveNumber)->capture_default_str();
  flow->add_option("-o,--output", out, "HCS file for the convex metric");
  flow->add_option("--csv", csv, "Trace CSV (default stdout)");
  flow->callback([&] { run = [&] { return cmd_flow(in, dt, t_max, out, csv, rep); }; });

  double eps = 0.05, cap = 10;
  auto* balanced = app.add_subcommand("balanced", "Balancedness verdict");
  balanced->add_option("input", in, "HCS file")->required()->check(CLI::ExistingFile);
  balanced->add_option("--eps", eps, "Sampling radius")->check(CLI::PositiveNumber)->capture_default_str();
  balanced->add_option("--cap", cap, "Systole search cap")->check(CLI::PositiveNumber)->capture_default_str();
  balanced->callback([&] { run = [&] { return cmd_balanced(in, eps, cap, rep); }; });

  auto* hull = app.add_subcommand("hull", "Visible hull of HPTS points");
  hull->add_option("input", in, "HPTS file")->required()->check(CLI::ExistingFile);
  hull->add_option("-o,--output", out, "HCS file for the boundary metric");
  hull->callback([&] { run = [&] { return cmd_hull(in, out, rep); }; });

  auto* torus = app.add_subcommand("torus", "Solid torus configurations");
  torus->require_subcommand(1);
  hc::InducedOptions induced;
  auto add_induced = [&](CLI::App* sub) {
    sub->add_option("--K", induced.K, "First truncation")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--max-K", induced.max_K, "Largest truncation")->check(CLI::PositiveNumber)->capture_default_str();
  };

  auto* metric = torus->add_subcommand("metric", "Induced boundary metric as HCS");
  metric->add_option("input", in, "HTC file")->required()->check(CLI::ExistingFile);
  metric->add_option("-o,--output", out, "HCS file (default stdout)");
  add_induced(metric);
  metric->callback([&] { run = [&] { return cmd_torus_metric(in, induced, out, rep); }; });

  hc::RealizeOptions ropt;
  auto* realize = torus->add_subcommand("realize", "Find a configuration inducing a metric");
  realize->add_option("target", in, "HCS file")->required()->check(CLI::ExistingFile);
  realize->add_option("--init", init, "HTC start")->required()->check(CLI::ExistingFile);
  realize->add_option("--iters", ropt.iters, "Iteration limit")->check(CLI::PositiveNumber)->capture_default_str();
  realize->add_option("--tol", ropt.tol, "Residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  realize->add_option("-o,--output", out, "HTC file for the result");
  add_induced(realize);
  realize->callback([&] {
    ropt.jac.induced = induced;
    run = [&] { return cmd_torus_realize(in, init, ropt, out, rep); };
  });

  std::vector<std::string> dirs;
  std::string scales = "3:12";
  hc::Est1Options eopt;
  auto* est1 = torus->add_subcommand("est1", "Strip length against the wedge near a peculiar config");
  est1->add_option("input", in, "HTC file")->required()->check(CLI::ExistingFile);
  est1->add_option("--dir", dirs, "Coordinate direction (x, y, phi, a, alpha or x1.1 style)")->required();
  est1->add_option("--scales", scales, "Scales 2^-lo..2^-hi as lo:hi")->capture_default_str();
  est1->add_option("--fit-last", eopt.fit_last, "Scales in the slope fit")->check(CLI::PositiveNumber)->capture_default_str();
  add_induced(est1);
  est1->callback([&] {
    eopt.induced = induced;
    run = [&] { return cmd_torus_est1(in, dirs, scales, eopt, rep); };
  });

  hc::JacobianOptions jopt;
  auto* jac = torus->add_subcommand("jacobian", "Edge-length Jacobian as CSV");
  jac->add_option("input", in, "HTC file")->required()->check(CLI::ExistingFile);
  jac->add_option("--step", jopt.step, "Difference step")->check(CLI::PositiveNumber)->capture_default_str();
  add_induced(jac);
  jac->callback([&] {
    jopt.induced = induced;
    run = [&] { return cmd_torus_jacobian(in, jopt, rep); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ostringstream params;
  for (const CLI::App* sub = &app;;) {
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_name(false, true);
      if (opt == sub->get_help_ptr() || name == "--report") continue;
      std::string value;
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
      if (opt->count() == 0) value = opt->get_default_str();
      params << (rep.command.empty() ? "" : rep.command + " ") << name << " = " << value << "\n";
    }
    if (sub->get_subcommands().empty()) break;
    sub = sub->get_subcommands().front();
    rep.command += (rep.command.empty() ? "" : " ") + sub->get_name();
  }
  if (!in.empty()) rep.input(in);
  if (!init.empty()) rep.input(init);

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    code = run();
  } catch (const hc::Error& e) {
    std::cerr << e.line() << "\n";
    code = 1;
    rep.result("error", e.line());
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "# wall_time_s " << fmt17(wall) << "\n";
  if (!report_path.empty()) {
    try {
      rep.write(report_path, params.str(), seed);
    } catch (const hc::Error& e) {
      std::cerr << e.line() << "\n";
      return 1;
    }
  }
  return code;
}
