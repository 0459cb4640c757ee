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

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hypercone/conesurf.hpp"
#include "hypercone/errors.hpp"
#include "text_io.hpp"

namespace hc {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_hcs(const ConeSurface& s) {
  std::ostringstream o;
  o << "HCS 1\n";
  o << "nv " << s.nv << "\n";
  o << "nt " << s.num_tris() << "\n";
  for (int t = 0; t < s.num_tris(); ++t)
    o << "tri " << t << " " << s.tris[t][0] << " " << s.tris[t][1] << " "
      << s.tris[t][2] << "\n";
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_rep[e], g = s.glue[h];
    o << "glue " << tri_of(h) << " " << side_of(h) << " " << tri_of(g) << " "
      << side_of(g) << "\n";
  }
  for (int e = 0; e < s.num_edges(); ++e) {
    const int h = s.edge_rep[e];
    o << "len " << tri_of(h) << " " << side_of(h) << " " << fmt17(s.length[e])
      << "\n";
  }
  return o.str();
}

using detail::to_int;
using detail::to_real;
using detail::tokens;

ConeSurface parse_hcs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  bool header = false;
  long nv = -1, nt = -1;
  std::vector<std::array<int, 3>> tris;
  std::vector<char> have;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, double>> lens;
  auto expect = [&](const std::vector<std::string>& w, size_t n) {
    if (w.size() != n)
      throw ParseError("line " + std::to_string(ln) + ": '" + w[0] +
                       "' takes " + std::to_string(n - 1) + " fields");
  };
  auto tri_index = [&](const std::string& w) {
    const long i = to_int(w, ln);
    if (i < 0 || i >= nt)
      throw ParseError("line " + std::to_string(ln) + ": triangle " + w +
                       " out of range");
    return static_cast<int>(i);
  };
  auto side_index = [&](const std::string& w) {
    const long i = to_int(w, ln);
    if (i < 0 || i > 2)
      throw ParseError("line " + std::to_string(ln) + ": side " + w +
                       " not in {0,1,2}");
    return static_cast<int>(i);
  };
  while (std::getline(in, line)) {
    ++ln;
    const auto w = tokens(line);
    if (w.empty()) continue;
    if (!header) {
      if (w.size() != 2 || w[0] != "HCS" || w[1] != "1")
        throw ParseError("line " + std::to_string(ln) + ": expected 'HCS 1'");
      header = true;
    } else if (w[0] == "nv") {
      expect(w, 2);
      nv = to_int(w[1], ln);
    } else if (w[0] == "nt") {
      expect(w, 2);
      nt = to_int(w[1], ln);
      if (nt < 0) throw ParseError("line " + std::to_string(ln) + ": nt < 0");
      tris.assign(nt, {-1, -1, -1});
      have.assign(nt, 0);
    } else if (w[0] == "tri") {
      expect(w, 5);
      if (nt < 0) throw ParseError("line " + std::to_string(ln) + ": tri before nt");
      const int i = tri_index(w[1]);
      if (have[i])
        throw ParseError("line " + std::to_string(ln) + ": triangle " + w[1] +
                         " listed twice");
      have[i] = 1;
      for (int c = 0; c < 3; ++c)
        tris[i][c] = static_cast<int>(to_int(w[2 + c], ln));
    } else if (w[0] == "glue") {
      expect(w, 5);
      if (nt < 0) throw ParseError("line " + std::to_string(ln) + ": glue before nt");
      pairs.push_back({half_side(tri_index(w[1]), side_index(w[2])),
                       half_side(tri_index(w[3]), side_index(w[4]))});
    } else if (w[0] == "len") {
      expect(w, 4);
      if (nt < 0) throw ParseError("line " + std::to_string(ln) + ": len before nt");
      lens.push_back({half_side(tri_index(w[1]), side_index(w[2])),
                      to_real(w[3], ln)});
    } else {
      throw ParseError("line " + std::to_string(ln) + ": unknown record '" +
                       w[0] + "'");
    }
  }
  if (!header) throw ParseError("missing 'HCS 1' header");
  if (nv < 0 || nt < 0) throw ParseError("missing nv or nt");
  for (long t = 0; t < nt; ++t)
    if (!have[t])
      throw ParseError("triangle " + std::to_string(t) + " not listed");
  ConeSurface s = assemble(static_cast<int>(nv), tris, pairs, {});
  std::vector<char> set(s.num_edges(), 0);
  for (const auto& [h, L] : lens) {
    const int e = s.edge[h];
    if (e < 0) {
      s.assembly_issues.push_back("length given for unglued side " +
                                  std::to_string(side_of(h)) + " of triangle " +
                                  std::to_string(tri_of(h)));
      continue;
    }
    if (set[e])
      s.assembly_issues.push_back("edge at side " + std::to_string(side_of(h)) +
                                  " of triangle " + std::to_string(tri_of(h)) +
                                  " has two lengths");
    set[e] = 1;
    s.length[e] = L;
  }
  return s;
}

ConeSurface read_hcs_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  std::stringstream b;
  b << f.rdbuf();
  return parse_hcs(b.str());
}

void write_hcs_file(const ConeSurface& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << to_hcs(s);
}

}  // namespace hc
