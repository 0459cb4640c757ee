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

// Line tokenizing shared by the text formats.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "hypercone/errors.hpp"

namespace hc {

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline long to_int(const std::string& w, int line) {
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(w, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != w.size() || w.empty())
    throw ParseError("line " + std::to_string(line) + ": expected integer, got '" +
                     w + "'");
  return v;
}

inline double to_real(const std::string& w, int line) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(w, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != w.size() || w.empty())
    throw ParseError("line " + std::to_string(line) + ": expected number, got '" +
                     w + "'");
  return v;
}

}  // namespace detail

}  // namespace hc
