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

#include <stdexcept>
#include <string>

namespace hc {

/// Base of every domain error. Prints as "E<code>: <module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(int code, std::string module, const std::string& message);
  int code() const { return code_; }
  const std::string& module() const { return module_; }
  const std::string& message() const { return message_; }
  std::string line() const;

 private:
  int code_;
  std::string module_;
  std::string message_;
};

#define HC_DECLARE_ERROR(Name, Code, Module)                 \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& message)                \
        : Error(Code, Module, #Name ": " + message) {}       \
  };

HC_DECLARE_ERROR(ClampBudgetExceeded, 101, "hyptrig")
HC_DECLARE_ERROR(NonexistentTrapezoid, 102, "hyptrig")
HC_DECLARE_ERROR(NoPentagon, 103, "hyptrig")
HC_DECLARE_ERROR(NoHexagon, 104, "hyptrig")
HC_DECLARE_ERROR(DegenerateTriangle, 105, "hyptrig")

HC_DECLARE_ERROR(InvalidSurface, 201, "conesurf")
HC_DECLARE_ERROR(ParseError, 202, "conesurf")

HC_DECLARE_ERROR(FlipRejected, 301, "delaunay")
HC_DECLARE_ERROR(FlipBudgetExceeded, 302, "delaunay")
HC_DECLARE_ERROR(NotDelaunay, 303, "delaunay")

HC_DECLARE_ERROR(NotReached, 401, "conflow")

HC_DECLARE_ERROR(NotConvex, 501, "sysbal")

HC_DECLARE_ERROR(OutsideBall, 601, "mhull")
HC_DECLARE_ERROR(DegenerateSpan, 602, "mhull")
HC_DECLARE_ERROR(NotSphere, 603, "mhull")

HC_DECLARE_ERROR(NotStabilized, 701, "torusreal")
HC_DECLARE_ERROR(DegenerateConfig, 702, "torusreal")
HC_DECLARE_ERROR(NotStrictlyPolyhedral, 703, "torusreal")
HC_DECLARE_ERROR(TriangulationChanged, 704, "torusreal")
HC_DECLARE_ERROR(NoCombinatorialMatch, 705, "torusreal")
HC_DECLARE_ERROR(Stalled, 706, "torusreal")

#undef HC_DECLARE_ERROR

}  // namespace hc
