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

#include "hypercone/errors.hpp"

namespace hc {

Error::Error(int code, std::string module, const std::string& message)
    : std::runtime_error("E" + std::to_string(code) + ": " + module + ": " +
                         message),
      code_(code),
      module_(std::move(module)),
      message_(message) {}

std::string Error::line() const { return what(); }

}  // namespace hc
