// Copyright 2026 The dipsat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>

#include "dipsat/solver.hpp"

namespace dipsat {

/// Entry point of the `dipsat` tool. Returns the process exit code:
/// 10 satisfiable, 20 unsatisfiable, 0 unknown or success, 1 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Statistics as a JSON object.
std::string stats_json(const SolverStats& s, Status status);

}  // namespace dipsat
