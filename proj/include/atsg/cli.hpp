// Copyright 2026 The atsg Authors.
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

#ifndef ATSG_CLI_HPP_
#define ATSG_CLI_HPP_

// Command-line front end: `atsg generate|inspect|solve|bench ...`.
// Exit codes: 0 success, 1 solver failure, 2 input error.

#include <iosfwd>
#include <string>
#include <vector>

namespace atsg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolverFailure = 1;
inline constexpr int kExitInputError = 2;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace atsg

#endif  // ATSG_CLI_HPP_
