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

#ifndef ATSG_SRC_LP_INTERNAL_HPP_
#define ATSG_SRC_LP_INTERNAL_HPP_

#include <span>

#include "atsg/lp.hpp"

namespace atsg::lp {

// solve_lp() with the variable bounds replaced by `lower` / `upper`.
Solution solve_with_bounds(const LinearProgram& lp, std::span<const double> lower,
                           std::span<const double> upper);

}  // namespace atsg::lp

#endif  // ATSG_SRC_LP_INTERNAL_HPP_
