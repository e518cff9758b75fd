// Copyright 2026 The rblab Authors
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

// Thin RAII wrapper over GSL's derivative-free simplex minimizer.

#pragma once

#include <Eigen/Core>

#include <functional>

namespace rblab::detail {

struct SimplexResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

SimplexResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step,
                          int max_iterations, double size_tolerance);

}  // namespace rblab::detail
