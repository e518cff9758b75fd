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

#include "nelder_mead.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace rblab::detail {
namespace {

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<>> x(v->data, static_cast<Eigen::Index>(v->size),
                                                                Eigen::InnerStride<>(static_cast<Eigen::Index>(v->stride)));
  const double value = f(x);
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

// GSL aborts by default; errors are reported through return codes instead.
const bool kHandlerOff = [] {
  gsl_set_error_handler_off();
  return true;
}();

}  // namespace

SimplexResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step, int max_iterations,
                          double size_tolerance) {
  (void)kHandlerOff;
  const auto n = static_cast<std::size_t>(x0.size());
  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(start.get(), i, x0(static_cast<Eigen::Index>(i)));
  }
  gsl_vector_set_all(steps.get(), step);

  gsl_multimin_function fn;
  fn.n = n;
  fn.f = &trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  if (!minimizer) throw std::runtime_error("failed to allocate simplex minimizer");
  gsl_multimin_fminimizer_set(minimizer.get(), &fn, start.get(), steps.get());

  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < max_iterations) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), size_tolerance);
  }

  SimplexResult result;
  result.x.resize(static_cast<Eigen::Index>(n));
  const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer.get());
  for (std::size_t i = 0; i < n; ++i) result.x(static_cast<Eigen::Index>(i)) = gsl_vector_get(best, i);
  result.value = gsl_multimin_fminimizer_minimum(minimizer.get());
  result.iterations = iter;
  result.converged = status == GSL_SUCCESS;
  return result;
}

}  // namespace rblab::detail
