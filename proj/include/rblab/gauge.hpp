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

#pragma once

#include "rblab/clifford.hpp"
#include "rblab/rb_protocol.hpp"
#include "rblab/superop.hpp"

#include <cstdint>
#include <vector>

namespace rblab {

/// Invertible map M with first row e0, acting on gates by G -> M G M^-1,
/// on states by rho -> M rho and on effects by E -> M^-T E.
class GaugeTransform {
 public:
  /// Throws std::invalid_argument when the first row is not e0 to 1e-9 or
  /// M is numerically singular.
  explicit GaugeTransform(Eigen::MatrixXd m);

  static GaugeTransform identity(int d = 2);

  const Eigen::MatrixXd& matrix() const { return m_; }
  const Eigen::MatrixXd& inverse() const { return m_inv_; }
  int dim() const { return dim_; }

 private:
  Eigen::MatrixXd m_;
  Eigen::MatrixXd m_inv_;
  int dim_;
};

Superoperator apply_gauge(const Superoperator& g, const GaugeTransform& m);
std::vector<Superoperator> apply_gauge(const std::vector<Superoperator>& gates, const GaugeTransform& m);
State apply_gauge(const State& rho, const GaugeTransform& m);
Effect apply_gauge(const Effect& e, const GaugeTransform& m);
Spam apply_gauge(const Spam& spam, const GaugeTransform& m);
/// Conjugates the imperfect gates; the ideal Cliffords are left untouched.
GateSet apply_gauge(const GateSet& gateset, const GaugeTransform& m);

/// Mean of agi(imperfect[i], ideal[i]).
double agsi(const std::vector<Superoperator>& imperfect, const std::vector<Superoperator>& ideal);
double agsi(const GateSet& gateset);

/// Smallest Choi eigenvalue over a set of gates.
double min_choi_eigenvalue(const std::vector<Superoperator>& gates);

/// diag(1, 1, alpha, 1): scales the sigma_y component by alpha.
GaugeTransform m_alpha(double alpha);

struct GaugeReport {
  double epsilon_before = 0;
  double epsilon_after = 0;
  bool all_cp_after = false;
  double min_choi_eigenvalue_after = 0;
  double r_reference = 0;
};

GaugeReport gauge_report(const GateSet& gateset, const GaugeTransform& m, double r_reference,
                         double cp_tolerance = tol::kStructural);

/// (3 - lambda (alpha^2 + alpha + 1) / alpha) / 6.
double counterexample_gate_agi(double lambda, double alpha);

struct CounterexampleRow {
  double alpha = 0;
  double epsilon = 0;
  double min_choi_eigenvalue = 0;
  bool all_cp = false;
  double r_reference = 0;
  /// Largest |agi - closed form| over gates that do not fix sigma_y.
  double formula_deviation = 0;
};

struct CounterexampleResult {
  double lambda = 0;
  std::vector<CounterexampleRow> rows;
  /// Rows with alpha != 1, all gates CP and epsilon < r.
  std::vector<std::size_t> successes;
};

/// Transforms the gateset D_lambda C_i by M_alpha for every alpha on the grid.
/// CP status uses min Choi eigenvalue >= -1e-10.
CounterexampleResult counterexample_epsilon_min(double lambda, const std::vector<double>& alpha_grid);

/// alpha in [lo, hi] with n points.
std::vector<double> linear_grid(double lo, double hi, int n);

struct EpsilonMinResult {
  /// Best feasible AGsI found; an upper bound on the constrained minimum.
  double epsilon_min = 0;
  double epsilon_input = 0;
  GaugeTransform m_best = GaugeTransform::identity();
  double min_choi_eigenvalue = 0;
  /// False when no transformed point beat the input representation.
  bool improved = false;
  int restarts = 0;
};

/// Nelder-Mead over the 12 free entries of a TP-form M with penalty
/// 1e6 * sum max(0, -min Choi eigenvalue)^2; feasible means all gates CP to
/// 1e-8. Restart 0
/// starts at the identity; restart t > 0 starts from a perturbation drawn from
/// make_rng(seed, t), so adding restarts never worsens the result.
EpsilonMinResult epsilon_min_search(const GateSet& gateset, int restarts, std::uint64_t seed);

struct WallmanGauge {
  Superoperator l_op = Superoperator::identity(2);
  double gamma = 0;
  double r_gamma = 0;
  double epsilon_in_gauge = 0;
  double min_choi_eigenvalue = 0;
  int null_space_dim = 0;
  double residual = 0;
};

/// Solves L'(L) = L D_gamma for an invertible L normalized to L(0,0) = 1.
WallmanGauge wallman_gauge(const GateSet& gateset, std::uint64_t seed = 0x3a11'ba5e);

}  // namespace rblab
