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

#include <stdexcept>
#include <vector>

namespace rblab {

/// Raised when the spectral assumptions behind gamma do not hold.
class SpectralAssumptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transfer matrix of the RB sequence average. Block (k, j) is
/// C~[idx(C_k C_j^-1)] / |C|, so that a sequence step moves the accumulated
/// Clifford from j to k. The survival probability after m random gates is
/// |C| e^T [R^(m+1)]_(id, id) rho.
Eigen::MatrixXd build_r_matrix(const GateSet& gateset);

enum class DecaySource { kRMatrix, kLMap };

struct SpectralDecay {
  DecaySource source = DecaySource::kRMatrix;
  Eigen::VectorXcd eigenvalues;
  Eigen::VectorXcd weights;
};

struct ExactDecay {
  SpectralDecay spectrum;
  std::vector<int> lengths;
  std::vector<double> p;
  /// Condition number of the eigenvector matrix of R.
  double eigenvector_condition = 0;
  /// True when P_m came from repeated multiplication instead of the spectrum.
  bool used_fallback = false;
};

/// P_m = sum_i alpha_i lambda_i^(m+1), falling back to repeated block
/// multiplication when the eigenvector matrix has condition number > 1e8.
ExactDecay exact_decay(const GateSet& gateset, const Spam& spam, const std::vector<int>& lengths);

/// 16 x 16 matrix acting on column-stacked PTMs. Unprimed:
/// E -> avg_i C_i^-1 E C~_i. Primed: E -> avg_i C~_i E C_i^-1.
Eigen::MatrixXd build_l_map(const GateSet& gateset, bool primed = false);

struct GammaResult {
  double gamma = 0;
  double r_gamma = 0;
  /// Moduli of the remaining eigenvalues, descending.
  std::vector<double> subdominant_moduli;
  Eigen::VectorXcd eigenvalues;

  /// Upper bound on |sum_(i >= 2) w_i gamma_i^m| given |w_i| <= weight.
  double kappa_bound_at(int m, double weight = 1.0) const;
};

/// gamma is the largest-modulus eigenvalue other than the unit one. Throws
/// SpectralAssumptionError when the unit eigenvalue is not simple or gamma is
/// not real to 1e-9.
GammaResult gamma_and_r_gamma(const Eigen::MatrixXd& l_matrix, int d = 2);

/// Tr(E Lbar[L^m(1)](rho)) by repeated application of the L map.
std::vector<double> predicted_decay(const GateSet& gateset, const Spam& spam, const std::vector<int>& lengths);

struct DeltaBound {
  double delta_diamond = 0;
  std::vector<double> per_gate_distances;
};

/// Half the mean diamond distance between each error map and their average.
DeltaBound delta_diamond(const GateSet& gateset, const DiamondOptions& options = {});

/// Exhaustive average over all 24^m sequences; m must be in [1, 3].
double brute_force_pm(const GateSet& gateset, const Spam& spam, int m);

}  // namespace rblab
