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
#include "rblab/parallel.hpp"
#include "rblab/superop.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rblab {

/// State preparation and measurement pair.
struct Spam {
  State rho;
  Effect effect;

  /// rho = E = |0><0|.
  static Spam ideal();
};

/// Lengths {1, 51, 101, ..., 2001}.
std::vector<int> default_lengths();

struct RBConfig {
  std::vector<int> lengths = default_lengths();
  int k_per_length = 500;
  std::uint64_t seed = 20170101;
  int repeats = 50;
  /// Ideal SPAM when empty.
  std::optional<Spam> spam;

  Spam resolved_spam() const { return spam ? *spam : Spam::ideal(); }
  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Random Cliffords s_1..s_m followed by the inverting Clifford.
struct RBSequence {
  std::vector<int> indices;
  int inversion = 0;
};

/// Draws m uniform Cliffords; the inversion comes from the group tables.
RBSequence sample_rb_sequence(const CliffordGroup& group, int m, Rng& rng);

/// Exact Tr(E C~_inv C~_{s_m} ... C~_{s_1}(rho)).
double survival_probability(const GateSet& gateset, const RBSequence& sequence, const Spam& spam);

struct RBDataset {
  std::vector<int> lengths;
  /// probabilities[l][s] for length index l and sequence s.
  std::vector<std::vector<double>> probabilities;
  std::vector<double> means;

  /// Sample standard deviation across sequences at each length.
  std::vector<double> stds() const;
};

/// Samples k_per_length sequences per length from config.seed and evaluates
/// their exact survival probabilities.
RBDataset run_rb(const GateSet& gateset, const RBConfig& config);

enum class FitModel { kZeroth, kFirst };

const char* to_string(FitModel model);

/// P_m = A + (B + C m) p^m.
struct FitResult {
  FitModel model = FitModel::kZeroth;
  double a = 0, b = 0, c = 0, p = 0;
  double r_hat = 0;
  double residual_norm = 0;
  /// Data constant over all lengths; p is reported as 1.
  bool no_decay = false;
  /// p within 1e-10 of 0 or 1.
  bool p_at_bound = false;
};

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Unweighted least squares with p = 1 / (1 + exp(-q)).
FitResult fit_decay(const std::vector<double>& lengths, const std::vector<double>& values, FitModel model,
                    int d = 2);
FitResult fit_decay(const RBDataset& dataset, FitModel model, int d = 2);

struct RBEstimate {
  FitModel model = FitModel::kFirst;
  double r_mean = 0;
  double r_std = 0;
  /// One entry per repeat; failed repeats are absent from fits.
  std::vector<FitResult> fits;
  int failures = 0;
  std::uint64_t seed = 0;
};

/// Runs config.repeats independent experiments and fits each with every
/// requested model. Repeat t uses derive_seed(config.seed, t). Throws FitError
/// when a majority of repeats fail for any model.
std::vector<RBEstimate> estimate_r(const GateSet& gateset, const RBConfig& config,
                                   const std::vector<FitModel>& models);
RBEstimate estimate_r(const GateSet& gateset, const RBConfig& config, FitModel model = FitModel::kFirst);

}  // namespace rblab
