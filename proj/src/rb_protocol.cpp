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

#include "rblab/rb_protocol.hpp"

#include <unsupported/Eigen/NonLinearOptimization>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rblab {
namespace {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

std::vector<Matrix4> fixed_ptms(const std::vector<Superoperator>& ops) {
  std::vector<Matrix4> out;
  out.reserve(ops.size());
  for (const auto& op : ops) {
    if (op.ptm().rows() != 4) throw DimensionError("RB simulation supports single-qubit gatesets only");
    out.emplace_back(op.ptm());
  }
  return out;
}

double survival(const std::vector<Matrix4>& gates, const RBSequence& seq, const Vector4& rho, const Vector4& e) {
  Vector4 v = rho;
  for (int s : seq.indices) v = gates[static_cast<std::size_t>(s)] * v;
  v = gates[static_cast<std::size_t>(seq.inversion)] * v;
  return e.dot(v);
}

double logistic(double q) { return 1.0 / (1.0 + std::exp(-q)); }

// Residuals f(m) - y for x = (A, B, q[, C]).
struct DecayFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const std::vector<double>& m;
  const std::vector<double>& y;
  int n_params;

  int inputs() const { return n_params; }
  int values() const { return static_cast<int>(m.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    const double log_p = -std::log1p(std::exp(-x[2]));
    const double c = n_params == 4 ? x[3] : 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double pm = std::exp(m[i] * log_p);
      fvec[static_cast<Eigen::Index>(i)] = x[0] + (x[1] + c * m[i]) * pm - y[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& jac) const {
    const double log_p = -std::log1p(std::exp(-x[2]));
    const double one_minus_p = logistic(-x[2]);
    const double c = n_params == 4 ? x[3] : 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double pm = std::exp(m[i] * log_p);
      jac(r, 0) = 1.0;
      jac(r, 1) = pm;
      jac(r, 2) = (x[1] + c * m[i]) * m[i] * pm * one_minus_p;
      if (n_params == 4) jac(r, 3) = m[i] * pm;
    }
    return 0;
  }
};

struct Start {
  double a, b, p;
};

// Log-linear estimate of p and the m = 0 amplitude above an asymptote a0.
Start log_slope_start(const std::vector<double>& m, const std::vector<double>& y, double a0) {
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (y[i] - a0 > 0) {
      xs.push_back(m[i]);
      ls.push_back(std::log(y[i] - a0));
    }
  }
  double p0 = 0.9;
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double ml = std::accumulate(ls.begin(), ls.end(), 0.0) / static_cast<double>(ls.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ls[i] - ml);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0 && sxy < 0) p0 = std::exp(sxy / sxx);
  }
  p0 = std::clamp(p0, 1e-6, 1.0 - 1e-9);
  const double b0 = (y.front() - a0) / std::pow(p0, m.front());
  return {a0, b0, p0};
}

bool converged(Eigen::LevenbergMarquardtSpace::Status s) {
  using namespace Eigen::LevenbergMarquardtSpace;
  switch (s) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
      return true;
    default:
      return false;
  }
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

}  // namespace

Spam Spam::ideal() {
  const Eigen::Vector2cd zero(1.0, 0.0);
  return {State::from_ket(zero), Effect::from_ket(zero)};
}

std::vector<int> default_lengths() {
  std::vector<int> out;
  for (int m = 1; m <= 2001; m += 50) out.push_back(m);
  return out;
}

void RBConfig::validate() const {
  if (lengths.empty()) throw std::invalid_argument("lengths must not be empty");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1) throw std::invalid_argument("lengths must be >= 1");
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw std::invalid_argument("lengths must be strictly increasing");
  }
  if (k_per_length < 1) throw std::invalid_argument("k_per_length must be >= 1");
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (spam && (spam->rho.dim() != 2 || spam->effect.dim() != 2)) {
    throw std::invalid_argument("spam must be single-qubit");
  }
}

RBSequence sample_rb_sequence(const CliffordGroup& group, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sequence length must be >= 1");
  std::uniform_int_distribution<int> pick(0, group.size() - 1);
  RBSequence seq;
  seq.indices.resize(static_cast<std::size_t>(m));
  int net = group.identity_index;
  for (auto& s : seq.indices) {
    s = pick(rng);
    net = group.cayley[static_cast<std::size_t>(s)][static_cast<std::size_t>(net)];
  }
  seq.inversion = group.inverse[static_cast<std::size_t>(net)];
  return seq;
}

double survival_probability(const GateSet& gateset, const RBSequence& sequence, const Spam& spam) {
  return survival(fixed_ptms(gateset.imperfect()), sequence, spam.rho.coeffs(), spam.effect.coeffs());
}

std::vector<double> RBDataset::stds() const {
  std::vector<double> out;
  out.reserve(probabilities.size());
  for (const auto& ps : probabilities) out.push_back(sample_std(ps));
  return out;
}

RBDataset run_rb(const GateSet& gateset, const RBConfig& config) {
  config.validate();
  const auto gates = fixed_ptms(gateset.imperfect());
  const Spam spam = config.resolved_spam();
  const Vector4 rho = spam.rho.coeffs();
  const Vector4 e = spam.effect.coeffs();
  const auto k = static_cast<std::size_t>(config.k_per_length);
  const std::size_t n_lengths = config.lengths.size();

  RBDataset data;
  data.lengths = config.lengths;
  data.probabilities.assign(n_lengths, std::vector<double>(k));
  parallel_for(n_lengths * k, [&](std::size_t task) {
    const std::size_t l = task / k, s = task % k;
    Rng rng = make_rng(config.seed, task);
    const RBSequence seq = sample_rb_sequence(gateset.ideal(), config.lengths[l], rng);
    data.probabilities[l][s] = survival(gates, seq, rho, e);
  });
  for (const auto& ps : data.probabilities) {
    data.means.push_back(std::accumulate(ps.begin(), ps.end(), 0.0) / static_cast<double>(ps.size()));
  }
  return data;
}

const char* to_string(FitModel model) { return model == FitModel::kZeroth ? "zeroth" : "first"; }

FitResult fit_decay(const std::vector<double>& lengths, const std::vector<double>& values, FitModel model, int d) {
  if (lengths.size() != values.size()) throw std::invalid_argument("lengths and values differ in size");
  const int n_params = model == FitModel::kFirst ? 4 : 3;
  if (static_cast<int>(lengths.size()) < n_params) {
    throw std::invalid_argument(std::string(to_string(model)) + "-order fit needs at least " +
                                std::to_string(n_params) + " lengths");
  }
  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lengths[i] < lengths[j]; });
  std::vector<double> m, y;
  for (std::size_t i : order) {
    m.push_back(lengths[i]);
    y.push_back(values[i]);
  }

  FitResult result;
  result.model = model;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  if (*hi - *lo < 1e-12) {
    result.a = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    result.p = 1.0;
    result.no_decay = true;
    result.p_at_bound = true;
    return result;
  }

  const std::size_t n = y.size();
  const double tail = (y[n - 1] + y[n - 2] + y[n - 3]) / 3.0;
  std::vector<Start> starts;
  for (double a0 : {tail, 1.0 / d}) {
    const Start s = log_slope_start(m, y, a0);
    starts.push_back(s);
    for (double f : {0.9, 1.1}) {
      const double p = std::clamp(1.0 - f * (1.0 - s.p), 1e-6, 1.0 - 1e-9);
      starts.push_back({a0, (y.front() - a0) / std::pow(p, m.front()), p});
    }
  }

  DecayFunctor functor{m, y, n_params};
  double best = std::numeric_limits<double>::infinity();
  double best_any = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  for (const auto& s : starts) {
    Eigen::VectorXd x(n_params);
    x[0] = s.a;
    x[1] = s.b;
    x[2] = std::log(s.p / (1.0 - s.p));
    if (n_params == 4) x[3] = 0.0;
    Eigen::LevenbergMarquardt<DecayFunctor> lm(functor);
    lm.parameters.ftol = 1e-15;
    lm.parameters.xtol = 1e-15;
    lm.parameters.maxfev = 4000;
    const auto status = lm.minimize(x);
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    functor(x, r);
    const double norm = r.norm();
    if (!std::isfinite(norm) || !x.allFinite()) continue;
    best_any = std::min(best_any, norm);
    if (converged(status) && norm < best) {
      best = norm;
      best_x = x;
    }
  }
  if (best_x.size() == 0) {
    std::ostringstream os;
    os << to_string(model) << "-order fit did not converge (best residual " << best_any << ")";
    throw FitError(os.str(), best_any);
  }

  result.a = best_x[0];
  result.b = best_x[1];
  result.p = logistic(best_x[2]);
  result.c = n_params == 4 ? best_x[3] : 0.0;
  result.residual_norm = best;
  result.r_hat = (d - 1) * logistic(-best_x[2]) / d;
  result.p_at_bound = result.p < 1e-10 || result.p > 1.0 - 1e-10;
  return result;
}

FitResult fit_decay(const RBDataset& dataset, FitModel model, int d) {
  return fit_decay(std::vector<double>(dataset.lengths.begin(), dataset.lengths.end()), dataset.means, model, d);
}

std::vector<RBEstimate> estimate_r(const GateSet& gateset, const RBConfig& config,
                                   const std::vector<FitModel>& models) {
  config.validate();
  const auto repeats = static_cast<std::size_t>(config.repeats);
  std::vector<std::vector<std::optional<FitResult>>> fits(repeats, std::vector<std::optional<FitResult>>(models.size()));
  std::vector<std::vector<double>> residuals(repeats, std::vector<double>(models.size(), 0.0));
  parallel_for(repeats, [&](std::size_t t) {
    RBConfig cfg = config;
    cfg.seed = derive_seed(config.seed, t);
    const RBDataset data = run_rb(gateset, cfg);
    for (std::size_t k = 0; k < models.size(); ++k) {
      try {
        fits[t][k] = fit_decay(data, models[k], gateset.dim());
      } catch (const FitError& e) {
        residuals[t][k] = e.best_residual();
      }
    }
  });

  std::vector<RBEstimate> out;
  for (std::size_t k = 0; k < models.size(); ++k) {
    RBEstimate est;
    est.model = models[k];
    est.seed = config.seed;
    std::vector<double> rs;
    double best_failed = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < repeats; ++t) {
      if (fits[t][k]) {
        est.fits.push_back(*fits[t][k]);
        rs.push_back(fits[t][k]->r_hat);
      } else {
        ++est.failures;
        best_failed = std::min(best_failed, residuals[t][k]);
      }
    }
    if (2 * est.failures > config.repeats) {
      std::ostringstream os;
      os << est.failures << " of " << config.repeats << " " << to_string(models[k]) << "-order fits failed";
      throw FitError(os.str(), best_failed);
    }
    est.r_mean = std::accumulate(rs.begin(), rs.end(), 0.0) / static_cast<double>(rs.size());
    est.r_std = sample_std(rs);
    out.push_back(std::move(est));
  }
  return out;
}

RBEstimate estimate_r(const GateSet& gateset, const RBConfig& config, FitModel model) {
  return estimate_r(gateset, config, std::vector<FitModel>{model}).front();
}

}  // namespace rblab
