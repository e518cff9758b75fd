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

#include "rblab/gauge.hpp"

#include "nelder_mead.hpp"
#include "rblab/parallel.hpp"
#include "rblab/rb_theory.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace rblab {
namespace {

constexpr double kCounterexampleCpTolerance = 1e-10;
constexpr double kSearchFeasibility = 1e-8;
constexpr double kPenaltyWeight = 1e6;
constexpr double kNullSpaceRelative = 1e-8;
constexpr double kWallmanResidual = 1e-8;
constexpr int kWallmanCandidates = 2000;

bool fixes_sigma_y(const Superoperator& c) { return std::abs(std::abs(c.ptm()(2, 2)) - 1.0) < 1e-12; }

}  // namespace

GaugeTransform::GaugeTransform(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) throw DimensionError("gauge matrix must be square");
  dim_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m_.rows()))));
  if (dim_ * dim_ != m_.rows()) throw DimensionError("gauge matrix size must be d^2");
  Eigen::RowVectorXd e0 = Eigen::RowVectorXd::Zero(m_.cols());
  e0(0) = 1.0;
  if ((m_.row(0) - e0).cwiseAbs().maxCoeff() > tol::kStructural) {
    throw std::invalid_argument("gauge matrix first row must be e0");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m_);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) throw std::invalid_argument("gauge matrix is singular");
  m_inv_ = lu.inverse();
}

GaugeTransform GaugeTransform::identity(int d) { return GaugeTransform(Eigen::MatrixXd::Identity(d * d, d * d)); }

Superoperator apply_gauge(const Superoperator& g, const GaugeTransform& m) {
  if (g.dim() != m.dim()) throw DimensionError("gauge and gate dimensions differ");
  return Superoperator(m.matrix() * g.ptm() * m.inverse());
}

std::vector<Superoperator> apply_gauge(const std::vector<Superoperator>& gates, const GaugeTransform& m) {
  std::vector<Superoperator> out;
  out.reserve(gates.size());
  for (const auto& g : gates) out.push_back(apply_gauge(g, m));
  return out;
}

State apply_gauge(const State& rho, const GaugeTransform& m) {
  if (rho.dim() != m.dim()) throw DimensionError("gauge and state dimensions differ");
  return State(m.matrix() * rho.coeffs());
}

Effect apply_gauge(const Effect& e, const GaugeTransform& m) {
  if (e.dim() != m.dim()) throw DimensionError("gauge and effect dimensions differ");
  return Effect(m.inverse().transpose() * e.coeffs());
}

Spam apply_gauge(const Spam& spam, const GaugeTransform& m) {
  return Spam{apply_gauge(spam.rho, m), apply_gauge(spam.effect, m)};
}

GateSet apply_gauge(const GateSet& gateset, const GaugeTransform& m) {
  return gateset.with_imperfect(apply_gauge(gateset.imperfect(), m));
}

double agsi(const std::vector<Superoperator>& imperfect, const std::vector<Superoperator>& ideal) {
  if (imperfect.size() != ideal.size() || imperfect.empty()) {
    throw std::invalid_argument("agsi needs equally sized, non-empty gate lists");
  }
  double total = 0;
  for (std::size_t i = 0; i < imperfect.size(); ++i) total += agi(imperfect[i], ideal[i]);
  return total / static_cast<double>(imperfect.size());
}

double agsi(const GateSet& gateset) { return agsi(gateset.imperfect(), gateset.ideal().elements); }

double min_choi_eigenvalue(const std::vector<Superoperator>& gates) {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& g : gates) out = std::min(out, min_choi_eigenvalue(g));
  return out;
}

GaugeTransform m_alpha(double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("M_alpha needs a finite alpha > 0");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(2, 2) = alpha;
  return GaugeTransform(m);
}

GaugeReport gauge_report(const GateSet& gateset, const GaugeTransform& m, double r_reference, double cp_tolerance) {
  const auto after = apply_gauge(gateset.imperfect(), m);
  GaugeReport out;
  out.epsilon_before = agsi(gateset);
  out.epsilon_after = agsi(after, gateset.ideal().elements);
  out.min_choi_eigenvalue_after = min_choi_eigenvalue(after);
  out.all_cp_after = out.min_choi_eigenvalue_after >= -cp_tolerance;
  out.r_reference = r_reference;
  return out;
}

double counterexample_gate_agi(double lambda, double alpha) {
  return (3.0 - lambda * (alpha * alpha + alpha + 1.0) / alpha) / 6.0;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

CounterexampleResult counterexample_epsilon_min(double lambda, const std::vector<double>& alpha_grid) {
  if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const GateSet base = GateSet::build(GateIndependent{depolarizing_channel(lambda)});
  const auto& ideal = base.ideal().elements;
  const double r = (1.0 - lambda) / 2.0;
  CounterexampleResult out;
  out.lambda = lambda;
  for (double alpha : alpha_grid) {
    const auto gates = apply_gauge(base.imperfect(), m_alpha(alpha));
    CounterexampleRow row;
    row.alpha = alpha;
    row.epsilon = agsi(gates, ideal);
    row.min_choi_eigenvalue = min_choi_eigenvalue(gates);
    row.all_cp = row.min_choi_eigenvalue >= -kCounterexampleCpTolerance;
    row.r_reference = r;
    const double closed = counterexample_gate_agi(lambda, alpha);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      if (fixes_sigma_y(ideal[i])) continue;
      row.formula_deviation = std::max(row.formula_deviation, std::abs(agi(gates[i], ideal[i]) - closed));
    }
    if (alpha != 1.0 && row.all_cp && row.epsilon < r) out.successes.push_back(out.rows.size());
    out.rows.push_back(row);
  }
  return out;
}

EpsilonMinResult epsilon_min_search(const GateSet& gateset, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("epsilon_min_search needs at least one restart");
  if (gateset.dim() != 2) throw DimensionError("epsilon_min_search supports single-qubit gatesets only");
  const auto& ideal = gateset.ideal().elements;

  auto to_matrix = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m.bottomRows(3) += Eigen::Map<const Eigen::MatrixXd>(x.data(), 3, 4);
    return m;
  };

  struct Incumbent {
    double epsilon = std::numeric_limits<double>::infinity();
    double min_choi = 0;
    Eigen::MatrixXd m;
  };
  std::vector<Incumbent> best(static_cast<std::size_t>(restarts));

  parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t t) {
    Incumbent& inc = best[t];
    auto objective = [&](const Eigen::VectorXd& x) {
      const Eigen::MatrixXd m = to_matrix(x);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (!lu.isInvertible() || lu.rcond() < 1e-10) return std::numeric_limits<double>::infinity();
      const Eigen::MatrixXd m_inv = lu.inverse();
      double eps = 0;
      double violation = 0;
      double min_choi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < ideal.size(); ++i) {
        const Superoperator g(m * gateset.imperfect()[i].ptm() * m_inv);
        eps += agi(g, ideal[i]);
        const double lam = min_choi_eigenvalue(g);
        min_choi = std::min(min_choi, lam);
        violation += std::max(0.0, -lam) * std::max(0.0, -lam);
      }
      eps /= static_cast<double>(ideal.size());
      if (min_choi >= -kSearchFeasibility && eps < inc.epsilon) inc = Incumbent{eps, min_choi, m};
      return eps + kPenaltyWeight * violation;
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(12);
    if (t > 0) {
      Rng rng = make_rng(seed, t);
      std::normal_distribution<double> normal(0.0, 0.01);
      for (Eigen::Index k = 0; k < x0.size(); ++k) x0(k) = normal(rng);
    }
    auto res = detail::nelder_mead(objective, x0, 5e-3, 4000, 1e-10);
    detail::nelder_mead(objective, res.x, 5e-4, 4000, 1e-12);
  });

  EpsilonMinResult out;
  out.restarts = restarts;
  out.epsilon_input = agsi(gateset);
  out.epsilon_min = out.epsilon_input;
  out.min_choi_eigenvalue = min_choi_eigenvalue(gateset.imperfect());
  for (const auto& inc : best) {
    if (inc.epsilon < out.epsilon_min) {
      out.epsilon_min = inc.epsilon;
      out.min_choi_eigenvalue = inc.min_choi;
      out.m_best = GaugeTransform(inc.m);
      out.improved = true;
    }
  }
  return out;
}

WallmanGauge wallman_gauge(const GateSet& gateset, std::uint64_t seed) {
  if (gateset.dim() != 2) throw DimensionError("wallman_gauge supports single-qubit gatesets only");
  const GammaResult gr = gamma_and_r_gamma(build_l_map(gateset));
  const Eigen::MatrixXd l_primed = build_l_map(gateset, true);

  Eigen::Vector4d d_gamma(1.0, gr.gamma, gr.gamma, gr.gamma);
  const Eigen::MatrixXd rhs =
      Eigen::kroneckerProduct(Eigen::MatrixXd(d_gamma.asDiagonal()), Eigen::MatrixXd::Identity(4, 4)).eval();
  const Eigen::MatrixXd a = l_primed - rhs;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = kNullSpaceRelative * std::max(sv(0), 1.0);
  int nullity = 0;
  for (Eigen::Index i = sv.size() - 1; i >= 0 && sv(i) <= threshold; --i) ++nullity;
  if (nullity == 0) {
    std::ostringstream os;
    os << "gauge equation has no null space (smallest singular value " << sv(sv.size() - 1) << ")";
    throw SpectralAssumptionError(os.str());
  }
  const Eigen::MatrixXd basis = svd.matrixV().rightCols(nullity);

  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd best_l;
  double best_sigma = -1;
  for (int trial = 0; trial < kWallmanCandidates; ++trial) {
    Eigen::VectorXd coeffs(nullity);
    if (trial == 0) {
      coeffs.setZero();
      coeffs(0) = 1.0;
    } else {
      for (Eigen::Index k = 0; k < nullity; ++k) coeffs(k) = normal(rng);
      coeffs.normalize();
    }
    const Eigen::VectorXd v = basis * coeffs;
    const Eigen::MatrixXd l = Eigen::Map<const Eigen::MatrixXd>(v.data(), 4, 4);
    if (std::abs(l(0, 0)) < 1e-8) continue;
    const Eigen::MatrixXd scaled = l / l(0, 0);
    Eigen::JacobiSVD<Eigen::MatrixXd> s(scaled);
    const double sigma_min = s.singularValues()(3) / s.singularValues()(0);
    if (sigma_min > best_sigma) {
      best_sigma = sigma_min;
      best_l = scaled;
    }
  }
  if (best_sigma <= 1e-10) throw SpectralAssumptionError("no invertible solution of the gauge equation was found");

  WallmanGauge out;
  out.null_space_dim = nullity;
  out.gamma = gr.gamma;
  out.r_gamma = gr.r_gamma;
  // Row 0 of any solution is (x0, 0, 0, 0); clear rounding so the TP-form check applies.
  best_l.row(0).tail(3).setZero();
  out.l_op = Superoperator(best_l);
  const Eigen::VectorXd vec_l = Eigen::Map<const Eigen::VectorXd>(best_l.data(), 16);
  out.residual = (l_primed * vec_l - rhs * vec_l).norm();
  if (out.residual >= kWallmanResidual) {
    std::ostringstream os;
    os << "gauge equation residual " << out.residual << " exceeds " << kWallmanResidual;
    throw SpectralAssumptionError(os.str());
  }
  const GaugeTransform to_gauge(best_l.inverse());
  const auto gates = apply_gauge(gateset.imperfect(), to_gauge);
  out.epsilon_in_gauge = agsi(gates, gateset.ideal().elements);
  out.min_choi_eigenvalue = min_choi_eigenvalue(gates);
  return out;
}

}  // namespace rblab
