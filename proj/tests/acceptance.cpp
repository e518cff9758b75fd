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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include "rblab/gauge.hpp"
#include "rblab/rb_protocol.hpp"
#include "rblab/rb_theory.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace rblab {
namespace {

// Tolerances and bands, pinned.
constexpr double kC1RLo = 3e-6, kC1RHi = 3e-5, kC1EpsLo = 5e-4, kC1EpsHi = 5e-3, kC1Ratio = 30;
constexpr double kC2SlopeR = 4.0, kC2SlopeRTol = 0.3, kC2SlopeEps = 2.0, kC2SlopeEpsTol = 0.1;
constexpr double kC3R = 1.36e-4, kC3RRel = 0.20, kC3Eps = 2.7e-3, kC3EpsRel = 0.30;
constexpr double kC4Value = 0.005, kC4Tol = 1e-6, kC4ExactTol = 1e-12;
constexpr double kC5ExactTol = 1e-12, kC5Sigmas = 4.0;
constexpr double kC7SpectrumTol = 1e-9, kC7EpsFactor = 10.0;
constexpr double kC8CRatio = 0.05;
// Error-bar floor for noise-free data, equal to the criterion 4 tolerance.
constexpr double kC8RStdFloor = 1e-6;
constexpr double kC9CpTol = 1e-10, kC9FormulaTol = 1e-12;
constexpr double kC10Residual = 1e-8, kC10EpsTol = 1e-8;
constexpr int kRandomModels = 5;
constexpr std::uint64_t kRandomModelSeed = 2017;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok) { pass = pass && ok; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

GateSet general_model() {
  return GateSet::build(GeneralPrimitive::from_rotation_vectors(Eigen::Vector3d(0.001, 0.005, 0.1),
                                                                Eigen::Vector3d(0.004, 0.003, 0.1), 1 - 5e-5));
}

struct Estimates {
  RBEstimate zeroth;
  RBEstimate first;
};

Estimates estimate_both(const GateSet& gs, const RBConfig& config) {
  const auto est = estimate_r(gs, config, {FitModel::kZeroth, FitModel::kFirst});
  return {est[0], est[1]};
}

double mean_of(const std::vector<FitResult>& fits, double FitResult::*field) {
  double total = 0;
  for (const auto& f : fits) total += f.*field;
  return fits.empty() ? 0.0 : total / static_cast<double>(fits.size());
}

struct Named {
  std::string name;
  GateSet gateset;
};

void report(int id, const std::string& title, const Outcome& o, int& failures) {
  std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.str().c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

int run() {
  int failures = 0;
  const RBConfig config;  // K = 500, lengths 1..2001 step 50, 50 repeats.
  const int max_m = config.lengths.back();

  std::mt19937_64 model_rng(kRandomModelSeed);
  std::vector<Named> random_sets;
  for (int i = 0; i < kRandomModels; ++i) {
    random_sets.push_back({"random" + std::to_string(i), GateSet::build(testing::random_error_model(model_rng))});
  }
  const GateSet coherent = GateSet::build(CoherentZ{0.1});
  const GateSet general = general_model();
  const GateSet depol = GateSet::build(GateIndependent{depolarizing_channel(0.99)});

  const Estimates est_coherent = estimate_both(coherent, config);
  const Estimates est_general = estimate_both(general, config);
  const Estimates est_depol = estimate_both(depol, config);

  // 1. CoherentZ reproduction.
  {
    Outcome o;
    const double r = est_coherent.zeroth.r_mean;
    const double eps = agsi(coherent);
    o.require(r >= kC1RLo && r <= kC1RHi);
    o.require(eps >= kC1EpsLo && eps <= kC1EpsHi);
    o.require(eps / r > kC1Ratio);
    o.detail << "r_mean=" << sci(r) << " +- " << sci(est_coherent.zeroth.r_std) << " (zeroth order; first order "
             << sci(est_coherent.first.r_mean) << " +- " << sci(est_coherent.first.r_std) << ", "
             << est_coherent.first.failures << " failed fits), eps=" << sci(eps) << ", eps/r=" << sci(eps / r);
    report(1, "CoherentZ(0.1) r and eps", o, failures);
  }

  // 2. Scaling exponents.
  {
    Outcome o;
    std::vector<double> theta{0.05, 0.075, 0.1, 0.15, 0.2}, rg, eps;
    for (double t : theta) {
      const GateSet gs = GateSet::build(CoherentZ{t});
      rg.push_back(gamma_and_r_gamma(build_l_map(gs)).r_gamma);
      eps.push_back(agsi(gs));
    }
    const double sr = loglog_slope(theta, rg);
    const double se = loglog_slope(theta, eps);
    o.require(std::abs(sr - kC2SlopeR) <= kC2SlopeRTol);
    o.require(std::abs(se - kC2SlopeEps) <= kC2SlopeEpsTol);
    o.detail << "slope(r_gamma)=" << sci(sr) << ", slope(eps)=" << sci(se);
    report(2, "scaling exponents", o, failures);
  }

  // 3. General-error model.
  {
    Outcome o;
    const double r = est_general.zeroth.r_mean;
    const double eps = agsi(general);
    o.require(std::abs(r - kC3R) <= kC3RRel * kC3R);
    o.require(std::abs(eps - kC3Eps) <= kC3EpsRel * kC3Eps);
    o.detail << "r_mean=" << sci(r) << " +- " << sci(est_general.zeroth.r_std) << " (zeroth order; first order "
             << sci(est_general.first.r_mean) << " +- " << sci(est_general.first.r_std) << "), eps=" << sci(eps);
    report(3, "general-error model r and eps", o, failures);
  }

  // 4. Gate-independent exactness.
  {
    Outcome o;
    const double rg = gamma_and_r_gamma(build_l_map(depol)).r_gamma;
    const double eps = agsi(depol);
    o.require(std::abs(est_depol.zeroth.r_mean - kC4Value) <= kC4Tol);
    o.require(std::abs(est_depol.first.r_mean - kC4Value) <= kC4Tol);
    o.require(std::abs(rg - kC4Value) <= kC4Tol);
    o.require(std::abs(eps - kC4Value) <= kC4Tol);
    const auto exact = exact_decay(depol, Spam::ideal(), config.lengths);
    double worst = 0;
    for (std::size_t i = 0; i < exact.p.size(); ++i) {
      worst = std::max(worst, std::abs(exact.p[i] - (0.5 + 0.5 * std::pow(0.99, config.lengths[i] + 1))));
    }
    o.require(worst <= kC4ExactTol);
    o.detail << "r_hat=" << sci(est_depol.zeroth.r_mean) << "/" << sci(est_depol.first.r_mean)
             << " (zeroth/first), r_gamma=" << sci(rg) << ", eps=" << sci(eps) << ", max|exact-closed|=" << sci(worst);
    report(4, "gate-independent exactness", o, failures);
  }

  // 5. Oracle equivalence.
  {
    Outcome o;
    double worst_exact = 0, worst_sigma = 0;
    RBConfig short_config;
    short_config.lengths = {1, 2};
    for (const auto& [name, gs] : random_sets) {
      const auto exact = exact_decay(gs, Spam::ideal(), {1, 2});
      const auto data = run_rb(gs, short_config);
      const auto stds = data.stds();
      for (int m = 1; m <= 2; ++m) {
        const double brute = brute_force_pm(gs, Spam::ideal(), m);
        worst_exact = std::max(worst_exact, std::abs(brute - exact.p[static_cast<std::size_t>(m - 1)]));
        const double se = stds[static_cast<std::size_t>(m - 1)] / std::sqrt(short_config.k_per_length);
        const double z = std::abs(data.means[static_cast<std::size_t>(m - 1)] - brute) / se;
        worst_sigma = std::max(worst_sigma, z);
      }
    }
    o.require(worst_exact <= kC5ExactTol);
    o.require(worst_sigma <= kC5Sigmas);
    o.detail << "max|brute-exact|=" << sci(worst_exact) << ", max deviation of run_rb means=" << sci(worst_sigma)
             << " sigma";
    report(5, "oracle equivalence", o, failures);
  }

  // 6. Bound verification.
  {
    Outcome o;
    const std::vector<int> lengths{1, 2, 51, 101, 501, 1001};
    double worst_margin = -1e300;
    for (const auto& [name, gs] : random_sets) {
      const auto exact = exact_decay(gs, Spam::ideal(), lengths);
      const auto pred = predicted_decay(gs, Spam::ideal(), lengths);
      const double delta = delta_diamond(gs).delta_diamond;
      for (std::size_t i = 0; i < lengths.size(); ++i) {
        const double gap = std::abs(exact.p[i] - pred[i]);
        o.require(gap <= delta);
        worst_margin = std::max(worst_margin, gap / delta);
      }
    }
    o.detail << "max |exact-predicted|/delta=" << sci(worst_margin);
    report(6, "delta bound", o, failures);
  }

  // 7. Gauge invariance.
  {
    Outcome o;
    RBConfig small = config;
    small.k_per_length = 100;
    small.repeats = 10;
    const auto base = estimate_r(general, small, FitModel::kZeroth);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(build_l_map(general), false).eigenvalues();
    std::mt19937_64 rng(7);
    double worst_spec = 0, worst_r = 0, best_ratio = 0;
    const double eps0 = agsi(general);
    for (int t = 0; t < 10; ++t) {
      const GaugeTransform m(testing::random_gauge_matrix(rng, 0.3));
      const GateSet gm = apply_gauge(general, m);
      Eigen::VectorXcd evm = Eigen::EigenSolver<Eigen::MatrixXd>(build_l_map(gm), false).eigenvalues();
      std::vector<bool> used(static_cast<std::size_t>(evm.size()), false);
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double best = 1e300;
        Eigen::Index arg = 0;
        for (Eigen::Index j = 0; j < evm.size(); ++j) {
          if (!used[static_cast<std::size_t>(j)] && std::abs(ev[i] - evm[j]) < best) {
            best = std::abs(ev[i] - evm[j]);
            arg = j;
          }
        }
        used[static_cast<std::size_t>(arg)] = true;
        worst_spec = std::max(worst_spec, best);
      }
      RBConfig cm = small;
      cm.spam = apply_gauge(Spam::ideal(), m);
      const auto est = estimate_r(gm, cm, FitModel::kZeroth);
      worst_r = std::max(worst_r, std::abs(est.r_mean - base.r_mean) / base.r_std);
      const double eps = agsi(gm);
      best_ratio = std::max(best_ratio, std::max(eps / eps0, eps0 / eps));
    }
    o.require(worst_spec <= kC7SpectrumTol);
    o.require(worst_r <= 1.0);
    o.require(best_ratio > kC7EpsFactor);
    o.detail << "max spectrum shift=" << sci(worst_spec) << ", max |dr|/r_std=" << sci(worst_r)
             << ", largest eps change factor=" << sci(best_ratio);
    report(7, "gauge invariance", o, failures);
  }

  // 8. Exponentiality.
  {
    Outcome o;
    std::vector<std::pair<std::string, Estimates>> sets{
        {"coherent_z", est_coherent}, {"general", est_general}, {"depolarizing", est_depol}};
    bool first = true;
    for (const auto& [name, gs] : random_sets) {
      try {
        sets.emplace_back(name, estimate_both(gs, config));
      } catch (const FitError& e) {
        o.require(false);
        o.detail << (first ? "" : "; ") << name << " fit error (" << e.what() << ")";
        first = false;
      }
    }
    for (const auto& [name, e] : sets) {
      const double c = mean_of(e.first.fits, &FitResult::c);
      const double b = mean_of(e.first.fits, &FitResult::b);
      const double ratio = b != 0 ? std::abs(c) * max_m / std::abs(b) : 0.0;
      const double dr = std::abs(e.zeroth.r_mean - e.first.r_mean);
      const bool ok_c = ratio < kC8CRatio;
      const bool ok_r = dr <= std::max(e.first.r_std, kC8RStdFloor);
      int per_fit_ok = 0;
      for (const auto& f : e.first.fits) per_fit_ok += f.b != 0 && std::abs(f.c) * max_m / std::abs(f.b) < kC8CRatio;
      o.require(ok_c && ok_r);
      o.detail << (first ? "" : "; ") << name << " |C|m/B=" << sci(ratio) << (ok_c ? "" : "(x)")
               << " |dr|=" << sci(dr) << " vs r_std " << sci(e.first.r_std) << (ok_r ? "" : "(x)") << " fits "
               << per_fit_ok << "/" << e.first.fits.size() + static_cast<std::size_t>(e.first.failures);
      first = false;
    }
    report(8, "exponentiality", o, failures);
  }

  // 9. Counterexample.
  {
    Outcome o;
    const auto res = counterexample_epsilon_min(0.99, linear_grid(0.99, 1.01, 201));
    double worst_formula = 0;
    for (const auto& row : res.rows) worst_formula = std::max(worst_formula, row.formula_deviation);
    std::size_t valid = 0;
    double best_eps = 1e300, best_alpha = 0;
    for (std::size_t i : res.successes) {
      const auto& row = res.rows[i];
      if (row.min_choi_eigenvalue >= -kC9CpTol && row.epsilon < 0.005 && row.alpha != 1.0) {
        ++valid;
        if (row.epsilon < best_eps) {
          best_eps = row.epsilon;
          best_alpha = row.alpha;
        }
      }
    }
    o.require(valid > 0);
    o.require(worst_formula <= kC9FormulaTol);
    o.detail << valid << " CP grid points with eps<r, best eps=" << sci(best_eps) << " at alpha=" << sci(best_alpha)
             << ", max formula deviation=" << sci(worst_formula);
    report(9, "counterexample", o, failures);
  }

  // 10. Wallman gauge.
  {
    Outcome o;
    std::vector<Named> sets{{"coherent_z", coherent}, {"general", general}, {"depolarizing", depol}};
    for (const auto& n : random_sets) sets.push_back(n);
    double worst_res = 0, worst_eps = 0;
    for (const auto& [name, gs] : sets) {
      const auto w = wallman_gauge(gs);
      worst_res = std::max(worst_res, w.residual);
      worst_eps = std::max(worst_eps, std::abs(w.epsilon_in_gauge - w.r_gamma));
    }
    const double rg = gamma_and_r_gamma(build_l_map(coherent)).r_gamma;
    const double gap = std::abs(est_coherent.zeroth.r_mean - rg);
    o.require(worst_res < kC10Residual);
    o.require(worst_eps <= kC10EpsTol);
    o.require(gap <= est_coherent.zeroth.r_std);
    o.detail << "max residual=" << sci(worst_res) << ", max|eps_L-r_gamma|=" << sci(worst_eps)
             << ", CoherentZ |r-r_gamma|=" << sci(gap) << " vs r_std " << sci(est_coherent.zeroth.r_std);
    report(10, "Wallman gauge", o, failures);
  }

  std::printf("acceptance: %d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace rblab

int main() {
  try {
    return rblab::run();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
