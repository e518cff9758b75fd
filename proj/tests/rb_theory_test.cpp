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

#include "rblab/rb_theory.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rblab {
namespace {

std::vector<GateSet> random_gatesets(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<GateSet> out;
  for (int i = 0; i < count; ++i) out.push_back(GateSet::build(testing::random_error_model(rng)));
  return out;
}

std::vector<double> sorted_moduli(const Eigen::VectorXcd& v) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(std::abs(v[i]));
  std::sort(out.begin(), out.end());
  return out;
}

// Matrix-level exhaustive oracle: avg over s of C~_inv(s) C~_s.
Eigen::Matrix4d exhaustive_m1_map(const GateSet& gs) {
  const auto& g = gs.ideal();
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (int s = 0; s < 24; ++s) acc += gs.imperfect(g.inverse[s]).ptm() * gs.imperfect(s).ptm();
  return acc / 24;
}

TEST(RMatrix, PerfectGatesetSquaredTopBlockIsIdentity) {
  const auto gs = perfect_gateset();
  const Eigen::MatrixXd r = build_r_matrix(gs);
  ASSERT_EQ(r.rows(), 96);
  const Eigen::Index id = gs.ideal().identity_index * 4;
  const Eigen::MatrixXd r2 = r * r;
  EXPECT_LT((24 * r2.block(id, id, 4, 4) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(RMatrix, SpectralRadiusAtMostOne) {
  for (const auto& gs : random_gatesets(5, 5)) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(build_r_matrix(gs), false);
    EXPECT_LE(es.eigenvalues().cwiseAbs().maxCoeff(), 1 + 1e-9);
  }
}

TEST(RMatrix, SingleStepMatchesExhaustiveMap) {
  for (const auto& gs : random_gatesets(6, 3)) {
    const Eigen::MatrixXd r = build_r_matrix(gs);
    const Eigen::Index id = gs.ideal().identity_index * 4;
    const Eigen::MatrixXd r2 = r * r;
    EXPECT_LT((24 * r2.block(id, id, 4, 4) - exhaustive_m1_map(gs)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RMatrix, BlocksFollowCayleyTable) {
  const auto gs = GateSet::build(CoherentZ{0.2});
  const auto& g = gs.ideal();
  const Eigen::MatrixXd r = build_r_matrix(gs);
  for (int k = 0; k < 24; ++k) {
    for (int j = 0; j < 24; ++j) {
      // The step s moving j to k satisfies C_s C_j = C_k.
      int s = -1;
      for (int c = 0; c < 24; ++c) {
        if (g.cayley[c][j] == k) s = c;
      }
      ASSERT_GE(s, 0);
      EXPECT_LT((24 * r.block(4 * k, 4 * j, 4, 4) - gs.imperfect(s).ptm()).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(ExactDecay, PerfectGatesetIsOne) {
  const auto out = exact_decay(perfect_gateset(), Spam::ideal(), {1, 2, 10, 1000});
  for (double p : out.p) EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(ExactDecay, GateIndependentClosedForm) {
  const double lambda = 0.99;
  const auto gs = GateSet::build(GateIndependent{depolarizing_channel(lambda)});
  const std::vector<int> lengths{1, 2, 3, 51, 101, 501, 2001};
  const auto out = exact_decay(gs, Spam::ideal(), lengths);
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    EXPECT_NEAR(out.p[i], 0.5 + 0.5 * std::pow(lambda, lengths[i] + 1), 1e-12);
  }
}

TEST(ExactDecay, MatchesBruteForceAtShortLengths) {
  auto sets = random_gatesets(8, 3);
  sets.push_back(GateSet::build(CoherentZ{0.1}));
  for (const auto& gs : sets) {
    const auto out = exact_decay(gs, Spam::ideal(), {1, 2});
    EXPECT_NEAR(out.p[0], brute_force_pm(gs, Spam::ideal(), 1), 1e-12);
    EXPECT_NEAR(out.p[1], brute_force_pm(gs, Spam::ideal(), 2), 1e-12);
  }
}

TEST(ExactDecay, SpectralFormAgreesWithIteration) {
  for (const auto& gs : random_gatesets(9, 2)) {
    const std::vector<int> lengths{1, 7, 60, 400};
    const auto out = exact_decay(gs, Spam::ideal(), lengths);
    EXPECT_FALSE(out.used_fallback);
    const Eigen::MatrixXd r = build_r_matrix(gs);
    const Eigen::Index id = gs.ideal().identity_index * 4;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      Eigen::MatrixXd power = Eigen::MatrixXd::Identity(96, 96);
      for (int k = 0; k <= lengths[i]; ++k) power = r * power;
      const double direct =
          24 * Spam::ideal().effect.coeffs().dot(power.block(id, id, 4, 4) * Spam::ideal().rho.coeffs());
      EXPECT_NEAR(out.p[i], direct, 1e-11);
    }
  }
}

TEST(ExactDecay, DecayIsSingleExponentialForSmallErrors) {
  std::vector<GateSet> sets = random_gatesets(10, 3);
  sets.push_back(GateSet::build(CoherentZ{0.1}));
  std::vector<int> lengths;
  for (int m = 50; m <= 2000; m += 50) lengths.push_back(m);
  for (const auto& gs : sets) {
    const auto out = exact_decay(gs, Spam::ideal(), lengths);
    const auto fit = fit_decay(std::vector<double>(lengths.begin(), lengths.end()), out.p, FitModel::kZeroth);
    EXPECT_LT(fit.residual_norm, 1e-6);
  }
}

TEST(BruteForce, PerfectAndGateIndependent) {
  EXPECT_NEAR(brute_force_pm(perfect_gateset(), Spam::ideal(), 2), 1.0, 1e-13);
  const double lambda = 0.95;
  const auto gs = GateSet::build(GateIndependent{depolarizing_channel(lambda)});
  EXPECT_NEAR(brute_force_pm(gs, Spam::ideal(), 1), 0.5 + 0.5 * lambda * lambda, 1e-14);
  EXPECT_THROW(brute_force_pm(gs, Spam::ideal(), 4), std::invalid_argument);
  EXPECT_THROW(brute_force_pm(gs, Spam::ideal(), 0), std::invalid_argument);
}

TEST(LMap, ActsAsDefinedOnRandomSuperoperators) {
  const auto gs = random_gatesets(12, 1).front();
  const auto& g = gs.ideal();
  const Eigen::MatrixXd l = build_l_map(gs);
  const Eigen::MatrixXd lp = build_l_map(gs, true);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 5; ++t) {
    Eigen::Matrix4d e;
    for (int i = 0; i < 16; ++i) e.data()[i] = n(rng);
    Eigen::Matrix4d direct = Eigen::Matrix4d::Zero(), direct_p = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 24; ++i) {
      const Eigen::Matrix4d c_inv = g.elements[i].ptm().inverse();
      direct += c_inv * e * gs.imperfect(i).ptm();
      direct_p += gs.imperfect(i).ptm() * e * c_inv;
    }
    const Eigen::VectorXd vec_e = Eigen::Map<const Eigen::VectorXd>(e.data(), 16);
    const Eigen::VectorXd out = l * vec_e, out_p = lp * vec_e;
    EXPECT_LT((Eigen::Map<const Eigen::Matrix4d>(out.data()) - direct / 24).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((Eigen::Map<const Eigen::Matrix4d>(out_p.data()) - direct_p / 24).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(LMap, PerfectGatesetIsTwirlProjector) {
  const Eigen::MatrixXd l = build_l_map(perfect_gateset());
  EXPECT_LT((l * l - l).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(l.trace(), 2.0, 1e-14);
  Eigen::EigenSolver<Eigen::MatrixXd> es(l, false);
  const auto mods = sorted_moduli(es.eigenvalues());
  for (int i = 0; i < 14; ++i) EXPECT_NEAR(mods[i], 0.0, 1e-12);
  EXPECT_NEAR(mods[14], 1.0, 1e-12);
  EXPECT_NEAR(mods[15], 1.0, 1e-12);
}

TEST(LMap, GateIndependentHasThreeDistinctEigenvalues) {
  const auto gs = GateSet::build(GateIndependent{depolarizing_channel(0.9) * amplitude_damping_channel(0.05)});
  Eigen::EigenSolver<Eigen::MatrixXd> es(build_l_map(gs), false);
  const auto mods = sorted_moduli(es.eigenvalues());
  for (int i = 0; i < 14; ++i) EXPECT_NEAR(mods[i], 0.0, 1e-12);
  EXPECT_GT(mods[14], 0.5);
  EXPECT_LT(mods[14], 1 - 1e-3);
  EXPECT_NEAR(mods[15], 1.0, 1e-12);
}

TEST(LMap, PrimedVariantHasSameSpectrum) {
  auto sets = random_gatesets(13, 3);
  sets.push_back(GateSet::build(CoherentZ{0.1}));
  for (const auto& gs : sets) {
    Eigen::EigenSolver<Eigen::MatrixXd> a(build_l_map(gs), false), b(build_l_map(gs, true), false);
    const auto ea = a.eigenvalues(), eb = b.eigenvalues();
    for (Eigen::Index i = 0; i < ea.size(); ++i) {
      double best = INFINITY;
      for (Eigen::Index j = 0; j < eb.size(); ++j) best = std::min(best, std::abs(ea[i] - eb[j]));
      EXPECT_LT(best, 1e-10);
    }
  }
}

TEST(Gamma, GateIndependentDepolarizing) {
  const auto gs = GateSet::build(GateIndependent{depolarizing_channel(0.99)});
  const auto g = gamma_and_r_gamma(build_l_map(gs));
  EXPECT_NEAR(g.gamma, 0.99, 1e-12);
  EXPECT_NEAR(g.r_gamma, 0.005, 1e-12);
  EXPECT_EQ(g.subdominant_moduli.size(), 14u);
  EXPECT_LT(g.kappa_bound_at(1), 1e-12);
}

TEST(Gamma, PerfectGatesetHasDegenerateUnitEigenvalue) {
  EXPECT_THROW(gamma_and_r_gamma(build_l_map(perfect_gateset())), SpectralAssumptionError);
}

TEST(Gamma, CoherentZScalesAsFourthPower) {
  std::vector<double> lx, ly;
  for (double theta : {0.05, 0.075, 0.1, 0.15, 0.2}) {
    const auto g = gamma_and_r_gamma(build_l_map(GateSet::build(CoherentZ{theta})));
    EXPECT_LE(std::abs(g.gamma), 1 + 1e-9);
    EXPECT_NEAR(g.r_gamma, 0.5 * (1 - g.gamma), 1e-15);
    lx.push_back(std::log(theta));
    ly.push_back(std::log(g.r_gamma));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / 5, my = std::accumulate(ly.begin(), ly.end(), 0.0) / 5;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  EXPECT_NEAR(sxy / sxx, 4.0, 0.3);
}

TEST(Predicted, PerfectGatesetIsOne) {
  for (double p : predicted_decay(perfect_gateset(), Spam::ideal(), {0, 1, 5, 100})) EXPECT_NEAR(p, 1.0, 1e-13);
}

TEST(Predicted, GateIndependentEqualsExact) {
  const auto gs = GateSet::build(GateIndependent{depolarizing_channel(0.97) * amplitude_damping_channel(0.02)});
  const std::vector<int> lengths{1, 2, 51, 101, 501};
  const auto exact = exact_decay(gs, Spam::ideal(), lengths);
  const auto pred = predicted_decay(gs, Spam::ideal(), lengths);
  for (std::size_t i = 0; i < lengths.size(); ++i) EXPECT_NEAR(pred[i], exact.p[i], 1e-12);
}

TEST(Predicted, CoherentZWithinDiamondBound) {
  const auto gs = GateSet::build(CoherentZ{0.1});
  const auto bound = delta_diamond(gs);
  EXPECT_GT(bound.delta_diamond, 0.0);
  const auto lengths = default_lengths();
  const auto exact = exact_decay(gs, Spam::ideal(), lengths);
  const auto pred = predicted_decay(gs, Spam::ideal(), lengths);
  for (std::size_t i = 0; i < lengths.size(); ++i) EXPECT_LE(std::abs(pred[i] - exact.p[i]), bound.delta_diamond);
  for (int m : {1, 2}) {
    EXPECT_LE(std::abs(predicted_decay(gs, Spam::ideal(), {m})[0] - brute_force_pm(gs, Spam::ideal(), m)),
              bound.delta_diamond);
  }
}

TEST(Delta, VanishesWithoutGateDependence) {
  EXPECT_NEAR(delta_diamond(perfect_gateset()).delta_diamond, 0.0, 1e-12);
  const auto gi = delta_diamond(GateSet::build(GateIndependent{depolarizing_channel(0.9)}));
  EXPECT_NEAR(gi.delta_diamond, 0.0, 1e-12);
  EXPECT_EQ(gi.per_gate_distances.size(), 24u);
}

TEST(Delta, IsHalfTheMeanDistance) {
  const auto b = delta_diamond(GateSet::build(CoherentZ{0.1}));
  double total = 0;
  for (double x : b.per_gate_distances) total += x;
  EXPECT_NEAR(b.delta_diamond, total / 48, 1e-15);
}

}  // namespace
}  // namespace rblab
