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

// Random channel generators and small oracles shared by the test binaries.

#pragma once

#include "rblab/clifford.hpp"
#include "rblab/superop.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace rblab::testing {

inline Eigen::Vector3d random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v / v.norm();
}

/// Random CPTP qubit channel: rotation, amplitude damping, depolarizing and a
/// second rotation, each with strength bounded by `scale` (1 = anything).
inline Superoperator random_cptp(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto r1 = rotation_channel(random_axis(rng), scale * std::numbers::pi * (2 * u(rng) - 1));
  const auto r2 = rotation_channel(random_axis(rng), scale * std::numbers::pi * (2 * u(rng) - 1));
  const auto ad = amplitude_damping_channel(scale * 0.5 * u(rng));
  const auto dep = depolarizing_channel(1.0 - scale * 0.5 * u(rng));
  return r2 * dep * ad * r1;
}

/// Random trace-preserving (not necessarily CP) qubit map.
inline Superoperator random_tp(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) += scale * g(rng);
  return Superoperator(m);
}

/// Random small gate-dependent error model with non-unital noise.
inline ErrorModel random_error_model(std::mt19937_64& rng) {
  return Custom{random_cptp(rng, 0.05), random_cptp(rng, 0.05)};
}

/// Random TP-form gauge matrix: first row e0, identity plus perturbation.
inline Eigen::Matrix4d random_gauge_matrix(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) += scale * g(rng);
  return m;
}

inline Eigen::Vector2cd random_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector2cd v(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
  return v / v.norm();
}

inline State ground_state() { return State::from_ket(Eigen::Vector2cd(1.0, 0.0)); }
inline Effect ground_effect() { return Effect::from_ket(Eigen::Vector2cd(1.0, 0.0)); }

}  // namespace rblab::testing
