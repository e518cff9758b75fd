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

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace rblab {
namespace {

constexpr double kMaxEigenvectorCondition = 1e8;
constexpr double kUnitEigenvalueTolerance = 1e-9;
constexpr double kGammaRealness = 1e-9;

void require_qubit(const GateSet& gateset) {
  if (gateset.dim() != 2) throw DimensionError("theory routines support single-qubit gatesets only");
}

// Indices 0..max(lengths) that must be reported, mapped to their positions.
std::map<int, std::vector<std::size_t>> positions_by_length(const std::vector<int>& lengths, int min_length) {
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < min_length) {
      throw std::invalid_argument("sequence length " + std::to_string(lengths[i]) + " is below " +
                                  std::to_string(min_length));
    }
    out[lengths[i]].push_back(i);
  }
  return out;
}

double sum_exhaustive(const std::vector<Eigen::Matrix4d>& gates, const CliffordGroup& group, const Eigen::Vector4d& v,
                      int net, int remaining, const Eigen::Vector4d& e) {
  if (remaining == 0) return e.dot(gates[static_cast<std::size_t>(group.inverse[static_cast<std::size_t>(net)])] * v);
  double total = 0;
  for (int s = 0; s < group.size(); ++s) {
    total += sum_exhaustive(gates, group, gates[static_cast<std::size_t>(s)] * v,
                            group.cayley[static_cast<std::size_t>(s)][static_cast<std::size_t>(net)], remaining - 1, e);
  }
  return total;
}

}  // namespace

Eigen::MatrixXd build_r_matrix(const GateSet& gateset) {
  const auto& g = gateset.ideal();
  const int n = g.size();
  const int b = gateset.dim() * gateset.dim();
  Eigen::MatrixXd r(n * b, n * b);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const int step = g.cayley[static_cast<std::size_t>(k)][static_cast<std::size_t>(g.inverse[static_cast<std::size_t>(j)])];
      r.block(k * b, j * b, b, b) = gateset.imperfect(step).ptm() / n;
    }
  }
  return r;
}

ExactDecay exact_decay(const GateSet& gateset, const Spam& spam, const std::vector<int>& lengths) {
  require_qubit(gateset);
  const auto& g = gateset.ideal();
  const int n = g.size();
  const int b = 4;
  const Eigen::Index id = g.identity_index * b;
  const auto wanted = positions_by_length(lengths, 1);
  const Eigen::MatrixXd r = build_r_matrix(gateset);
  const Eigen::Vector4d rho = spam.rho.coeffs();
  const Eigen::Vector4d e = spam.effect.coeffs();

  ExactDecay out;
  out.lengths = lengths;
  out.p.assign(lengths.size(), 0.0);
  out.spectrum.source = DecaySource::kRMatrix;

  Eigen::EigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of R failed");
  const Eigen::MatrixXcd v = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const auto& sv = svd.singularValues();
  out.eigenvector_condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  out.spectrum.eigenvalues = es.eigenvalues();

  const Eigen::MatrixXcd v_inv = v.inverse();
  const Eigen::VectorXcd left = v.middleRows(id, b).transpose() * e.cast<cplx>();
  const Eigen::VectorXcd right = v_inv.middleCols(id, b) * rho.cast<cplx>();
  out.spectrum.weights = static_cast<double>(n) * left.cwiseProduct(right);

  bool spectral_ok = out.eigenvector_condition <= kMaxEigenvectorCondition;
  if (spectral_ok) {
    for (const auto& [m, idx] : wanted) {
      cplx total = 0;
      for (Eigen::Index i = 0; i < out.spectrum.eigenvalues.size(); ++i) {
        total += out.spectrum.weights[i] * std::pow(out.spectrum.eigenvalues[i], m + 1);
      }
      if (std::abs(total.imag()) > 1e-10) {
        spectral_ok = false;
        break;
      }
      for (std::size_t k : idx) out.p[k] = total.real();
    }
  }
  if (!spectral_ok) {
    out.used_fallback = true;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n * b);
    x.segment(id, b) = rho;
    int step = 0;
    for (const auto& [m, idx] : wanted) {
      while (step < m + 1) {
        x = r * x;
        ++step;
      }
      for (std::size_t k : idx) out.p[k] = n * e.dot(x.segment(id, b));
    }
  }
  return out;
}

Eigen::MatrixXd build_l_map(const GateSet& gateset, bool primed) {
  const auto& g = gateset.ideal();
  const int b = gateset.dim() * gateset.dim();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(b * b, b * b);
  for (int i = 0; i < g.size(); ++i) {
    const Eigen::MatrixXd& c_inv = g.elements[static_cast<std::size_t>(g.inverse[static_cast<std::size_t>(i)])].ptm();
    const Eigen::MatrixXd& c_tilde = gateset.imperfect(i).ptm();
    // vec(A X B) = (B^T (x) A) vec(X).
    if (primed) {
      l += Eigen::kroneckerProduct(c_inv.transpose(), c_tilde).eval();
    } else {
      l += Eigen::kroneckerProduct(c_tilde.transpose(), c_inv).eval();
    }
  }
  return l / g.size();
}

double GammaResult::kappa_bound_at(int m, double weight) const {
  double total = 0;
  for (double mod : subdominant_moduli) total += std::pow(mod, m);
  return weight * total;
}

GammaResult gamma_and_r_gamma(const Eigen::MatrixXd& l_matrix, int d) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(l_matrix, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition of the L map failed");
  GammaResult out;
  out.eigenvalues = es.eigenvalues();
  std::vector<cplx> rest;
  int unit = 0;
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (std::abs(out.eigenvalues[i] - 1.0) < kUnitEigenvalueTolerance) {
      ++unit;
    } else {
      rest.push_back(out.eigenvalues[i]);
    }
  }
  if (unit != 1) {
    throw SpectralAssumptionError("L map has " + std::to_string(unit) +
                                  " eigenvalues within 1e-9 of 1; exactly one is required");
  }
  std::stable_sort(rest.begin(), rest.end(), [](const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); });
  const cplx gamma = rest.front();
  if (std::abs(gamma.imag()) >= kGammaRealness) {
    std::ostringstream os;
    os << "second eigenvalue of the L map is complex (" << gamma.real() << " + " << gamma.imag() << "i)";
    throw SpectralAssumptionError(os.str());
  }
  if (std::abs(gamma) > 1.0 + kUnitEigenvalueTolerance) {
    throw SpectralAssumptionError("second eigenvalue of the L map lies outside the unit disc");
  }
  out.gamma = gamma.real();
  out.r_gamma = (d - 1) * (1 - out.gamma) / d;
  for (std::size_t i = 1; i < rest.size(); ++i) out.subdominant_moduli.push_back(std::abs(rest[i]));
  return out;
}

std::vector<double> predicted_decay(const GateSet& gateset, const Spam& spam, const std::vector<int>& lengths) {
  const int b = gateset.dim() * gateset.dim();
  const auto wanted = positions_by_length(lengths, 0);
  const Eigen::MatrixXd l = build_l_map(gateset);
  const Eigen::MatrixXd lambda_bar = error_maps(gateset).average.ptm();
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(Eigen::MatrixXd::Identity(b, b).eval().data(), b * b);
  std::vector<double> out(lengths.size(), 0.0);
  int step = 0;
  for (const auto& [m, idx] : wanted) {
    while (step < m) {
      x = l * x;
      ++step;
    }
    const Eigen::Map<const Eigen::MatrixXd> e_m(x.data(), b, b);
    const double value = spam.effect.coeffs().dot(lambda_bar * e_m * spam.rho.coeffs());
    for (std::size_t k : idx) out[k] = value;
  }
  return out;
}

DeltaBound delta_diamond(const GateSet& gateset, const DiamondOptions& options) {
  const ErrorMaps maps = error_maps(gateset);
  DeltaBound out;
  double total = 0;
  for (const auto& lambda : maps.per_gate) {
    out.per_gate_distances.push_back(diamond_distance(lambda, maps.average, options));
    total += out.per_gate_distances.back();
  }
  out.delta_diamond = total / static_cast<double>(maps.per_gate.size()) / 2.0;
  return out;
}

double brute_force_pm(const GateSet& gateset, const Spam& spam, int m) {
  require_qubit(gateset);
  if (m < 1 || m > 3) throw std::invalid_argument("brute_force_pm supports 1 <= m <= 3");
  std::vector<Eigen::Matrix4d> gates;
  for (const auto& c : gateset.imperfect()) gates.emplace_back(c.ptm());
  const auto& g = gateset.ideal();
  const double total = sum_exhaustive(gates, g, spam.rho.coeffs(), g.identity_index, m, spam.effect.coeffs());
  return total / std::pow(static_cast<double>(g.size()), m);
}

}  // namespace rblab
