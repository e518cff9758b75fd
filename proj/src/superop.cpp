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

#include "rblab/superop.hpp"

#include "nelder_mead.hpp"
#include "rblab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <string>

namespace rblab {
namespace {

bool is_power_of_two(int d) { return d >= 2 && (d & (d - 1)) == 0; }

int dim_from_vector_length(Eigen::Index n) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (static_cast<Eigen::Index>(d) * d != n || !is_power_of_two(d)) {
    std::ostringstream os;
    os << "length " << n << " is not d^2 for a qubit-register dimension d";
    throw DimensionError(os.str());
  }
  return d;
}

std::vector<Eigen::MatrixXcd> build_pauli_basis(int d) {
  const cplx i(0.0, 1.0);
  std::vector<Eigen::Matrix2cd> single(4);
  single[0] << 1, 0, 0, 1;
  single[1] << 0, 1, 1, 0;
  single[2] << 0, -i, i, 0;
  single[3] << 1, 0, 0, -1;

  std::vector<Eigen::MatrixXcd> basis{Eigen::MatrixXcd::Ones(1, 1)};
  for (int width = 1; width < d; width *= 2) {
    std::vector<Eigen::MatrixXcd> next;
    next.reserve(basis.size() * 4);
    for (const auto& b : basis) {
      for (const auto& p : single) {
        Eigen::MatrixXcd k(b.rows() * 2, b.cols() * 2);
        for (Eigen::Index r = 0; r < b.rows(); ++r)
          for (Eigen::Index c = 0; c < b.cols(); ++c) k.block(2 * r, 2 * c, 2, 2) = b(r, c) * p;
        next.push_back(std::move(k));
      }
    }
    basis = std::move(next);
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (auto& b : basis) b *= norm;
  return basis;
}

Eigen::VectorXd expand(const Eigen::MatrixXcd& op) {
  if (op.rows() != op.cols() || !is_power_of_two(static_cast<int>(op.rows()))) {
    throw DimensionError("operator must be square with qubit-register dimension");
  }
  const auto& basis = pauli_basis(static_cast<int>(op.rows()));
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    c(static_cast<Eigen::Index>(k)) = (basis[k] * op).trace().real();
  }
  return c;
}

Eigen::MatrixXcd assemble(const Eigen::VectorXcd& coeffs, int d) {
  const auto& basis = pauli_basis(d);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

void require_same_dim(const Superoperator& a, const Superoperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("superoperators act on different dimensions");
}

}  // namespace

const std::vector<Eigen::MatrixXcd>& pauli_basis(int d) {
  if (!is_power_of_two(d)) throw DimensionError("Pauli basis needs d = 2^n");
  static std::mutex mutex;
  static std::map<int, std::vector<Eigen::MatrixXcd>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(d);
  if (it == cache.end()) it = cache.emplace(d, build_pauli_basis(d)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// State / Effect

State::State(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)), dim_(dim_from_vector_length(coeffs_.size())) {}

State State::from_operator(const Eigen::MatrixXcd& rho) { return State(expand(rho)); }

State State::from_ket(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd n = psi / psi.norm();
  return from_operator(n * n.adjoint());
}

Eigen::MatrixXcd State::to_operator() const { return assemble(coeffs_.cast<cplx>(), dim_); }

Effect::Effect(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)), dim_(dim_from_vector_length(coeffs_.size())) {}

Effect Effect::from_operator(const Eigen::MatrixXcd& e) { return Effect(expand(e)); }

Effect Effect::from_ket(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd n = psi / psi.norm();
  return from_operator(n * n.adjoint());
}

Eigen::MatrixXcd Effect::to_operator() const { return assemble(coeffs_.cast<cplx>(), dim_); }

// ---------------------------------------------------------------------------
// Superoperator

Superoperator::Superoperator(Eigen::MatrixXd ptm) : ptm_(std::move(ptm)) {
  if (ptm_.rows() != ptm_.cols()) throw DimensionError("PTM must be square");
  dim_ = dim_from_vector_length(ptm_.rows());
}

Superoperator Superoperator::identity(int d) {
  if (!is_power_of_two(d)) throw DimensionError("identity needs d = 2^n");
  return Superoperator(Eigen::MatrixXd::Identity(d * d, d * d));
}

Superoperator Superoperator::zero(int d) {
  if (!is_power_of_two(d)) throw DimensionError("zero map needs d = 2^n");
  return Superoperator(Eigen::MatrixXd::Zero(d * d, d * d));
}

Superoperator Superoperator::inverse() const {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ptm_);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) throw std::domain_error("superoperator is singular");
  return Superoperator(lu.inverse());
}

Eigen::MatrixXcd Superoperator::apply_operator(const Eigen::MatrixXcd& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionError("operator dimension mismatch");
  const auto& basis = pauli_basis(dim_);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) c(static_cast<Eigen::Index>(k)) = (basis[k] * x).trace();
  return assemble(ptm_.cast<cplx>() * c, dim_);
}

bool Superoperator::is_tp(double tolerance) const {
  Eigen::RowVectorXd e0 = Eigen::RowVectorXd::Zero(ptm_.cols());
  e0(0) = 1.0;
  return (ptm_.row(0) - e0).cwiseAbs().maxCoeff() <= tolerance;
}

bool Superoperator::is_unital(double tolerance) const {
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(ptm_.rows());
  e0(0) = 1.0;
  return (ptm_.col(0) - e0).cwiseAbs().maxCoeff() <= tolerance;
}

Superoperator operator*(const Superoperator& a, const Superoperator& b) {
  require_same_dim(a, b);
  return Superoperator(a.ptm_ * b.ptm_);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  require_same_dim(a, b);
  return Superoperator(a.ptm_ + b.ptm_);
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  require_same_dim(a, b);
  return Superoperator(a.ptm_ - b.ptm_);
}

Superoperator operator*(double s, const Superoperator& a) { return Superoperator(s * a.ptm_); }

State operator*(const Superoperator& g, const State& rho) {
  if (g.dim() != rho.dim()) throw DimensionError("state dimension does not match superoperator");
  return State(g.ptm() * rho.coeffs());
}

double born(const Effect& e, const Superoperator& g, const State& rho) {
  if (e.dim() != g.dim() || g.dim() != rho.dim()) throw DimensionError("Born rule operands have mismatched dimensions");
  return e.coeffs().dot(g.ptm() * rho.coeffs());
}

double born(const Effect& e, const State& rho) {
  if (e.dim() != rho.dim()) throw DimensionError("Born rule operands have mismatched dimensions");
  return e.coeffs().dot(rho.coeffs());
}

Superoperator compose(const std::vector<Superoperator>& ops) {
  if (ops.empty()) throw std::invalid_argument("compose needs at least one map");
  Eigen::MatrixXd acc = ops.back().ptm();
  for (auto it = ops.rbegin() + 1; it != ops.rend(); ++it) {
    if (it->dim() != ops.back().dim()) throw DimensionError("compose operands have mismatched dimensions");
    acc = it->ptm() * acc;
  }
  return Superoperator(std::move(acc));
}

Superoperator average(const std::vector<Superoperator>& ops) {
  if (ops.empty()) throw std::invalid_argument("average of an empty set");
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(ops.front().ptm().rows(), ops.front().ptm().cols());
  for (const auto& op : ops) {
    if (op.dim() != ops.front().dim()) throw DimensionError("average operands have mismatched dimensions");
    acc += op.ptm();
  }
  return Superoperator(acc / static_cast<double>(ops.size()));
}

// ---------------------------------------------------------------------------
// Channel constructors

Superoperator unitary_channel(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary must be square");
  const int d = static_cast<int>(u.rows());
  const auto& basis = pauli_basis(d);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd ptm(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::MatrixXcd out = u * basis[static_cast<std::size_t>(j)] * u.adjoint();
    for (Eigen::Index i = 0; i < n; ++i) ptm(i, j) = (basis[static_cast<std::size_t>(i)] * out).trace().real();
  }
  return Superoperator(std::move(ptm));
}

Superoperator rotation_channel(const Eigen::Vector3d& axis, double angle) {
  if (std::abs(axis.norm() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "rotation axis must be a unit vector (norm " << axis.norm() << ")";
    throw std::invalid_argument(os.str());
  }
  // Rodrigues form of the Bloch-sphere rotation.
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  Eigen::Matrix4d ptm = Eigen::Matrix4d::Identity();
  ptm.bottomRightCorner<3, 3>() = c * Eigen::Matrix3d::Identity() + s * k + (1 - c) * axis * axis.transpose();
  return Superoperator(ptm);
}

Superoperator depolarizing_channel(double lambda, int d) {
  if (!is_power_of_two(d)) throw DimensionError("depolarizing channel needs d = 2^n");
  const double d2 = static_cast<double>(d) * d;
  const double lower = -1.0 / (d2 - 1.0);
  if (lambda < lower - 1e-12 || lambda > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "depolarizing parameter " << lambda << " violates the Choi eigenvalue conditions "
       << "1 + (d^2 - 1) lambda >= 0 and 1 - lambda >= 0 (allowed range [" << lower << ", 1])";
    throw std::invalid_argument(os.str());
  }
  Eigen::MatrixXd ptm = lambda * Eigen::MatrixXd::Identity(d * d, d * d);
  ptm(0, 0) = 1.0;
  return Superoperator(std::move(ptm));
}

Superoperator amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("amplitude damping probability must lie in [0, 1]");
  Eigen::Matrix4d ptm = Eigen::Matrix4d::Zero();
  const double s = std::sqrt(1.0 - gamma);
  ptm(0, 0) = 1.0;
  ptm(1, 1) = s;
  ptm(2, 2) = s;
  ptm(3, 3) = 1.0 - gamma;
  ptm(3, 0) = gamma;
  return Superoperator(ptm);
}

// ---------------------------------------------------------------------------
// Choi matrix and complete positivity

Eigen::MatrixXcd to_choi(const Superoperator& s) {
  const int d = s.dim();
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = s.apply_operator(unit);
    }
  }
  return choi;
}

Eigen::VectorXd choi_eigenvalues(const Superoperator& s) {
  const Eigen::MatrixXcd choi = to_choi(s);
  const double asym = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol::kEigenRealness) {
    std::ostringstream os;
    os << "map is not Hermiticity-preserving (Choi anti-Hermitian part " << asym << ")";
    throw std::domain_error(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_choi_eigenvalue(const Superoperator& s) { return choi_eigenvalues(s).minCoeff(); }

bool is_cp(const Superoperator& s, double tolerance) { return min_choi_eigenvalue(s) >= -tolerance; }

bool is_tp(const Superoperator& s, double tolerance) { return s.is_tp(tolerance); }

// ---------------------------------------------------------------------------
// Fidelity metrics

double agi(const Superoperator& g_tilde, const Superoperator& g) {
  require_same_dim(g_tilde, g);
  if (!g_tilde.is_tp(1e-8) || !g.is_tp(1e-8)) {
    throw std::invalid_argument("average gate infidelity trace formula needs trace-preserving maps");
  }
  const double d = g.dim();
  const double tr = (g_tilde.ptm() * g.inverse().ptm()).trace();
  return (d * d - tr) / (d * (d + 1.0));
}

HaarEstimate agi_haar_oracle(const Superoperator& g_tilde, const Superoperator& g, std::int64_t n_samples,
                             std::uint64_t seed) {
  require_same_dim(g_tilde, g);
  if (g.dim() != 2) throw DimensionError("Haar oracle is implemented for a single qubit");
  if (n_samples < 2) throw std::invalid_argument("Haar oracle needs at least two samples");

  constexpr std::int64_t kChunks = 64;
  std::vector<double> sums(kChunks, 0.0), sumsq(kChunks, 0.0);
  const Eigen::Matrix4d a = g_tilde.ptm();
  const Eigen::Matrix4d b = g.ptm();
  const double norm = 1.0 / std::sqrt(2.0);

  parallel_for(kChunks, [&](std::size_t chunk) {
    Rng rng = make_rng(seed, chunk);
    std::normal_distribution<double> gauss;
    const auto c = static_cast<std::int64_t>(chunk);
    const std::int64_t begin = n_samples * c / kChunks;
    const std::int64_t end = n_samples * (c + 1) / kChunks;
    double s = 0.0, s2 = 0.0;
    for (std::int64_t k = begin; k < end; ++k) {
      // A normalized complex Gaussian vector is Haar distributed; its Bloch
      // vector is therefore uniform on the sphere.
      const cplx u(gauss(rng), gauss(rng));
      const cplx v(gauss(rng), gauss(rng));
      const double n2 = std::norm(u) + std::norm(v);
      const cplx uv = std::conj(u) * v;
      Eigen::Vector4d rho(1.0, 2.0 * uv.real() / n2, 2.0 * uv.imag() / n2, (std::norm(u) - std::norm(v)) / n2);
      rho *= norm;
      const double infid = 1.0 - (a * rho).dot(b * rho);
      s += infid;
      s2 += infid * infid;
    }
    sums[chunk] = s;
    sumsq[chunk] = s2;
  });

  double s = 0.0, s2 = 0.0;
  for (std::int64_t c = 0; c < kChunks; ++c) {
    s += sums[static_cast<std::size_t>(c)];
    s2 += sumsq[static_cast<std::size_t>(c)];
  }
  const double n = static_cast<double>(n_samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

// ---------------------------------------------------------------------------
// Diamond norm

namespace {

// J = sum_ab Phi(|a><b|) (x) |a><b|, Hermitian whenever Phi preserves Hermiticity.
Eigen::MatrixXcd system_first_choi(const Superoperator& phi) {
  const int d = phi.dim();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d, d);
      unit(a, b) = 1.0;
      const Eigen::MatrixXcd sys = phi.apply_operator(unit);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) j(r * d + a, c * d + b) += sys(r, c);
    }
  }
  return j;
}

// Trace norm of (1 (x) K) J (1 (x) K^dagger) where K = sqrt(sigma) and sigma is
// X X^dagger / Tr(X X^dagger) for the complex d x d matrix X packed in params.
double reduced_objective(const Eigen::MatrixXcd& j, int d, const Eigen::VectorXd& params) {
  Eigen::MatrixXcd x(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) x(r, c) = cplx(params(2 * (r * d + c)), params(2 * (r * d + c) + 1));
  Eigen::MatrixXcd sigma = x * x.adjoint();
  const double tr = sigma.trace().real();
  if (!(tr > 1e-300)) return 0.0;
  sigma /= tr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma);
  const Eigen::MatrixXcd k =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd out(d * d, d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out.block(r * d, c * d, d, d) = k * j.block(r * d, c * d, d, d) * k.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(0.5 * (out + out.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace

double diamond_distance(const Superoperator& a, const Superoperator& b, const DiamondOptions& options) {
  require_same_dim(a, b);
  if (options.restarts < 1) throw std::invalid_argument("diamond distance needs at least one restart");
  const int d = a.dim();
  const Superoperator diff = a - b;
  const Eigen::MatrixXcd j = system_first_choi(diff);
  if ((j - j.adjoint()).cwiseAbs().maxCoeff() > tol::kEigenRealness) {
    throw std::domain_error("diamond distance needs a Hermiticity-preserving difference");
  }
  if (j.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  const detail::Objective negated = [&](const Eigen::VectorXd& p) { return -reduced_objective(j, d, p); };
  const Eigen::Index n_params = 2 * d * d;

  // Restart 0 starts from the maximally entangled input.
  std::vector<double> best(static_cast<std::size_t>(options.restarts), 0.0);
  parallel_for(static_cast<std::size_t>(options.restarts), [&](std::size_t task) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n_params);
    if (task == 0) {
      for (int r = 0; r < d; ++r) x0(2 * (r * d + r)) = 1.0;
    } else {
      Rng rng = make_rng(options.seed, task);
      std::normal_distribution<double> gauss;
      for (Eigen::Index i = 0; i < n_params; ++i) x0(i) = gauss(rng);
    }
    double value = -negated(x0);
    // Polish twice; a fresh simplex escapes premature collapse.
    for (int pass = 0; pass < 2; ++pass) {
      const auto res = detail::nelder_mead(negated, x0, pass == 0 ? 0.3 : 0.05, 4000, options.tolerance * 1e-2);
      if (-res.value >= value) {
        value = -res.value;
        x0 = res.x;
      }
    }
    best[task] = value;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace rblab
