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

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rblab {

using cplx = std::complex<double>;

/// Tolerances shared by every module.
namespace tol {
inline constexpr double kStructural = 1e-9;
inline constexpr double kOptimization = 1e-6;
inline constexpr double kEigenRealness = 1e-10;
}  // namespace tol

/// Raised when an operand has the wrong size for the operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operator basis used by every real representation in the library: the
/// n-qubit Pauli products in (I, X, Y, Z) order, normalized by 1/sqrt(d) so
/// that they are orthonormal under the Hilbert-Schmidt inner product. Index 0
/// is always the identity component.
const std::vector<Eigen::MatrixXcd>& pauli_basis(int d);

/// Density operator expanded in the normalized Pauli basis.
class State {
 public:
  explicit State(Eigen::VectorXd coeffs);

  /// Expands a (Hermitian) d x d operator.
  static State from_operator(const Eigen::MatrixXcd& rho);
  /// Projector onto |psi><psi| for a (not necessarily normalized) ket.
  static State from_ket(const Eigen::VectorXcd& psi);

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int dim() const { return dim_; }
  Eigen::MatrixXcd to_operator() const;

 private:
  Eigen::VectorXd coeffs_;
  int dim_;
};

/// POVM effect expanded in the normalized Pauli basis.
class Effect {
 public:
  explicit Effect(Eigen::VectorXd coeffs);

  static Effect from_operator(const Eigen::MatrixXcd& e);
  static Effect from_ket(const Eigen::VectorXcd& psi);

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int dim() const { return dim_; }
  Eigen::MatrixXcd to_operator() const;

 private:
  Eigen::VectorXd coeffs_;
  int dim_;
};

/// Linear map on d x d operators, stored as its real Pauli transfer matrix.
///
/// Composition follows operator order: (a * b) applies b first, then a.
/// Instances are immutable.
class Superoperator {
 public:
  explicit Superoperator(Eigen::MatrixXd ptm);

  static Superoperator identity(int d);
  static Superoperator zero(int d);

  const Eigen::MatrixXd& ptm() const { return ptm_; }
  int dim() const { return dim_; }

  /// Throws std::domain_error when the PTM is numerically singular.
  Superoperator inverse() const;

  /// Applies the map to an arbitrary (possibly non-Hermitian) operator.
  Eigen::MatrixXcd apply_operator(const Eigen::MatrixXcd& x) const;

  bool is_tp(double tolerance = tol::kStructural) const;
  bool is_unital(double tolerance = tol::kStructural) const;

  friend Superoperator operator*(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator+(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator-(const Superoperator& a, const Superoperator& b);
  friend Superoperator operator*(double s, const Superoperator& a);

 private:
  Eigen::MatrixXd ptm_;
  int dim_;
};

State operator*(const Superoperator& g, const State& rho);

/// Born rule Tr[E G(rho)].
double born(const Effect& e, const Superoperator& g, const State& rho);
double born(const Effect& e, const State& rho);

/// Composes a chain of maps; ops[0] is applied last.
Superoperator compose(const std::vector<Superoperator>& ops);

/// Arithmetic mean of PTMs.
Superoperator average(const std::vector<Superoperator>& ops);

/// PTM of the conjugation rho -> U rho U^dagger.
Superoperator unitary_channel(const Eigen::MatrixXcd& u);

/// Qubit rotation exp(-i angle (axis . sigma) / 2). Axis must be a unit vector.
Superoperator rotation_channel(const Eigen::Vector3d& axis, double angle);

/// rho -> (1 - lambda) 1/d + lambda rho, PTM diag(1, lambda, ..., lambda).
/// Throws std::invalid_argument outside the completely positive range
/// -1/(d^2 - 1) <= lambda <= 1.
Superoperator depolarizing_channel(double lambda, int d = 2);

/// Qubit amplitude damping with decay probability gamma in [0, 1].
Superoperator amplitude_damping_channel(double gamma);

/// Unnormalized Choi matrix sum_ij B_ij (x) G(B_ij) with B_ij the matrix units.
Eigen::MatrixXcd to_choi(const Superoperator& s);

/// Ascending eigenvalues of the Choi matrix. Throws std::domain_error when the
/// map is not Hermiticity-preserving (Choi matrix not Hermitian to 1e-10).
Eigen::VectorXd choi_eigenvalues(const Superoperator& s);

double min_choi_eigenvalue(const Superoperator& s);

bool is_cp(const Superoperator& s, double tolerance = tol::kStructural);
bool is_tp(const Superoperator& s, double tolerance = tol::kStructural);

/// Average gate infidelity 1 - F(G_tilde, G) for trace-preserving maps,
/// via (d^2 - Tr(G_tilde G^-1)) / (d (d + 1)).
double agi(const Superoperator& g_tilde, const Superoperator& g);

/// Statistical estimate of the average gate infidelity by averaging
/// Tr(G_tilde[psi] G[psi]) over Haar-random qubit pure states.
struct HaarEstimate {
  double value;
  double std_error;
};
HaarEstimate agi_haar_oracle(const Superoperator& g_tilde, const Superoperator& g,
                             std::int64_t n_samples, std::uint64_t seed);

/// Options for the diamond-distance maximization.
struct DiamondOptions {
  int restarts = 20;
  std::uint64_t seed = 0x5eed'd1a3'0bd5ULL;
  double tolerance = tol::kOptimization;
};

/// ||A - B||_diamond for a Hermiticity-preserving difference.
///
/// The input |psi> = (1 (x) sqrt(sigma))|Omega> is parameterized by its
/// reduced ancilla state sigma, which loses no generality because a unitary on
/// the ancilla leaves the trace norm unchanged. sigma is searched with random
/// restarts and a Nelder-Mead polish.
double diamond_distance(const Superoperator& a, const Superoperator& b,
                        const DiamondOptions& options = {});

}  // namespace rblab
