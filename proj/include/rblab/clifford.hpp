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

#include "rblab/superop.hpp"

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace rblab {

inline constexpr int kCliffordOrder = 24;

enum class Primitive { kGx = 0, kGy = 1 };

const char* to_string(Primitive p);

/// Ideal pi/2 rotations about x and y.
Superoperator ideal_primitive(Primitive p);

/// Single-qubit Clifford group modulo phases, as superoperators.
///
/// Element 0 is the identity. cayley[i][j] indexes elements[i] * elements[j]
/// (elements[j] applied first).
struct CliffordGroup {
  std::vector<Superoperator> elements;
  std::vector<std::array<int, kCliffordOrder>> cayley;
  std::vector<int> inverse;
  int identity_index = 0;
  /// Closure layer in which each element was first reached.
  std::vector<int> generation_depth;

  int size() const { return static_cast<int>(elements.size()); }
  /// Index of the element whose PTM matches g to 1e-9, or -1.
  int find(const Superoperator& g) const;
};

/// Closes {Gx, Gy} under composition. Throws std::logic_error if the closure
/// does not contain exactly 24 distinct PTMs.
CliffordGroup generate_clifford_group();

/// Shared instance; the group is immutable.
const CliffordGroup& clifford_group();

/// Primitive words per Clifford, in time order (words[i][0] is applied first).
struct CompilationTable {
  std::vector<std::vector<Primitive>> words;

  double mean_length() const;
};

/// Breadth-first shortest words over {Gx, Gy}, ties broken lexicographically
/// with Gx < Gy. The identity compiles to the empty word.
CompilationTable compile_cliffords(const CliffordGroup& group);

/// Error-free primitives.
struct Perfect {};

/// Example 1 detuning: G~ = R(z, theta) G for both primitives.
struct CoherentZ {
  double theta = 0.0;
};

/// G~_x = D_lambda R(v_x, theta_x) G_x, G~_y = D_lambda R(v_y, theta_y) G_y.
struct GeneralPrimitive {
  double theta_x = 0.0;
  Eigen::Vector3d axis_x = Eigen::Vector3d::UnitZ();
  double theta_y = 0.0;
  Eigen::Vector3d axis_y = Eigen::Vector3d::UnitZ();
  double lambda = 1.0;

  /// Builds the model from rotation vectors theta * v.
  static GeneralPrimitive from_rotation_vectors(const Eigen::Vector3d& x, const Eigen::Vector3d& y, double lambda);
};

/// C~_i = Lambda C_i applied at the Clifford level, identity included.
struct GateIndependent {
  Superoperator lambda = Superoperator::identity(2);
};

/// Arbitrary error channels applied to the left of each primitive.
struct Custom {
  Superoperator error_x = Superoperator::identity(2);
  Superoperator error_y = Superoperator::identity(2);
};

using ErrorModel = std::variant<Perfect, CoherentZ, GeneralPrimitive, GateIndependent, Custom>;

std::string error_model_name(const ErrorModel& model);

/// Imperfect primitive channels of a primitive-level model. For Perfect and
/// GateIndependent these are the ideal primitives.
std::array<Superoperator, 2> imperfect_primitives(const ErrorModel& model);

/// Ideal and imperfect Cliffords.
class GateSet {
 public:
  /// Throws std::invalid_argument if any imperfect primitive or Clifford is
  /// not CPTP.
  static GateSet build(const ErrorModel& model);
  static GateSet build(const ErrorModel& model, const CompilationTable& compilation);

  /// Replaces the imperfect Cliffords (e.g. a gauge-transformed copy). No CP
  /// check is made, so unphysical representations are allowed here.
  GateSet with_imperfect(std::vector<Superoperator> imperfect) const;

  const CliffordGroup& ideal() const { return *group_; }
  const std::vector<Superoperator>& imperfect() const { return imperfect_; }
  const Superoperator& imperfect(int i) const { return imperfect_[static_cast<std::size_t>(i)]; }
  const std::array<Superoperator, 2>& primitives() const { return primitives_; }
  const CompilationTable& compilation() const { return compilation_; }
  const ErrorModel& error_model() const { return model_; }
  int size() const { return static_cast<int>(imperfect_.size()); }
  int dim() const { return imperfect_.front().dim(); }

 private:
  GateSet(std::shared_ptr<const CliffordGroup> group, CompilationTable compilation, ErrorModel model,
          std::array<Superoperator, 2> primitives, std::vector<Superoperator> imperfect);

  std::shared_ptr<const CliffordGroup> group_;
  CompilationTable compilation_;
  ErrorModel model_;
  std::array<Superoperator, 2> primitives_;
  std::vector<Superoperator> imperfect_;
};

/// Gateset with error-free primitives.
inline GateSet perfect_gateset() { return GateSet::build(Perfect{}); }

struct ErrorMaps {
  /// Lambda_i = C~_i C_i^-1.
  std::vector<Superoperator> per_gate;
  /// Entrywise mean of the Lambda_i.
  Superoperator average;
};

ErrorMaps error_maps(const GateSet& gateset);

}  // namespace rblab
