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

#include "rblab/clifford.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace rblab {
namespace {

constexpr double kDedupTolerance = 1e-9;

std::shared_ptr<const CliffordGroup> shared_group() {
  static const std::shared_ptr<const CliffordGroup> group = std::make_shared<const CliffordGroup>(generate_clifford_group());
  return group;
}

void require_cptp(const Superoperator& s, const std::string& what) {
  if (!s.is_tp(tol::kStructural)) throw std::invalid_argument(what + " is not trace-preserving");
  const double min_eig = min_choi_eigenvalue(s);
  if (min_eig < -tol::kStructural) {
    std::ostringstream os;
    os << what << " is not completely positive (min Choi eigenvalue " << min_eig << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

const char* to_string(Primitive p) { return p == Primitive::kGx ? "Gx" : "Gy"; }

Superoperator ideal_primitive(Primitive p) {
  // Exact quarter turns: Gx maps (y, z) -> (z, -y), Gy maps (z, x) -> (x, -z).
  Eigen::Matrix4d ptm = Eigen::Matrix4d::Zero();
  ptm(0, 0) = 1;
  if (p == Primitive::kGx) {
    ptm(1, 1) = 1;
    ptm(3, 2) = 1;
    ptm(2, 3) = -1;
  } else {
    ptm(2, 2) = 1;
    ptm(1, 3) = 1;
    ptm(3, 1) = -1;
  }
  return Superoperator(ptm);
}

int CliffordGroup::find(const Superoperator& g) const {
  for (int i = 0; i < size(); ++i) {
    if ((elements[static_cast<std::size_t>(i)].ptm() - g.ptm()).cwiseAbs().maxCoeff() <= kDedupTolerance) return i;
  }
  return -1;
}

CliffordGroup generate_clifford_group() {
  CliffordGroup group;
  const std::array<Superoperator, 2> gens{ideal_primitive(Primitive::kGx), ideal_primitive(Primitive::kGy)};
  group.elements.push_back(Superoperator::identity(2));
  group.generation_depth.push_back(0);

  // Breadth-first closure: each layer appends a generator to the previous one.
  std::size_t layer_begin = 0;
  int depth = 0;
  while (layer_begin < group.elements.size()) {
    const std::size_t layer_end = group.elements.size();
    ++depth;
    for (std::size_t k = layer_begin; k < layer_end; ++k) {
      for (const auto& g : gens) {
        Superoperator next = g * group.elements[k];
        if (group.find(next) < 0) {
          group.elements.push_back(std::move(next));
          group.generation_depth.push_back(depth);
        }
      }
    }
    layer_begin = layer_end;
    if (group.elements.size() > static_cast<std::size_t>(kCliffordOrder)) break;
  }
  if (group.size() != kCliffordOrder) {
    std::ostringstream os;
    os << "Clifford closure produced " << group.size() << " elements, expected " << kCliffordOrder;
    throw std::logic_error(os.str());
  }

  group.cayley.resize(kCliffordOrder);
  group.inverse.assign(kCliffordOrder, -1);
  for (int i = 0; i < kCliffordOrder; ++i) {
    for (int j = 0; j < kCliffordOrder; ++j) {
      const int k = group.find(group.elements[static_cast<std::size_t>(i)] * group.elements[static_cast<std::size_t>(j)]);
      if (k < 0) throw std::logic_error("Clifford closure is not closed under composition");
      group.cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = k;
      if (k == group.identity_index) group.inverse[static_cast<std::size_t>(i)] = j;
    }
  }
  for (int inv : group.inverse) {
    if (inv < 0) throw std::logic_error("Clifford element without inverse");
  }
  return group;
}

const CliffordGroup& clifford_group() { return *shared_group(); }

double CompilationTable::mean_length() const {
  double total = 0.0;
  for (const auto& w : words) total += static_cast<double>(w.size());
  return words.empty() ? 0.0 : total / static_cast<double>(words.size());
}

CompilationTable compile_cliffords(const CliffordGroup& group) {
  const int gx = group.find(ideal_primitive(Primitive::kGx));
  const int gy = group.find(ideal_primitive(Primitive::kGy));
  if (gx < 0 || gy < 0) throw std::logic_error("primitive gates are not group elements");

  CompilationTable table;
  table.words.resize(static_cast<std::size_t>(group.size()));
  std::vector<bool> seen(static_cast<std::size_t>(group.size()), false);
  seen[static_cast<std::size_t>(group.identity_index)] = true;
  // Parents are visited in discovery order, which is lexicographic order of
  // their words, so the first word reaching an element is the smallest.
  std::deque<int> queue{group.identity_index};
  while (!queue.empty()) {
    const int parent = queue.front();
    queue.pop_front();
    for (const auto& [prim, gen] : {std::pair{Primitive::kGx, gx}, std::pair{Primitive::kGy, gy}}) {
      const int child = group.cayley[static_cast<std::size_t>(gen)][static_cast<std::size_t>(parent)];
      if (seen[static_cast<std::size_t>(child)]) continue;
      seen[static_cast<std::size_t>(child)] = true;
      auto word = table.words[static_cast<std::size_t>(parent)];
      word.push_back(prim);
      table.words[static_cast<std::size_t>(child)] = std::move(word);
      queue.push_back(child);
    }
  }
  for (int i = 0; i < group.size(); ++i) {
    if (!seen[static_cast<std::size_t>(i)]) throw std::logic_error("Clifford unreachable from primitives");
    Superoperator acc = Superoperator::identity(2);
    for (Primitive p : table.words[static_cast<std::size_t>(i)]) acc = ideal_primitive(p) * acc;
    if ((acc.ptm() - group.elements[static_cast<std::size_t>(i)].ptm()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::logic_error("compiled word does not reproduce its Clifford");
    }
  }
  return table;
}

GeneralPrimitive GeneralPrimitive::from_rotation_vectors(const Eigen::Vector3d& x, const Eigen::Vector3d& y,
                                                         double lambda) {
  GeneralPrimitive m;
  m.theta_x = x.norm();
  m.axis_x = m.theta_x > 0 ? Eigen::Vector3d(x / m.theta_x) : Eigen::Vector3d::UnitZ();
  m.theta_y = y.norm();
  m.axis_y = m.theta_y > 0 ? Eigen::Vector3d(y / m.theta_y) : Eigen::Vector3d::UnitZ();
  m.lambda = lambda;
  return m;
}

std::string error_model_name(const ErrorModel& model) {
  struct Visitor {
    std::string operator()(const Perfect&) const { return "perfect"; }
    std::string operator()(const CoherentZ&) const { return "coherent_z"; }
    std::string operator()(const GeneralPrimitive&) const { return "general_primitive"; }
    std::string operator()(const GateIndependent&) const { return "gate_independent"; }
    std::string operator()(const Custom&) const { return "custom"; }
  };
  return std::visit(Visitor{}, model);
}

std::array<Superoperator, 2> imperfect_primitives(const ErrorModel& model) {
  const Superoperator gx = ideal_primitive(Primitive::kGx);
  const Superoperator gy = ideal_primitive(Primitive::kGy);
  struct Visitor {
    const Superoperator& gx;
    const Superoperator& gy;
    std::array<Superoperator, 2> operator()(const Perfect&) const { return {gx, gy}; }
    std::array<Superoperator, 2> operator()(const GateIndependent&) const { return {gx, gy}; }
    std::array<Superoperator, 2> operator()(const CoherentZ& m) const {
      const Superoperator rz = rotation_channel(Eigen::Vector3d::UnitZ(), m.theta);
      return {rz * gx, rz * gy};
    }
    std::array<Superoperator, 2> operator()(const GeneralPrimitive& m) const {
      const Superoperator dep = depolarizing_channel(m.lambda, 2);
      return {dep * rotation_channel(m.axis_x, m.theta_x) * gx, dep * rotation_channel(m.axis_y, m.theta_y) * gy};
    }
    std::array<Superoperator, 2> operator()(const Custom& m) const { return {m.error_x * gx, m.error_y * gy}; }
  };
  return std::visit(Visitor{gx, gy}, model);
}

GateSet::GateSet(std::shared_ptr<const CliffordGroup> group, CompilationTable compilation, ErrorModel model,
                 std::array<Superoperator, 2> primitives, std::vector<Superoperator> imperfect)
    : group_(std::move(group)),
      compilation_(std::move(compilation)),
      model_(std::move(model)),
      primitives_(std::move(primitives)),
      imperfect_(std::move(imperfect)) {}

GateSet GateSet::build(const ErrorModel& model) { return build(model, compile_cliffords(*shared_group())); }

GateSet GateSet::build(const ErrorModel& model, const CompilationTable& compilation) {
  auto group = shared_group();
  if (compilation.words.size() != static_cast<std::size_t>(group->size())) {
    throw std::invalid_argument("compilation table must have one word per Clifford");
  }
  for (int i = 0; i < group->size(); ++i) {
    Superoperator acc = Superoperator::identity(2);
    for (Primitive p : compilation.words[static_cast<std::size_t>(i)]) acc = ideal_primitive(p) * acc;
    if ((acc.ptm() - group->elements[static_cast<std::size_t>(i)].ptm()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("compilation word does not reproduce its Clifford");
    }
  }

  std::array<Superoperator, 2> prims = imperfect_primitives(model);
  require_cptp(prims[0], "imperfect Gx");
  require_cptp(prims[1], "imperfect Gy");

  std::vector<Superoperator> imperfect;
  imperfect.reserve(static_cast<std::size_t>(group->size()));
  if (const auto* gi = std::get_if<GateIndependent>(&model)) {
    require_cptp(gi->lambda, "gate-independent error map");
    for (const auto& c : group->elements) imperfect.push_back(gi->lambda * c);
  } else {
    for (const auto& word : compilation.words) {
      Superoperator acc = Superoperator::identity(2);
      for (Primitive p : word) acc = prims[static_cast<std::size_t>(p)] * acc;
      imperfect.push_back(std::move(acc));
    }
  }
  return GateSet(std::move(group), compilation, model, std::move(prims), std::move(imperfect));
}

GateSet GateSet::with_imperfect(std::vector<Superoperator> imperfect) const {
  if (imperfect.size() != imperfect_.size()) throw std::invalid_argument("replacement gateset has the wrong size");
  for (const auto& g : imperfect) {
    if (g.dim() != dim()) throw DimensionError("replacement gate has the wrong dimension");
  }
  return GateSet(group_, compilation_, model_, primitives_, std::move(imperfect));
}

ErrorMaps error_maps(const GateSet& gateset) {
  ErrorMaps out{{}, Superoperator::zero(gateset.dim())};
  out.per_gate.reserve(static_cast<std::size_t>(gateset.size()));
  for (int i = 0; i < gateset.size(); ++i) {
    out.per_gate.push_back(gateset.imperfect(i) * gateset.ideal().elements[static_cast<std::size_t>(i)].inverse());
  }
  out.average = average(out.per_gate);
  return out;
}

}  // namespace rblab
