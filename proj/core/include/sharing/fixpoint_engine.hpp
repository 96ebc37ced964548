// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sharing/enhancements.hpp"
#include "sharing/program.hpp"

namespace sharing {

enum class Domain { Sh, Psd, Sfl, Sfl2, Sgfl2, Pos, PosXSfl2, PosRedSfl };
enum class AnalysisMode { GoalIndependent, GoalDependent };

std::string_view to_string(Domain d);
std::optional<Domain> parse_domain(std::string_view text);
std::string_view to_string(AnalysisMode m);
std::optional<AnalysisMode> parse_mode(std::string_view text);

/// What a domain keeps track of.
struct DomainTraits {
  bool sharing = false;
  bool modes = false;
  bool ground_or_free = false;
  bool groundness = false;
  /// The starred branches use self-bin-union.
  bool self_bin = false;
  /// Groundness is propagated into the sharing component after every step.
  bool combine = false;
  /// Groups are filtered through the groundness models after every step.
  bool reduce = false;
};

DomainTraits traits(Domain d);

struct AnalysisConfig {
  Domain domain = Domain::Sfl;
  AnalysisMode mode = AnalysisMode::GoalIndependent;
  OrderingStrategy order = OrderingStrategy::Textual;
  bool klin = false;
  bool free_split = false;
  bool compound_reduce = false;
  bool occurs_check = false;
  /// Keep sharing sets pair-cover reduced after every operation.
  bool rho_reduced = false;
  double timeout_seconds = 600;
  std::size_t component_bound = kDefaultComponentBound;
};

/// The first incompatibility found in `config`, if any.
std::optional<std::string> validate(const AnalysisConfig& config);
/// Non-fatal remarks about `config`, e.g. enhancements that will be skipped.
std::vector<std::string> config_warnings(const AnalysisConfig& config);

/// An abstract description over the variables 0..n-1 of one context, holding
/// every component any domain uses. Components a domain does not track are
/// left empty (sharing, modes) or true (groundness).
struct Description {
  bool bottom = false;
  VarSet vi;
  SharingSet sh;
  VarSet f;
  VarSet gf;
  VarSet l;
  PosFormula pos;
  /// Variables definitely bound to compound terms.
  VarSet compound;

  bool operator==(const Description&) const = default;
};

/// The description of distinct fresh variables.
Description top_element(Domain domain, VarSet vi);
Description bottom_element(VarSet vi);
/// The description of arbitrary aliasing and instantiation of `vi`.
Description unknown_element(Domain domain, VarSet vi);
Description lub(Domain domain, const Description& a, const Description& b);

/// The per-step transfer functions of one configuration.
class DomainOps {
 public:
  explicit DomainOps(AnalysisConfig config);

  const AnalysisConfig& config() const { return config_; }
  Description bind(const Description& d, const Binding& b) const;
  /// Orders the bindings per the configured strategy, then applies them.
  Description bind_all(const Description& d, const std::vector<Binding>& bs) const;
  /// Restricts to the variables of `v`, renumbering them to 0..|v|-1 when `v`
  /// is a prefix.
  Description project(const Description& d, VarSet v) const;
  /// Forgets everything about `v`.
  Description forget(const Description& d, VarSet v) const;
  /// Warnings raised while computing (e.g. decomposition fallbacks).
  std::vector<std::string> take_warnings() const;

 private:
  Description normalize(Description d) const;

  AnalysisConfig config_;
  DomainTraits traits_;
  mutable std::vector<std::string> warnings_;
};

/// How many starred relevant components the amgu of b would compute on d.
int star_count(const Description& d, const Binding& b);

/// One element of a weak topological ordering: a vertex, or a component with
/// a head vertex followed by nested elements.
struct WtoElement {
  std::size_t vertex = 0;
  bool component = false;
  std::vector<WtoElement> body;
};

using Wto = std::vector<WtoElement>;

/// Bourdoncle's hierarchical ordering of the graph given by `successors`,
/// starting from every vertex in index order.
Wto weak_topological_order(const std::vector<std::vector<std::size_t>>& successors);

struct ProgramWto {
  std::vector<PredicateKey> vertices;
  Wto order;
};

/// The ordering of the defined predicates of `program`, callees first.
ProgramWto weak_topological_order(const Program& program);
std::string to_string(const ProgramWto& wto);

enum class AnalysisStatus { Completed, TimedOut };

struct PredicateResult {
  PredicateKey key;
  /// X1..Xn.
  VarNames names;
  Description success;
  /// Goal-dependent mode only.
  std::optional<Description> call;
};

struct AnalysisResult {
  AnalysisConfig config;
  AnalysisStatus status = AnalysisStatus::Completed;
  std::map<PredicateKey, PredicateResult> predicates;
  std::vector<std::string> warnings;
  std::size_t iterations = 0;
};

/// Computes call and success patterns for every defined predicate.
/// Throws std::invalid_argument when `validate(config)` fails.
AnalysisResult analyze(const Program& program, const AnalysisConfig& config);

/// Formats a description in the domain's textual form, e.g.
/// `<{X1 X2}, {X1, X2}, {X1, X2}>` for SFL.
std::string format(Domain domain, const Description& d, const VarNames& names);

}  // namespace sharing
