// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "sharing/mode_domains.hpp"

namespace sharing {

/// A finite-tree substitution on the variables of interest 0..n-1.
///
/// Images are terms over concrete variables, whose ids are at least n, so the
/// substitution is idempotent by construction.
struct Substitution {
  std::vector<Term> image;

  /// The identity on n variables: variable i maps to concrete variable n + i.
  static Substitution identity(std::size_t n);
  std::size_t size() const { return image.size(); }
  /// t with every variable of interest replaced by its image.
  Term apply(const Term& t) const;

  bool operator==(const Substitution&) const = default;
};

enum class UnifyStatus { Success, Fail, OutOfScope };

struct UnifyResult {
  UnifyStatus status = UnifyStatus::Fail;
  Substitution sigma;
};

/// Robinson unification of x sigma with t sigma, composed onto sigma.
///
/// With `occurs_check` set a cyclic solution is a failure; without it the
/// result would be a rational tree, which is reported as OutOfScope.
UnifyResult concrete_unify(const Substitution& sigma, const Binding& b, bool occurs_check);

/// occ(sigma, v) = { x | v occurs in x sigma }.
VarSet occurrence_group(const Substitution& sigma, VarId concrete_var);

/// The SFL description of a set of substitutions over n variables.
SflElement alpha(const std::vector<Substitution>& sigmas, std::size_t n);
/// As `alpha`, with gf = variables bound to ground or variable terms throughout.
SgflElement alpha_sgfl(const std::vector<Substitution>& sigmas, std::size_t n);
/// Variables bound to ground terms by sigma.
VarSet ground_part(const Substitution& sigma);

/// The concrete successors of `sigmas` under b, with occurs-check.
std::vector<Substitution> concrete_successors(const std::vector<Substitution>& sigmas, const Binding& b);

/// alpha of the concrete successors is below `amgu` applied to alpha(sigmas).
bool soundness_check(const std::vector<Substitution>& sigmas, const Binding& b, std::size_t n,
                     const std::function<SflElement(const SflElement&, const Binding&)>& amgu);
bool soundness_check(const std::vector<Substitution>& sigmas, const Binding& b, std::size_t n,
                     const std::function<SgflElement(const SgflElement&, const Binding&)>& amgu);

/// Random test inputs over small signatures: constants a, b and functors f/1,
/// g/2. Concrete variables come from a pool of `pool` variables.
struct RandomTerms {
  std::size_t n = 3;
  std::size_t depth = 2;
  std::size_t pool = 3;

  Term concrete_term(std::mt19937& rng, std::size_t max_depth) const;
  /// A term over the variables of interest, for the right-hand side of a binding.
  Term interest_term(std::mt19937& rng, std::size_t max_depth) const;
  Substitution substitution(std::mt19937& rng) const;
  Binding binding(std::mt19937& rng) const;
};

}  // namespace sharing
