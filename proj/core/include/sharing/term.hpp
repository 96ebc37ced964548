// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sharing/var_set.hpp"

namespace sharing {

/// Display names for the variables of one context, indexed by VarId.
using VarNames = std::vector<std::string>;

/// A first-order term over the variables of interest.
///
/// Atomic terms cover both symbolic constants and integers; the functor holds
/// their textual form. Compound terms always have at least one argument.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Compound, Atomic };

  static Term variable(VarId v);
  static Term atom(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_atomic() const { return kind_ == Kind::Atomic; }
  bool is_compound() const { return kind_ == Kind::Compound; }

  /// Only meaningful for variables.
  VarId var() const { return var_; }
  const std::string& functor() const { return functor_; }
  std::size_t arity() const { return args_.size(); }
  std::span<const Term> args() const { return args_; }
  std::vector<Term>& mutable_args() { return args_; }

  bool operator==(const Term&) const = default;

 private:
  Kind kind_ = Kind::Atomic;
  VarId var_ = 0;
  std::string functor_;
  std::vector<Term> args_;
};

/// vars(t) together with mvars(t), the multiset of occurrences.
struct TermVars {
  VarSet set;
  std::map<VarId, std::size_t> occurrences;

  /// Variables occurring more than once.
  VarSet repeated() const;
};

TermVars term_vars(const Term& t);
VarSet vars_of(const Term& t);
/// True when no variable occurs twice in t.
bool is_syntactically_linear(const Term& t);
std::size_t term_depth(const Term& t);

/// An equation x = t. The left-hand side may occur in t (cyclic binding).
struct Binding {
  VarId lhs = 0;
  Term rhs;

  bool cyclic() const;
  bool operator==(const Binding&) const = default;
};

/// Prints a term in Prolog syntax, using list sugar for './2' chains.
std::string to_string(const Term& t, const VarNames& names);
std::string to_string(const Binding& b, const VarNames& names);

/// Names X0, X1, ... for contexts without source names.
VarNames default_names(std::size_t n);

}  // namespace sharing
