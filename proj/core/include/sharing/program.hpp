// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sharing/term.hpp"

namespace sharing {

/// Raised on malformed input, with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised when the input is well-formed Prolog outside the supported subset.
class UnsupportedConstruct : public ParseError {
 public:
  UnsupportedConstruct(const std::string& construct, std::size_t line, std::size_t column);
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

struct PredicateKey {
  std::string name;
  std::size_t arity = 0;

  std::string to_string() const { return name + "/" + std::to_string(arity); }
  auto operator<=>(const PredicateKey&) const = default;
};

/// A source clause. Variables are numbered per clause in order of first
/// appearance; `names` maps them back to their source spelling.
struct Clause {
  Term head;
  std::vector<Term> body;
  VarNames names;
  std::size_t line = 0;

  PredicateKey key() const { return {head.functor(), head.arity()}; }
};

/// An entry goal for goal-dependent analysis, with its own variable scope.
struct EntryGoal {
  Term goal;
  VarNames names;
};

struct Program {
  std::vector<Clause> clauses;
  std::vector<EntryGoal> entries;
};

/// Parses the supported Prolog subset: facts, rules, `=`/2 goals, list
/// sugar, a fixed operator table and `:- entry(Goal).` directives.
Program parse_program(std::string_view text);

/// Parses one goal per non-blank line (a trailing '.' is optional).
std::vector<EntryGoal> parse_goals(std::string_view text);

/// Prints clauses and entry directives in a form `parse_program` accepts.
std::string to_string(const Program& program);

/// A call to a predicate whose arguments are all variables of the clause.
struct CallGoal {
  PredicateKey predicate;
  std::vector<VarId> args;

  bool operator==(const CallGoal&) const = default;
};

using BodyItem = std::variant<Binding, CallGoal>;

/// A clause rewritten so that the head carries distinct fresh variables
/// (positions 0..arity-1 of the clause's variables of interest) and the body
/// is a flat sequence of bindings and calls with variable arguments.
struct NormalClause {
  PredicateKey head;
  std::vector<BodyItem> body;
  /// Names for every variable of interest of the clause, head variables first.
  VarNames names;

  std::size_t var_count() const { return names.size(); }
};

NormalClause normalize_clause(const Clause& clause);
/// Normalizes an entry goal as the body of a clause with an empty head.
NormalClause normalize_entry(const EntryGoal& entry);

std::string to_string(const BodyItem& item, const VarNames& names);

}  // namespace sharing
