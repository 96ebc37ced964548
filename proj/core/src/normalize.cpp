// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include <set>
#include <stdexcept>

#include "sharing/program.hpp"

namespace sharing {
namespace {

bool is_grounding_test(const Term& goal) {
  static const std::set<std::string> tests = {"is", "<", ">", "=<", ">=", "=:=", "=\\="};
  return goal.arity() == 2 && tests.contains(goal.functor());
}

bool is_type_test(const Term& goal) {
  static const std::set<std::string> tests = {"atom", "atomic", "number", "integer", "ground"};
  return goal.arity() == 1 && tests.contains(goal.functor());
}

/// Goals that can neither bind nor fail-proof anything the domains track.
bool is_binding_free(const Term& goal) {
  static const std::set<PredicateKey> keys = {
      {"true", 0}, {"!", 0},   {"==", 2},  {"\\==", 2}, {"\\=", 2},  {"\\+", 1}, {"var", 1},
      {"nonvar", 1}, {"@<", 2}, {"@>", 2}, {"@=<", 2}, {"@>=", 2}, {"nl", 0},   {"write", 1},
  };
  return keys.contains({goal.functor(), goal.arity()});
}

class Normalizer {
 public:
  Normalizer(std::size_t head_arity, const VarNames& source_names) : head_arity_{head_arity} {
    if (head_arity + source_names.size() > kMaxVars) {
      throw std::length_error("clause needs more than " + std::to_string(kMaxVars) + " variables");
    }
    std::set<std::string> used(source_names.begin(), source_names.end());
    for (std::size_t i = 0; i < head_arity; ++i) names_.push_back("X" + std::to_string(i + 1));
    std::set<std::string> head_names(names_.begin(), names_.end());
    for (std::string name : source_names) {
      while (head_names.contains(name)) name += "_";
      head_names.insert(name);
      names_.push_back(name);
    }
    used_.insert(names_.begin(), names_.end());
  }

  VarId head_var(std::size_t i) const { return static_cast<VarId>(i); }

  Term rename(const Term& t) const {
    if (t.is_variable()) return Term::variable(static_cast<VarId>(t.var() + head_arity_));
    if (t.is_atomic()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) args.push_back(rename(a));
    return Term::compound(t.functor(), std::move(args));
  }

  VarId temp() {
    if (names_.size() >= kMaxVars) {
      throw std::length_error("clause needs more than " + std::to_string(kMaxVars) + " variables");
    }
    std::string name;
    do {
      name = "T" + std::to_string(++temp_counter_);
    } while (used_.contains(name));
    used_.insert(name);
    names_.push_back(name);
    return static_cast<VarId>(names_.size() - 1);
  }

  void bind(VarId lhs, Term rhs) {
    if (rhs.is_variable() && rhs.var() == lhs) return;
    body_.emplace_back(Binding{lhs, std::move(rhs)});
  }

  /// The body goal `goal`, already renamed into the clause numbering.
  void goal(const Term& goal) {
    if (goal.is_compound() && goal.functor() == "=" && goal.arity() == 2) {
      const Term& lhs = goal.args()[0];
      const Term& rhs = goal.args()[1];
      if (lhs.is_variable()) {
        bind(lhs.var(), rhs);
      } else if (rhs.is_variable()) {
        bind(rhs.var(), lhs);
      } else {
        const VarId t = temp();
        bind(t, lhs);
        bind(t, rhs);
      }
      return;
    }
    if (is_binding_free(goal)) return;
    if (is_grounding_test(goal) || is_type_test(goal)) {
      for (VarId v : vars_of(goal)) bind(v, Term::atom("0"));
      return;
    }
    CallGoal call{{goal.functor(), goal.arity()}, {}};
    for (const Term& a : goal.args()) {
      if (a.is_variable()) {
        call.args.push_back(a.var());
      } else {
        const VarId t = temp();
        bind(t, a);
        call.args.push_back(t);
      }
    }
    body_.emplace_back(std::move(call));
  }

  NormalClause finish(PredicateKey head) && { return {std::move(head), std::move(body_), std::move(names_)}; }

 private:
  std::size_t head_arity_;
  VarNames names_;
  std::set<std::string> used_;
  std::vector<BodyItem> body_;
  std::size_t temp_counter_ = 0;
};

}  // namespace

NormalClause normalize_clause(const Clause& clause) {
  Normalizer n{clause.head.arity(), clause.names};
  for (std::size_t i = 0; i < clause.head.arity(); ++i) {
    n.bind(n.head_var(i), n.rename(clause.head.args()[i]));
  }
  for (const Term& g : clause.body) n.goal(n.rename(g));
  return std::move(n).finish(clause.key());
}

NormalClause normalize_entry(const EntryGoal& entry) {
  Normalizer n{0, entry.names};
  n.goal(n.rename(entry.goal));
  return std::move(n).finish({"$entry", 0});
}

std::string to_string(const BodyItem& item, const VarNames& names) {
  if (const auto* b = std::get_if<Binding>(&item)) return to_string(*b, names);
  const auto& call = std::get<CallGoal>(item);
  std::string out = call.predicate.name;
  if (!call.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      if (i > 0) out += ',';
      out += to_string(Term::variable(call.args[i]), names);
    }
    out += ')';
  }
  return out;
}

}  // namespace sharing
