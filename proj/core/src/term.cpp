// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/term.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace sharing {

Term Term::variable(VarId v) {
  if (v >= kMaxVars) throw std::out_of_range("variable index exceeds the supported maximum");
  Term t;
  t.kind_ = Kind::Variable;
  t.var_ = v;
  return t;
}

Term Term::atom(std::string name) {
  Term t;
  t.kind_ = Kind::Atomic;
  t.functor_ = std::move(name);
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return atom(std::move(functor));
  Term t;
  t.kind_ = Kind::Compound;
  t.functor_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

VarSet TermVars::repeated() const {
  VarSet out;
  for (const auto& [v, n] : occurrences) {
    if (n > 1) out.insert(v);
  }
  return out;
}

namespace {

void collect(const Term& t, TermVars& acc) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      acc.set.insert(t.var());
      ++acc.occurrences[t.var()];
      break;
    case Term::Kind::Compound:
      for (const Term& a : t.args()) collect(a, acc);
      break;
    case Term::Kind::Atomic:
      break;
  }
}

void collect_set(const Term& t, VarSet& acc) {
  if (t.is_variable()) {
    acc.insert(t.var());
    return;
  }
  for (const Term& a : t.args()) collect_set(a, acc);
}

bool is_list_cell(const Term& t) { return t.is_compound() && t.functor() == "." && t.arity() == 2; }

bool needs_quotes(const std::string& name) {
  if (name.empty()) return true;
  if (name == "[]" || name == "!" || name == ";" || name == "{}") return false;
  const unsigned char c0 = static_cast<unsigned char>(name[0]);
  if (std::islower(c0)) {
    return !std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }
  if (std::isdigit(c0) || (c0 == '-' && name.size() > 1)) {
    return !std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }
  static const std::string symbol_chars = "+-*/\\^<>=~:.?@#&$";
  return !std::all_of(name.begin(), name.end(),
                      [](char c) { return symbol_chars.find(c) != std::string::npos; });
}

std::string atom_text(const std::string& name) {
  if (!needs_quotes(name)) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

std::string var_text(VarId v, const VarNames& names) {
  if (v < names.size()) return names[v];
  return "_G" + std::to_string(v);
}

void print(const Term& t, const VarNames& names, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      out += var_text(t.var(), names);
      return;
    case Term::Kind::Atomic:
      out += atom_text(t.functor());
      return;
    case Term::Kind::Compound:
      break;
  }
  if (is_list_cell(t)) {
    out += '[';
    const Term* cur = &t;
    bool first = true;
    while (is_list_cell(*cur)) {
      if (!first) out += ',';
      first = false;
      print(cur->args()[0], names, out);
      cur = &cur->args()[1];
    }
    if (!(cur->is_atomic() && cur->functor() == "[]")) {
      out += '|';
      print(*cur, names, out);
    }
    out += ']';
    return;
  }
  out += atom_text(t.functor());
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i > 0) out += ',';
    print(t.args()[i], names, out);
  }
  out += ')';
}

}  // namespace

TermVars term_vars(const Term& t) {
  TermVars acc;
  collect(t, acc);
  return acc;
}

VarSet vars_of(const Term& t) {
  VarSet acc;
  collect_set(t, acc);
  return acc;
}

bool is_syntactically_linear(const Term& t) { return term_vars(t).repeated().empty(); }

std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (const Term& a : t.args()) d = std::max(d, term_depth(a));
  return t.is_compound() ? d + 1 : 0;
}

bool Binding::cyclic() const { return vars_of(rhs).contains(lhs); }

std::string to_string(const Term& t, const VarNames& names) {
  std::string out;
  print(t, names, out);
  return out;
}

std::string to_string(const Binding& b, const VarNames& names) {
  return var_text(b.lhs, names) + " = " + to_string(b.rhs, names);
}

VarNames default_names(std::size_t n) {
  VarNames out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back("X" + std::to_string(i));
  return out;
}

}  // namespace sharing
