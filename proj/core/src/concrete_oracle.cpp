// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/concrete_oracle.hpp"

#include <array>
#include <stdexcept>

namespace sharing {
namespace {

/// Bindings for concrete variables during one unification.
class Solver {
 public:
  Term walk(Term t) const {
    while (t.is_variable() && bound_[t.var()]) t = *bound_[t.var()];
    return t;
  }

  bool occurs(VarId v, const Term& t) const {
    const Term w = walk(t);
    if (w.is_variable()) return w.var() == v;
    for (const Term& a : w.args()) {
      if (occurs(v, a)) return true;
    }
    return false;
  }

  UnifyStatus unify(const Term& a, const Term& b, bool occurs_check) {
    const Term x = walk(a);
    const Term y = walk(b);
    if (x.is_variable() && y.is_variable() && x.var() == y.var()) return UnifyStatus::Success;
    if (x.is_variable()) return bind(x.var(), y, occurs_check);
    if (y.is_variable()) return bind(y.var(), x, occurs_check);
    if (x.functor() != y.functor() || x.arity() != y.arity()) return UnifyStatus::Fail;
    for (std::size_t i = 0; i < x.arity(); ++i) {
      const UnifyStatus s = unify(x.args()[i], y.args()[i], occurs_check);
      if (s != UnifyStatus::Success) return s;
    }
    return UnifyStatus::Success;
  }

  Term resolve(const Term& t) const {
    const Term w = walk(t);
    if (!w.is_compound()) return w;
    std::vector<Term> args;
    args.reserve(w.arity());
    for (const Term& a : w.args()) args.push_back(resolve(a));
    return Term::compound(w.functor(), std::move(args));
  }

 private:
  UnifyStatus bind(VarId v, const Term& t, bool occurs_check) {
    if (occurs(v, t)) return occurs_check ? UnifyStatus::Fail : UnifyStatus::OutOfScope;
    bound_[v] = t;
    return UnifyStatus::Success;
  }

  std::array<std::optional<Term>, kMaxVars> bound_{};
};

bool is_linear_term(const Term& t) { return is_syntactically_linear(t); }

template <typename Element>
bool sound(const std::vector<Substitution>& sigmas, const Binding& b, std::size_t n,
           Element (*abstract)(const std::vector<Substitution>&, std::size_t),
           const std::function<Element(const Element&, const Binding&)>& amgu) {
  const Element expected = abstract(concrete_successors(sigmas, b), n);
  const Element computed = amgu(abstract(sigmas, n), b);
  return leq(expected, computed);
}

}  // namespace

Substitution Substitution::identity(std::size_t n) {
  Substitution s;
  for (std::size_t i = 0; i < n; ++i) s.image.push_back(Term::variable(static_cast<VarId>(n + i)));
  return s;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_variable()) {
    if (t.var() >= image.size()) throw std::out_of_range("variable outside the substitution domain");
    return image[t.var()];
  }
  if (t.is_atomic()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const Term& a : t.args()) args.push_back(apply(a));
  return Term::compound(t.functor(), std::move(args));
}

UnifyResult concrete_unify(const Substitution& sigma, const Binding& b, bool occurs_check) {
  Solver solver;
  const UnifyStatus status =
      solver.unify(sigma.apply(Term::variable(b.lhs)), sigma.apply(b.rhs), occurs_check);
  if (status != UnifyStatus::Success) return {status, {}};
  Substitution out;
  out.image.reserve(sigma.size());
  for (const Term& t : sigma.image) out.image.push_back(solver.resolve(t));
  return {UnifyStatus::Success, std::move(out)};
}

VarSet occurrence_group(const Substitution& sigma, VarId concrete_var) {
  VarSet out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (vars_of(sigma.image[i]).contains(concrete_var)) out.insert(static_cast<VarId>(i));
  }
  return out;
}

SflElement alpha(const std::vector<Substitution>& sigmas, std::size_t n) {
  const VarSet vi = VarSet::prefix(n);
  SflElement out = SflElement::bottom(vi);
  if (sigmas.empty()) return out;
  std::vector<VarSet> groups;
  for (const Substitution& s : sigmas) {
    VarSet range;
    for (const Term& t : s.image) range |= vars_of(t);
    for (VarId v : range) groups.push_back(occurrence_group(s, v));
    for (std::size_t i = 0; i < n; ++i) {
      if (!s.image[i].is_variable()) out.f.erase(static_cast<VarId>(i));
      if (!is_linear_term(s.image[i])) out.l.erase(static_cast<VarId>(i));
    }
  }
  out.sh = SharingSet(std::move(groups));
  return out;
}

SgflElement alpha_sgfl(const std::vector<Substitution>& sigmas, std::size_t n) {
  const SflElement base = alpha(sigmas, n);
  SgflElement out{base.vi, base.sh, base.f, base.vi, base.l};
  for (const Substitution& s : sigmas) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!s.image[i].is_variable() && !vars_of(s.image[i]).empty()) out.gf.erase(static_cast<VarId>(i));
    }
  }
  return out;
}

VarSet ground_part(const Substitution& sigma) {
  VarSet out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (vars_of(sigma.image[i]).empty()) out.insert(static_cast<VarId>(i));
  }
  return out;
}

std::vector<Substitution> concrete_successors(const std::vector<Substitution>& sigmas, const Binding& b) {
  std::vector<Substitution> out;
  for (const Substitution& s : sigmas) {
    UnifyResult r = concrete_unify(s, b, true);
    if (r.status == UnifyStatus::Success) out.push_back(std::move(r.sigma));
  }
  return out;
}

bool soundness_check(const std::vector<Substitution>& sigmas, const Binding& b, std::size_t n,
                     const std::function<SflElement(const SflElement&, const Binding&)>& amgu) {
  return sound<SflElement>(sigmas, b, n, &alpha, amgu);
}

bool soundness_check(const std::vector<Substitution>& sigmas, const Binding& b, std::size_t n,
                     const std::function<SgflElement(const SgflElement&, const Binding&)>& amgu) {
  return sound<SgflElement>(sigmas, b, n, &alpha_sgfl, amgu);
}

Term RandomTerms::concrete_term(std::mt19937& rng, std::size_t max_depth) const {
  std::uniform_int_distribution<int> pick(0, max_depth == 0 ? 2 : 4);
  switch (pick(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<std::size_t> v(0, pool - 1);
      return Term::variable(static_cast<VarId>(n + v(rng)));
    }
    case 2:
      return Term::atom(std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? "a" : "b");
    case 3:
      return Term::compound("f", {concrete_term(rng, max_depth - 1)});
    default:
      return Term::compound("g", {concrete_term(rng, max_depth - 1), concrete_term(rng, max_depth - 1)});
  }
}

Term RandomTerms::interest_term(std::mt19937& rng, std::size_t max_depth) const {
  std::uniform_int_distribution<int> pick(0, max_depth == 0 ? 2 : 4);
  switch (pick(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<std::size_t> v(0, n - 1);
      return Term::variable(static_cast<VarId>(v(rng)));
    }
    case 2:
      return Term::atom(std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? "a" : "b");
    case 3:
      return Term::compound("f", {interest_term(rng, max_depth - 1)});
    default:
      return Term::compound("g", {interest_term(rng, max_depth - 1), interest_term(rng, max_depth - 1)});
  }
}

Substitution RandomTerms::substitution(std::mt19937& rng) const {
  Substitution s;
  for (std::size_t i = 0; i < n; ++i) s.image.push_back(concrete_term(rng, depth));
  return s;
}

Binding RandomTerms::binding(std::mt19937& rng) const {
  std::uniform_int_distribution<std::size_t> v(0, n - 1);
  const auto x = static_cast<VarId>(v(rng));
  Term t = interest_term(rng, depth);
  while (t.is_variable() && t.var() == x) t = interest_term(rng, depth);
  return {x, std::move(t)};
}

}  // namespace sharing
