// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/pos.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace sharing {
namespace {

constexpr std::uint32_t kTerminalVar = 64;
constexpr std::uint32_t kFalse = 0;
constexpr std::uint32_t kTrue = 1;

// Truth tables indexed by (lhs << 1 | rhs).
constexpr unsigned kAnd = 0b1000;
constexpr unsigned kOr = 0b1110;
constexpr unsigned kImplies = 0b1011;
constexpr unsigned kIff = 0b1001;
constexpr unsigned kAndNot = 0b0100;

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

struct NodeHash {
  std::size_t operator()(const PosFormula::Node& n) const noexcept {
    return std::hash<std::uint64_t>{}(pair_key(n.lo, n.hi) ^ (std::uint64_t{n.var} << 58));
  }
};

}  // namespace

/// Scratch space for one operation: a shared node pool with a unique table.
class BddBuilder {
 public:
  using Node = PosFormula::Node;

  BddBuilder() {
    nodes_.push_back({kTerminalVar, kFalse, kFalse});
    nodes_.push_back({kTerminalVar, kTrue, kTrue});
  }

  std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    const Node n{var, lo, hi};
    auto [it, inserted] = unique_.try_emplace(n, static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  }

  std::uint32_t import(const PosFormula& f) {
    std::vector<std::uint32_t> map(f.nodes_.size());
    map[kFalse] = kFalse;
    map[kTrue] = kTrue;
    for (std::size_t i = 2; i < f.nodes_.size(); ++i) {
      const Node& n = f.nodes_[i];
      map[i] = mk(n.var, map[n.lo], map[n.hi]);
    }
    return map[f.root_];
  }

  std::uint32_t var_of(std::uint32_t id) const { return nodes_[id].var; }
  const Node& node(std::uint32_t id) const { return nodes_[id]; }

  std::uint32_t apply(unsigned op, std::uint32_t a, std::uint32_t b) {
    if (a <= kTrue && b <= kTrue) return (op >> (a << 1 | b)) & 1U;
    if (op == kAnd) {
      if (a == kFalse || b == kFalse) return kFalse;
      if (a == kTrue) return b;
      if (b == kTrue || a == b) return a;
    } else if (op == kOr) {
      if (a == kTrue || b == kTrue) return kTrue;
      if (a == kFalse) return b;
      if (b == kFalse || a == b) return a;
    }
    auto& memo = apply_memo_[op];
    if (auto it = memo.find(pair_key(a, b)); it != memo.end()) return it->second;
    const std::uint32_t v = std::min(var_of(a), var_of(b));
    const auto [a0, a1] = cofactors(a, v);
    const auto [b0, b1] = cofactors(b, v);
    const std::uint32_t lo = apply(op, a0, b0);
    const std::uint32_t hi = apply(op, a1, b1);
    const std::uint32_t r = mk(v, lo, hi);
    apply_memo_[op].emplace(pair_key(a, b), r);
    return r;
  }

  std::uint32_t exists(std::uint32_t a, VarSet vars) {
    if (a <= kTrue) return a;
    if (auto it = exists_memo_.find(a); it != exists_memo_.end()) return it->second;
    const Node n = nodes_[a];
    const std::uint32_t lo = exists(n.lo, vars);
    const std::uint32_t hi = exists(n.hi, vars);
    const std::uint32_t r = vars.contains(n.var) ? apply(kOr, lo, hi) : mk(n.var, lo, hi);
    exists_memo_.emplace(a, r);
    return r;
  }

  std::uint32_t restrict(std::uint32_t a, std::uint32_t var, bool value) {
    if (a <= kTrue || nodes_[a].var > var) return a;
    const std::uint64_t key = (std::uint64_t{a} << 8) | (var << 1) | (value ? 1U : 0U);
    if (auto it = restrict_memo_.find(key); it != restrict_memo_.end()) return it->second;
    const Node n = nodes_[a];
    std::uint32_t r;
    if (n.var == var) {
      r = value ? n.hi : n.lo;
    } else {
      const std::uint32_t lo = restrict(n.lo, var, value);
      const std::uint32_t hi = restrict(n.hi, var, value);
      r = mk(n.var, lo, hi);
    }
    restrict_memo_.emplace(key, r);
    return r;
  }

  std::uint32_t conj(VarSet v) {
    std::vector<VarId> order(v.begin(), v.end());
    std::uint32_t r = kTrue;
    for (auto it = order.rbegin(); it != order.rend(); ++it) r = mk(*it, kFalse, r);
    return r;
  }

  std::uint32_t var(VarId v) { return mk(v, kFalse, kTrue); }

  /// Copies the nodes reachable from `root` in canonical post-order.
  PosFormula finish(std::uint32_t root) const {
    if (root <= kTrue) return PosFormula({nodes_[kFalse], nodes_[kTrue]}, root);
    std::vector<Node> out{nodes_[kFalse], nodes_[kTrue]};
    std::unordered_map<std::uint32_t, std::uint32_t> renumber{{kFalse, kFalse}, {kTrue, kTrue}};
    const auto visit = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
      if (auto it = renumber.find(id); it != renumber.end()) return it->second;
      const Node& n = nodes_[id];
      const std::uint32_t lo = self(self, n.lo);
      const std::uint32_t hi = self(self, n.hi);
      const auto fresh = static_cast<std::uint32_t>(out.size());
      out.push_back({n.var, lo, hi});
      renumber.emplace(id, fresh);
      return fresh;
    };
    const std::uint32_t r = visit(visit, root);
    return PosFormula(std::move(out), r);
  }

 private:
  std::pair<std::uint32_t, std::uint32_t> cofactors(std::uint32_t id, std::uint32_t v) const {
    const Node& n = nodes_[id];
    if (n.var != v) return {id, id};
    return {n.lo, n.hi};
  }

  std::vector<Node> nodes_;
  std::unordered_map<Node, std::uint32_t, NodeHash> unique_;
  std::unordered_map<unsigned, std::unordered_map<std::uint64_t, std::uint32_t>> apply_memo_;
  std::unordered_map<std::uint32_t, std::uint32_t> exists_memo_;
  std::unordered_map<std::uint64_t, std::uint32_t> restrict_memo_;
};

namespace {

PosFormula binary(unsigned op, const PosFormula& a, const PosFormula& b) {
  BddBuilder bdd;
  const std::uint32_t x = bdd.import(a);
  const std::uint32_t y = bdd.import(b);
  return bdd.finish(bdd.apply(op, x, y));
}

}  // namespace

PosFormula::PosFormula() : nodes_{{kTerminalVar, kFalse, kFalse}, {kTerminalVar, kTrue, kTrue}}, root_{kTrue} {}

PosFormula PosFormula::falsum() {
  PosFormula f;
  f.root_ = kFalse;
  return f;
}

PosFormula PosFormula::var(VarId v) {
  BddBuilder bdd;
  return bdd.finish(bdd.var(v));
}

PosFormula PosFormula::conj(VarSet v) {
  BddBuilder bdd;
  return bdd.finish(bdd.conj(v));
}

PosFormula PosFormula::iff(VarId x, VarSet ys) {
  BddBuilder bdd;
  const std::uint32_t lhs = bdd.var(x);
  const std::uint32_t rhs = bdd.conj(ys);
  return bdd.finish(bdd.apply(kIff, lhs, rhs));
}

bool PosFormula::is_true() const { return root_ == kTrue; }
bool PosFormula::is_false() const { return root_ == kFalse; }

bool PosFormula::evaluate(VarSet true_vars) const {
  std::uint32_t id = root_;
  while (id > kTrue) {
    const Node& n = nodes_[id];
    id = true_vars.contains(n.var) ? n.hi : n.lo;
  }
  return id == kTrue;
}

VarSet PosFormula::support() const {
  VarSet out;
  for (std::size_t i = 2; i < nodes_.size(); ++i) out.insert(nodes_[i].var);
  return out;
}

bool PosFormula::entails(const PosFormula& other) const { return binary(kAndNot, *this, other).is_false(); }

PosFormula PosFormula::shifted(int offset) const {
  PosFormula out = *this;
  for (std::size_t i = 2; i < out.nodes_.size(); ++i) {
    const int v = static_cast<int>(out.nodes_[i].var) + offset;
    if (v < 0 || v >= static_cast<int>(kMaxVars)) throw std::out_of_range("formula shifted out of range");
    out.nodes_[i].var = static_cast<std::uint32_t>(v);
  }
  return out;
}

PosFormula operator&(const PosFormula& a, const PosFormula& b) { return binary(kAnd, a, b); }
PosFormula operator|(const PosFormula& a, const PosFormula& b) { return binary(kOr, a, b); }

PosFormula pos_project(const PosFormula& f, VarSet v) {
  if (!f.support().intersects(v)) return f;
  BddBuilder bdd;
  return bdd.finish(bdd.exists(bdd.import(f), v));
}

PosFormula restrict(const PosFormula& f, VarId v, bool value) {
  BddBuilder bdd;
  return bdd.finish(bdd.restrict(bdd.import(f), v, value));
}

PosFormula pos_amgu(const PosFormula& phi, const Binding& b) {
  if (b.rhs.is_variable() && b.rhs.var() == b.lhs) return phi;
  VarSet ys = vars_of(b.rhs);
  ys.erase(b.lhs);
  BddBuilder bdd;
  const std::uint32_t root = bdd.import(phi);
  const std::uint32_t link = bdd.apply(kIff, bdd.var(b.lhs), bdd.conj(ys));
  return bdd.finish(bdd.apply(kAnd, root, link));
}

VarSet ground_vars(const PosFormula& phi, VarSet vi) {
  if (phi.is_false()) return vi;
  VarSet out;
  BddBuilder bdd;
  const std::uint32_t root = bdd.import(phi);
  for (VarId x : phi.support() & vi) {
    if (bdd.restrict(root, x, false) == kFalse) out.insert(x);
  }
  return out;
}

bool entails_binary_disjunction(const PosFormula& phi, VarId x, VarId y) {
  BddBuilder bdd;
  const std::uint32_t r = bdd.restrict(bdd.import(phi), x, false);
  return bdd.restrict(r, y, false) == kFalse;
}

std::vector<VarSet> ground_equiv_classes(const PosFormula& phi, VarSet vi) {
  const auto equivalent = [&](VarId x, VarId y) {
    const PosFormula x_not_y = restrict(restrict(phi, x, true), y, false);
    const PosFormula y_not_x = restrict(restrict(phi, x, false), y, true);
    return x_not_y.is_false() && y_not_x.is_false();
  };
  std::vector<VarSet> classes;
  for (VarId x : vi) {
    auto it = std::find_if(classes.begin(), classes.end(), [&](VarSet c) { return equivalent(c.front(), x); });
    if (it == classes.end()) {
      classes.push_back(VarSet::single(x));
    } else {
      it->insert(x);
    }
  }
  return classes;
}

std::vector<VarSet> models(const PosFormula& phi, VarSet vi, std::size_t bound) {
  if (vi.size() > bound) {
    throw ModelBoundExceeded("model enumeration over " + std::to_string(vi.size()) +
                             " variables exceeds the bound of " + std::to_string(bound));
  }
  std::vector<VarSet> out;
  // Variables outside the support are unconstrained: every subset of them
  // extends each model of the support.
  const VarSet support = phi.support() & vi;
  const VarSet free_vars = vi - support;
  std::vector<VarSet> base;
  for (std::uint64_t s = support.bits();; s = (s - 1) & support.bits()) {
    if (phi.evaluate(VarSet(s))) base.push_back(VarSet(s));
    if (s == 0) break;
  }
  for (VarSet m : base) {
    for (std::uint64_t s = free_vars.bits();; s = (s - 1) & free_vars.bits()) {
      out.push_back(m | VarSet(s));
      if (s == 0) break;
    }
  }
  std::sort(out.begin(), out.end(), LexLess{});
  return out;
}

std::string to_string(const PosFormula& f, const VarNames& names) {
  if (f.is_true()) return "true";
  if (f.is_false()) return "false";
  const auto name = [&](std::uint32_t v) { return v < names.size() ? names[v] : "_G" + std::to_string(v); };
  std::vector<std::string> clauses;
  // Every path to the false terminal is a forbidden partial assignment.
  std::vector<std::pair<std::uint32_t, bool>> path;
  const auto walk = [&](auto&& self, std::uint32_t id) -> void {
    if (id == kTrue) return;
    if (id == kFalse) {
      std::string pos, neg;
      for (auto [v, value] : path) {
        std::string& side = value ? pos : neg;
        if (!side.empty()) side += value ? " & " : " \\/ ";
        side += name(v);
      }
      if (neg.empty()) neg = "false";
      clauses.push_back(pos.empty() ? neg : pos + " -> " + neg);
      return;
    }
    const auto& n = f.nodes_[id];
    path.emplace_back(n.var, false);
    self(self, n.lo);
    path.back().second = true;
    self(self, n.hi);
    path.pop_back();
  };
  walk(walk, f.root_);
  if (clauses.size() == 1) return clauses.front();
  std::string out;
  for (const auto& c : clauses) {
    if (!out.empty()) out += " & ";
    const bool simple = c.find(' ') == std::string::npos;
    out += simple ? c : "(" + c + ")";
  }
  return out;
}

namespace {

class PosParser {
 public:
  PosParser(std::string_view text, const VarNames& names) : text_{text}, names_{names} {}

  PosFormula parse() {
    const std::uint32_t r = equiv();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return bdd_.finish(r);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("formula: " + what + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::uint32_t equiv() {
    std::uint32_t prev = implication();
    std::uint32_t acc = kTrue;
    bool chained = false;
    while (accept("<->")) {
      const std::uint32_t next = implication();
      acc = bdd_.apply(kAnd, acc, bdd_.apply(kIff, prev, next));
      prev = next;
      chained = true;
    }
    return chained ? acc : prev;
  }

  std::uint32_t implication() {
    const std::uint32_t lhs = disjunction();
    if (accept("->")) return bdd_.apply(kImplies, lhs, implication());
    return lhs;
  }

  std::uint32_t disjunction() {
    std::uint32_t acc = conjunction();
    while (accept("\\/")) acc = bdd_.apply(kOr, acc, conjunction());
    return acc;
  }

  std::uint32_t conjunction() {
    std::uint32_t acc = atom();
    while (accept("&")) acc = bdd_.apply(kAnd, acc, atom());
    return acc;
  }

  std::uint32_t atom() {
    if (accept("(")) {
      const std::uint32_t r = equiv();
      if (!accept(")")) fail("expected ')'");
      return r;
    }
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty()) fail("expected a variable");
    if (word == "true") return kTrue;
    if (word == "false") return kFalse;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == word) return bdd_.var(static_cast<VarId>(i));
    }
    fail("unknown variable '" + std::string(word) + "'");
  }

  std::string_view text_;
  const VarNames& names_;
  std::size_t pos_ = 0;
  BddBuilder bdd_;
};

}  // namespace

PosFormula parse_pos(std::string_view text, const VarNames& names) { return PosParser{text, names}.parse(); }

}  // namespace sharing
