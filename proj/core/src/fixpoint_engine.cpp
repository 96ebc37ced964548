// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/fixpoint_engine.hpp"

#include "sharing/cancellation.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>
#include <stdexcept>

namespace sharing {
namespace {

constexpr std::string_view kDomainNames[] = {"sh", "psd", "sfl", "sfl2", "sgfl2", "pos", "pos_x_sfl2", "pos_red_sfl"};

VarSet shift_vars(VarSet v, int offset) {
  VarSet out;
  for (VarId x : v) {
    const int y = static_cast<int>(x) + offset;
    if (y < 0 || y >= static_cast<int>(kMaxVars)) throw std::out_of_range("variable shifted out of range");
    out.insert(static_cast<VarId>(y));
  }
  return out;
}

SharingSet shift_sharing(const SharingSet& sh, int offset) {
  std::vector<VarSet> out;
  out.reserve(sh.size());
  for (VarSet g : sh) out.push_back(shift_vars(g, offset));
  return SharingSet(std::move(out));
}

Description shift(const Description& d, int offset) {
  if (d.bottom) return bottom_element(shift_vars(d.vi, offset));
  Description out = d;
  out.vi = shift_vars(d.vi, offset);
  out.sh = shift_sharing(d.sh, offset);
  out.f = shift_vars(d.f, offset);
  out.gf = shift_vars(d.gf, offset);
  out.l = shift_vars(d.l, offset);
  out.pos = d.pos.shifted(offset);
  out.compound = shift_vars(d.compound, offset);
  return out;
}

SflElement sfl_view(const Description& d) { return {d.vi, d.sh, d.f, d.l}; }
SgflElement sgfl_view(const Description& d) { return {d.vi, d.sh, d.f, d.gf, d.l}; }

void store(Description& d, const SflElement& e) {
  d.sh = e.sh;
  d.f = e.f;
  d.l = e.l;
}

void store(Description& d, const SgflElement& e) {
  d.sh = e.sh;
  d.f = e.f;
  d.gf = e.gf;
  d.l = e.l;
}

}  // namespace

std::string_view to_string(Domain d) { return kDomainNames[static_cast<std::size_t>(d)]; }

std::optional<Domain> parse_domain(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kDomainNames); ++i) {
    if (kDomainNames[i] == text) return static_cast<Domain>(i);
  }
  return std::nullopt;
}

std::string_view to_string(AnalysisMode m) { return m == AnalysisMode::GoalIndependent ? "gi" : "gd"; }

std::optional<AnalysisMode> parse_mode(std::string_view text) {
  if (text == "gi") return AnalysisMode::GoalIndependent;
  if (text == "gd") return AnalysisMode::GoalDependent;
  return std::nullopt;
}

DomainTraits traits(Domain d) {
  DomainTraits t;
  switch (d) {
    case Domain::Sh:
      t.sharing = true;
      break;
    case Domain::Psd:
      t.sharing = t.self_bin = true;
      break;
    case Domain::Sfl:
      t.sharing = t.modes = true;
      break;
    case Domain::Sfl2:
      t.sharing = t.modes = t.self_bin = true;
      break;
    case Domain::Sgfl2:
      t.sharing = t.modes = t.ground_or_free = t.self_bin = true;
      break;
    case Domain::Pos:
      t.groundness = true;
      break;
    case Domain::PosXSfl2:
      t.sharing = t.modes = t.groundness = t.self_bin = t.combine = true;
      break;
    case Domain::PosRedSfl:
      t.sharing = t.modes = t.groundness = t.combine = t.reduce = true;
      break;
  }
  return t;
}

std::optional<std::string> validate(const AnalysisConfig& config) {
  const DomainTraits t = traits(config.domain);
  const std::string domain{to_string(config.domain)};
  if (config.rho_reduced) {
    if (t.reduce) {
      return "--psd cannot be combined with " + domain +
             ": the reduce operator is unsound on pair-cover reduced sharing sets";
    }
    if (config.free_split) {
      return "--psd cannot be combined with --free-split: the freeness decomposition is unsound on pair-cover "
             "reduced sharing sets";
    }
    if (!t.self_bin) return "--psd requires a self-bin-union domain (psd, sfl2, sgfl2, pos_x_sfl2), not " + domain;
  }
  if (!t.modes) {
    if (config.klin) return "--klin requires a domain with freeness and linearity, not " + domain;
    if (config.free_split) return "--free-split requires a domain with freeness and linearity, not " + domain;
    if (config.compound_reduce) {
      return "--compound-reduce requires a domain with freeness and linearity, not " + domain;
    }
  }
  if (config.timeout_seconds <= 0) return "--timeout must be positive";
  return std::nullopt;
}

std::vector<std::string> config_warnings(const AnalysisConfig& config) {
  std::vector<std::string> out;
  if (config.compound_reduce && !config.occurs_check) {
    out.emplace_back("--compound-reduce needs --occurs-check; the reduction is skipped");
  }
  return out;
}

Description top_element(Domain domain, VarSet vi) {
  const DomainTraits t = traits(domain);
  Description d;
  d.vi = vi;
  if (t.sharing) d.sh = singletons(vi);
  if (t.modes) d.f = d.l = vi;
  if (t.ground_or_free) d.gf = vi;
  return d;
}

Description bottom_element(VarSet vi) {
  Description d;
  d.bottom = true;
  d.vi = vi;
  return d;
}

Description unknown_element(Domain domain, VarSet vi) {
  Description d;
  d.vi = vi;
  if (traits(domain).sharing) d.sh = powerset(vi);
  return d;
}

Description lub(Domain domain, const Description& a, const Description& b) {
  if (a.bottom) return b;
  if (b.bottom) return a;
  if (a.vi != b.vi) throw std::invalid_argument("lub of descriptions over different variables");
  (void)domain;
  Description out = a;
  out.sh = a.sh | b.sh;
  out.f = a.f & b.f;
  out.gf = a.gf & b.gf;
  out.l = a.l & b.l;
  out.pos = a.pos | b.pos;
  out.compound = a.compound & b.compound;
  return out;
}

int star_count(const Description& d, const Binding& b) {
  if (d.sh.empty()) return 0;
  return d.gf.empty() ? star_count(sfl_view(d), b) : star_count(sgfl_view(d), b);
}

DomainOps::DomainOps(AnalysisConfig config) : config_{config}, traits_{traits(config.domain)} {}

Description DomainOps::normalize(Description d) const {
  if (d.bottom) return bottom_element(d.vi);
  if (traits_.combine) {
    if (traits_.ground_or_free) {
      store(d, apply_groundness(d.pos, sgfl_view(d)));
    } else {
      store(d, apply_groundness(d.pos, sfl_view(d)));
    }
  }
  if (traits_.reduce) {
    d.sh = reduce_product(d.pos, d.sh, d.vi);
    d.l |= d.vi - d.sh.vars();
  }
  if (traits_.modes) {
    if (traits_.ground_or_free) {
      store(d, canonical(sgfl_view(d)));
    } else {
      store(d, canonical(sfl_view(d)));
    }
  }
  if (config_.rho_reduced) d.sh = rho_reduce(d.sh);
  return d;
}

Description DomainOps::bind(const Description& d, const Binding& b) const {
  if (d.bottom) return d;
  check_deadline();
  Description r = d;
  const Closure closure = traits_.self_bin ? Closure::SelfBin : Closure::Star;
  if (traits_.modes) {
    if (config_.compound_reduce && config_.occurs_check) {
      Binding oriented = b;
      // The reduction is symmetric for variable-variable bindings.
      if (!r.f.contains(b.lhs) && b.rhs.is_variable() && r.f.contains(b.rhs.var())) {
        oriented = Binding{b.rhs.var(), Term::variable(b.lhs)};
      }
      bool lost = false;
      if (traits_.ground_or_free) {
        auto reduced = compound_reduce(sgfl_view(r), oriented, r.compound, true);
        if (reduced) store(r, *reduced); else lost = true;
      } else {
        auto reduced = compound_reduce(sfl_view(r), oriented, r.compound, true);
        if (reduced) store(r, *reduced); else lost = true;
      }
      if (lost) return bottom_element(d.vi);
    }
    bool fell_back = false;
    if (traits_.ground_or_free) {
      std::function<SgflElement(const SgflElement&, const Binding&)> base =
          [this, closure](const SgflElement& e, const Binding& x) {
            return config_.klin ? amgu_klin(e, x, closure) : amgu_sgfl(e, x, closure);
          };
      const SgflElement e = sgfl_view(r);
      store(r, config_.free_split ? amgu_free_split(e, b, base, config_.component_bound, &fell_back) : base(e, b));
    } else {
      std::function<SflElement(const SflElement&, const Binding&)> base =
          [this, closure](const SflElement& e, const Binding& x) {
            return config_.klin ? amgu_klin(e, x, closure) : amgu_sfl(e, x, closure);
          };
      const SflElement e = sfl_view(r);
      store(r, config_.free_split ? amgu_free_split(e, b, base, config_.component_bound, &fell_back) : base(e, b));
    }
    if (fell_back) {
      warnings_.emplace_back("freeness decomposition not possible for a binding; used the plain amgu");
    }
  } else if (traits_.sharing) {
    r.sh = traits_.self_bin ? amgu_psd(r.sh, b) : amgu_sh(r.sh, b);
  }
  if (traits_.groundness) r.pos = pos_amgu(r.pos, b);
  if (b.rhs.is_compound()) r.compound.insert(b.lhs);
  return normalize(std::move(r));
}

Description DomainOps::bind_all(const Description& d, const std::vector<Binding>& bs) const {
  if (d.bottom || bs.empty()) return d;
  const std::function<Description(const Description&, const Binding&)> step =
      [this](const Description& x, const Binding& b) { return bind(x, b); };
  Description cur = d;
  for (const Binding& b : order_bindings(config_.order, d, bs, step)) {
    cur = bind(cur, b);
    if (cur.bottom) break;
  }
  return cur;
}

Description DomainOps::project(const Description& d, VarSet v) const {
  if (d.bottom) return bottom_element(v);
  Description out;
  out.vi = v;
  out.sh = sharing::project(d.sh, v);
  out.f = d.f & v;
  out.gf = d.gf & v;
  out.l = d.l & v;
  out.pos = pos_project(d.pos, d.vi - v);
  out.compound = d.compound & v;
  return normalize(std::move(out));
}

Description DomainOps::forget(const Description& d, VarSet v) const {
  if (d.bottom) return d;
  Description out = d;
  if (traits_.sharing) out.sh = aexists(d.sh, v);
  if (traits_.modes) {
    out.f |= v;
    out.l |= v;
  }
  if (traits_.ground_or_free) out.gf |= v;
  out.pos = pos_project(d.pos, v);
  out.compound -= v;
  return normalize(std::move(out));
}

std::vector<std::string> DomainOps::take_warnings() const {
  std::vector<std::string> out;
  out.swap(warnings_);
  return out;
}

// Bourdoncle's algorithm. Elements are prepended, so starting a fresh visit
// from every unvisited vertex keeps predecessors ahead of their successors.
namespace {

class WtoBuilder {
 public:
  explicit WtoBuilder(const std::vector<std::vector<std::size_t>>& succ) : succ_{succ}, dfn_(succ.size(), 0) {}

  Wto run() {
    Wto out;
    for (std::size_t v = 0; v < succ_.size(); ++v) {
      if (dfn_[v] == 0) visit(v, out);
    }
    return out;
  }

 private:
  static constexpr std::size_t kDone = std::numeric_limits<std::size_t>::max();

  std::size_t visit(std::size_t v, Wto& partition) {
    stack_.push_back(v);
    dfn_[v] = ++num_;
    std::size_t head = dfn_[v];
    bool loop = false;
    for (std::size_t w : succ_[v]) {
      const std::size_t min = dfn_[w] == 0 ? visit(w, partition) : dfn_[w];
      if (min <= head) {
        head = min;
        loop = true;
      }
    }
    if (head == dfn_[v]) {
      dfn_[v] = kDone;
      std::size_t element = stack_.back();
      stack_.pop_back();
      if (loop) {
        while (element != v) {
          dfn_[element] = 0;
          element = stack_.back();
          stack_.pop_back();
        }
        partition.insert(partition.begin(), component(v));
      } else {
        partition.insert(partition.begin(), WtoElement{v, false, {}});
      }
    }
    return head;
  }

  WtoElement component(std::size_t v) {
    WtoElement c{v, true, {}};
    for (std::size_t w : succ_[v]) {
      if (dfn_[w] == 0) visit(w, c.body);
    }
    return c;
  }

  const std::vector<std::vector<std::size_t>>& succ_;
  std::vector<std::size_t> dfn_;
  std::vector<std::size_t> stack_;
  std::size_t num_ = 0;
};

void print_wto(const Wto& wto, const std::vector<PredicateKey>& names, std::string& out) {
  bool first = true;
  for (const WtoElement& e : wto) {
    if (!first) out += ' ';
    first = false;
    if (e.component) {
      out += '(' + names[e.vertex].to_string();
      if (!e.body.empty()) {
        out += ' ';
        print_wto(e.body, names, out);
      }
      out += ')';
    } else {
      out += names[e.vertex].to_string();
    }
  }
}

}  // namespace

Wto weak_topological_order(const std::vector<std::vector<std::size_t>>& successors) {
  return WtoBuilder{successors}.run();
}

ProgramWto weak_topological_order(const Program& program) {
  ProgramWto out;
  std::map<PredicateKey, std::size_t> index;
  for (const Clause& c : program.clauses) {
    if (index.emplace(c.key(), out.vertices.size()).second) out.vertices.push_back(c.key());
  }
  std::vector<std::set<std::size_t>> edges(out.vertices.size());
  for (const Clause& c : program.clauses) {
    const std::size_t caller = index.at(c.key());
    for (const BodyItem& item : normalize_clause(c).body) {
      if (const auto* call = std::get_if<CallGoal>(&item)) {
        if (auto it = index.find(call->predicate); it != index.end()) edges[it->second].insert(caller);
      }
    }
  }
  std::vector<std::vector<std::size_t>> succ;
  for (const auto& e : edges) succ.emplace_back(e.begin(), e.end());
  out.order = weak_topological_order(succ);
  return out;
}

std::string to_string(const ProgramWto& wto) {
  std::string out;
  print_wto(wto.order, wto.vertices, out);
  return out;
}

namespace {

struct Vertex {
  PredicateKey key;
  std::size_t arity = 0;
  std::vector<NormalClause> clauses;
  std::vector<std::size_t> slot_base;
  std::vector<std::size_t> width;
  bool entry = false;
  Description success;
  Description call;
};

class Analyzer {
 public:
  Analyzer(const Program& program, const AnalysisConfig& config)
      : config_{config},
        ops_{config},
        deadline_{std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(config.timeout_seconds))} {
    for (const Clause& c : program.clauses) {
      auto [it, inserted] = index_.emplace(c.key(), vertices_.size());
      if (inserted) {
        Vertex v;
        v.key = c.key();
        v.arity = c.key().arity;
        vertices_.push_back(std::move(v));
      }
      add_clause(vertices_[it->second], normalize_clause(c));
    }
    defined_ = vertices_.size();
    if (config.mode == AnalysisMode::GoalDependent) {
      for (std::size_t i = 0; i < program.entries.size(); ++i) {
        Vertex v;
        v.key = {"$entry" + std::to_string(i + 1), 0};
        v.entry = true;
        add_clause(v, normalize_entry(program.entries[i]));
        vertices_.push_back(std::move(v));
      }
    }
    for (Vertex& v : vertices_) {
      const VarSet head = VarSet::prefix(v.arity);
      v.success = bottom_element(head);
      v.call = v.entry ? top_element(config.domain, head) : bottom_element(head);
    }
  }

  AnalysisResult run() {
    AnalysisResult result;
    result.config = config_;
    result.warnings = config_warnings(config_);
    for (const std::string& w : unknown_warnings()) result.warnings.push_back(w);
    try {
      const DeadlineScope scope{deadline_};
      const Wto wto = weak_topological_order(edges());
      do {
        changed_ = false;
        for (const WtoElement& e : wto) run_element(e);
      } while (changed_);
    } catch (const DeadlineExceeded&) {
      result.status = AnalysisStatus::TimedOut;
    }
    std::set<std::string> seen;
    for (std::string& w : ops_.take_warnings()) {
      if (seen.insert(w).second) result.warnings.push_back(std::move(w));
    }
    result.iterations = iterations_;
    for (std::size_t i = 0; i < defined_; ++i) {
      const Vertex& v = vertices_[i];
      PredicateResult p;
      p.key = v.key;
      for (std::size_t k = 0; k < v.arity; ++k) p.names.push_back("X" + std::to_string(k + 1));
      p.success = v.success;
      if (config_.mode == AnalysisMode::GoalDependent) p.call = v.call;
      result.predicates.emplace(v.key, std::move(p));
    }
    return result;
  }

 private:
  void add_clause(Vertex& v, NormalClause clause) {
    std::size_t widest = 0;
    for (const BodyItem& item : clause.body) {
      if (const auto* call = std::get_if<CallGoal>(&item)) widest = std::max(widest, call->args.size());
    }
    const std::size_t base = clause.var_count();
    if (base + widest > kMaxVars) {
      throw std::length_error("clause of " + v.key.to_string() + " needs more than " + std::to_string(kMaxVars) +
                              " variables");
    }
    v.slot_base.push_back(base);
    v.width.push_back(base + widest);
    v.clauses.push_back(std::move(clause));
  }

  std::vector<std::vector<std::size_t>> edges() const {
    std::vector<std::set<std::size_t>> out(vertices_.size());
    for (std::size_t caller = 0; caller < vertices_.size(); ++caller) {
      for (const NormalClause& c : vertices_[caller].clauses) {
        for (const BodyItem& item : c.body) {
          const auto* call = std::get_if<CallGoal>(&item);
          if (call == nullptr) continue;
          auto it = index_.find(call->predicate);
          if (it == index_.end()) continue;
          // Success patterns flow from callee to caller; call patterns the
          // other way round, which the outer loop of goal-dependent mode covers.
          out[it->second].insert(caller);
          if (config_.mode == AnalysisMode::GoalDependent) out[caller].insert(it->second);
        }
      }
    }
    std::vector<std::vector<std::size_t>> succ;
    for (const auto& s : out) succ.emplace_back(s.begin(), s.end());
    return succ;
  }

  std::vector<std::string> unknown_warnings() const {
    std::set<std::string> out;
    for (const Vertex& v : vertices_) {
      for (const NormalClause& c : v.clauses) {
        for (const BodyItem& item : c.body) {
          const auto* call = std::get_if<CallGoal>(&item);
          if (call == nullptr || index_.contains(call->predicate) || is_failure(call->predicate)) continue;
          out.insert("no clauses for " + call->predicate.to_string() + "; calls are treated as unknown");
        }
      }
    }
    return {out.begin(), out.end()};
  }

  static bool is_failure(const PredicateKey& key) {
    return key.arity == 0 && (key.name == "fail" || key.name == "false");
  }

  void run_element(const WtoElement& e) {
    if (!e.component) {
      evaluate(e.vertex);
      return;
    }
    bool outer = false;
    while (true) {
      const bool saved = changed_;
      changed_ = false;
      evaluate(e.vertex);
      for (const WtoElement& sub : e.body) run_element(sub);
      const bool again = changed_;
      changed_ = saved || again;
      outer = outer || again;
      if (!again) break;
    }
    (void)outer;
  }

  void evaluate(std::size_t index) {
    ++iterations_;
    Vertex& v = vertices_[index];
    if (v.call.bottom && config_.mode == AnalysisMode::GoalDependent) return;
    Description acc = v.success;
    for (std::size_t i = 0; i < v.clauses.size(); ++i) {
      sharing::check_deadline();
      const Description out = evaluate_clause(v, i);
      acc = lub(config_.domain, acc, out);
    }
    acc = config_.rho_reduced && !acc.bottom ? rho_normalized(acc) : acc;
    if (acc != v.success) {
      v.success = std::move(acc);
      changed_ = true;
    }
  }

  Description rho_normalized(Description d) const {
    d.sh = rho_reduce(d.sh);
    return d;
  }

  Description entry_state(const Vertex& v, std::size_t clause) const {
    const VarSet all = VarSet::prefix(v.width[clause]);
    if (config_.mode == AnalysisMode::GoalIndependent) return top_element(config_.domain, all);
    const Description& cp = v.call;
    if (cp.bottom) return bottom_element(all);
    const VarSet rest = all - cp.vi;
    const Description fresh = top_element(config_.domain, rest);
    Description d = cp;
    d.vi = all;
    d.sh = cp.sh | fresh.sh;
    d.f = cp.f | fresh.f;
    d.gf = cp.gf | fresh.gf;
    d.l = cp.l | fresh.l;
    return d;
  }

  Description evaluate_clause(const Vertex& v, std::size_t clause) {
    const NormalClause& c = v.clauses[clause];
    const std::size_t base = v.slot_base[clause];
    Description d = entry_state(v, clause);
    std::vector<Binding> run;
    const auto flush = [&] {
      d = ops_.bind_all(d, run);
      run.clear();
    };
    for (const BodyItem& item : c.body) {
      if (d.bottom) break;
      if (const auto* b = std::get_if<Binding>(&item)) {
        run.push_back(*b);
        continue;
      }
      flush();
      if (d.bottom) break;
      d = call(d, std::get<CallGoal>(item), base);
    }
    flush();
    return ops_.project(d, VarSet::prefix(v.arity));
  }

  Description call(const Description& d, const CallGoal& goal, std::size_t base) {
    const std::size_t k = goal.args.size();
    const VarSet slots = VarSet::prefix(base + k) - VarSet::prefix(base);
    std::vector<Binding> links;
    for (std::size_t i = 0; i < k; ++i) {
      links.push_back({static_cast<VarId>(base + i), Term::variable(goal.args[i])});
    }
    const auto it = index_.find(goal.predicate);
    if (it == index_.end()) {
      if (is_failure(goal.predicate)) return bottom_element(d.vi);
      return extend_and_link(d, unknown_element(config_.domain, VarSet::prefix(k)), base, slots, links);
    }
    Vertex& callee = vertices_[it->second];
    if (config_.mode == AnalysisMode::GoalDependent) {
      const Description linked = ops_.bind_all(d, links);
      Description pattern = shift(ops_.project(linked, slots), -static_cast<int>(base));
      Description joined = lub(config_.domain, callee.call, pattern);
      if (config_.rho_reduced && !joined.bottom) joined = rho_normalized(joined);
      if (joined != callee.call) {
        callee.call = std::move(joined);
        changed_ = true;
      }
    }
    return extend_and_link(d, callee.success, base, slots, links);
  }

  Description extend_and_link(const Description& d, const Description& success, std::size_t base, VarSet slots,
                              const std::vector<Binding>& links) const {
    if (success.bottom) return bottom_element(d.vi);
    const Description s = shift(success, static_cast<int>(base));
    Description e = d;
    e.sh = nrel(slots, d.sh) | s.sh;
    e.f = (d.f - slots) | s.f;
    e.gf = (d.gf - slots) | s.gf;
    e.l = (d.l - slots) | s.l;
    e.pos = d.pos & s.pos;
    e.compound = (d.compound - slots) | s.compound;
    e = ops_.bind_all(e, links);
    return ops_.forget(e, slots);
  }

  AnalysisConfig config_;
  DomainOps ops_;
  std::chrono::steady_clock::time_point deadline_;
  std::vector<Vertex> vertices_;
  std::map<PredicateKey, std::size_t> index_;
  std::size_t defined_ = 0;
  bool changed_ = false;
  std::size_t iterations_ = 0;
};

}  // namespace

AnalysisResult analyze(const Program& program, const AnalysisConfig& config) {
  if (auto error = validate(config)) throw std::invalid_argument(*error);
  return Analyzer{program, config}.run();
}

std::string format(Domain domain, const Description& d, const VarNames& names) {
  if (d.bottom) return "bottom";
  const DomainTraits t = traits(domain);
  std::string out;
  if (t.modes) {
    out = t.ground_or_free ? format(SgflElement{d.vi, d.sh, d.f, d.gf, d.l}, names)
                           : format(SflElement{d.vi, d.sh, d.f, d.l}, names);
  } else if (t.sharing) {
    out = format(d.sh, names);
  }
  if (t.groundness) {
    if (!out.empty()) out += " / ";
    out += to_string(d.pos, names);
  }
  return out;
}

}  // namespace sharing
