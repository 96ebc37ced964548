// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include "sharing/precision.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sharing {
namespace {

using nlohmann::json;

json names_of(VarSet v, const VarNames& names) {
  json out = json::array();
  for (VarId x : v) out.push_back(names.at(x));
  return out;
}

json description_json(Domain domain, const Description& d, const VarNames& names) {
  json out = json::object();
  if (d.bottom) {
    out["bottom"] = true;
    return out;
  }
  const DomainTraits t = traits(domain);
  if (t.sharing) {
    json sh = json::array();
    for (VarSet g : d.sh) sh.push_back(names_of(g, names));
    out["sh"] = std::move(sh);
  }
  if (t.modes) {
    out["f"] = names_of(d.f, names);
    if (t.ground_or_free) out["gf"] = names_of(d.gf, names);
    out["l"] = names_of(d.l, names);
  }
  if (t.groundness) out["pos"] = to_string(d.pos, names);
  return out;
}

json metrics_json(const Metrics& m) {
  return json{{"I", m.I}, {"G", m.G}, {"F", m.F}, {"GF", m.GF}, {"L", m.L}};
}

json config_json(const AnalysisConfig& c) {
  return json{{"domain", to_string(c.domain)},
              {"mode", to_string(c.mode)},
              {"order", to_string(c.order)},
              {"klin", c.klin},
              {"free_split", c.free_split},
              {"compound_reduce", c.compound_reduce},
              {"occurs_check", c.occurs_check},
              {"psd", c.rho_reduced},
              {"timeout", c.timeout_seconds}};
}

json result_json(const AnalysisResult& result, std::string_view benchmark) {
  json out;
  out["benchmark"] = benchmark;
  out["config"] = config_json(result.config);
  out["status"] = result.status == AnalysisStatus::Completed ? "completed" : "timeout";
  json preds = json::array();
  for (const auto& [key, p] : result.predicates) {
    json entry{{"name", key.name}, {"arity", key.arity}};
    entry["success"] = description_json(result.config.domain, p.success, p.names);
    if (p.call) entry["call"] = description_json(result.config.domain, *p.call, p.names);
    preds.push_back(std::move(entry));
  }
  out["per_predicate"] = std::move(preds);
  const auto m = measure(result);
  out["metrics"] = m ? metrics_json(*m) : json(nullptr);
  out["warnings"] = result.warnings;
  return out;
}

std::string percent_text(const std::optional<double>& p) {
  if (!p) return "?";
  if (std::isinf(*p)) return "+inf";
  std::ostringstream os;
  os << std::showpos << std::fixed << std::setprecision(1) << *p;
  return os.str();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

}  // namespace

Metrics& Metrics::operator+=(const Metrics& o) {
  I += o.I;
  G += o.G;
  F += o.F;
  GF += o.GF;
  L += o.L;
  return *this;
}

Metrics measure(Domain domain, const Description& d) {
  const std::size_t n = d.vi.size();
  Metrics m;
  if (d.bottom) {
    m.I = n * (n - (n > 0 ? 1 : 0)) / 2;
    m.G = m.F = m.GF = m.L = n;
    return m;
  }
  const DomainTraits t = traits(domain);
  VarSet ground;
  if (t.sharing) ground = d.vi - d.sh.vars();
  if (t.groundness) ground |= ground_vars(d.pos, d.vi);
  for (VarId x : d.vi) {
    for (VarId y : d.vi) {
      if (y <= x) continue;
      bool independent = false;
      if (t.sharing) {
        const VarSet pair = VarSet::single(x) | VarSet::single(y);
        independent = std::none_of(d.sh.begin(), d.sh.end(), [&](VarSet g) { return pair.subset_of(g); });
      }
      if (!independent && t.groundness) independent = entails_binary_disjunction(d.pos, x, y);
      if (independent) ++m.I;
    }
  }
  m.G = ground.size();
  m.F = t.modes ? d.f.size() : 0;
  m.L = t.modes ? (d.l | ground).size() : ground.size();
  m.GF = t.ground_or_free ? (d.gf | ground).size() : (ground | (t.modes ? d.f : VarSet{})).size();
  return m;
}

std::optional<Metrics> measure(const AnalysisResult& result) {
  if (result.status != AnalysisStatus::Completed) return std::nullopt;
  Metrics total;
  for (const auto& [key, p] : result.predicates) {
    total += measure(result.config.domain, p.success);
    if (result.config.mode == AnalysisMode::GoalDependent && p.call) total += measure(result.config.domain, *p.call);
  }
  return total;
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::I: return "I";
    case Quantity::G: return "G";
    case Quantity::F: return "F";
    case Quantity::GF: return "GF";
    case Quantity::L: return "L";
  }
  return "?";
}

std::size_t get(const Metrics& m, Quantity q) {
  switch (q) {
    case Quantity::I: return m.I;
    case Quantity::G: return m.G;
    case Quantity::F: return m.F;
    case Quantity::GF: return m.GF;
    case Quantity::L: return m.L;
  }
  return 0;
}

std::string_view label(PrecisionClass c) {
  switch (c) {
    case PrecisionClass::Gain20: return "p > 20";
    case PrecisionClass::Gain10: return "10 < p <= 20";
    case PrecisionClass::Gain5: return "5 < p <= 10";
    case PrecisionClass::Gain2: return "2 < p <= 5";
    case PrecisionClass::Gain0: return "0 < p <= 2";
    case PrecisionClass::Same: return "same";
    case PrecisionClass::Loss0: return "-2 <= p < 0";
    case PrecisionClass::Loss2: return "-5 <= p < -2";
    case PrecisionClass::Loss5: return "-10 <= p < -5";
    case PrecisionClass::Loss10: return "-20 <= p < -10";
    case PrecisionClass::Loss20: return "p < -20";
    case PrecisionClass::Unknown: return "unknown";
  }
  return "?";
}

bool is_gain(PrecisionClass c) { return c < PrecisionClass::Same; }
bool is_loss(PrecisionClass c) { return c > PrecisionClass::Same && c != PrecisionClass::Unknown; }

double percent_change(std::size_t baseline, std::size_t enhanced) {
  if (baseline == 0) return enhanced == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (static_cast<double>(enhanced) - static_cast<double>(baseline)) / static_cast<double>(baseline) * 100.0;
}

PrecisionClass classify(std::size_t baseline, std::size_t enhanced) {
  if (baseline == enhanced) return PrecisionClass::Same;
  const double p = percent_change(baseline, enhanced);
  if (p > 20) return PrecisionClass::Gain20;
  if (p > 10) return PrecisionClass::Gain10;
  if (p > 5) return PrecisionClass::Gain5;
  if (p > 2) return PrecisionClass::Gain2;
  if (p > 0) return PrecisionClass::Gain0;
  if (p >= -2) return PrecisionClass::Loss0;
  if (p >= -5) return PrecisionClass::Loss2;
  if (p >= -10) return PrecisionClass::Loss5;
  if (p >= -20) return PrecisionClass::Loss10;
  return PrecisionClass::Loss20;
}

PrecisionClass overall(const std::vector<PrecisionClass>& classes) {
  if (std::find(classes.begin(), classes.end(), PrecisionClass::Unknown) != classes.end()) {
    return PrecisionClass::Unknown;
  }
  PrecisionClass worst = PrecisionClass::Same;
  PrecisionClass best = PrecisionClass::Same;
  for (PrecisionClass c : classes) {
    if (is_loss(c)) worst = std::max(worst, c);
    if (is_gain(c)) best = std::min(best, c);
  }
  return worst != PrecisionClass::Same ? worst : best;
}

std::size_t Comparison::count(std::optional<Quantity> q, PrecisionClass c) const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const BenchmarkComparison& r) {
    return (q ? r.classes[static_cast<std::size_t>(*q)] : r.overall) == c;
  }));
}

double Comparison::distribution(std::optional<Quantity> q, PrecisionClass c) const {
  if (rows.empty()) return 0.0;
  return 100.0 * static_cast<double>(count(q, c)) / static_cast<double>(rows.size());
}

Comparison compare(const std::vector<BenchmarkMetrics>& baseline, const std::vector<BenchmarkMetrics>& enhanced) {
  std::map<std::string, const BenchmarkMetrics*> base;
  std::map<std::string, const BenchmarkMetrics*> enh;
  for (const auto& b : baseline) {
    if (!base.emplace(b.benchmark, &b).second) throw std::invalid_argument("duplicate baseline benchmark " + b.benchmark);
  }
  for (const auto& e : enhanced) {
    if (!enh.emplace(e.benchmark, &e).second) throw std::invalid_argument("duplicate enhanced benchmark " + e.benchmark);
  }
  std::string missing;
  for (const auto& [name, _] : base) {
    if (!enh.contains(name)) missing += " " + name + " (baseline only)";
  }
  for (const auto& [name, _] : enh) {
    if (!base.contains(name)) missing += " " + name + " (enhanced only)";
  }
  if (!missing.empty()) throw std::invalid_argument("benchmark sets differ:" + missing);

  Comparison out;
  for (const auto& [name, b] : base) {
    const BenchmarkMetrics* e = enh.at(name);
    BenchmarkComparison row;
    row.benchmark = name;
    row.baseline = b->metrics;
    row.enhanced = e->metrics;
    std::vector<PrecisionClass> classes;
    for (std::size_t i = 0; i < kQuantities.size(); ++i) {
      if (b->metrics && e->metrics) {
        const std::size_t x = get(*b->metrics, kQuantities[i]);
        const std::size_t y = get(*e->metrics, kQuantities[i]);
        row.percent[i] = percent_change(x, y);
        row.classes[i] = classify(x, y);
      } else {
        row.classes[i] = PrecisionClass::Unknown;
      }
      classes.push_back(row.classes[i]);
    }
    row.overall = overall(classes);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_table(const Comparison& c) {
  std::ostringstream os;
  constexpr std::size_t kLabel = 16;
  constexpr std::size_t kCol = 8;
  os << pad("class", kLabel) << pad_left("O", kCol);
  for (Quantity q : kQuantities) os << pad_left(std::string(to_string(q)), kCol);
  os << '\n';
  for (PrecisionClass pc : kPrecisionClasses) {
    bool any = c.count(std::nullopt, pc) > 0;
    for (Quantity q : kQuantities) any = any || c.count(q, pc) > 0;
    if (!any && pc != PrecisionClass::Same) continue;
    os << pad(std::string(label(pc)), kLabel);
    std::ostringstream cell;
    cell << std::fixed << std::setprecision(1) << c.distribution(std::nullopt, pc);
    os << pad_left(cell.str(), kCol);
    for (Quantity q : kQuantities) {
      std::ostringstream v;
      v << std::fixed << std::setprecision(1) << c.distribution(q, pc);
      os << pad_left(v.str(), kCol);
    }
    os << '\n';
  }
  os << '\n';
  std::size_t width = std::string_view("benchmark").size();
  for (const auto& r : c.rows) width = std::max(width, r.benchmark.size());
  os << pad("benchmark", width + 2);
  for (Quantity q : kQuantities) os << pad_left(std::string(to_string(q)), 16);
  os << "  overall\n";
  for (const auto& r : c.rows) {
    os << pad(r.benchmark, width + 2);
    for (std::size_t i = 0; i < kQuantities.size(); ++i) {
      std::string cell = "?";
      if (r.baseline && r.enhanced) {
        cell = std::to_string(get(*r.baseline, kQuantities[i])) + "->" +
               std::to_string(get(*r.enhanced, kQuantities[i])) + " " + percent_text(r.percent[i]);
      }
      os << pad_left(cell, 16);
    }
    os << "  " << label(r.overall) << '\n';
  }
  return os.str();
}

std::string result_to_json(const AnalysisResult& result, std::string_view benchmark, int indent) {
  return result_json(result, benchmark).dump(indent);
}

std::string results_to_json(const std::vector<std::pair<std::string, AnalysisResult>>& runs, int indent) {
  json out = json::array();
  for (const auto& [name, r] : runs) out.push_back(result_json(r, name));
  return out.dump(indent);
}

std::string result_to_table(const AnalysisResult& result, std::string_view benchmark) {
  std::ostringstream os;
  os << "benchmark: " << benchmark << '\n';
  os << "domain: " << to_string(result.config.domain) << "  mode: " << to_string(result.config.mode)
     << "  order: " << to_string(result.config.order) << '\n';
  os << "status: " << (result.status == AnalysisStatus::Completed ? "completed" : "timeout") << '\n';
  std::size_t width = 0;
  for (const auto& [key, p] : result.predicates) width = std::max(width, key.to_string().size());
  for (const auto& [key, p] : result.predicates) {
    os << pad(key.to_string(), width + 2) << "success " << format(result.config.domain, p.success, p.names) << '\n';
    if (p.call) {
      os << pad("", width + 2) << "call    " << format(result.config.domain, *p.call, p.names) << '\n';
    }
  }
  if (const auto m = measure(result)) {
    os << "metrics: I=" << m->I << " G=" << m->G << " F=" << m->F << " GF=" << m->GF << " L=" << m->L << '\n';
  } else {
    os << "metrics: unknown\n";
  }
  for (const auto& w : result.warnings) os << "warning: " << w << '\n';
  return os.str();
}

std::string comparison_to_json(const Comparison& c, int indent) {
  json rows = json::array();
  for (const auto& r : c.rows) {
    json row{{"benchmark", r.benchmark}, {"overall", label(r.overall)}};
    for (std::size_t i = 0; i < kQuantities.size(); ++i) {
      json q{{"class", label(r.classes[i])}};
      if (r.percent[i]) {
        q["percent"] = std::isinf(*r.percent[i]) ? json("inf") : json(*r.percent[i]);
      } else {
        q["percent"] = nullptr;
      }
      if (r.baseline) q["baseline"] = get(*r.baseline, kQuantities[i]);
      if (r.enhanced) q["enhanced"] = get(*r.enhanced, kQuantities[i]);
      row[std::string(to_string(kQuantities[i]))] = std::move(q);
    }
    rows.push_back(std::move(row));
  }
  json dist = json::object();
  for (std::optional<Quantity> q :
       {std::optional<Quantity>{}, std::optional{Quantity::I}, std::optional{Quantity::G},
        std::optional{Quantity::F}, std::optional{Quantity::GF}, std::optional{Quantity::L}}) {
    json col = json::object();
    for (PrecisionClass pc : kPrecisionClasses) {
      if (c.count(q, pc) > 0) col[std::string(label(pc))] = c.distribution(q, pc);
    }
    dist[q ? std::string(to_string(*q)) : std::string("O")] = std::move(col);
  }
  return json{{"distribution", dist}, {"benchmarks", rows}}.dump(indent);
}

std::vector<BenchmarkMetrics> read_metrics(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  const auto read_one = [](const json& run) {
    if (!run.is_object() || !run.contains("benchmark") || !run.contains("metrics")) {
      throw std::invalid_argument("run document needs 'benchmark' and 'metrics'");
    }
    BenchmarkMetrics out;
    out.benchmark = run.at("benchmark").get<std::string>();
    const json& m = run.at("metrics");
    const bool timed_out = run.value("status", std::string("completed")) != "completed";
    if (!m.is_null() && !timed_out) {
      out.metrics = Metrics{m.at("I").get<std::size_t>(), m.at("G").get<std::size_t>(),
                            m.at("F").get<std::size_t>(), m.at("GF").get<std::size_t>(),
                            m.at("L").get<std::size_t>()};
    }
    return out;
  };
  std::vector<BenchmarkMetrics> out;
  try {
    if (doc.is_array()) {
      for (const json& run : doc) out.push_back(read_one(run));
    } else {
      out.push_back(read_one(doc));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed run document: ") + e.what());
  }
  return out;
}

}  // namespace sharing
