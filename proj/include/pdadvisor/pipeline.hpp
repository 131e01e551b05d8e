#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pdadvisor/clustering.hpp"
#include "pdadvisor/itemsets.hpp"
#include "pdadvisor/matrices.hpp"
#include "pdadvisor/planner.hpp"
#include "pdadvisor/selector.hpp"

namespace pda {

enum class AdviceMode { Joint, ViewsOnly, IndexesOnly };

inline AdviceMode parse_mode(const std::string& s) {
  if (s == "joint") return AdviceMode::Joint;
  if (s == "views") return AdviceMode::ViewsOnly;
  if (s == "indexes") return AdviceMode::IndexesOnly;
  throw ValidationError("mode", "expected joint, views or indexes");
}

struct AdvisorOptions {
  double minsup = 0.01;
  RuleSet rules;
  FusionOptions fusion;
  PlannerOptions planner;
  AdviceMode mode = AdviceMode::Joint;
};

// Intermediate products of candidate generation.
struct Mining {
  BinaryMatrix query_attribute;
  Partition partition;
  std::vector<CandidateView> views;
  Context context;
  std::vector<ClosedItemset> itemsets;
  std::vector<CandidateIndex> indexes;
};

// QA matrix -> clustering and fusion (V_C) -> closed itemsets over Q ∪ V_C
// -> index candidates (I_C).
inline Mining mine_candidates(const Workload& w, const Catalog& catalog, const AdvisorOptions& opt) {
  Mining m;
  m.query_attribute = build_query_attribute(w, opt.rules, catalog);
  m.partition = cluster(m.query_attribute, join_signatures(w));
  m.views = candidate_views(w, m.partition, catalog, opt.fusion);
  m.context = mining_context(m.query_attribute, m.views);
  m.itemsets = mine_closed(m.context, opt.minsup);
  std::vector<JoinPair> keys;
  for (const auto& q : w.queries) keys.insert(keys.end(), q.joins.begin(), q.joins.end());
  m.indexes = itemsets_to_indexes(m.itemsets, m.context.items, catalog, m.views, keys);
  return m;
}

// Restricts the candidate set to the object kinds allowed by the mode.
inline CandidateSet restrict_to_mode(const Mining& m, AdviceMode mode) {
  CandidateSet set;
  if (mode != AdviceMode::IndexesOnly) set.views = m.views;
  for (const auto& i : m.indexes) {
    if (mode == AdviceMode::ViewsOnly) continue;
    if (mode == AdviceMode::IndexesOnly && i.kind != IndexKind::BitmapJoin) continue;
    set.indexes.push_back(i);
  }
  return set;
}

// Total size of every joint candidate.
inline std::int64_t candidate_bytes(const Mining& m) {
  std::int64_t s = 0;
  for (const auto& v : m.views) s += v.size_bytes;
  for (const auto& i : m.indexes) s += i.size_bytes;
  return s;
}

// S_VI: space occupied by the joint configuration selected with no storage
// constraint. Budgets given as percentages refer to it.
inline std::int64_t unconstrained_footprint(const Workload& w, const Catalog& catalog, const Mining& m,
                                            const AdvisorOptions& opt, const ObjectiveParams& params) {
  const Universe u = make_universe(w, restrict_to_mode(m, AdviceMode::Joint), opt.rules, catalog);
  const Planner planner(w, u, catalog, opt.planner);
  return Selector(planner, catalog, params).run(candidate_bytes(m)).occupied_bytes;
}

struct Advice {
  Universe universe;
  Configuration configuration;
  std::vector<PlanCost> before;
  std::vector<PlanCost> after;
  double cost_before = 0.0;
  double cost_after = 0.0;
  std::int64_t s_vi_bytes = 0;
};

inline Advice advise(const Workload& w, const Catalog& catalog, const Mining& m, std::int64_t budget,
                     const AdvisorOptions& opt, const ObjectiveParams& params) {
  Advice a;
  a.s_vi_bytes = unconstrained_footprint(w, catalog, m, opt, params);
  a.universe = make_universe(w, restrict_to_mode(m, opt.mode), opt.rules, catalog);
  const Planner planner(w, a.universe, catalog, opt.planner);
  const Selector selector(planner, catalog, params);
  a.configuration = selector.run(budget);
  const Selection none(a.universe.objects.size(), false);
  const Selection chosen = selection_of(a.configuration, a.universe.objects.size());
  a.before = planner.plan_all(none);
  a.after = planner.plan_all(chosen);
  for (const auto& p : a.before) a.cost_before += p.pages;
  for (const auto& p : a.after) a.cost_after += p.pages;
  return a;
}

// "<n>" bytes or "<x>%" of S_VI.
inline std::int64_t parse_budget(const std::string& text, std::int64_t s_vi) {
  if (text.empty()) throw ValidationError("budget", "empty");
  try {
    if (text.back() == '%') {
      const double pct = std::stod(text.substr(0, text.size() - 1));
      if (pct < 0) throw ValidationError("budget", "must be non-negative");
      return static_cast<std::int64_t>(std::floor(pct / 100.0 * static_cast<double>(s_vi)));
    }
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size() || v < 0) throw ValidationError("budget", "expected bytes or a percentage");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("budget", "expected bytes or a percentage, got '" + text + "'");
  }
}

}  // namespace pda
