#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdadvisor/catalog.hpp"

namespace pda {

enum class Aggregate { Sum, Avg, Count, Min, Max };

inline const char* to_string(Aggregate a) {
  switch (a) {
    case Aggregate::Sum: return "SUM";
    case Aggregate::Avg: return "AVG";
    case Aggregate::Count: return "COUNT";
    case Aggregate::Min: return "MIN";
    case Aggregate::Max: return "MAX";
  }
  return "?";
}

// An aggregated measure. COUNT(*) has no attribute.
struct Measure {
  Aggregate fn = Aggregate::Sum;
  std::optional<AttrRef> attr;

  std::string label() const {
    return std::string(to_string(fn)) + "(" + (attr ? attr->label() : std::string("*")) + ")";
  }

  auto operator<=>(const Measure&) const = default;
};

enum class CompareOp { Eq, Lt, Gt, Le, Ge, Ne, Between, Like };

inline const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Between: return "BETWEEN";
    case CompareOp::Like: return "LIKE";
  }
  return "?";
}

struct Predicate {
  AttrRef attr;
  CompareOp op = CompareOp::Eq;
  std::vector<std::string> literals;
};

// Equi-join between a fact foreign key and a dimension attribute.
struct JoinPair {
  AttrRef fact_attr;
  AttrRef dim_attr;

  auto operator<=>(const JoinPair&) const = default;
};

struct Query {
  std::string id;
  std::vector<AttrRef> grouping;
  std::vector<Measure> measures;
  std::vector<Predicate> restrictions;
  std::vector<JoinPair> joins;

  std::vector<JoinPair> join_set() const {
    auto s = joins;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  bool joins_table(std::string_view table) const {
    return std::any_of(joins.begin(), joins.end(),
                       [&](const JoinPair& j) { return j.dim_attr.table == table; });
  }

  // Attributes restricted by at least one predicate that an index can serve
  // (anything but <>), in first-appearance order.
  std::vector<AttrRef> restriction_attributes() const {
    std::vector<AttrRef> out;
    for (const auto& p : restrictions) {
      if (p.op == CompareOp::Ne) continue;
      if (std::find(out.begin(), out.end(), p.attr) == out.end()) out.push_back(p.attr);
    }
    return out;
  }

  // G ∪ R: what a view must carry to answer this query.
  std::vector<AttrRef> grouping_and_restriction_attributes() const {
    std::vector<AttrRef> out;
    auto add = [&](const AttrRef& a) {
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    };
    for (const auto& a : grouping) add(a);
    for (const auto& p : restrictions) add(p.attr);
    return out;
  }

  // Number of index-usable predicates on `attr` (the d of the bitmap model).
  std::int64_t predicate_count(const AttrRef& attr) const {
    return std::count_if(restrictions.begin(), restrictions.end(), [&](const Predicate& p) {
      return p.attr == attr && p.op != CompareOp::Ne;
    });
  }
};

struct Workload {
  std::vector<Query> queries;
  std::string source_digest;

  std::size_t size() const { return queries.size(); }
};

// Administrator knowledge applied before mining: attributes excluded from the
// representative set. Join attributes are never excluded.
struct RuleSet {
  bool exclude_neq = true;
  std::int64_t min_cardinality = 2;
  double max_cardinality_fraction = 1.0;

  static RuleSet none() { return {false, 0, 1.0}; }
};

inline bool rule_excludes(const Query& q, const AttrRef& attr, const RuleSet& rules,
                          const Catalog& catalog) {
  if (rules.exclude_neq) {
    const bool grouped = std::find(q.grouping.begin(), q.grouping.end(), attr) != q.grouping.end();
    bool only_neq = !grouped;
    for (const auto& p : q.restrictions) {
      if (p.attr == attr && p.op != CompareOp::Ne) only_neq = false;
    }
    if (only_neq) return true;
  }
  const auto& stats = catalog.attribute(attr);
  if (stats.cardinality < rules.min_cardinality) return true;
  const TableStats* owner = catalog.table(attr.table);
  if (owner->row_count > 0 &&
      static_cast<double>(stats.cardinality) >
          rules.max_cardinality_fraction * static_cast<double>(owner->row_count)) {
    return true;
  }
  return false;
}

// Attributes of q that may support a view or an index: grouping attributes,
// both sides of every join, then restriction attributes, minus rule exclusions.
// Measures never appear.
inline std::vector<AttrRef> representative_attributes(const Query& q, const RuleSet& rules,
                                                      const Catalog& catalog) {
  std::vector<AttrRef> out;
  std::vector<AttrRef> join_attrs;
  for (const auto& j : q.joins) {
    join_attrs.push_back(j.fact_attr);
    join_attrs.push_back(j.dim_attr);
  }
  auto is_join = [&](const AttrRef& a) {
    return std::find(join_attrs.begin(), join_attrs.end(), a) != join_attrs.end();
  };
  auto add = [&](const AttrRef& a) {
    if (std::find(out.begin(), out.end(), a) != out.end()) return;
    if (!is_join(a) && rule_excludes(q, a, rules, catalog)) return;
    out.push_back(a);
  };
  for (const auto& a : q.grouping) add(a);
  for (const auto& a : join_attrs) add(a);
  for (const auto& p : q.restrictions) add(p.attr);
  return out;
}

}  // namespace pda
