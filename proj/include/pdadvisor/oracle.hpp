#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pdadvisor/candidates.hpp"
#include "pdadvisor/catalog.hpp"
#include "pdadvisor/errors.hpp"
#include "pdadvisor/workload.hpp"

// Brute-force references for the test suite. Nothing here calls the miner,
// the clusterer, the matrix builders, the planner or the selector; the plan
// formulas are written out again on purpose.

namespace pda::oracle {

struct Itemset {
  std::vector<std::size_t> items;
  std::size_t support = 0;
};

// All frequent closed itemsets by exhaustive subset enumeration (<= 16 items).
inline std::vector<Itemset> naive_closed_itemsets(const std::vector<std::vector<bool>>& objects,
                                                  std::size_t item_count, double minsup) {
  if (item_count > 16) throw CapExceeded("naive itemset enumeration is capped at 16 items");
  std::vector<Itemset> out;
  if (objects.empty()) return out;
  const double raw = std::ceil(minsup * static_cast<double>(objects.size()) - 1e-9);
  const std::size_t threshold = static_cast<std::size_t>(std::max(1.0, raw));
  for (std::uint32_t mask = 1; mask < (1u << item_count); ++mask) {
    std::size_t support = 0;
    std::vector<bool> common(item_count, true);
    for (const auto& row : objects) {
      bool contains = true;
      for (std::size_t i = 0; i < item_count; ++i) {
        if ((mask >> i & 1) && !row[i]) contains = false;
      }
      if (!contains) continue;
      ++support;
      for (std::size_t i = 0; i < item_count; ++i) common[i] = common[i] && row[i];
    }
    if (support < threshold || support == 0) continue;
    bool closed = true;
    for (std::size_t i = 0; i < item_count; ++i) {
      if (!(mask >> i & 1) && common[i]) closed = false;
    }
    if (!closed) continue;
    Itemset s;
    s.support = support;
    for (std::size_t i = 0; i < item_count; ++i) {
      if (mask >> i & 1) s.items.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.items < b.items;
  });
  return out;
}

// Q(P) written directly from the definition over 0/1 rows.
inline std::int64_t partition_quality(const std::vector<std::vector<bool>>& rows,
                                      const std::vector<std::size_t>& label) {
  std::int64_t q = 0;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      for (std::size_t c = 0; c < rows[a].size(); ++c) {
        if (label[a] == label[b]) {
          q += rows[a][c] != rows[b][c];
        } else {
          q += rows[a][c] && rows[b][c];
        }
      }
    }
  }
  return q;
}

struct PartitionResult {
  std::vector<std::vector<std::size_t>> classes;
  std::int64_t quality = 0;
};

// Exhaustive search over join-compatible set partitions (<= 8 rows). Ties go to
// fewer classes, then the lexicographically smallest class list.
template <class Signature>
PartitionResult best_partition(const std::vector<std::vector<bool>>& rows, const std::vector<Signature>& joins) {
  const std::size_t n = rows.size();
  if (n > 8) throw CapExceeded("partition enumeration is capped at 8 queries");
  PartitionResult best;
  bool found = false;
  std::vector<std::size_t> label(n, 0);
  // Restricted growth strings enumerate each set partition once.
  auto visit = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
    if (pos == n) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (label[a] == label[b] && !(joins[a] == joins[b])) return;
        }
      }
      std::vector<std::vector<std::size_t>> classes(used);
      for (std::size_t r = 0; r < n; ++r) classes[label[r]].push_back(r);
      const auto q = partition_quality(rows, label);
      if (!found || q < best.quality || (q == best.quality && classes.size() < best.classes.size()) ||
          (q == best.quality && classes.size() == best.classes.size() && classes < best.classes)) {
        best = {classes, q};
        found = true;
      }
      return;
    }
    for (std::size_t l = 0; l <= used; ++l) {
      label[pos] = l;
      self(self, pos + 1, std::max(used, l + 1));
    }
  };
  if (n > 0) visit(visit, 0, 0);
  return best;
}

struct EvalOptions {
  bool bitmap_via_btree = true;
  bool leaf_traversal = false;
  bool exclude_neq = true;
  std::int64_t min_cardinality = 2;
  double max_cardinality_fraction = 1.0;
};

// Second, deliberately naive plan evaluator: recomputes coverage,
// applicability and every formula for each (query, configuration) pair.
class NaiveEvaluator {
 public:
  NaiveEvaluator(const Workload& w, const CandidateSet& objects, const Catalog& catalog, EvalOptions opt = {})
      : w_(w), set_(objects), c_(catalog), opt_(opt) {}

  double query_cost(const Query& q, const std::vector<bool>& sel) const {
    const double pf = static_cast<double>(c_.fact.page_count);
    const double nf = static_cast<double>(c_.fact.row_count);
    const double sp = static_cast<double>(c_.page_size_bytes);

    double best = pf;
    std::vector<std::string> dims;
    for (const auto& j : q.joins) {
      if (std::find(dims.begin(), dims.end(), j.dim_attr.table) == dims.end()) dims.push_back(j.dim_attr.table);
    }
    for (const auto& d : dims) best += static_cast<double>(c_.table(d)->page_count);

    std::vector<AttrRef> needed;  // G ∪ R
    for (const auto& a : q.grouping) needed.push_back(a);
    for (const auto& p : q.restrictions) needed.push_back(p.attr);
    std::vector<AttrRef> restricted;  // predicates other than <>
    for (const auto& p : q.restrictions) {
      if (p.op != CompareOp::Ne) restricted.push_back(p.attr);
    }
    auto in = [](const std::vector<AttrRef>& v, const AttrRef& a) { return std::find(v.begin(), v.end(), a) != v.end(); };

    const std::size_t nv = set_.views.size();
    for (std::size_t v = 0; v < nv; ++v) {
      if (!sel[v] || !answers(set_.views[v], q, needed)) continue;
      const auto& view = set_.views[v];
      const double pages = std::ceil(static_cast<double>(view.size_bytes) / sp);
      best = std::min(best, pages);
      const auto rows = static_cast<std::int64_t>(std::ceil(view.row_estimate));
      if (rows < 1) continue;
      for (std::size_t i = 0; i < set_.indexes.size(); ++i) {
        const auto& idx = set_.indexes[i];
        if (!sel[nv + i]) continue;
        if (idx.target_view && *idx.target_view != view.id) continue;
        bool ok = true;
        for (const auto& a : idx.attributes) ok = ok && in(view.attributes, a) && in(restricted, a);
        if (!ok) continue;
        double traversal = 0.0, n = static_cast<double>(rows);
        for (const auto& a : idx.attributes) {
          const auto& st = c_.attribute(a);
          std::int64_t levels = 0;
          for (double reach = 1.0; reach < static_cast<double>(rows); reach *= static_cast<double>(st.blocking_factor)) ++levels;
          const double leaves = std::ceil(st.selectivity * static_cast<double>(rows) / static_cast<double>(st.blocking_factor) - 1e-12);
          traversal += static_cast<double>(levels) + std::max(0.0, leaves - 1.0);
          n *= st.selectivity;
        }
        double search = 0.0;
        if (pages == 1.0 && n > 0.0) search = 1.0;
        if (pages > 1.0) search = pages * (1.0 - std::pow(1.0 - 1.0 / pages, n));
        best = std::min(best, traversal + search);
      }
    }

    struct Use {
      double traversal;
      std::vector<std::pair<AttrRef, double>> restricted;
    };
    std::vector<Use> uses;
    for (std::size_t i = 0; i < set_.indexes.size(); ++i) {
      const auto& idx = set_.indexes[i];
      if (!sel[nv + i] || idx.kind != IndexKind::BitmapJoin) continue;
      if (std::find(dims.begin(), dims.end(), idx.table) == dims.end()) continue;
      bool relevant = false, any = false;
      double d = 1.0, card = 1.0;
      Use u{0.0, {}};
      for (const auto& a : idx.attributes) {
        const auto& st = c_.attribute(a);
        card *= static_cast<double>(st.cardinality);
        relevant = relevant || (in(needed, a) && representative(q, a));
        if (in(restricted, a)) {
          double count = 0;
          for (const auto& p : q.restrictions) count += (p.attr == a && p.op != CompareOp::Ne);
          d *= count;
          u.restricted.push_back({a, std::min(1.0, count / static_cast<double>(st.cardinality))});
          any = true;
        } else {
          d *= static_cast<double>(st.cardinality);
        }
      }
      if (!relevant || !any) continue;
      card = std::min(card, std::max(1.0, nf));
      if (opt_.bitmap_via_btree) {
        const double m = static_cast<double>(c_.btree_order);
        u.traversal = d * nf / (8.0 * sp) + std::max(0.0, std::log(card) / std::log(m) - 1.0);
        if (opt_.leaf_traversal) u.traversal += card / (m - 1.0);
      } else {
        u.traversal = d * card * nf / (8.0 * sp);
      }
      uses.push_back(u);
    }
    for (std::size_t mask = 1; mask < (std::size_t{1} << uses.size()); ++mask) {
      double cost = 0.0, fraction = 1.0;
      std::vector<AttrRef> counted;
      for (std::size_t k = 0; k < uses.size(); ++k) {
        if (!(mask >> k & 1)) continue;
        cost += uses[k].traversal;
        for (const auto& [a, s] : uses[k].restricted) {
          if (in(counted, a)) continue;
          counted.push_back(a);
          fraction *= s;
        }
      }
      if (pf > 0.0) cost += pf * (1.0 - std::exp(-nf * fraction / pf));
      best = std::min(best, cost);
    }
    return best;
  }

  double workload_cost(const std::vector<bool>& sel) const {
    double total = 0.0;
    for (const auto& q : w_.queries) total += query_cost(q, sel);
    return total;
  }

 private:
  bool answers(const CandidateView& v, const Query& q, const std::vector<AttrRef>& needed) const {
    for (const auto& j : q.joins) {
      if (std::find(v.joins.begin(), v.joins.end(), j) == v.joins.end()) return false;
    }
    for (const auto& a : needed) {
      if (std::find(v.attributes.begin(), v.attributes.end(), a) == v.attributes.end()) return false;
    }
    auto has = [&](Aggregate fn, const std::optional<AttrRef>& attr) {
      for (const auto& m : v.measures) {
        if (m.fn == fn && m.attr == attr) return true;
      }
      return false;
    };
    for (const auto& m : q.measures) {
      if (m.fn == Aggregate::Avg) {
        if (!has(Aggregate::Sum, m.attr)) return false;
        if (!has(Aggregate::Count, m.attr) && !has(Aggregate::Count, std::nullopt)) return false;
      } else if (!has(m.fn, m.attr)) {
        return false;
      }
    }
    return true;
  }

  // Re-statement of the preselection rules for non-join attributes.
  bool representative(const Query& q, const AttrRef& a) const {
    for (const auto& j : q.joins) {
      if (j.fact_attr == a || j.dim_attr == a) return true;
    }
    if (opt_.exclude_neq) {
      bool usable = std::find(q.grouping.begin(), q.grouping.end(), a) != q.grouping.end();
      for (const auto& p : q.restrictions) usable = usable || (p.attr == a && p.op != CompareOp::Ne);
      if (!usable) return false;
    }
    const auto& st = c_.attribute(a);
    if (st.cardinality < opt_.min_cardinality) return false;
    const auto rows = c_.table(a.table)->row_count;
    if (rows > 0 && static_cast<double>(st.cardinality) > opt_.max_cardinality_fraction * static_cast<double>(rows)) {
      return false;
    }
    return true;
  }

  const Workload& w_;
  const CandidateSet& set_;
  const Catalog& c_;
  EvalOptions opt_;
};

struct ConfigurationResult {
  std::vector<std::size_t> selected;
  std::int64_t occupied_bytes = 0;
  double cost = 0.0;
};

// Minimum workload cost over every subset whose total size fits the budget
// (<= 14 candidates). Ties: fewer objects, then lexicographic ordinals.
inline ConfigurationResult best_configuration(const CandidateSet& objects, std::int64_t budget,
                                              const NaiveEvaluator& eval) {
  const std::size_t n = objects.size();
  if (n > 14) throw CapExceeded("configuration enumeration is capped at 14 candidates");
  ConfigurationResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t bytes = 0;
    std::vector<bool> sel(n, false);
    std::vector<std::size_t> picked;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask >> k & 1) {
        sel[k] = true;
        bytes += objects.size_bytes(k);
        picked.push_back(k);
      }
    }
    if (bytes > budget) continue;
    const double cost = eval.workload_cost(sel);
    const bool better = cost < best.cost ||
                        (cost == best.cost && (picked.size() < best.selected.size() ||
                                               (picked.size() == best.selected.size() && picked < best.selected)));
    if (better) best = {picked, bytes, cost};
  }
  return best;
}

}  // namespace pda::oracle
