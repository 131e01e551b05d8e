#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "pdadvisor/binary_matrix.hpp"
#include "pdadvisor/candidates.hpp"
#include "pdadvisor/cost_model.hpp"
#include "pdadvisor/matrices.hpp"
#include "pdadvisor/workload.hpp"

namespace pda {

// Candidate objects together with their QV, QI and VI matrices.
struct Universe {
  CandidateSet objects;
  BinaryMatrix qv, qi, vi;
};

inline Universe make_universe(const Workload& w, CandidateSet objects, const RuleSet& rules,
                              const Catalog& catalog) {
  Universe u;
  u.qv = build_query_view(w, objects.views);
  u.qi = build_query_index(w, objects.indexes, rules, catalog);
  u.vi = build_view_index(objects.views, objects.indexes);
  u.objects = std::move(objects);
  return u;
}

struct PlanCost {
  std::string query;
  std::string plan = "baseline";
  std::vector<std::size_t> objects;  // ordinals in the universe
  double pages = 0.0;
};

// Bitmaps are reached through a B-tree on the key values unless
// bitmap.via_btree is cleared, in which case every bitmap is scanned.
struct PlannerOptions {
  BitmapCostOptions bitmap{true, false};
  std::size_t max_bitmap_combination = 12;
};

// A configuration is a membership mask over universe ordinals.
using Selection = std::vector<bool>;

// Prices queries against a configuration by taking the cheapest plan from
// {baseline, view_scan, view_index, bitmap_join}.
class Planner {
 public:
  Planner(const Workload& w, const Universe& u, const Catalog& catalog, PlannerOptions opt = {})
      : w_(&w), u_(&u), opt_(opt) {
    const auto nv = u.objects.views.size();
    affects_.resize(u.objects.size());
    const double fact_rows = static_cast<double>(catalog.fact.row_count);
    const double fact_pages = static_cast<double>(catalog.fact.page_count);
    const double sp = static_cast<double>(catalog.page_size_bytes);

    for (std::size_t qi = 0; qi < w.queries.size(); ++qi) {
      const Query& q = w.queries[qi];
      QueryPlans p;
      p.baseline = fact_pages;
      std::vector<std::string> seen;
      for (const auto& j : q.joins) {
        if (std::find(seen.begin(), seen.end(), j.dim_attr.table) != seen.end()) continue;
        seen.push_back(j.dim_attr.table);
        p.baseline += static_cast<double>(catalog.dimension(j.dim_attr.table).page_count);
      }

      const auto restricted = q.restriction_attributes();
      auto is_restricted = [&](const AttrRef& a) {
        return std::find(restricted.begin(), restricted.end(), a) != restricted.end();
      };

      for (std::size_t v = 0; v < nv; ++v) {
        if (!u.qv.at(qi, v)) continue;
        const auto& view = u.objects.views[v];
        p.scans.push_back({v, static_cast<double>(pages_of(view.size_bytes, catalog))});
        affects_[v].push_back(qi);
        if (view.rows() < 1) continue;
        for (std::size_t i = 0; i < u.objects.indexes.size(); ++i) {
          const auto& idx = u.objects.indexes[i];
          if (!u.vi.at(v, i)) continue;
          if (!std::all_of(idx.attributes.begin(), idx.attributes.end(), is_restricted)) continue;
          std::vector<IndexedAttribute> attrs;
          for (const auto& a : idx.attributes) {
            const auto& st = catalog.attribute(a);
            attrs.push_back({st.selectivity, st.blocking_factor});
          }
          const double pages = btree_access_cost(attrs, view.rows(),
                                                 static_cast<double>(pages_of(view.size_bytes, catalog)));
          p.view_indexes.push_back({v, nv + i, pages});
          affects_[nv + i].push_back(qi);
        }
      }

      for (std::size_t i = 0; i < u.objects.indexes.size(); ++i) {
        if (!u.qi.at(qi, i)) continue;
        const auto& idx = u.objects.indexes[i];
        BitmapUse use;
        use.ordinal = nv + i;
        double d = 1.0;
        bool any = false;
        for (const auto& a : idx.attributes) {
          const auto& st = catalog.attribute(a);
          if (is_restricted(a)) {
            const double da = static_cast<double>(q.predicate_count(a));
            d *= da;
            use.restricted.push_back({a, std::min(1.0, da / static_cast<double>(st.cardinality))});
            any = true;
          } else {
            d *= static_cast<double>(st.cardinality);
          }
        }
        if (!any) continue;
        const double card = index_cardinality(idx.attributes, catalog);
        use.traversal = bitmap_traversal(d, card, fact_rows, catalog, opt.bitmap);
        p.bitmaps.push_back(std::move(use));
        affects_[nv + i].push_back(qi);
      }
      plans_.push_back(std::move(p));
    }
    for (auto& a : affects_) a.erase(std::unique(a.begin(), a.end()), a.end());
    fact_rows_ = fact_rows;
    fact_pages_ = fact_pages;
  }

  const Workload& workload() const { return *w_; }
  const Universe& universe() const { return *u_; }

  // Queries whose plan menu may change when object k is added.
  const std::vector<std::size_t>& affected_queries(std::size_t k) const { return affects_[k]; }

  PlanCost query_cost(std::size_t qi, const Selection& sel) const {
    const QueryPlans& p = plans_[qi];
    PlanCost best{w_->queries[qi].id, "baseline", {}, p.baseline};
    auto consider = [&](double pages, std::vector<std::size_t> objects, std::string name) {
      const auto key = std::make_tuple(pages, objects.size(), name);
      const auto cur = std::make_tuple(best.pages, best.objects.size(), best.plan);
      if (key < cur) best = {best.query, std::move(name), std::move(objects), pages};
    };
    for (const auto& s : p.scans) {
      if (sel[s.view]) consider(s.pages, {s.view}, "view_scan(" + u_->objects.id(s.view) + ")");
    }
    for (const auto& vi : p.view_indexes) {
      if (sel[vi.view] && sel[vi.index]) {
        consider(vi.pages, {vi.view, vi.index},
                 "view_index(" + u_->objects.id(vi.view) + "," + u_->objects.id(vi.index) + ")");
      }
    }
    std::vector<const BitmapUse*> usable;
    for (const auto& b : p.bitmaps) {
      if (sel[b.ordinal] && usable.size() < opt_.max_bitmap_combination) usable.push_back(&b);
    }
    const std::size_t combos = std::size_t{1} << usable.size();
    for (std::size_t mask = 1; mask < combos; ++mask) {
      double traversal = 0.0;
      std::vector<std::pair<AttrRef, double>> sel_attrs;
      for (std::size_t k = 0; k < usable.size(); ++k) {
        if (!(mask >> k & 1)) continue;
        traversal += usable[k]->traversal;
        for (const auto& r : usable[k]->restricted) {
          if (std::none_of(sel_attrs.begin(), sel_attrs.end(), [&](const auto& x) { return x.first == r.first; })) {
            sel_attrs.push_back(r);
          }
        }
      }
      double selectivity = 1.0;
      for (const auto& [_, s] : sel_attrs) selectivity *= s;
      double read = 0.0;
      if (fact_pages_ > 0.0) read = fact_pages_ * -std::expm1(-fact_rows_ * selectivity / fact_pages_);
      if (traversal + read > best.pages) continue;
      std::vector<std::size_t> objects;
      std::string name = "bitmap_join(";
      for (std::size_t k = 0; k < usable.size(); ++k) {
        if (!(mask >> k & 1)) continue;
        if (!objects.empty()) name += "+";
        name += u_->objects.id(usable[k]->ordinal);
        objects.push_back(usable[k]->ordinal);
      }
      name += ")";
      consider(traversal + read, std::move(objects), std::move(name));
    }
    return best;
  }

  std::vector<PlanCost> plan_all(const Selection& sel) const {
    std::vector<PlanCost> out;
    for (std::size_t q = 0; q < plans_.size(); ++q) out.push_back(query_cost(q, sel));
    return out;
  }

  double workload_cost(const Selection& sel) const {
    double total = 0.0;
    for (std::size_t q = 0; q < plans_.size(); ++q) total += query_cost(q, sel).pages;
    return total;
  }

 private:
  struct Scan {
    std::size_t view;
    double pages;
  };
  struct ViewIndex {
    std::size_t view, index;
    double pages;
  };
  struct BitmapUse {
    std::size_t ordinal = 0;
    double traversal = 0.0;
    std::vector<std::pair<AttrRef, double>> restricted;  // attribute, d/|a|
  };
  struct QueryPlans {
    double baseline = 0.0;
    std::vector<Scan> scans;
    std::vector<ViewIndex> view_indexes;
    std::vector<BitmapUse> bitmaps;
  };

  const Workload* w_;
  const Universe* u_;
  PlannerOptions opt_;
  std::vector<QueryPlans> plans_;
  std::vector<std::vector<std::size_t>> affects_;
  double fact_rows_ = 0.0;
  double fact_pages_ = 0.0;
};

inline Selection selection_of(const Universe& u, const std::vector<std::string>& ids) {
  Selection sel(u.objects.size(), false);
  for (const auto& id : ids) {
    const auto k = u.objects.find(id);
    if (!k) throw ValidationError("objects", "unknown object '" + id + "'");
    sel[*k] = true;
  }
  return sel;
}

}  // namespace pda
