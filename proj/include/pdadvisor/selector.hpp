#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pdadvisor/planner.hpp"

namespace pda {

struct ObjectiveParams {
  double alpha_view = 1.0;
  double alpha_btree = 1.0;
  double alpha_index = 1.0;  // bitmap join indexes; > 1 favors join-free plans
  double refresh_ratio = 0.0;
  // Attributes touched by updates on view B-trees; empty means "all indexed".
  std::vector<AttrRef> updated_attributes;
};

struct TraceEntry {
  std::size_t iteration = 0;
  std::string chosen;
  std::vector<std::string> co_selected;
  double f = 0.0;
  double benefit = 0.0;  // cost reduction per byte
  double cost_reduction = 0.0;
  double maintenance = 0.0;
  std::int64_t bytes = 0;
  std::int64_t occupied_bytes = 0;
  double workload_cost = 0.0;
};

struct Configuration {
  std::vector<std::size_t> selected;  // universe ordinals, admission order
  std::int64_t occupied_bytes = 0;
  std::int64_t budget_bytes = 0;
  std::vector<TraceEntry> trace;
};

// Maintenance cost of one object in pages per refresh event.
inline double maintenance_cost(const Universe& u, std::size_t k, const Catalog& catalog,
                               const ObjectiveParams& params) {
  const auto& set = u.objects;
  if (set.is_view(k)) return static_cast<double>(pages_of(set.views[k].size_bytes, catalog));
  const auto& idx = set.indexes[k - set.views.size()];
  if (idx.kind == IndexKind::BitmapJoin) {
    const auto& dim = catalog.dimension(idx.table);
    return bitmap_maintenance(index_cardinality(idx.attributes, catalog),
                              static_cast<double>(catalog.fact.row_count),
                              static_cast<double>(catalog.fact.page_count),
                              static_cast<double>(dim.page_count), 0, catalog)
        .on_fact_insert;
  }
  std::int64_t rows = 0;
  for (const auto& v : set.views) {
    if (v.id == idx.target_view) rows = v.rows();
  }
  std::vector<IndexedAttribute> indexed, updated;
  for (const auto& a : idx.attributes) {
    const auto& st = catalog.attribute(a);
    indexed.push_back({st.selectivity, st.blocking_factor});
    const auto& upd = params.updated_attributes;
    if (upd.empty() || std::find(upd.begin(), upd.end(), a) != upd.end()) updated.push_back(indexed.back());
  }
  return btree_maintenance(indexed, updated, std::max<std::int64_t>(rows, 1), catalog.op_frequencies);
}

// p(o) = refresh_ratio / |O ∪ {o}|, capped at 1.
inline double update_probability(std::size_t selected_after, double refresh_ratio) {
  if (selected_after == 0) return 0.0;
  return std::min(1.0, refresh_ratio / static_cast<double>(selected_after));
}

// Objects paired with k through the view-index matrix: the views carrying
// index k, or the indexes carried by view k.
inline std::vector<std::size_t> vi_partners(const Universe& u, std::size_t k) {
  std::vector<std::size_t> out;
  const auto nv = u.objects.views.size();
  if (u.objects.is_view(k)) {
    for (std::size_t i = 0; i < u.objects.indexes.size(); ++i) {
      if (u.vi.at(k, i)) out.push_back(nv + i);
    }
  } else {
    for (std::size_t v = 0; v < nv; ++v) {
      if (u.vi.at(v, k - nv)) out.push_back(v);
    }
  }
  return out;
}

struct Option {
  std::vector<std::size_t> bundle;  // leader first
  double f = -std::numeric_limits<double>::infinity();
  double benefit = 0.0;
  double cost_reduction = 0.0;
  double maintenance = 0.0;
  std::int64_t bytes = 0;
};

// Greedy selection: each round evaluates every remaining candidate alone and
// bundled with its open view-index partners, admits the option with the best
// f = (alpha * cost reduction - beta * maintenance) / bytes, and stops when
// the best f is not positive, no candidate remains, or the budget is used up.
class Selector {
 public:
  Selector(const Planner& planner, const Catalog& catalog, ObjectiveParams params)
      : planner_(&planner), catalog_(&catalog), params_(std::move(params)) {
    const auto& u = planner.universe();
    for (std::size_t k = 0; k < u.objects.size(); ++k) {
      maintenance_.push_back(maintenance_cost(u, k, catalog, params_));
    }
  }

  double alpha(std::size_t k) const {
    const auto& set = planner_->universe().objects;
    if (set.is_view(k)) return params_.alpha_view;
    return set.indexes[k - set.views.size()].kind == IndexKind::BitmapJoin ? params_.alpha_index
                                                                            : params_.alpha_btree;
  }

  // Prices adding `bundle` to the current selection.
  Option evaluate(const std::vector<std::size_t>& bundle, const Selection& sel,
                  const std::vector<double>& current, std::size_t selected_count) const {
    Option o;
    o.bundle = bundle;
    Selection next = sel;
    std::vector<std::size_t> queries;
    for (auto k : bundle) {
      next[k] = true;
      o.bytes += planner_->universe().objects.size_bytes(k);
      o.maintenance += maintenance_[k];
      const auto& aq = planner_->affected_queries(k);
      queries.insert(queries.end(), aq.begin(), aq.end());
    }
    std::sort(queries.begin(), queries.end());
    queries.erase(std::unique(queries.begin(), queries.end()), queries.end());
    for (auto q : queries) o.cost_reduction += current[q] - planner_->query_cost(q, next).pages;
    o.cost_reduction = std::max(0.0, o.cost_reduction);
    const double denom = static_cast<double>(std::max<std::int64_t>(o.bytes, 1));
    o.benefit = o.cost_reduction / denom;
    const double beta = static_cast<double>(planner_->workload().size()) *
                        update_probability(selected_count + bundle.size(), params_.refresh_ratio);
    o.f = (alpha(bundle.front()) * o.cost_reduction - beta * o.maintenance) / denom;
    return o;
  }

  struct Benefit {
    double value = 0.0;  // cost reduction per byte, never negative
    std::vector<std::size_t> co_selected;
  };

  // Benefit of adding candidate k to `sel`: the better of k alone and k with
  // its unselected view-index partners (whose sizes join the denominator).
  Benefit benefit(std::size_t k, const Selection& sel) const {
    const auto& u = planner_->universe();
    std::vector<double> current;
    for (std::size_t q = 0; q < planner_->workload().size(); ++q) current.push_back(planner_->query_cost(q, sel).pages);
    const auto count = static_cast<std::size_t>(std::count(sel.begin(), sel.end(), true));
    Benefit b{evaluate({k}, sel, current, count).benefit, {}};
    std::vector<std::size_t> bundle{k};
    for (auto p : vi_partners(u, k)) {
      if (!sel[p]) bundle.push_back(p);
    }
    if (bundle.size() > 1) {
      const double v = evaluate(bundle, sel, current, count).benefit;
      if (v > b.value) b = {v, std::vector<std::size_t>(bundle.begin() + 1, bundle.end())};
    }
    return b;
  }

  Configuration run(std::int64_t budget) const {
    const auto& u = planner_->universe();
    const std::size_t n = u.objects.size();
    Configuration cfg;
    cfg.budget_bytes = budget;
    Selection sel(n, false);
    std::vector<bool> open(n, true);
    std::vector<double> current;
    for (std::size_t q = 0; q < planner_->workload().size(); ++q) current.push_back(planner_->query_cost(q, sel).pages);

    auto better = [&](const Option& a, const Option& b) {
      if (a.f != b.f) return a.f > b.f;
      if (a.bytes != b.bytes) return a.bytes < b.bytes;
      return a.bundle < b.bundle;
    };

    for (std::size_t iteration = 1;; ++iteration) {
      if (cfg.occupied_bytes >= budget) break;
      Option best;
      bool found = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (!open[k]) continue;
        std::vector<std::vector<std::size_t>> bundles{{k}};
        std::vector<std::size_t> partners;
        for (auto p : vi_partners(u, k)) {
          if (!sel[p]) partners.push_back(p);
        }
        if (!partners.empty()) {
          partners.insert(partners.begin(), k);
          bundles.push_back(partners);
        }
        for (const auto& b : bundles) {
          std::int64_t bytes = 0;
          for (auto x : b) bytes += u.objects.size_bytes(x);
          if (cfg.occupied_bytes + bytes > budget) continue;
          Option o = evaluate(b, sel, current, cfg.selected.size());
          if (!found || better(o, best)) {
            best = std::move(o);
            found = true;
          }
        }
      }
      if (!found || !(best.f > 0.0)) break;

      TraceEntry t;
      t.iteration = iteration;
      t.chosen = u.objects.id(best.bundle.front());
      for (std::size_t x = 1; x < best.bundle.size(); ++x) t.co_selected.push_back(u.objects.id(best.bundle[x]));
      for (auto x : best.bundle) {
        sel[x] = true;
        open[x] = false;
        cfg.selected.push_back(x);
      }
      cfg.occupied_bytes += best.bytes;
      for (std::size_t q = 0; q < current.size(); ++q) current[q] = planner_->query_cost(q, sel).pages;
      t.f = best.f;
      t.benefit = best.benefit;
      t.cost_reduction = best.cost_reduction;
      t.maintenance = best.maintenance;
      t.bytes = best.bytes;
      t.occupied_bytes = cfg.occupied_bytes;
      for (double c : current) t.workload_cost += c;
      cfg.trace.push_back(std::move(t));
      if (std::none_of(open.begin(), open.end(), [](bool b) { return b; })) break;
    }
    return cfg;
  }

 private:
  const Planner* planner_;
  const Catalog* catalog_;
  ObjectiveParams params_;
  std::vector<double> maintenance_;
};

inline Selection selection_of(const Configuration& cfg, std::size_t universe_size) {
  Selection sel(universe_size, false);
  for (auto k : cfg.selected) sel[k] = true;
  return sel;
}

}  // namespace pda
