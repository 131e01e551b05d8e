#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pdadvisor/catalog.hpp"
#include "pdadvisor/errors.hpp"
#include "pdadvisor/workload.hpp"

// Analytical cost formulas. Every access or maintenance cost is expressed in
// disk-page reads; sizes are in bytes or rows as named.

namespace pda {

enum class SizeEstimator { Yao, Cardenas };

// Expected number of distinct groups when k fact rows are drawn without
// replacement from a pool of n = max_size(F) combinations spread evenly over
// m = max_size(V) groups:  m * (1 - prod_{i=1..k} (n - n/m - i + 1) / (n - i + 1)).
inline double yao_rows(double m, double n, double k) {
  if (m < 1.0 || n < 1.0) throw DomainError("Yao estimate needs max_size(V) >= 1 and max_size(F) >= 1");
  if (k <= 0.0) return 0.0;
  const double per_group = n / m;
  double log_prod = 0.0;
  bool zero = false;
  const auto steps = static_cast<std::int64_t>(std::ceil(k));
  if (steps > 1'000'000) {
    // prod = [G(n-p+1) / G(n-p-k+1)] / [G(n+1) / G(n-k+1)]
    const long double nl = n, pl = per_group, kl = static_cast<long double>(steps);
    if (nl - pl - kl + 1 <= 0) {
      zero = true;
    } else {
      log_prod = static_cast<double>(std::lgamma(nl - pl + 1) - std::lgamma(nl - pl - kl + 1) - std::lgamma(nl + 1) +
                                     std::lgamma(nl - kl + 1));
      zero = log_prod < -745.0;
    }
  }
  for (std::int64_t i = 1; i <= steps && steps <= 1'000'000; ++i) {
    const double remaining = n - static_cast<double>(i) + 1.0;
    if (remaining - per_group <= 0.0) {
      zero = true;
      break;
    }
    log_prod += std::log1p(-per_group / remaining);
    if (log_prod < -745.0) {
      zero = true;
      break;
    }
  }
  const double rows = zero ? m : -m * std::expm1(log_prod);
  return std::min({rows, m, k});
}

// m * (1 - (1 - 1/m)^k).
inline double cardenas_rows(double m, double k) {
  if (m < 1.0) throw DomainError("Cardenas estimate needs max_size(V) >= 1");
  if (k <= 0.0) return 0.0;
  if (m == 1.0) return 1.0;
  return -m * std::expm1(k * std::log1p(-1.0 / m));
}

// Product of cardinalities; DomainError on a zero cardinality.
inline double max_size(const std::vector<AttrRef>& attrs, const Catalog& catalog) {
  double p = 1.0;
  for (const auto& a : attrs) {
    const auto card = catalog.attribute(a).cardinality;
    if (card <= 0) throw DomainError("attribute '" + a.label() + "' has cardinality 0");
    p *= static_cast<double>(card);
  }
  return p;
}

// max_size(F): product of dimension row counts.
inline double fact_max_size(const Catalog& catalog) {
  double p = 1.0;
  for (const auto& d : catalog.dimensions) {
    if (d.row_count <= 0) throw DomainError("dimension '" + d.name + "' is empty");
    p *= static_cast<double>(d.row_count);
  }
  return p;
}

inline double view_rows(const std::vector<AttrRef>& grouping, const Catalog& catalog,
                        SizeEstimator est = SizeEstimator::Yao) {
  const double m = max_size(grouping, catalog);
  const auto k = static_cast<double>(catalog.fact.row_count);
  if (est == SizeEstimator::Cardenas) return cardenas_rows(m, k);
  return yao_rows(m, std::max(fact_max_size(catalog), k), k);
}

inline std::int64_t measure_width(const Measure& m, const Catalog& catalog) {
  return m.attr ? catalog.attribute(*m.attr).width_bytes : 8;
}

// ceil(|V|) rows times the width of one grouping tuple plus its measures.
inline std::int64_t view_size_bytes(double rows, const std::vector<AttrRef>& grouping,
                                    const std::vector<Measure>& measures, const Catalog& catalog) {
  std::int64_t width = 0;
  for (const auto& a : grouping) width += catalog.attribute(a).width_bytes;
  for (const auto& m : measures) width += measure_width(m, catalog);
  return static_cast<std::int64_t>(std::ceil(rows)) * width;
}

struct BitmapCostOptions {
  bool via_btree = false;
  bool leaf_traversal = false;  // adds |A|/(m-1) to the via-B-tree descent
};

// Pages read to answer d predicates through a bitmap (join) index with |A|
// bitmaps over a fact table of |F| rows and p_F pages. The direct form scans
// every bitmap; through a B-tree only the d matching bitmaps are read, after a
// descent of log_m|A| - 1 levels (clamped at 0).
inline double bitmap_traversal(double d, double cardinality, double fact_rows, const Catalog& catalog,
                               BitmapCostOptions opt = {}) {
  const double sp = static_cast<double>(catalog.page_size_bytes);
  if (!opt.via_btree) return d * cardinality * fact_rows / (8.0 * sp);
  const double m = catalog.btree_order;
  double cost = d * fact_rows / (8.0 * sp);
  if (cardinality > 0.0) cost += std::max(0.0, std::log(cardinality) / std::log(m) - 1.0);
  if (opt.leaf_traversal) cost += cardinality / (m - 1.0);
  return cost;
}

inline double bitmap_access_cost(double d, double cardinality, double fact_rows, double fact_pages,
                                 const Catalog& catalog, BitmapCostOptions opt = {}) {
  double cost = bitmap_traversal(d, cardinality, fact_rows, catalog, opt);
  if (fact_pages > 0.0 && cardinality > 0.0) {
    cost += fact_pages * -std::expm1(-d * fact_rows / (fact_pages * cardinality));
  }
  return cost;
}

struct BitmapMaintenance {
  double on_fact_insert = 0.0;
  double on_dim_insert = 0.0;
};

inline BitmapMaintenance bitmap_maintenance(double cardinality, double fact_rows, double fact_pages,
                                            double dim_pages, int xi, const Catalog& catalog) {
  const double bitmaps = cardinality * fact_rows / (8.0 * static_cast<double>(catalog.page_size_bytes));
  return {dim_pages + bitmaps, fact_pages + (1.0 + xi) * bitmaps};
}

// Smallest k with base^k >= n, i.e. ceil(log_base n) without floating error.
inline std::int64_t ceil_log(std::int64_t base, std::int64_t n) {
  if (base < 2) throw DomainError("logarithm base must be >= 2");
  std::int64_t k = 0;
  long double p = 1;
  while (p < static_cast<long double>(n)) {
    p *= static_cast<long double>(base);
    ++k;
  }
  return k;
}

inline std::int64_t ceil_pos(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-12)); }

struct IndexedAttribute {
  double selectivity = 1.0;
  std::int64_t blocking_factor = 2;
};

// B-tree access on a view of |v| rows spread over `view_pages` pages:
// C_traversal + C_search. InapplicablePlan when no indexed attribute is restricted.
inline double btree_access_cost(const std::vector<IndexedAttribute>& attrs, std::int64_t view_rows,
                                double view_pages) {
  if (attrs.empty()) throw InapplicablePlan("no restricted attribute is indexed");
  if (view_rows < 1) throw InapplicablePlan("empty view");
  double traversal = 0.0;
  double n = static_cast<double>(view_rows);
  for (const auto& a : attrs) {
    const double leaves = ceil_pos(a.selectivity * static_cast<double>(view_rows) /
                                   static_cast<double>(a.blocking_factor));
    traversal += static_cast<double>(ceil_log(a.blocking_factor, view_rows)) + std::max(0.0, leaves - 1.0);
    n *= a.selectivity;
  }
  double search = 0.0;
  if (view_pages >= 1.0) {
    search = view_pages == 1.0 ? 1.0 : -view_pages * std::expm1(n * std::log1p(-1.0 / view_pages));
    if (n <= 0.0) search = 0.0;
  }
  return traversal + search;
}

// Expected pages touched per maintenance event on a B-tree over a view, with
// A_ins = A_del = indexed attributes and A_upd = the updated subset.
inline double btree_maintenance(const std::vector<IndexedAttribute>& indexed,
                                const std::vector<IndexedAttribute>& updated, std::int64_t view_rows,
                                const OpFrequencies& f) {
  double ins = 0.0;
  for (const auto& a : indexed) ins += static_cast<double>(ceil_log(a.blocking_factor, view_rows));
  double upd = 0.0;
  for (const auto& a : updated) {
    const double leaves = ceil_pos(static_cast<double>(view_rows) * a.selectivity /
                                   (2.0 * static_cast<double>(a.blocking_factor)));
    upd += static_cast<double>(ceil_log(a.blocking_factor, view_rows)) + std::max(0.0, leaves - 1.0);
  }
  return f.f_ins * ins + f.f_del * ins + f.f_upd * upd;
}

// One bit per fact row per distinct key.
inline std::int64_t bitmap_size_bytes(double cardinality, double fact_rows) {
  return static_cast<std::int64_t>(std::ceil(cardinality * fact_rows / 8.0));
}

// (key, 8-byte row identifier) entries, one per view row.
inline std::int64_t btree_size_bytes(std::int64_t view_rows, std::int64_t key_width) {
  return view_rows * (key_width + 8);
}

}  // namespace pda
