#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pdadvisor/binary_matrix.hpp"
#include "pdadvisor/candidates.hpp"
#include "pdadvisor/workload.hpp"

namespace pda {

namespace detail {

inline bool has_measure(const std::vector<Measure>& ms, Aggregate fn, const std::optional<AttrRef>& attr) {
  return std::find(ms.begin(), ms.end(), Measure{fn, attr}) != ms.end();
}

}  // namespace detail

// SUM/COUNT/MIN/MAX roll up from the same aggregate over a finer grouping;
// AVG needs SUM and a COUNT of the same attribute (or COUNT(*)).
inline bool measure_derivable(const Measure& m, const std::vector<Measure>& available) {
  if (m.fn != Aggregate::Avg) return detail::has_measure(available, m.fn, m.attr);
  return detail::has_measure(available, Aggregate::Sum, m.attr) &&
         (detail::has_measure(available, Aggregate::Count, m.attr) ||
          detail::has_measure(available, Aggregate::Count, std::nullopt));
}

inline bool covers(const CandidateView& v, const Query& q) {
  for (const auto& j : q.join_set()) {
    if (!std::binary_search(v.joins.begin(), v.joins.end(), j)) return false;
  }
  for (const auto& a : q.grouping_and_restriction_attributes()) {
    if (!v.has_attribute(a)) return false;
  }
  return std::all_of(q.measures.begin(), q.measures.end(),
                     [&](const Measure& m) { return measure_derivable(m, v.measures); });
}

inline BinaryMatrix build_query_attribute(const Workload& w, const RuleSet& rules, const Catalog& catalog) {
  std::vector<std::vector<AttrRef>> rep;
  std::vector<AttrRef> columns;
  for (const auto& q : w.queries) {
    rep.push_back(representative_attributes(q, rules, catalog));
    for (const auto& a : rep.back()) {
      if (std::find(columns.begin(), columns.end(), a) == columns.end()) columns.push_back(a);
    }
  }
  std::vector<std::string> row_labels, col_labels;
  for (const auto& q : w.queries) row_labels.push_back(q.id);
  for (const auto& a : columns) col_labels.push_back(a.label());
  BinaryMatrix m(row_labels, col_labels);
  for (std::size_t r = 0; r < rep.size(); ++r) {
    for (const auto& a : rep[r]) {
      m.set(r, static_cast<std::size_t>(std::find(columns.begin(), columns.end(), a) - columns.begin()));
    }
  }
  return m;
}

inline BinaryMatrix build_query_view(const Workload& w, const std::vector<CandidateView>& views) {
  std::vector<std::string> rows, cols;
  for (const auto& q : w.queries) rows.push_back(q.id);
  for (const auto& v : views) cols.push_back(v.id);
  BinaryMatrix m(rows, cols);
  for (std::size_t r = 0; r < w.queries.size(); ++r) {
    for (std::size_t c = 0; c < views.size(); ++c) m.set(r, c, covers(views[c], w.queries[r]));
  }
  return m;
}

// Whether a base-table (bitmap join) index can serve q: its dimension is
// joined in q and it indexes one of q's representative grouping/restriction
// attributes.
inline bool index_serves(const CandidateIndex& i, const Query& q, const RuleSet& rules,
                         const Catalog& catalog) {
  if (i.kind != IndexKind::BitmapJoin || !q.joins_table(i.table)) return false;
  const auto rep = representative_attributes(q, rules, catalog);
  const auto gr = q.grouping_and_restriction_attributes();
  return std::any_of(i.attributes.begin(), i.attributes.end(), [&](const AttrRef& a) {
    return std::find(gr.begin(), gr.end(), a) != gr.end() &&
           std::find(rep.begin(), rep.end(), a) != rep.end();
  });
}

inline BinaryMatrix build_query_index(const Workload& w, const std::vector<CandidateIndex>& indexes,
                                      const RuleSet& rules, const Catalog& catalog) {
  std::vector<std::string> rows, cols;
  for (const auto& q : w.queries) rows.push_back(q.id);
  for (const auto& i : indexes) cols.push_back(i.id);
  BinaryMatrix m(rows, cols);
  for (std::size_t r = 0; r < w.queries.size(); ++r) {
    for (std::size_t c = 0; c < indexes.size(); ++c) {
      m.set(r, c, index_serves(indexes[c], w.queries[r], rules, catalog));
    }
  }
  return m;
}

inline bool view_carries_index(const CandidateView& v, const CandidateIndex& i) {
  if (i.target_view && *i.target_view != v.id) return false;
  return std::all_of(i.attributes.begin(), i.attributes.end(),
                     [&](const AttrRef& a) { return v.has_attribute(a); });
}

inline BinaryMatrix build_view_index(const std::vector<CandidateView>& views,
                                     const std::vector<CandidateIndex>& indexes) {
  std::vector<std::string> rows, cols;
  for (const auto& v : views) rows.push_back(v.id);
  for (const auto& i : indexes) cols.push_back(i.id);
  BinaryMatrix m(rows, cols);
  for (std::size_t r = 0; r < views.size(); ++r) {
    for (std::size_t c = 0; c < indexes.size(); ++c) m.set(r, c, view_carries_index(views[r], indexes[c]));
  }
  return m;
}

}  // namespace pda
