#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdadvisor/catalog.hpp"
#include "pdadvisor/cost_model.hpp"
#include "pdadvisor/sql_parser.hpp"
#include "pdadvisor/workload.hpp"

namespace pda {

struct CandidateView {
  std::string id;
  std::vector<JoinPair> joins;       // sorted, unique
  std::vector<AttrRef> attributes;   // grouping attributes, first-appearance order
  std::vector<Measure> measures;
  double row_estimate = 0.0;
  std::int64_t size_bytes = 0;
  std::vector<std::string> source_queries;

  std::int64_t rows() const { return static_cast<std::int64_t>(std::ceil(row_estimate)); }

  bool has_attribute(const AttrRef& a) const {
    return std::find(attributes.begin(), attributes.end(), a) != attributes.end();
  }

  bool joins_table(std::string_view table) const {
    return std::any_of(joins.begin(), joins.end(),
                       [&](const JoinPair& j) { return j.dim_attr.table == table; });
  }
};

enum class IndexKind { BitmapJoin, BtreeOnView };

inline const char* to_string(IndexKind k) {
  return k == IndexKind::BitmapJoin ? "bitmap_join" : "btree_on_view";
}

struct CandidateIndex {
  std::string id;
  std::string table;  // dimension name, or the view id for btree_on_view
  std::vector<AttrRef> attributes;
  IndexKind kind = IndexKind::BitmapJoin;
  std::optional<std::string> target_view;
  std::int64_t size_bytes = 0;
};

// Distinct-key count of a (possibly composite) index over the fact table.
inline double index_cardinality(const std::vector<AttrRef>& attrs, const Catalog& catalog) {
  return std::min(max_size(attrs, catalog),
                  std::max(1.0, static_cast<double>(catalog.fact.row_count)));
}

inline std::vector<Measure> expand_measures(const std::vector<Measure>& in) {
  std::vector<Measure> out;
  auto add = [&](const Measure& m) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  };
  for (const auto& m : in) {
    if (m.fn == Aggregate::Avg) {
      add({Aggregate::Sum, m.attr});
      add({Aggregate::Count, m.attr});
    } else {
      add(m);
    }
  }
  return out;
}

inline void size_view(CandidateView& v, const Catalog& catalog, SizeEstimator est = SizeEstimator::Yao) {
  v.row_estimate = view_rows(v.attributes, catalog, est);
  v.size_bytes = view_size_bytes(v.row_estimate, v.attributes, v.measures, catalog);
}

// Builds a view whose grouping set is G ∪ R of the given queries (restriction
// attributes are promoted to grouping so predicates can be re-applied).
inline CandidateView make_view(std::string id, const std::vector<const Query*>& queries,
                               const Catalog& catalog, SizeEstimator est = SizeEstimator::Yao) {
  CandidateView v;
  v.id = std::move(id);
  std::vector<Measure> measures;
  for (const Query* q : queries) {
    for (const auto& j : q->join_set()) {
      if (std::find(v.joins.begin(), v.joins.end(), j) == v.joins.end()) v.joins.push_back(j);
    }
    for (const auto& a : q->grouping_and_restriction_attributes()) {
      if (!v.has_attribute(a)) v.attributes.push_back(a);
    }
    measures.insert(measures.end(), q->measures.begin(), q->measures.end());
    v.source_queries.push_back(q->id);
  }
  std::sort(v.joins.begin(), v.joins.end());
  v.measures = expand_measures(measures);
  size_view(v, catalog, est);
  return v;
}

inline void size_index(CandidateIndex& i, const std::vector<CandidateView>& views, const Catalog& catalog) {
  if (i.kind == IndexKind::BitmapJoin) {
    i.size_bytes = bitmap_size_bytes(index_cardinality(i.attributes, catalog),
                                     static_cast<double>(catalog.fact.row_count));
    return;
  }
  const auto it = std::find_if(views.begin(), views.end(),
                               [&](const CandidateView& v) { return v.id == i.target_view; });
  if (it == views.end()) throw ValidationError(i.id + ".target_view", "unknown view");
  std::int64_t width = 0;
  for (const auto& a : i.attributes) width += catalog.attribute(a).width_bytes;
  i.size_bytes = btree_size_bytes(it->rows(), width);
}

// The object universe O_C = V_C ∪ I_C. Object ordinal k < views.size() is a
// view, the rest are indexes in list order.
struct CandidateSet {
  std::vector<CandidateView> views;
  std::vector<CandidateIndex> indexes;

  std::size_t size() const { return views.size() + indexes.size(); }
  bool is_view(std::size_t k) const { return k < views.size(); }

  const std::string& id(std::size_t k) const {
    return is_view(k) ? views[k].id : indexes[k - views.size()].id;
  }
  std::int64_t size_bytes(std::size_t k) const {
    return is_view(k) ? views[k].size_bytes : indexes[k - views.size()].size_bytes;
  }
  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t k = 0; k < size(); ++k) {
      if (this->id(k) == id) return k;
    }
    return std::nullopt;
  }
  std::int64_t total_bytes() const {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < size(); ++k) s += size_bytes(k);
    return s;
  }
};

// Candidate document: {"views": [{"id", "sql"}], "indexes": [{"id",
// "attributes", "kind"?, "target_view"?}]}. View SQL uses the workload
// grammar; its GROUP BY list becomes the view's attribute set.
inline CandidateSet parse_candidates(const nlohmann::json& doc, const Catalog& catalog,
                                     SizeEstimator est = SizeEstimator::Yao) {
  detail::reject_unknown_keys(doc, {"views", "indexes"}, "candidates");
  CandidateSet set;
  if (doc.contains("views")) {
    const auto& views = doc.at("views");
    for (std::size_t k = 0; k < views.size(); ++k) {
      const std::string path = "views[" + std::to_string(k) + "]";
      detail::reject_unknown_keys(views[k], {"id", "sql"}, path);
      const auto id = detail::get_string(views[k], "id", path);
      const auto sql = detail::get_string(views[k], "sql", path);
      const auto stmts = sql::parse_statements(sql);
      if (stmts.size() != 1) throw ValidationError(path + ".sql", "expected one statement");
      const Query q = sql::bind(stmts.front(), 0, catalog);
      CandidateView v;
      v.id = id;
      v.joins = q.join_set();
      v.attributes = q.grouping;
      v.measures = q.measures;
      size_view(v, catalog, est);
      set.views.push_back(std::move(v));
    }
  }
  if (doc.contains("indexes")) {
    const auto& indexes = doc.at("indexes");
    for (std::size_t k = 0; k < indexes.size(); ++k) {
      const std::string path = "indexes[" + std::to_string(k) + "]";
      const auto& j = indexes[k];
      detail::reject_unknown_keys(j, {"id", "attributes", "kind", "target_view"}, path);
      CandidateIndex i;
      i.id = detail::get_string(j, "id", path);
      if (!j.contains("attributes") || !j.at("attributes").is_array() || j.at("attributes").empty()) {
        throw ValidationError(path + ".attributes", "expected a non-empty array");
      }
      for (const auto& a : j.at("attributes")) {
        const auto ref = AttrRef::parse(a.get<std::string>());
        catalog.attribute(ref);
        i.attributes.push_back(ref);
      }
      const std::string kind = j.contains("kind") ? detail::get_string(j, "kind", path) : "bitmap_join";
      if (kind == "bitmap_join") {
        i.kind = IndexKind::BitmapJoin;
        i.table = i.attributes.front().table;
        for (const auto& a : i.attributes) {
          if (a.table != i.table || catalog.is_fact(a.table)) {
            throw ValidationError(path + ".attributes", "bitmap join index needs attributes of one dimension");
          }
        }
      } else if (kind == "btree_on_view") {
        i.kind = IndexKind::BtreeOnView;
        i.target_view = detail::get_string(j, "target_view", path);
        i.table = *i.target_view;
      } else {
        throw ValidationError(path + ".kind", "expected bitmap_join or btree_on_view");
      }
      size_index(i, set.views, catalog);
      set.indexes.push_back(std::move(i));
    }
  }
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < set.size(); ++k) ids.push_back(set.id(k));
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ValidationError("candidates", "duplicate object id");
  }
  return set;
}

inline CandidateSet load_candidates(const std::string& path, const Catalog& catalog,
                                    SizeEstimator est = SizeEstimator::Yao) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open candidates '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    return parse_candidates(doc, catalog, est);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("candidates '" + path + "': " + e.what());
  }
}

}  // namespace pda
