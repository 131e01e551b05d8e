#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdadvisor/pipeline.hpp"

namespace pda {

inline std::string column_alias(const AttrRef& a) { return a.table + "_" + a.column; }

inline std::string measure_alias(const Measure& m) {
  std::string fn = to_string(m.fn);
  for (auto& c : fn) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return fn + "_" + (m.attr ? column_alias(*m.attr) : std::string("all"));
}

inline nlohmann::json object_json(const Universe& u, std::size_t k) {
  nlohmann::json j;
  const auto& set = u.objects;
  j["id"] = set.id(k);
  j["size_bytes"] = set.size_bytes(k);
  if (set.is_view(k)) {
    const auto& v = set.views[k];
    j["kind"] = "view";
    j["rows"] = v.rows();
    j["attributes"] = nlohmann::json::array();
    for (const auto& a : v.attributes) j["attributes"].push_back(a.label());
    j["measures"] = nlohmann::json::array();
    for (const auto& m : v.measures) j["measures"].push_back(m.label());
    j["joins"] = nlohmann::json::array();
    for (const auto& jp : v.joins) j["joins"].push_back({jp.fact_attr.label(), jp.dim_attr.label()});
    j["source_queries"] = v.source_queries;
  } else {
    const auto& i = set.indexes[k - set.views.size()];
    j["kind"] = to_string(i.kind);
    j["table"] = i.table;
    j["attributes"] = nlohmann::json::array();
    for (const auto& a : i.attributes) j["attributes"].push_back(a.label());
    if (i.target_view) j["target_view"] = *i.target_view;
  }
  return j;
}

inline nlohmann::json report_json(const Workload& w, const Advice& a, const std::string& mode) {
  nlohmann::json r;
  r["workload_digest"] = w.source_digest;
  r["mode"] = mode;
  r["budget_bytes"] = a.configuration.budget_bytes;
  r["s_vi_bytes"] = a.s_vi_bytes;
  r["occupied_bytes"] = a.configuration.occupied_bytes;
  r["cost_before"] = a.cost_before;
  r["cost_after"] = a.cost_after;
  r["candidate_views"] = a.universe.objects.views.size();
  r["candidate_indexes"] = a.universe.objects.indexes.size();
  r["selected"] = nlohmann::json::array();
  for (auto k : a.configuration.selected) r["selected"].push_back(object_json(a.universe, k));

  std::size_t covered = 0;
  r["queries"] = nlohmann::json::array();
  for (std::size_t q = 0; q < a.after.size(); ++q) {
    bool by_view = false;
    for (auto k : a.configuration.selected) {
      if (a.universe.objects.is_view(k) && a.universe.qv.at(q, k)) by_view = true;
    }
    covered += by_view;
    r["queries"].push_back({{"query", a.after[q].query},
                            {"plan_before", a.before[q].plan},
                            {"pages_before", a.before[q].pages},
                            {"plan", a.after[q].plan},
                            {"pages", a.after[q].pages}});
  }
  r["cover_rate"] = a.after.empty() ? 0.0 : static_cast<double>(covered) / static_cast<double>(a.after.size());
  return r;
}

inline std::string view_sql(const CandidateView& v, const Catalog& catalog) {
  std::ostringstream s;
  s << "SELECT ";
  bool first = true;
  for (const auto& a : v.attributes) {
    s << (first ? "" : ", ") << a.label() << " AS " << column_alias(a);
    first = false;
  }
  for (const auto& m : v.measures) {
    s << (first ? "" : ", ") << m.label() << " AS " << measure_alias(m);
    first = false;
  }
  s << "\nFROM " << catalog.fact.name;
  std::vector<std::string> dims;
  for (const auto& j : v.joins) {
    if (std::find(dims.begin(), dims.end(), j.dim_attr.table) == dims.end()) dims.push_back(j.dim_attr.table);
  }
  for (const auto& d : dims) s << ", " << d;
  for (std::size_t k = 0; k < v.joins.size(); ++k) {
    s << (k == 0 ? "\nWHERE " : "\n  AND ") << v.joins[k].fact_attr.label() << " = " << v.joins[k].dim_attr.label();
  }
  if (!v.attributes.empty()) {
    s << "\nGROUP BY ";
    for (std::size_t k = 0; k < v.attributes.size(); ++k) s << (k ? ", " : "") << v.attributes[k].label();
  }
  return s.str();
}

// Generic SQL: CREATE MATERIALIZED VIEW, CREATE BITMAP INDEX (join form) and
// CREATE INDEX on view columns.
inline std::string ddl_script(const Universe& u, const Configuration& cfg, const Catalog& catalog) {
  std::ostringstream s;
  for (auto k : cfg.selected) {
    if (u.objects.is_view(k)) {
      const auto& v = u.objects.views[k];
      s << "CREATE MATERIALIZED VIEW " << v.id << " AS\n" << view_sql(v, catalog) << ";\n\n";
      continue;
    }
    const auto& i = u.objects.indexes[k - u.objects.views.size()];
    if (i.kind == IndexKind::BitmapJoin) {
      s << "CREATE BITMAP INDEX " << i.id << " ON " << catalog.fact.name << " (";
      for (std::size_t n = 0; n < i.attributes.size(); ++n) s << (n ? ", " : "") << i.attributes[n].label();
      s << ")\nFROM " << catalog.fact.name << ", " << i.table;
      for (const auto& a : catalog.fact.attributes) {
        if (a.references && a.references->table == i.table) {
          s << "\nWHERE " << catalog.fact.name << "." << a.name << " = " << a.references->label();
          break;
        }
      }
      s << ";\n\n";
    } else {
      s << "CREATE INDEX " << i.id << " ON " << *i.target_view << " (";
      for (std::size_t n = 0; n < i.attributes.size(); ++n) s << (n ? ", " : "") << column_alias(i.attributes[n]);
      s << ");\n\n";
    }
  }
  return s.str();
}

inline std::string trace_jsonl(const Configuration& cfg) {
  std::ostringstream s;
  for (const auto& t : cfg.trace) {
    nlohmann::json j{{"iteration", t.iteration},
                     {"chosen", t.chosen},
                     {"co_selected", t.co_selected},
                     {"f", t.f},
                     {"benefit", t.benefit},
                     {"cost_reduction", t.cost_reduction},
                     {"maintenance", t.maintenance},
                     {"bytes", t.bytes},
                     {"occupied_bytes", t.occupied_bytes},
                     {"workload_cost", t.workload_cost}};
    s << j.dump() << '\n';
  }
  return s.str();
}

inline std::string format_pages(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

inline std::string plans_csv(const std::vector<PlanCost>& plans) {
  std::ostringstream s;
  s << "query,plan,pages\n";
  for (const auto& p : plans) s << p.query << ",\"" << p.plan << "\"," << format_pages(p.pages) << '\n';
  return s.str();
}

inline std::string itemsets_csv(const std::vector<ClosedItemset>& sets, const std::vector<std::string>& items) {
  std::ostringstream s;
  s << "items,support\n";
  for (const auto& set : sets) {
    for (std::size_t k = 0; k < set.items.size(); ++k) s << (k ? ";" : "") << items[set.items[k]];
    s << ',' << set.support << '\n';
  }
  return s.str();
}

inline std::string clusters_text(const Workload& w, const Mining& m, const Catalog& catalog) {
  std::ostringstream s;
  s << "Q(P) = " << quality(m.partition, m.query_attribute) << '\n';
  for (std::size_t k = 0; k < m.partition.classes.size(); ++k) {
    s << "class " << (k + 1) << ":";
    for (auto r : m.partition.classes[k]) s << ' ' << w.queries[r].id;
    s << '\n';
  }
  for (const auto& v : m.views) {
    s << v.id << " [" << v.size_bytes << " bytes, " << v.rows() << " rows] from";
    for (const auto& q : v.source_queries) s << ' ' << q;
    s << "\n  " << view_sql(v, catalog) << '\n';
  }
  return s.str();
}

}  // namespace pda
