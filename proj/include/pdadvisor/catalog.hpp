#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdadvisor/errors.hpp"

namespace pda {

// Qualified column reference "table.column".
struct AttrRef {
  std::string table;
  std::string column;

  std::string label() const { return table + "." + column; }

  static AttrRef parse(std::string_view label) {
    auto dot = label.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == label.size()) {
      throw ParseError("expected qualified attribute 'table.column', got '" +
                       std::string(label) + "'");
    }
    return {std::string(label.substr(0, dot)), std::string(label.substr(dot + 1))};
  }

  auto operator<=>(const AttrRef&) const = default;
};

struct AttributeStats {
  std::string name;
  std::int64_t cardinality = 0;
  std::int64_t width_bytes = 0;
  double selectivity = 0.0;          // SF_a, defaults to 1/cardinality
  std::int64_t blocking_factor = 0;  // BF_a, (key, rowid) couples per page
  int domain_expansion = 0;          // xi for bitmap maintenance
  std::optional<AttrRef> references; // foreign key target (fact attributes only)
};

struct TableStats {
  std::string name;
  std::int64_t row_count = 0;
  std::int64_t page_count = 0;
  std::vector<AttributeStats> attributes;

  const AttributeStats* find(std::string_view attr) const {
    for (const auto& a : attributes) {
      if (a.name == attr) return &a;
    }
    return nullptr;
  }

  std::int64_t row_width() const {
    std::int64_t w = 0;
    for (const auto& a : attributes) w += a.width_bytes;
    return w;
  }
};

struct OpFrequencies {
  double f_ins = 0.0;
  double f_del = 0.0;
  double f_upd = 0.0;
};

// Star-schema statistics. Immutable once returned by load_catalog().
struct Catalog {
  TableStats fact;
  std::vector<TableStats> dimensions;
  std::int64_t page_size_bytes = 8192;
  int btree_order = 100;
  double refresh_ratio = 0.0;
  OpFrequencies op_frequencies;

  bool is_fact(std::string_view table) const { return table == fact.name; }

  const TableStats* table(std::string_view name) const {
    if (fact.name == name) return &fact;
    for (const auto& d : dimensions) {
      if (d.name == name) return &d;
    }
    return nullptr;
  }

  const TableStats& dimension(std::string_view name) const {
    for (const auto& d : dimensions) {
      if (d.name == name) return d;
    }
    throw UnknownAttributeError("unknown dimension '" + std::string(name) + "'");
  }

  const AttributeStats* find(const AttrRef& ref) const {
    const TableStats* t = table(ref.table);
    return t ? t->find(ref.column) : nullptr;
  }

  const AttributeStats& attribute(const AttrRef& ref) const {
    if (const auto* a = find(ref)) return *a;
    throw UnknownAttributeError("unknown attribute '" + ref.label() + "'");
  }
};

// ceil(bytes / page size); 0 only for an empty object.
inline std::int64_t pages_of(std::int64_t bytes, const Catalog& catalog) {
  if (bytes <= 0) return 0;
  return (bytes + catalog.page_size_bytes - 1) / catalog.page_size_bytes;
}

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                                const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(path + "." + key, "unknown key");
    }
  }
}

inline std::int64_t get_int(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

inline double get_number(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::string get_string(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw ValidationError(path + "." + key, "missing");
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ValidationError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

struct RawAttribute {
  AttributeStats stats;
  bool has_cardinality = false;
  bool has_selectivity = false;
  bool has_blocking_factor = false;
};

inline RawAttribute parse_attribute(const json& j, const std::string& path) {
  reject_unknown_keys(j,
                      {"name", "cardinality", "width_bytes", "selectivity", "blocking_factor",
                       "sample", "references", "domain_expansion"},
                      path);
  RawAttribute raw;
  auto& a = raw.stats;
  a.name = get_string(j, "name", path);
  if (j.contains("cardinality")) {
    a.cardinality = get_int(j, "cardinality", path);
    raw.has_cardinality = true;
  } else if (j.contains("sample")) {
    const auto& sample = j.at("sample");
    if (!sample.is_array()) throw ValidationError(path + ".sample", "expected an array");
    std::set<std::string> distinct;
    for (const auto& v : sample) distinct.insert(v.dump());
    a.cardinality = static_cast<std::int64_t>(distinct.size());
    raw.has_cardinality = true;
  }
  if (!raw.has_cardinality) throw ValidationError(path + ".cardinality", "missing");
  if (!j.contains("width_bytes")) throw ValidationError(path + ".width_bytes", "missing");
  a.width_bytes = get_int(j, "width_bytes", path);
  if (j.contains("selectivity")) {
    a.selectivity = get_number(j, "selectivity", path);
    raw.has_selectivity = true;
  }
  if (j.contains("blocking_factor")) {
    a.blocking_factor = get_int(j, "blocking_factor", path);
    raw.has_blocking_factor = true;
  }
  if (j.contains("references")) a.references = AttrRef::parse(get_string(j, "references", path));
  if (j.contains("domain_expansion")) {
    auto xi = get_int(j, "domain_expansion", path);
    if (xi != 0 && xi != 1) throw ValidationError(path + ".domain_expansion", "must be 0 or 1");
    a.domain_expansion = static_cast<int>(xi);
  }
  return raw;
}

inline TableStats parse_table(const json& j, const std::string& path, std::int64_t page_size) {
  reject_unknown_keys(j, {"name", "row_count", "page_count", "attributes"}, path);
  TableStats t;
  t.name = get_string(j, "name", path);
  if (!j.contains("row_count")) throw ValidationError(path + ".row_count", "missing");
  t.row_count = get_int(j, "row_count", path);
  if (t.row_count < 0) throw ValidationError(path + ".row_count", "must be non-negative");
  if (!j.contains("attributes") || !j.at("attributes").is_array()) {
    throw ValidationError(path + ".attributes", "expected an array");
  }

  std::set<std::string> names;
  const auto& attrs = j.at("attributes");
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const std::string apath = path + ".attributes[" + std::to_string(i) + "]";
    RawAttribute raw = parse_attribute(attrs[i], apath);
    auto& a = raw.stats;
    if (!names.insert(a.name).second) throw ValidationError(apath + ".name", "duplicate attribute");
    if (a.cardinality < 1) throw ValidationError(apath + ".cardinality", "must be >= 1");
    if (t.row_count > 0 && a.cardinality > t.row_count) {
      throw ValidationError(apath + ".cardinality", "exceeds table row_count");
    }
    if (a.width_bytes < 1) throw ValidationError(apath + ".width_bytes", "must be >= 1");
    if (!raw.has_selectivity) a.selectivity = 1.0 / static_cast<double>(a.cardinality);
    if (!(a.selectivity > 0.0 && a.selectivity <= 1.0)) {
      throw ValidationError(apath + ".selectivity", "must lie in (0, 1]");
    }
    if (!raw.has_blocking_factor) a.blocking_factor = page_size / (a.width_bytes + 8);
    if (a.blocking_factor < 2) {
      throw ValidationError(apath + ".blocking_factor", "must be >= 2");
    }
    t.attributes.push_back(std::move(a));
  }

  if (j.contains("page_count")) {
    t.page_count = get_int(j, "page_count", path);
    if (t.page_count < 1) throw ValidationError(path + ".page_count", "must be >= 1");
  } else {
    const std::int64_t bytes = t.row_count * t.row_width();
    t.page_count = std::max<std::int64_t>(1, (bytes + page_size - 1) / page_size);
  }
  return t;
}

}  // namespace detail

// Builds and validates a catalog from its JSON document. Derived fields
// (page_count, selectivity, blocking_factor, sample cardinality) are filled in.
inline Catalog parse_catalog(const nlohmann::json& doc) {
  using detail::get_int;
  using detail::get_number;
  detail::reject_unknown_keys(doc,
                              {"fact", "dimensions", "page_size_bytes", "btree_order",
                               "refresh_ratio", "op_frequencies"},
                              "catalog");
  Catalog c;
  if (doc.contains("page_size_bytes")) c.page_size_bytes = get_int(doc, "page_size_bytes", "catalog");
  if (c.page_size_bytes <= 0) throw ValidationError("page_size_bytes", "must be > 0");
  if (doc.contains("btree_order")) c.btree_order = static_cast<int>(get_int(doc, "btree_order", "catalog"));
  if (c.btree_order < 3) throw ValidationError("btree_order", "must be >= 3");
  if (doc.contains("refresh_ratio")) c.refresh_ratio = get_number(doc, "refresh_ratio", "catalog");
  if (c.refresh_ratio < 0.0) throw ValidationError("refresh_ratio", "must be non-negative");

  if (doc.contains("op_frequencies")) {
    const auto& f = doc.at("op_frequencies");
    detail::reject_unknown_keys(f, {"f_ins", "f_del", "f_upd"}, "op_frequencies");
    if (f.contains("f_ins")) c.op_frequencies.f_ins = get_number(f, "f_ins", "op_frequencies");
    if (f.contains("f_del")) c.op_frequencies.f_del = get_number(f, "f_del", "op_frequencies");
    if (f.contains("f_upd")) c.op_frequencies.f_upd = get_number(f, "f_upd", "op_frequencies");
    const auto& o = c.op_frequencies;
    if (o.f_ins < 0 || o.f_del < 0 || o.f_upd < 0) {
      throw ValidationError("op_frequencies", "frequencies must be non-negative");
    }
    if (o.f_ins + o.f_del + o.f_upd > 1.0 + 1e-12) {
      throw ValidationError("op_frequencies", "frequencies must sum to at most 1");
    }
  }

  if (!doc.contains("fact")) throw ValidationError("fact", "missing");
  c.fact = detail::parse_table(doc.at("fact"), "fact", c.page_size_bytes);
  if (!doc.contains("dimensions") || !doc.at("dimensions").is_array()) {
    throw ValidationError("dimensions", "expected an array");
  }
  const auto& dims = doc.at("dimensions");
  if (dims.empty()) throw ValidationError("dimensions", "at least one dimension is required");
  std::set<std::string> table_names{c.fact.name};
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string path = "dimensions[" + std::to_string(i) + "]";
    c.dimensions.push_back(detail::parse_table(dims[i], path, c.page_size_bytes));
    if (!table_names.insert(c.dimensions.back().name).second) {
      throw ValidationError(path + ".name", "duplicate table name");
    }
  }

  // Foreign keys: explicit `references`, otherwise a same-named dimension column.
  for (std::size_t i = 0; i < c.fact.attributes.size(); ++i) {
    auto& a = c.fact.attributes[i];
    const std::string path = "fact.attributes[" + std::to_string(i) + "].references";
    if (a.references) {
      const TableStats* t = c.table(a.references->table);
      if (t == nullptr || c.is_fact(t->name) || t->find(a.references->column) == nullptr) {
        throw ValidationError(path, "'" + a.references->label() + "' is not a dimension attribute");
      }
      continue;
    }
    std::vector<AttrRef> matches;
    for (const auto& d : c.dimensions) {
      if (d.find(a.name)) matches.push_back({d.name, a.name});
    }
    if (matches.size() > 1) {
      throw ValidationError(path, "foreign key '" + a.name + "' matches several dimensions");
    }
    if (matches.size() == 1) a.references = matches.front();
  }
  return c;
}

inline Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open catalog '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("catalog '" + path + "': " + e.what());
  }
  try {
    return parse_catalog(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("catalog", e.what());
  }
}

}  // namespace pda
