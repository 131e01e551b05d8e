#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pdadvisor/pdadvisor.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(PDA_SAMPLES_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
  std::ifstream in(path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const pda::Catalog& fig2_catalog() {
  static const auto c = pda::load_catalog(path("fig2_catalog.json"));
  return c;
}
inline const pda::Workload& fig2_workload() {
  static const auto w = pda::load_workload(path("fig2_workload.sql"), fig2_catalog());
  return w;
}
inline const pda::Catalog& sales_catalog() {
  static const auto c = pda::load_catalog(path("sales_catalog.json"));
  return c;
}
inline const pda::Catalog& desk_catalog() {
  static const auto c = pda::load_catalog(path("sales_desk_catalog.json"));
  return c;
}
inline const pda::Workload& fig5_workload() {
  static const auto w = pda::load_workload(path("fig5_workload.sql"), sales_catalog());
  return w;
}
inline const pda::Workload& desk_workload() {
  static const auto w = pda::load_workload(path("desk_workload.sql"), desk_catalog());
  return w;
}
inline const pda::CandidateSet& fig4_fig6_candidates() {
  static const auto s = pda::load_candidates(path("fig4_fig6_candidates.json"), sales_catalog());
  return s;
}

// 0/1 rows written as strings, e.g. {"110", "011"}.
inline std::vector<std::vector<bool>> rows(std::initializer_list<const char*> text) {
  std::vector<std::vector<bool>> out;
  for (const char* r : text) {
    std::vector<bool> row;
    for (const char* c = r; *c; ++c) row.push_back(*c == '1');
    out.push_back(row);
  }
  return out;
}

inline pda::BinaryMatrix matrix(std::initializer_list<const char*> text) {
  const auto r = rows(text);
  std::vector<std::string> rl, cl;
  for (std::size_t i = 0; i < r.size(); ++i) rl.push_back("q" + std::to_string(i + 1));
  for (std::size_t j = 0; j < (r.empty() ? 0 : r[0].size()); ++j) cl.push_back("F.a" + std::to_string(j + 1));
  pda::BinaryMatrix m(rl, cl);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r[i].size(); ++j) m.set(i, j, r[i][j]);
  }
  return m;
}

}  // namespace fixtures
