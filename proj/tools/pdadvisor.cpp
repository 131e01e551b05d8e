// pdadvisor: command-line front end for the physical-design advisor.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdadvisor/oracle.hpp"
#include "pdadvisor/pdadvisor.hpp"

namespace {

struct Common {
  std::string catalog;
  std::string workload;
  std::string rules;
  std::string estimator = "yao";
  double minsup = 0.01;
  double blowup = 2.0;
  std::string bitmap_access = "btree";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--catalog", c.catalog, "catalog JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--workload", c.workload, "SQL workload file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--rules", c.rules, "attribute preselection rules (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--minsup", c.minsup, "minimal support as a fraction of the mining context")
      ->check(CLI::Range(1e-9, 1.0));
  cmd->add_option("--estimator", c.estimator, "view size estimator")->check(CLI::IsMember({"yao", "cardenas"}));
  cmd->add_option("--blowup", c.blowup, "fusion blow-up factor")->check(CLI::PositiveNumber);
  cmd->add_option("--bitmap-access", c.bitmap_access, "reach bitmaps through a B-tree or scan them all")
      ->check(CLI::IsMember({"btree", "scan"}));
}

pda::RuleSet load_rules(const std::string& path) {
  pda::RuleSet rules;
  if (path.empty()) return rules;
  std::ifstream in(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw pda::ParseError("rules '" + path + "': " + e.what());
  }
  pda::detail::reject_unknown_keys(doc, {"exclude_neq", "min_cardinality", "max_cardinality_fraction"}, "rules");
  if (doc.contains("exclude_neq")) rules.exclude_neq = doc.at("exclude_neq").get<bool>();
  if (doc.contains("min_cardinality")) rules.min_cardinality = pda::detail::get_int(doc, "min_cardinality", "rules");
  if (doc.contains("max_cardinality_fraction")) {
    rules.max_cardinality_fraction = pda::detail::get_number(doc, "max_cardinality_fraction", "rules");
  }
  if (rules.min_cardinality < 0 || rules.max_cardinality_fraction < 0) {
    throw pda::ValidationError("rules", "thresholds must be non-negative");
  }
  return rules;
}

struct Loaded {
  pda::Catalog catalog;
  pda::Workload workload;
  pda::AdvisorOptions options;
};

Loaded load(const Common& c) {
  Loaded l;
  l.catalog = pda::load_catalog(c.catalog);
  l.workload = pda::load_workload(c.workload, l.catalog);
  l.options.minsup = c.minsup;
  l.options.rules = load_rules(c.rules);
  l.options.fusion.blowup_factor = c.blowup;
  l.options.fusion.estimator = c.estimator == "cardenas" ? pda::SizeEstimator::Cardenas : pda::SizeEstimator::Yao;
  l.options.planner.bitmap.via_btree = c.bitmap_access == "btree";
  return l;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw pda::ParseError("cannot write '" + p.string() + "'");
  out << text;
}

// Universe from an explicit candidate file, or mined from the workload.
pda::Universe universe_for(const Loaded& l, const std::string& candidates) {
  if (!candidates.empty()) {
    auto set = pda::load_candidates(candidates, l.catalog, l.options.fusion.estimator);
    return pda::make_universe(l.workload, std::move(set), l.options.rules, l.catalog);
  }
  const auto m = pda::mine_candidates(l.workload, l.catalog, l.options);
  return pda::make_universe(l.workload, pda::restrict_to_mode(m, l.options.mode), l.options.rules, l.catalog);
}

std::vector<std::string> config_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pda::ParseError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw pda::ParseError("config '" + path + "': " + e.what());
  }
  std::vector<std::string> ids;
  if (doc.contains("objects")) {
    for (const auto& id : doc.at("objects")) ids.push_back(id.get<std::string>());
  } else if (doc.contains("selected")) {
    for (const auto& o : doc.at("selected")) ids.push_back(o.at("id").get<std::string>());
  } else {
    throw pda::ValidationError("config", "expected an 'objects' list or a report with 'selected'");
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical-design advisor: materialized views and indexes for star-schema workloads"};
  app.require_subcommand(1);

  Common common;

  auto* advise = app.add_subcommand("advise", "recommend views and indexes under a storage budget");
  add_common(advise, common);
  std::string budget = "100%", mode = "joint", out_dir = ".", dialect = "generic";
  double alpha_index = 1.0;
  std::optional<double> refresh;
  bool trace = false;
  advise->add_option("--budget", budget, "storage budget in bytes, or N% of the unconstrained footprint");
  advise->add_option("--alpha-index", alpha_index, "weight of bitmap join index benefit")->check(CLI::NonNegativeNumber);
  advise->add_option("--refresh-ratio", refresh, "refresh/interrogation ratio (defaults to the catalog's)")
      ->check(CLI::NonNegativeNumber);
  advise->add_option("--mode", mode, "object kinds to select")->check(CLI::IsMember({"joint", "views", "indexes"}));
  advise->add_flag("--trace", trace, "write trace.jsonl");
  advise->add_option("--out", out_dir, "output directory");
  advise->add_option("--dialect", dialect, "DDL dialect")->check(CLI::IsMember({"generic"}));

  auto* evaluate = app.add_subcommand("evaluate", "price a configuration against the workload");
  Common eval_common;
  add_common(evaluate, eval_common);
  std::string config, eval_candidates;
  evaluate->add_option("--config", config, "JSON {\"objects\": [...]} or an advise report")->required();
  evaluate->add_option("--candidates", eval_candidates, "candidate definition file")->check(CLI::ExistingFile);

  auto* explain = app.add_subcommand("explain", "dump intermediate structures");
  Common explain_common;
  add_common(explain, explain_common);
  bool matrices = false, clusters = false, itemsets = false;
  std::string explain_candidates;
  explain->add_flag("--matrices", matrices, "query-attribute, query-view, query-index and view-index CSV");
  explain->add_flag("--clusters", clusters, "query partition and fused views");
  explain->add_flag("--itemsets", itemsets, "closed itemsets over queries and candidate views");
  explain->add_option("--candidates", explain_candidates, "candidate definition file")->check(CLI::ExistingFile);

  auto* mine = app.add_subcommand("mine", "closed frequent attribute sets as CSV");
  Common mine_common;
  add_common(mine, mine_common);

  auto* oracle = app.add_subcommand("oracle", "exhaustive configuration search (small universes)");
  oracle->group("");
  Common oracle_common;
  add_common(oracle, oracle_common);
  std::string oracle_candidates, oracle_budget = "100%";
  oracle->add_option("--candidates", oracle_candidates, "candidate definition file")->check(CLI::ExistingFile);
  oracle->add_option("--budget", oracle_budget, "bytes or N%");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*advise) {
      auto l = load(common);
      l.options.mode = pda::parse_mode(mode);
      pda::ObjectiveParams params;
      params.alpha_index = alpha_index;
      params.refresh_ratio = refresh.value_or(l.catalog.refresh_ratio);
      const auto m = pda::mine_candidates(l.workload, l.catalog, l.options);
      const auto bytes = pda::parse_budget(budget, pda::unconstrained_footprint(l.workload, l.catalog, m, l.options, params));
      const auto advice = pda::advise(l.workload, l.catalog, m, bytes, l.options, params);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      write_file(dir / "report.json", pda::report_json(l.workload, advice, mode).dump(2) + "\n");
      write_file(dir / "advice.sql", pda::ddl_script(advice.universe, advice.configuration, l.catalog));
      if (trace) write_file(dir / "trace.jsonl", pda::trace_jsonl(advice.configuration));
      std::cout << "selected " << advice.configuration.selected.size() << " objects, "
                << advice.configuration.occupied_bytes << " of " << bytes << " bytes; cost "
                << pda::format_pages(advice.cost_before) << " -> " << pda::format_pages(advice.cost_after)
                << " pages\n";
    } else if (*evaluate) {
      const auto l = load(eval_common);
      const auto u = universe_for(l, eval_candidates);
      const auto sel = pda::selection_of(u, config_ids(config));
      const pda::Planner planner(l.workload, u, l.catalog, l.options.planner);
      std::cout << pda::plans_csv(planner.plan_all(sel));
    } else if (*explain) {
      const auto l = load(explain_common);
      if (!matrices && !clusters && !itemsets) matrices = true;
      const auto m = pda::mine_candidates(l.workload, l.catalog, l.options);
      if (matrices) {
        const auto u = universe_for(l, explain_candidates);
        std::cout << "# query_attribute\n" << m.query_attribute.to_csv() << "\n# query_view\n" << u.qv.to_csv()
                  << "\n# query_index\n" << u.qi.to_csv() << "\n# view_index\n" << u.vi.to_csv();
      }
      if (clusters) std::cout << pda::clusters_text(l.workload, m, l.catalog);
      if (itemsets) std::cout << pda::itemsets_csv(m.itemsets, m.context.items);
    } else if (*mine) {
      const auto l = load(mine_common);
      const auto m = pda::mine_candidates(l.workload, l.catalog, l.options);
      std::cout << pda::itemsets_csv(m.itemsets, m.context.items);
    } else if (*oracle) {
      const auto l = load(oracle_common);
      const auto u = universe_for(l, oracle_candidates);
      const auto bytes = pda::parse_budget(oracle_budget, u.objects.total_bytes());
      pda::oracle::EvalOptions eo;
      eo.bitmap_via_btree = l.options.planner.bitmap.via_btree;
      eo.exclude_neq = l.options.rules.exclude_neq;
      eo.min_cardinality = l.options.rules.min_cardinality;
      eo.max_cardinality_fraction = l.options.rules.max_cardinality_fraction;
      const pda::oracle::NaiveEvaluator eval(l.workload, u.objects, l.catalog, eo);
      const auto best = pda::oracle::best_configuration(u.objects, bytes, eval);
      std::cout << "cost," << pda::format_pages(best.cost) << "\noccupied_bytes," << best.occupied_bytes
                << "\nobjects,";
      for (std::size_t k = 0; k < best.selected.size(); ++k) std::cout << (k ? ";" : "") << u.objects.id(best.selected[k]);
      std::cout << '\n';
    }
  } catch (const pda::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
