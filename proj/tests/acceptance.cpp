// Acceptance suite: one PASS/FAIL line per criterion.

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "golden.hpp"
#include "pdadvisor/oracle.hpp"
#include "random_universe.hpp"

namespace {

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const pda::Universe& sales_universe() {
  static const auto u = pda::make_universe(fixtures::fig5_workload(), fixtures::fig4_fig6_candidates(),
                                           pda::RuleSet{}, fixtures::sales_catalog());
  return u;
}

std::size_t mismatches(const std::string& name, const pda::BinaryMatrix& m, std::initializer_list<const char*> printed) {
  const auto rows = fixtures::rows(printed);
  std::size_t bad = 0, cells = 0;
  if (m.rows() != rows.size()) {
    note(name + ": row count " + std::to_string(m.rows()) + " != " + std::to_string(rows.size()));
    return rows.size() * (rows.empty() ? 0 : rows[0].size()) + 1;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (m.cols() != rows[r].size()) return ++bad;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      ++cells;
      if (m.at(r, c) != rows[r][c]) {
        ++bad;
        note(name + " cell (" + m.row_labels()[r] + "," + m.column_labels()[c] + "): computed " +
             std::to_string(m.at(r, c)) + ", printed " + std::to_string(rows[r][c]));
      }
    }
  }
  note(name + ": " + std::to_string(cells - bad) + "/" + std::to_string(cells) + " cells match");
  return bad;
}

// Criterion 1
TEST(Acceptance, C1_GoldenMatrices) {
  const auto qa = pda::build_query_attribute(fixtures::fig2_workload(), pda::RuleSet::none(), fixtures::fig2_catalog());
  for (std::size_t c = 0; c < qa.cols() && c < 8; ++c) EXPECT_EQ(qa.column_labels()[c], golden::kQueryAttributeColumns[c]);
  EXPECT_EQ(mismatches("query-attribute", qa, golden::kQueryAttribute), 0u);
  const auto& u = sales_universe();
  EXPECT_EQ(mismatches("query-view", u.qv, golden::kQueryView), 0u);
  EXPECT_EQ(mismatches("query-index", u.qi, golden::kQueryIndex), 0u);
  EXPECT_EQ(mismatches("view-index", u.vi, golden::kViewIndex), 0u);
}

// Criterion 2
TEST(Acceptance, C2_MinerMatchesOracle) {
  std::mt19937 rng(2002);
  std::size_t compared = 0, differing = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t items = 1 + rng() % 12, objects = 1 + rng() % 30;
    std::bernoulli_distribution bit(std::uniform_real_distribution<double>(0.1, 0.9)(rng));
    pda::Context ctx;
    for (std::size_t i = 0; i < items; ++i) ctx.items.push_back("x" + std::to_string(i));
    ctx.objects.assign(objects, std::vector<bool>(items));
    for (auto& row : ctx.objects) {
      for (std::size_t i = 0; i < items; ++i) row[i] = bit(rng);
    }
    for (double minsup : {0.1, 0.34, 1.0}) {
      const auto got = pda::mine_closed(ctx, minsup);
      std::vector<pda::ClosedItemset> want;
      for (const auto& s : pda::oracle::naive_closed_itemsets(ctx.objects, items, minsup)) want.push_back({s.items, s.support});
      ++compared;
      if (got != want) ++differing;
    }
  }
  note(std::to_string(compared - differing) + "/" + std::to_string(compared) + " (context, minsup) pairs identical");
  EXPECT_EQ(differing, 0u);
}

// Criterion 3
TEST(Acceptance, C3_ClusteringQuality) {
  std::mt19937 rng(3003);
  std::size_t worse_than_trivial = 0, over_gap = 0;
  std::map<std::string, int> gaps;
  double worst = 1.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 8, cols = 2 + rng() % 10;
    const double density = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
    std::bernoulli_distribution bit(density);
    pda::BinaryMatrix m(std::vector<std::string>(n, "q"), std::vector<std::string>(cols, "a"));
    std::vector<std::vector<bool>> rows(n, std::vector<bool>(cols));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        rows[r][c] = bit(rng);
        m.set(r, c, rows[r][c]);
      }
    }
    const std::size_t signatures = 1 + rng() % 3;
    std::vector<pda::JoinSignature> joins;
    for (std::size_t r = 0; r < n; ++r) {
      const auto s = rng() % signatures;
      joins.push_back({{{"F", "k" + std::to_string(s)}, {"D" + std::to_string(s), "k"}}});
    }
    const auto q = pda::quality(pda::cluster(m, joins), m);
    const auto best = pda::oracle::best_partition(rows, joins).quality;
    if (q > pda::quality(pda::singleton_partition(n), m) || q > pda::quality(pda::coarsest_partition(joins), m)) {
      ++worse_than_trivial;
    }
    const double ratio = best == 0 ? (q == 0 ? 1.0 : INFINITY) : static_cast<double>(q) / static_cast<double>(best);
    worst = std::max(worst, ratio);
    if (ratio > 1.25) ++over_gap;
    gaps[ratio == 1.0 ? "1.00" : ratio <= 1.05 ? "<=1.05" : ratio <= 1.10 ? "<=1.10" : ratio <= 1.25 ? "<=1.25" : ">1.25"]++;
  }
  std::string dist;
  for (const auto& [k, v] : gaps) dist += " " + k + ":" + std::to_string(v);
  note("gap quality(cluster)/quality(best) distribution:" + dist + "; worst " + fmt(worst));
  EXPECT_EQ(worse_than_trivial, 0u);
  EXPECT_EQ(over_gap, 0u);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Criterion 4
TEST(Acceptance, C4_CostModelFixtures) {
  const double tol = 1e-6;
  const pda::Catalog c;
  struct Case {
    const char* name;
    double got, want;
  };
  const double read20 = 1e4 * (1.0 - std::exp(-20.0));
  const Case cases[] = {
      {"Cardenas(m=2, |F|=3)", pda::cardenas_rows(2, 3), 1.75},
      // three draws without replacement from {a, a', b, b'} always see both groups
      {"Yao(m=2, n=4, |F|=3)", pda::yao_rows(2, 4, 3), 2.0},
      {"view size 1.75 rows x (4 + 8)", static_cast<double>(pda::view_size_bytes(
                                            1.75, {{"F", "g"}}, {{pda::Aggregate::Count, std::nullopt}},
                                            [] {
                                              pda::Catalog k;
                                              k.fact.name = "F";
                                              k.fact.attributes = {{"g", 2, 4}};
                                              return k;
                                            }())),
       24.0},
      {"bitmap d=2 |A|=10 direct", pda::bitmap_access_cost(2, 10, 1e6, 1e4, c), 305.17578125 + read20},
      {"bitmap d=2 |A|=10 via B-tree", pda::bitmap_access_cost(2, 10, 1e6, 1e4, c, {true, false}),
       2.0 * 1e6 / 65536.0 + read20},
      {"bitmap via B-tree with leaves", pda::bitmap_access_cost(2, 10, 1e6, 1e4, c, {true, true}),
       2.0 * 1e6 / 65536.0 + read20 + 10.0 / 99.0},
      {"maintenance_F", pda::bitmap_maintenance(10, 1e6, 1e4, 50, 0, c).on_fact_insert, 50 + 152.587890625},
      {"maintenance_D xi=0", pda::bitmap_maintenance(10, 1e6, 1e4, 50, 0, c).on_dim_insert, 1e4 + 152.587890625},
      {"maintenance_D xi=1", pda::bitmap_maintenance(10, 1e6, 1e4, 50, 1, c).on_dim_insert, 1e4 + 2 * 152.587890625},
      {"B-tree |v|=1000 BF=100 SF=0.01 P=50", pda::btree_access_cost({{0.01, 100}}, 1000, 50),
       2.0 + 50.0 * (1.0 - std::pow(0.98, 10))},
      {"B-tree maintenance f=1/3 |v|=1e4", pda::btree_maintenance({{0.01, 100}}, {{0.01, 100}}, 10000, {1. / 3, 1. / 3, 1. / 3}),
       2.0},
  };
  for (const auto& k : cases) {
    const bool ok = rel_err(k.got, k.want) <= tol;
    note(std::string(ok ? "ok   " : "MISS ") + k.name + ": " + fmt(k.got) + " vs " + fmt(k.want));
    EXPECT_LE(rel_err(k.got, k.want), tol) << k.name;
  }
  // degenerate cases, exact
  EXPECT_EQ(pda::yao_rows(1, 1000, 10), 1.0);
  EXPECT_EQ(pda::yao_rows(5, 1000, 0), 0.0);
  EXPECT_EQ(pda::cardenas_rows(1, 12345), 1.0);
  EXPECT_EQ(pda::bitmap_access_cost(1, 2, 0, 1, c), 0.0);
  EXPECT_EQ(pda::bitmap_maintenance(0, 1e6, 1e4, 50, 1, c).on_fact_insert, 50.0);
  EXPECT_EQ(pda::bitmap_maintenance(0, 1e6, 1e4, 50, 1, c).on_dim_insert, 1e4);
  EXPECT_EQ(pda::btree_maintenance({{0.01, 100}}, {}, 10000, {0.5, 0.5, 0.0}), 2.0);
  EXPECT_EQ(pda::btree_maintenance({{0.5, 100}}, {{0.5, 100}}, 1, {0.2, 0.2, 0.6}), 0.0);
  EXPECT_EQ(pda::ceil_log(100, 1), 0);
  EXPECT_NEAR(pda::btree_access_cost({{1.0, 100000}}, 100000, 40), 41.0, 1e-6);
  EXPECT_THROW(pda::btree_access_cost({}, 1000, 50), pda::InapplicablePlan);
}

// Criterion 5
TEST(Acceptance, C5_YaoCardenasAgreement) {
  std::mt19937 rng(5005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t over = 0;
  for (int t = 0; t < 50; ++t) {
    pda::Catalog cat;
    cat.fact.name = "F";
    const int dims = 1 + static_cast<int>(rng() % 3);
    std::vector<pda::AttrRef> grouping;
    for (int d = 0; d < dims; ++d) {
      pda::TableStats dim;
      dim.name = "D" + std::to_string(d);
      dim.row_count = static_cast<std::int64_t>(std::pow(10.0, 1.0 + 3.0 * unit(rng)));
      const auto card = std::max<std::int64_t>(1, static_cast<std::int64_t>(static_cast<double>(dim.row_count) * unit(rng) / 4));
      dim.attributes = {{"g", card, 4}};
      cat.dimensions.push_back(dim);
      if (d == 0 || rng() % 2) grouping.push_back({dim.name, "g"});
    }
    const double mv = pda::max_size(grouping, cat), mf = pda::fact_max_size(cat);
    if (mf / mv <= 100.0) {
      --t;
      continue;
    }
    cat.fact.row_count = static_cast<std::int64_t>(std::pow(mf, unit(rng)));
    const double yao = pda::view_rows(grouping, cat, pda::SizeEstimator::Yao);
    const double car = pda::view_rows(grouping, cat, pda::SizeEstimator::Cardenas);
    const double diff = rel_err(car, yao);
    worst = std::max(worst, diff);
    if (diff >= 0.01) ++over;
  }
  note("worst relative difference " + fmt(worst));
  EXPECT_EQ(over, 0u);
}

// Criterion 6
TEST(Acceptance, C6_GreedyNearOptimum) {
  std::mt19937 rng(6006);
  const auto& cat = fixtures::desk_catalog();
  double worst = 1.0;
  std::size_t over = 0, budget_violations = 0, non_monotone = 0;
  std::map<std::string, int> ratios;
  for (int t = 0; t < 50; ++t) {
    const auto rc = fixtures::random_case(rng, 12);
    const auto u = pda::make_universe(rc.workload, rc.objects, pda::RuleSet{}, cat);
    const pda::Planner planner(rc.workload, u, cat);
    const auto cfg = pda::Selector(planner, cat, {}).run(rc.budget);
    const pda::oracle::NaiveEvaluator eval(rc.workload, u.objects, cat);
    const double greedy = eval.workload_cost(pda::selection_of(cfg, u.objects.size()));
    const double best = pda::oracle::best_configuration(u.objects, rc.budget, eval).cost;
    const double ratio = greedy / best;
    worst = std::max(worst, ratio);
    if (ratio > 1.10 + 1e-12) ++over;
    if (cfg.occupied_bytes > rc.budget) ++budget_violations;
    double prev = planner.workload_cost(pda::Selection(u.objects.size(), false));
    for (const auto& e : cfg.trace) {
      if (e.workload_cost > prev + 1e-9) ++non_monotone;
      prev = e.workload_cost;
    }
    ratios[ratio <= 1.0 + 1e-12 ? "1.00" : ratio <= 1.05 ? "<=1.05" : ratio <= 1.10 ? "<=1.10" : ">1.10"]++;
  }
  std::string dist;
  for (const auto& [k, v] : ratios) dist += " " + k + ":" + std::to_string(v);
  note("greedy/optimum distribution:" + dist + "; worst " + fmt(worst));
  EXPECT_EQ(over, 0u);
  EXPECT_EQ(budget_violations, 0u);
  EXPECT_EQ(non_monotone, 0u);
}

pda::ObjectiveParams desk_params() {
  pda::ObjectiveParams params;
  params.refresh_ratio = fixtures::desk_catalog().refresh_ratio;
  return params;
}

std::int64_t desk_footprint(const pda::Mining& m) {
  return pda::unconstrained_footprint(fixtures::desk_workload(), fixtures::desk_catalog(), m, {}, desk_params());
}

double desk_cost(const pda::Mining& m, double pct, pda::AdviceMode mode) {
  pda::AdvisorOptions opt;
  opt.mode = mode;
  const auto params = desk_params();
  const auto budget = static_cast<std::int64_t>(std::floor(pct / 100.0 * static_cast<double>(desk_footprint(m))));
  return pda::advise(fixtures::desk_workload(), fixtures::desk_catalog(), m, budget, opt, params).cost_after;
}

// Criterion 7
TEST(Acceptance, C7_BudgetSweepTrend) {
  const auto m = pda::mine_candidates(fixtures::desk_workload(), fixtures::desk_catalog(), {});
  note("S_VI = " + std::to_string(desk_footprint(m)) + " bytes of " + std::to_string(pda::candidate_bytes(m)) +
       " candidate bytes; "  + std::to_string(m.views.size()) +
       " views, " + std::to_string(m.indexes.size()) + " indexes");
  double prev = INFINITY;
  std::string line;
  bool monotone = true;
  for (double pct : {1.0, 5.0, 15.0, 35.0, 60.0, 100.0}) {
    const double cost = desk_cost(m, pct, pda::AdviceMode::Joint);
    line += " " + fmt(pct) + "%:" + fmt(cost);
    monotone = monotone && cost <= prev + 1e-9;
    prev = cost;
  }
  note("joint workload cost by budget:" + line);
  EXPECT_TRUE(monotone);
  const double idx1 = desk_cost(m, 1, pda::AdviceMode::IndexesOnly), views1 = desk_cost(m, 1, pda::AdviceMode::ViewsOnly);
  note("1%: indexes-only " + fmt(idx1) + ", views-only " + fmt(views1));
  EXPECT_LE(idx1, views1 + 1e-9);
  const double joint = desk_cost(m, 100, pda::AdviceMode::Joint);
  const double idx = desk_cost(m, 100, pda::AdviceMode::IndexesOnly), views = desk_cost(m, 100, pda::AdviceMode::ViewsOnly);
  note("100%: joint " + fmt(joint) + ", indexes-only " + fmt(idx) + ", views-only " + fmt(views));
  EXPECT_LE(joint, idx + 1e-9);
  EXPECT_LE(joint, views + 1e-9);
}

// Criterion 8
TEST(Acceptance, C8_CoverRate) {
  struct Input {
    const pda::Workload* w;
    const pda::Catalog* c;
  };
  for (const Input in : {Input{&fixtures::fig5_workload(), &fixtures::sales_catalog()},
                         Input{&fixtures::desk_workload(), &fixtures::desk_catalog()}}) {
    const auto m = pda::mine_candidates(*in.w, *in.c, {});
    pda::ObjectiveParams params;
    params.refresh_ratio = in.c->refresh_ratio;
    const auto a = pda::advise(*in.w, *in.c, m, pda::candidate_bytes(m), {}, params);
    std::size_t covered = 0;
    for (std::size_t q = 0; q < in.w->size(); ++q) {
      bool any = false;
      for (std::size_t v = 0; v < a.universe.objects.views.size(); ++v) any = any || a.universe.qv.at(q, v);
      covered += any;
    }
    note(std::to_string(covered) + "/" + std::to_string(in.w->size()) + " queries covered by a candidate view; " +
         std::to_string(a.configuration.selected.size()) + " objects selected");
    EXPECT_EQ(covered, in.w->size());
  }
}

class CriterionLines : public testing::EmptyTestEventListener {
  void OnTestStart(const testing::TestInfo& info) override {
    start_ = std::chrono::steady_clock::now();
    std::printf("[%s]\n", info.name());
  }
  void OnTestEnd(const testing::TestInfo& info) override {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("%s %s (%.2f s)\n", info.result()->Passed() ? "PASS" : "FAIL", info.name(), secs);
    std::fflush(stdout);
  }
  void OnTestPartResult(const testing::TestPartResult& r) override {
    if (r.failed()) std::printf("    at %s:%d %s\n", r.file_name() ? r.file_name() : "?", r.line_number(), r.summary());
  }
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int main(int argc, char** argv) {
  testing::InitGoogleTest(&argc, argv);
  auto& listeners = testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new CriterionLines);
  const int rc = RUN_ALL_TESTS();
  const auto* u = testing::UnitTest::GetInstance();
  std::printf("%d/%d criteria passed\n", u->successful_test_count(), u->total_test_count());
  return rc;
}
