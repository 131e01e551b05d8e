#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using pda::AttrRef;

namespace {

std::vector<std::string> labels(const std::vector<AttrRef>& attrs) {
  std::vector<std::string> out;
  for (const auto& a : attrs) out.push_back(a.label());
  return out;
}

pda::Workload parse(const std::string& sql) { return pda::parse_workload(sql, fixtures::sales_catalog()); }

}  // namespace

TEST(ParseWorkload, FirstExcerptQuery) {
  const auto& w = fixtures::fig2_workload();
  ASSERT_EQ(w.size(), 3u);
  const auto& q = w.queries[0];
  EXPECT_EQ(q.id, "q1");
  EXPECT_EQ(labels(q.grouping), std::vector<std::string>{"F.a1"});
  ASSERT_EQ(q.measures.size(), 1u);
  EXPECT_EQ(q.measures[0].label(), "SUM(F.a2)");
  ASSERT_EQ(q.restrictions.size(), 1u);
  EXPECT_EQ(q.restrictions[0].attr.label(), "D1.a4");
  EXPECT_EQ(q.restrictions[0].op, pda::CompareOp::Lt);
  EXPECT_EQ(q.restrictions[0].literals, std::vector<std::string>{"2000"});
  ASSERT_EQ(q.joins.size(), 1u);
  EXPECT_EQ(q.joins[0].fact_attr.label(), "F.a1");
  EXPECT_EQ(q.joins[0].dim_attr.label(), "D1.a3");
  EXPECT_EQ(w.queries[1].measures[0].label(), "AVG(F.a6)");
}

TEST(ParseWorkload, ChannelQuery) {
  const auto& q = fixtures::fig5_workload().queries[7];
  EXPECT_EQ(q.id, "q8");
  ASSERT_EQ(q.joins.size(), 1u);
  EXPECT_EQ(q.joins[0].fact_attr.label(), "sales.channel_id");
  EXPECT_EQ(q.joins[0].dim_attr.label(), "channels.channel_id");
  ASSERT_EQ(q.restrictions.size(), 1u);
  EXPECT_EQ(q.restrictions[0].attr.label(), "channels.channel_class");
  EXPECT_EQ(q.restrictions[0].literals[0], "Internet");
  EXPECT_EQ(labels(q.grouping), std::vector<std::string>{"channels.channel_desc"});
  EXPECT_EQ(q.measures[0].label(), "SUM(sales.quantity_sold)");
}

TEST(ParseWorkload, JoinWrittenDimensionFirst) {
  const auto w = parse("SELECT channel_desc, COUNT(*) FROM sales, channels "
                       "WHERE channels.channel_id = sales.channel_id GROUP BY channel_desc");
  EXPECT_EQ(w.queries[0].joins[0].fact_attr.label(), "sales.channel_id");
  EXPECT_EQ(w.queries[0].measures[0].label(), "COUNT(*)");
}

TEST(ParseWorkload, OperatorsAndLiterals) {
  const auto w = parse(
      "select times.time_month, sum(amount_sold) as total from sales, times "
      "where sales.time_id = times.time_id and times.time_calendar_year between 1998 and 2000 "
      "and times.time_day_name like 'Mon%' and times.time_quarter <> 'Q1' and times.time_fiscal_year >= -3 "
      "and times.time_month != 'O''Neil' group by times.time_month;");
  const auto& r = w.queries[0].restrictions;
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(r[0].op, pda::CompareOp::Between);
  EXPECT_EQ(r[0].literals, (std::vector<std::string>{"1998", "2000"}));
  EXPECT_EQ(r[1].op, pda::CompareOp::Like);
  EXPECT_EQ(r[2].op, pda::CompareOp::Ne);
  EXPECT_EQ(r[3].op, pda::CompareOp::Ge);
  EXPECT_EQ(r[3].literals[0], "-3");
  EXPECT_EQ(r[4].op, pda::CompareOp::Ne);
  EXPECT_EQ(r[4].literals[0], "O'Neil");
}

TEST(ParseWorkload, CommentsAndBlankStatements) {
  const auto w = parse("-- header; with a semicolon\n;;\n"
                       "SELECT channel_class, SUM(quantity_sold) FROM sales, channels -- trailing\n"
                       "WHERE sales.channel_id = channels.channel_id GROUP BY channel_class;\n;");
  EXPECT_EQ(w.size(), 1u);
}

TEST(ParseWorkload, SubqueryIsSyntaxError) {
  EXPECT_THROW(parse("SELECT SUM(amount_sold) FROM sales WHERE amount_sold > (SELECT AVG(amount_sold) FROM sales)"),
               pda::SyntaxError);
}

TEST(ParseWorkload, UnsupportedConstructsAreSyntaxErrors) {
  const char* bad[] = {
      "SELECT SUM(amount_sold) FROM sales WHERE prod_id = 1 OR prod_id = 2",
      "SELECT prod_id, SUM(amount_sold) FROM sales GROUP BY prod_id HAVING SUM(amount_sold) > 3",
      "SELECT prod_id, SUM(amount_sold) FROM sales GROUP BY prod_id ORDER BY prod_id",
      "SELECT SUM(s.amount_sold) FROM sales s",
      "SELECT prod_id FROM sales GROUP BY prod_id",
      "SELECT prod_id, SUM(amount_sold) FROM sales",
      "SELECT SUM(amount_sold) FROM sales, channels",
      "SELECT SUM(*) FROM sales",
      "SELECT COUNT(DISTINCT prod_id) FROM sales",
      "SELECT SUM(amount_sold) FROM sales WHERE prod_id IN (1, 2)",
      "SELECT SUM(amount_sold) FROM channels",
      "SELECT SUM(amount_sold) FROM sales WHERE prod_id = 'open",
      "SELECT SUM(amount_sold) FROM sales WHERE prod_id = #",
      "UPDATE sales SET prod_id = 1",
  };
  for (const char* sql : bad) EXPECT_THROW(parse(sql), pda::SyntaxError) << sql;
}

TEST(ParseWorkload, SyntaxErrorCarriesStatementIndexAndToken) {
  try {
    parse("SELECT channel_class, SUM(quantity_sold) FROM sales, channels "
          "WHERE sales.channel_id = channels.channel_id GROUP BY channel_class;"
          "SELECT SUM(amount_sold) FROM sales WHERE prod_id = 1 OR prod_id = 2;");
    FAIL() << "expected SyntaxError";
  } catch (const pda::SyntaxError& e) {
    EXPECT_EQ(e.statement(), 1u);
    EXPECT_EQ(e.token(), "OR");
  }
}

TEST(ParseWorkload, UnknownAndAmbiguousAttributes) {
  EXPECT_THROW(parse("SELECT SUM(nothing) FROM sales"), pda::UnknownAttributeError);
  EXPECT_THROW(parse("SELECT SUM(sales.nothing) FROM sales"), pda::UnknownAttributeError);
  EXPECT_THROW(parse("SELECT SUM(amount_sold) FROM sales WHERE times.time_month = 1"), pda::UnknownAttributeError);
  EXPECT_THROW(parse("SELECT SUM(amount_sold) FROM sales, warehouse"), pda::UnknownAttributeError);
  // channel_id exists in both sales and channels
  EXPECT_THROW(parse("SELECT channel_id, SUM(amount_sold) FROM sales, channels "
                     "WHERE sales.channel_id = channels.channel_id GROUP BY channel_id"),
               pda::UnknownAttributeError);
}

TEST(ParseWorkload, DigestDependsOnText) {
  const auto a = parse("SELECT SUM(amount_sold) FROM sales");
  const auto b = parse("SELECT SUM(amount_sold) FROM sales");
  const auto c = parse("SELECT SUM(quantity_sold) FROM sales");
  EXPECT_EQ(a.source_digest, b.source_digest);
  EXPECT_NE(a.source_digest, c.source_digest);
  EXPECT_EQ(a.source_digest.size(), 16u);
  EXPECT_EQ(pda::fnv1a_digest(""), "cbf29ce484222325");
}

TEST(ParseWorkload, EmptyWorkloadIsSyntaxError) {
  EXPECT_THROW(parse("-- nothing here\n"), pda::SyntaxError);
}

TEST(RepresentativeAttributes, ExcerptQueryWithoutRules) {
  const auto& q = fixtures::fig2_workload().queries[0];
  EXPECT_EQ(labels(pda::representative_attributes(q, pda::RuleSet::none(), fixtures::fig2_catalog())),
            (std::vector<std::string>{"F.a1", "D1.a3", "D1.a4"}));
}

TEST(RepresentativeAttributes, InequalityRuleDropsAttribute) {
  const auto w = parse("SELECT cust_city, SUM(amount_sold) FROM sales, customers "
                       "WHERE sales.cust_id = customers.cust_id AND cust_gender <> 'M' GROUP BY cust_city");
  const auto& c = fixtures::sales_catalog();
  const auto with = labels(pda::representative_attributes(w.queries[0], pda::RuleSet{}, c));
  const auto without = labels(pda::representative_attributes(w.queries[0], pda::RuleSet::none(), c));
  EXPECT_EQ(std::count(with.begin(), with.end(), "customers.cust_gender"), 0);
  EXPECT_EQ(std::count(without.begin(), without.end(), "customers.cust_gender"), 1);
}

TEST(RepresentativeAttributes, GroupingOnlyQuery) {
  const auto w = parse("SELECT prod_id, SUM(amount_sold) FROM sales GROUP BY prod_id");
  EXPECT_EQ(labels(pda::representative_attributes(w.queries[0], pda::RuleSet{}, fixtures::sales_catalog())),
            std::vector<std::string>{"sales.prod_id"});
}

TEST(RepresentativeAttributes, SubsetOfSyntacticAttributesAndNoMeasures) {
  const auto& c = fixtures::desk_catalog();
  for (const auto& q : fixtures::desk_workload().queries) {
    std::vector<AttrRef> present = q.grouping_and_restriction_attributes();
    for (const auto& j : q.joins) {
      present.push_back(j.fact_attr);
      present.push_back(j.dim_attr);
    }
    for (const auto& a : pda::representative_attributes(q, pda::RuleSet::none(), c)) {
      EXPECT_NE(std::find(present.begin(), present.end(), a), present.end()) << q.id << " " << a.label();
    }
  }
}

TEST(RepresentativeAttributes, AddingRulesNeverAddsAttributes) {
  const auto& c = fixtures::desk_catalog();
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> card(0, 60);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    pda::RuleSet loose{false, card(rng), 0.5 + frac(rng)};
    pda::RuleSet tight{true, loose.min_cardinality + card(rng), loose.max_cardinality_fraction * frac(rng)};
    for (const auto& q : fixtures::desk_workload().queries) {
      const auto a = pda::representative_attributes(q, loose, c);
      for (const auto& x : pda::representative_attributes(q, tight, c)) {
        EXPECT_NE(std::find(a.begin(), a.end(), x), a.end());
      }
    }
  }
}
