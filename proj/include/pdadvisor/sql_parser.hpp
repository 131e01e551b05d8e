#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdadvisor/catalog.hpp"
#include "pdadvisor/errors.hpp"
#include "pdadvisor/workload.hpp"

// Closed SQL subset accepted for workloads:
//
//   SELECT item {, item} FROM table {, table}
//     [WHERE cond {AND cond}] [GROUP BY column {, column}]
//
//   item   := AGG '(' column | '*' ')' [AS name] | column [AS name]
//   cond   := column op literal | column '=' column
//           | column BETWEEN literal AND literal | column LIKE literal
//
// Anything else (subqueries, OR, HAVING, ORDER BY, aliases on tables) is a
// SyntaxError rather than a silent drop.

namespace pda {

namespace sql {

enum class TokenKind { Identifier, Number, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
};

struct Column {
  std::optional<std::string> table;
  std::string name;

  std::string text() const { return table ? *table + "." + name : name; }
};

struct SelectItem {
  std::optional<Aggregate> aggregate;
  std::optional<Column> column;  // empty for COUNT(*)
};

struct Condition {
  Column lhs;
  CompareOp op = CompareOp::Eq;
  std::optional<Column> rhs_column;
  std::vector<std::string> literals;
};

struct Statement {
  std::vector<SelectItem> select;
  std::vector<std::string> from;
  std::vector<Condition> where;
  std::vector<Column> group_by;
};

inline std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<Token> tokenize(std::string_view text, std::size_t stmt) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      out.push_back({TokenKind::Identifier, std::string(text.substr(i, j - i))});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.')) {
        ++j;
      }
      out.push_back({TokenKind::Number, std::string(text.substr(i, j - i))});
      i = j;
    } else if (c == '\'') {
      std::string lit;
      std::size_t j = i + 1;
      for (;;) {
        if (j >= text.size()) throw SyntaxError(stmt, "'", "unterminated string literal");
        if (text[j] == '\'') {
          if (j + 1 < text.size() && text[j + 1] == '\'') {
            lit += '\'';
            j += 2;
            continue;
          }
          break;
        }
        lit += text[j++];
      }
      out.push_back({TokenKind::String, lit});
      i = j + 1;
    } else {
      static constexpr std::string_view two[] = {"<=", ">=", "<>", "!="};
      bool matched = false;
      for (auto op : two) {
        if (text.substr(i, 2) == op) {
          out.push_back({TokenKind::Symbol, std::string(op)});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("=<>(),*.").find(c) == std::string_view::npos) {
        throw SyntaxError(stmt, std::string(1, c), "unexpected character");
      }
      out.push_back({TokenKind::Symbol, std::string(1, c)});
      ++i;
    }
  }
  out.push_back({TokenKind::End, ""});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::size_t stmt) : toks_(std::move(tokens)), stmt_(stmt) {}

  Statement parse() {
    Statement s;
    expect_keyword("SELECT");
    do {
      s.select.push_back(select_item());
    } while (accept_symbol(","));
    expect_keyword("FROM");
    do {
      s.from.push_back(identifier("table name"));
      if (peek().kind == TokenKind::Identifier && !is_clause_keyword(peek())) {
        fail("table aliases are not supported");
      }
    } while (accept_symbol(","));
    if (accept_keyword("WHERE")) {
      do {
        s.where.push_back(condition());
      } while (accept_keyword("AND"));
      if (is_keyword(peek(), "OR")) fail("only conjunctive WHERE clauses are supported");
    }
    if (accept_keyword("GROUP")) {
      expect_keyword("BY");
      do {
        s.group_by.push_back(column());
      } while (accept_symbol(","));
    }
    if (peek().kind != TokenKind::End) {
      const auto kw = upper(peek().text);
      if (kw == "HAVING" || kw == "ORDER" || kw == "UNION") fail(kw + " is not supported");
      fail("unexpected token");
    }
    return s;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(stmt_, peek().text, what); }

  static bool is_keyword(const Token& t, std::string_view kw) {
    return t.kind == TokenKind::Identifier && upper(t.text) == kw;
  }
  static bool is_clause_keyword(const Token& t) {
    for (auto kw : {"WHERE", "GROUP", "HAVING", "ORDER", "UNION"}) {
      if (is_keyword(t, kw)) return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) return false;
    ++pos_;
    return true;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) fail("expected " + std::string(kw));
  }
  bool accept_symbol(std::string_view sym) {
    if (peek().kind != TokenKind::Symbol || peek().text != sym) return false;
    ++pos_;
    return true;
  }
  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym)) fail("expected '" + std::string(sym) + "'");
  }
  std::string identifier(const char* what) {
    if (peek().kind != TokenKind::Identifier) fail(std::string("expected ") + what);
    return next().text;
  }

  Column column() {
    if (is_subquery_start()) fail("subqueries are not supported");
    Column c;
    c.name = identifier("column");
    if (accept_symbol(".")) {
      c.table = std::move(c.name);
      c.name = identifier("column");
    }
    return c;
  }

  bool is_subquery_start() const {
    return peek().kind == TokenKind::Symbol && peek().text == "(" &&
           pos_ + 1 < toks_.size() && is_keyword(toks_[pos_ + 1], "SELECT");
  }

  static std::optional<Aggregate> aggregate_of(const Token& t) {
    if (t.kind != TokenKind::Identifier) return std::nullopt;
    const auto u = upper(t.text);
    if (u == "SUM") return Aggregate::Sum;
    if (u == "AVG") return Aggregate::Avg;
    if (u == "COUNT") return Aggregate::Count;
    if (u == "MIN") return Aggregate::Min;
    if (u == "MAX") return Aggregate::Max;
    return std::nullopt;
  }

  SelectItem select_item() {
    SelectItem item;
    if (auto agg = aggregate_of(peek());
        agg && pos_ + 1 < toks_.size() && toks_[pos_ + 1].text == "(") {
      ++pos_;
      expect_symbol("(");
      if (is_keyword(peek(), "DISTINCT")) fail("DISTINCT aggregates are not supported");
      item.aggregate = agg;
      if (accept_symbol("*")) {
        if (*agg != Aggregate::Count) fail("'*' is only valid inside COUNT");
      } else {
        item.column = column();
      }
      expect_symbol(")");
    } else {
      item.column = column();
    }
    if (accept_keyword("AS")) identifier("alias");
    return item;
  }

  std::string literal() {
    if (is_subquery_start()) fail("subqueries are not supported");
    const auto& t = peek();
    if (t.kind != TokenKind::Number && t.kind != TokenKind::String) fail("expected a literal");
    return next().text;
  }

  Condition condition() {
    if (peek().kind == TokenKind::Symbol && peek().text == "(") {
      if (is_subquery_start()) fail("subqueries are not supported");
      fail("parenthesized conditions are not supported");
    }
    Condition c;
    c.lhs = column();
    if (accept_keyword("BETWEEN")) {
      c.op = CompareOp::Between;
      c.literals.push_back(literal());
      expect_keyword("AND");
      c.literals.push_back(literal());
      return c;
    }
    if (accept_keyword("LIKE")) {
      c.op = CompareOp::Like;
      c.literals.push_back(literal());
      return c;
    }
    if (is_keyword(peek(), "IN") || is_keyword(peek(), "NOT") || is_keyword(peek(), "IS")) {
      fail("unsupported predicate");
    }
    const auto op = next();
    if (op.kind != TokenKind::Symbol) fail("expected a comparison operator");
    if (op.text == "=") c.op = CompareOp::Eq;
    else if (op.text == "<") c.op = CompareOp::Lt;
    else if (op.text == ">") c.op = CompareOp::Gt;
    else if (op.text == "<=") c.op = CompareOp::Le;
    else if (op.text == ">=") c.op = CompareOp::Ge;
    else if (op.text == "<>" || op.text == "!=") c.op = CompareOp::Ne;
    else throw SyntaxError(stmt_, op.text, "expected a comparison operator");

    if (peek().kind == TokenKind::Identifier) {
      c.rhs_column = column();
      if (c.op != CompareOp::Eq) fail("only equi-joins are supported");
    } else {
      c.literals.push_back(literal());
    }
    return c;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t stmt_;
};

// Splits on ';' outside string literals and strips `--` line comments.
// Blank statements are dropped.
inline std::vector<std::string> split_statements(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      cur += c;
      if (c == '\'') in_string = false;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      cur += '\n';
      continue;
    }
    if (c == '\'') in_string = true;
    if (c == ';') {
      out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(std::move(cur));
  std::erase_if(out, [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); });
  });
  return out;
}

inline std::vector<Statement> parse_statements(std::string_view text) {
  std::vector<Statement> out;
  const auto stmts = split_statements(text);
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    out.push_back(Parser(tokenize(stmts[i], i), i).parse());
  }
  return out;
}

// Resolves the statement against the catalog into the relational form
// q = Π_{G,M}(σ_R(F ⋈ D_1 ⋈ ... ⋈ D_d)).
inline Query bind(const Statement& s, std::size_t index, const Catalog& catalog) {
  Query q;
  q.id = "q" + std::to_string(index + 1);

  std::vector<std::string> tables;
  for (const auto& t : s.from) {
    if (catalog.table(t) == nullptr) throw UnknownAttributeError(q.id + ": unknown table '" + t + "'");
    if (std::find(tables.begin(), tables.end(), t) != tables.end()) {
      throw SyntaxError(index, t, "table listed twice in FROM");
    }
    tables.push_back(t);
  }
  if (std::find(tables.begin(), tables.end(), catalog.fact.name) == tables.end()) {
    throw SyntaxError(index, "", "FROM must include the fact table '" + catalog.fact.name + "'");
  }

  auto resolve = [&](const Column& c) -> AttrRef {
    if (c.table) {
      if (std::find(tables.begin(), tables.end(), *c.table) == tables.end()) {
        throw UnknownAttributeError(q.id + ": table '" + *c.table + "' is not in FROM");
      }
      AttrRef ref{*c.table, c.name};
      if (catalog.find(ref) == nullptr) {
        throw UnknownAttributeError(q.id + ": unknown attribute '" + ref.label() + "'");
      }
      return ref;
    }
    std::vector<AttrRef> hits;
    for (const auto& t : tables) {
      if (catalog.table(t)->find(c.name)) hits.push_back({t, c.name});
    }
    if (hits.empty()) throw UnknownAttributeError(q.id + ": unknown attribute '" + c.name + "'");
    if (hits.size() > 1) throw UnknownAttributeError(q.id + ": ambiguous attribute '" + c.name + "'");
    return hits.front();
  };

  for (const auto& c : s.where) {
    const AttrRef lhs = resolve(c.lhs);
    if (c.rhs_column) {
      const AttrRef rhs = resolve(*c.rhs_column);
      const bool lf = catalog.is_fact(lhs.table);
      const bool rf = catalog.is_fact(rhs.table);
      if (lhs.table == rhs.table || lf == rf) {
        throw SyntaxError(index, c.lhs.text(), "only fact-to-dimension equi-joins are supported");
      }
      JoinPair j = lf ? JoinPair{lhs, rhs} : JoinPair{rhs, lhs};
      if (std::find(q.joins.begin(), q.joins.end(), j) == q.joins.end()) q.joins.push_back(j);
      continue;
    }
    q.restrictions.push_back({lhs, c.op, c.literals});
  }

  for (const auto& t : tables) {
    if (!catalog.is_fact(t) && !q.joins_table(t)) {
      throw SyntaxError(index, t, "dimension '" + t + "' is not joined to the fact table");
    }
  }

  for (const auto& g : s.group_by) {
    const AttrRef a = resolve(g);
    if (std::find(q.grouping.begin(), q.grouping.end(), a) == q.grouping.end()) q.grouping.push_back(a);
  }

  bool any_aggregate = false;
  for (const auto& item : s.select) {
    if (item.aggregate) {
      any_aggregate = true;
      Measure m{*item.aggregate, std::nullopt};
      if (item.column) m.attr = resolve(*item.column);
      if (std::find(q.measures.begin(), q.measures.end(), m) == q.measures.end()) q.measures.push_back(m);
      continue;
    }
    const AttrRef a = resolve(*item.column);
    if (std::find(q.grouping.begin(), q.grouping.end(), a) == q.grouping.end()) {
      throw SyntaxError(index, item.column->text(), "selected column is not in GROUP BY");
    }
  }
  if (!any_aggregate) throw SyntaxError(index, "", "an aggregate measure is required");
  return q;
}

}  // namespace sql

inline std::string fnv1a_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Parses and binds a whole workload; queries are numbered q1..qn by position.
inline Workload parse_workload(std::string_view text, const Catalog& catalog) {
  Workload w;
  w.source_digest = fnv1a_digest(text);
  const auto statements = sql::parse_statements(text);
  for (std::size_t i = 0; i < statements.size(); ++i) {
    w.queries.push_back(sql::bind(statements[i], i, catalog));
  }
  if (w.queries.empty()) throw SyntaxError(0, "", "workload contains no statement");
  return w;
}

inline Workload load_workload(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open workload '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str(), catalog);
}

}  // namespace pda
