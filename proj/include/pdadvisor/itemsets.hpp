#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pdadvisor/binary_matrix.hpp"
#include "pdadvisor/candidates.hpp"

namespace pda {

// Mining context: objects are matrix rows, items are matrix columns.
struct Context {
  std::vector<std::string> items;
  std::vector<std::vector<bool>> objects;

  static Context from_matrix(const BinaryMatrix& m) {
    Context c;
    c.items = m.column_labels();
    for (std::size_t r = 0; r < m.rows(); ++r) c.objects.push_back(m.row(r));
    return c;
  }
};

struct ClosedItemset {
  std::vector<std::size_t> items;  // ascending item indices
  std::size_t support = 0;

  bool operator==(const ClosedItemset&) const = default;
};

inline std::size_t support_threshold(double minsup, std::size_t objects) {
  const double t = std::ceil(minsup * static_cast<double>(objects) - 1e-9);
  return static_cast<std::size_t>(std::max(1.0, t));
}

// Descending support, then ascending item sequence.
inline void canonical_order(std::vector<ClosedItemset>& sets) {
  std::sort(sets.begin(), sets.end(), [](const ClosedItemset& a, const ClosedItemset& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.items < b.items;
  });
}

struct Generator {
  std::vector<std::size_t> items;
  std::size_t support = 0;
  std::vector<std::size_t> closure;
};

struct MiningResult {
  std::vector<ClosedItemset> closed;
  std::vector<std::vector<Generator>> levels;  // frequent generators by size
};

// Close: level-wise enumeration of frequent minimal generators, each mapped to
// its Galois closure.
inline MiningResult mine_closed_detailed(const Context& ctx, double minsup) {
  using Bits = boost::dynamic_bitset<>;
  MiningResult out;
  const std::size_t n = ctx.objects.size();
  const std::size_t m = ctx.items.size();
  if (n == 0 || m == 0) return out;
  const std::size_t threshold = support_threshold(minsup, n);

  std::vector<Bits> tid(m, Bits(n));
  std::vector<Bits> rows(n, Bits(m));
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t i = 0; i < m; ++i) {
      if (ctx.objects[o][i]) {
        tid[i].set(o);
        rows[o].set(i);
      }
    }
  }

  auto closure_of = [&](const Bits& objects) {
    Bits c(m);
    c.set();
    for (auto o = objects.find_first(); o != Bits::npos; o = objects.find_next(o)) c &= rows[o];
    std::vector<std::size_t> items;
    for (auto i = c.find_first(); i != Bits::npos; i = c.find_next(i)) items.push_back(i);
    return items;
  };

  std::set<std::vector<std::size_t>> seen;
  auto record = [&](const Generator& g) {
    if (seen.insert(g.closure).second) out.closed.push_back({g.closure, g.support});
  };

  struct Level {
    std::vector<Generator> gens;
    std::vector<Bits> tids;
  };
  Level level;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t s = tid[i].count();
    if (s < threshold) continue;
    level.gens.push_back({{i}, s, closure_of(tid[i])});
    level.tids.push_back(tid[i]);
  }

  while (!level.gens.empty()) {
    for (const auto& g : level.gens) record(g);
    out.levels.push_back(level.gens);

    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < level.gens.size(); ++k) index[level.gens[k].items] = k;

    Level next;
    for (std::size_t a = 0; a < level.gens.size(); ++a) {
      for (std::size_t b = a + 1; b < level.gens.size(); ++b) {
        const auto& ga = level.gens[a].items;
        const auto& gb = level.gens[b].items;
        if (!std::equal(ga.begin(), ga.end() - 1, gb.begin(), gb.end() - 1)) continue;
        std::vector<std::size_t> cand = ga;
        cand.push_back(gb.back());
        if (cand[cand.size() - 2] > cand.back()) std::swap(cand[cand.size() - 2], cand.back());

        // Every k-subset must be a frequent generator, and the candidate must
        // not lie inside the closure of any of them (else it is not minimal).
        bool keep = true;
        for (std::size_t drop = 0; drop < cand.size() && keep; ++drop) {
          std::vector<std::size_t> sub;
          for (std::size_t t = 0; t < cand.size(); ++t) {
            if (t != drop) sub.push_back(cand[t]);
          }
          const auto it = index.find(sub);
          if (it == index.end()) {
            keep = false;
            break;
          }
          const auto& cl = level.gens[it->second].closure;
          if (std::binary_search(cl.begin(), cl.end(), cand[drop])) keep = false;
        }
        if (!keep) continue;

        Bits t = level.tids[a] & level.tids[b];
        const std::size_t s = t.count();
        if (s < threshold) continue;
        next.gens.push_back({cand, s, closure_of(t)});
        next.tids.push_back(std::move(t));
      }
    }
    level = std::move(next);
  }

  canonical_order(out.closed);
  return out;
}

inline std::vector<ClosedItemset> mine_closed(const Context& ctx, double minsup) {
  return mine_closed_detailed(ctx, minsup).closed;
}

// Adds every candidate view as a pseudo-object carrying the view's attributes
// and join keys, restricted to the matrix columns.
inline Context mining_context(const BinaryMatrix& qa, const std::vector<CandidateView>& views) {
  Context ctx = Context::from_matrix(qa);
  for (const auto& v : views) {
    std::vector<bool> row(ctx.items.size(), false);
    for (std::size_t i = 0; i < ctx.items.size(); ++i) {
      const AttrRef a = AttrRef::parse(ctx.items[i]);
      bool present = v.has_attribute(a);
      for (const auto& j : v.joins) present = present || j.fact_attr == a || j.dim_attr == a;
      row[i] = present;
    }
    ctx.objects.push_back(std::move(row));
  }
  return ctx;
}

// Turns itemsets into index candidates: per itemset, the attributes of each
// dimension (join keys excluded) become a bitmap join index, and every view
// holding that group also gets a B-tree on it. Identical proposals collapse.
inline std::vector<CandidateIndex> itemsets_to_indexes(const std::vector<ClosedItemset>& itemsets,
                                                       const std::vector<std::string>& items,
                                                       const Catalog& catalog,
                                                       const std::vector<CandidateView>& views,
                                                       const std::vector<JoinPair>& join_keys) {
  std::vector<CandidateIndex> out;
  auto is_key = [&](const AttrRef& a) {
    return std::any_of(join_keys.begin(), join_keys.end(),
                       [&](const JoinPair& j) { return j.dim_attr == a || j.fact_attr == a; });
  };
  auto same = [](const CandidateIndex& x, const CandidateIndex& y) {
    if (x.kind != y.kind || x.table != y.table || x.target_view != y.target_view) return false;
    auto a = x.attributes, b = y.attributes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  auto add = [&](CandidateIndex idx) {
    for (const auto& e : out) {
      if (same(e, idx)) return;
    }
    idx.id = "i" + std::to_string(out.size() + 1);
    size_index(idx, views, catalog);
    out.push_back(std::move(idx));
  };

  for (const auto& set : itemsets) {
    std::vector<std::pair<std::string, std::vector<AttrRef>>> groups;
    for (std::size_t item : set.items) {
      const AttrRef a = AttrRef::parse(items[item]);
      if (catalog.is_fact(a.table) || is_key(a)) continue;
      auto g = std::find_if(groups.begin(), groups.end(), [&](const auto& p) { return p.first == a.table; });
      if (g == groups.end()) {
        groups.push_back({a.table, {a}});
      } else {
        g->second.push_back(a);
      }
    }
    for (const auto& [table, attrs] : groups) {
      add({"", table, attrs, IndexKind::BitmapJoin, std::nullopt, 0});
      for (const auto& v : views) {
        const bool held = std::all_of(attrs.begin(), attrs.end(), [&](const AttrRef& a) { return v.has_attribute(a); });
        if (held) add({"", v.id, attrs, IndexKind::BtreeOnView, v.id, 0});
      }
    }
  }
  return out;
}

}  // namespace pda
