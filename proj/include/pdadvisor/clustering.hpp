#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pdadvisor/binary_matrix.hpp"
#include "pdadvisor/candidates.hpp"
#include "pdadvisor/workload.hpp"

namespace pda {

// Classes hold row indices of the query-attribute matrix, ascending; classes
// are ordered by their smallest member.
struct Partition {
  std::vector<std::vector<std::size_t>> classes;

  void normalize() {
    for (auto& c : classes) std::sort(c.begin(), c.end());
    std::erase_if(classes, [](const auto& c) { return c.empty(); });
    std::sort(classes.begin(), classes.end());
  }

  bool operator==(const Partition&) const = default;
};

inline std::int64_t sim(const BinaryMatrix& m, std::size_t a, std::size_t b) {
  std::int64_t s = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) s += m.at(a, c) && m.at(b, c);
  return s;
}

inline std::int64_t dissim(const BinaryMatrix& m, std::size_t a, std::size_t b) {
  std::int64_t s = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) s += m.at(a, c) != m.at(b, c);
  return s;
}

// Q(P): similarity across classes plus dissimilarity within classes.
inline std::int64_t quality(const Partition& p, const BinaryMatrix& m) {
  std::vector<std::size_t> owner(m.rows(), 0);
  for (std::size_t k = 0; k < p.classes.size(); ++k) {
    for (auto r : p.classes[k]) owner[r] = k;
  }
  std::int64_t q = 0;
  for (std::size_t a = 0; a < m.rows(); ++a) {
    for (std::size_t b = a + 1; b < m.rows(); ++b) q += owner[a] == owner[b] ? dissim(m, a, b) : sim(m, a, b);
  }
  return q;
}

// Per-row join signature; rows may share a class only with equal signatures.
using JoinSignature = std::vector<JoinPair>;

inline Partition singleton_partition(std::size_t n) {
  Partition p;
  for (std::size_t r = 0; r < n; ++r) p.classes.push_back({r});
  return p;
}

inline Partition coarsest_partition(const std::vector<JoinSignature>& joins) {
  Partition p;
  std::vector<JoinSignature> keys;
  for (std::size_t r = 0; r < joins.size(); ++r) {
    auto it = std::find(keys.begin(), keys.end(), joins[r]);
    if (it == keys.end()) {
      keys.push_back(joins[r]);
      p.classes.push_back({r});
    } else {
      p.classes[static_cast<std::size_t>(it - keys.begin())].push_back(r);
    }
  }
  p.normalize();
  return p;
}

// Constrained agglomerative clustering minimizing Q(P). Starting from
// singletons, merge the join-compatible pair of classes with the most negative
// change in Q, then try single-query moves; repeat until neither step helps.
// Ties go to the lowest class indices.
inline Partition cluster(const BinaryMatrix& m, const std::vector<JoinSignature>& joins) {
  const std::size_t n = m.rows();
  std::vector<std::vector<std::int64_t>> delta(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) delta[a][b] = dissim(m, a, b) - sim(m, a, b);
    }
  }
  auto cross = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    std::int64_t s = 0;
    for (auto a : x) {
      for (auto b : y) s += delta[a][b];
    }
    return s;
  };

  Partition p = singleton_partition(n);
  for (bool changed = true; changed;) {
    changed = false;
    for (;;) {
      std::int64_t best = 0;
      std::size_t ba = 0, bb = 0;
      for (std::size_t a = 0; a < p.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < p.classes.size(); ++b) {
          if (joins[p.classes[a].front()] != joins[p.classes[b].front()]) continue;
          const auto d = cross(p.classes[a], p.classes[b]);
          if (d < best) {
            best = d;
            ba = a;
            bb = b;
          }
        }
      }
      if (best >= 0) break;
      p.classes[ba].insert(p.classes[ba].end(), p.classes[bb].begin(), p.classes[bb].end());
      p.classes.erase(p.classes.begin() + static_cast<std::ptrdiff_t>(bb));
      p.normalize();
      changed = true;
    }
    // Moving r from class s to class t changes Q by cross(r, t) - cross(r, s \ r);
    // moving it out alone changes Q by -cross(r, s \ r).
    std::int64_t best = 0;
    std::size_t row = 0, to = 0;
    bool alone = false;
    for (std::size_t s = 0; s < p.classes.size(); ++s) {
      for (auto r : p.classes[s]) {
        std::vector<std::size_t> rest;
        for (auto x : p.classes[s]) {
          if (x != r) rest.push_back(x);
        }
        const auto leave = -cross({r}, rest);
        if (!rest.empty() && leave < best) {
          best = leave;
          row = r;
          alone = true;
        }
        for (std::size_t t = 0; t < p.classes.size(); ++t) {
          if (t == s || joins[p.classes[t].front()] != joins[r]) continue;
          const auto d = leave + cross({r}, p.classes[t]);
          if (d < best) {
            best = d;
            row = r;
            to = t;
            alone = false;
          }
        }
      }
    }
    if (best < 0) {
      const std::size_t target = alone ? p.classes.size() : to;
      if (alone) p.classes.push_back({});
      for (auto& c : p.classes) std::erase(c, row);
      p.classes[target].push_back(row);
      p.normalize();
      changed = true;
    }
  }
  return p;
}

struct FusionOptions {
  double blowup_factor = 2.0;
  SizeEstimator estimator = SizeEstimator::Yao;
};

// Fuses one class into views. The fused view unions grouping/restriction
// attributes and measures; if it is larger than blowup_factor times the sum of
// the per-query views, the per-query views are returned instead. Views are
// returned without ids.
inline std::vector<CandidateView> fuse(const std::vector<const Query*>& cls, const Catalog& catalog,
                                       const FusionOptions& opt = {}) {
  CandidateView fused = make_view("", cls, catalog, opt.estimator);
  if (cls.size() < 2) return {fused};
  std::vector<CandidateView> singles;
  double total = 0.0;
  for (const Query* q : cls) {
    singles.push_back(make_view("", {q}, catalog, opt.estimator));
    total += static_cast<double>(singles.back().size_bytes);
  }
  if (static_cast<double>(fused.size_bytes) > opt.blowup_factor * total) return singles;
  return {fused};
}

inline std::vector<JoinSignature> join_signatures(const Workload& w) {
  std::vector<JoinSignature> out;
  for (const auto& q : w.queries) out.push_back(q.join_set());
  return out;
}

// Clusters the workload and fuses each class; identical views collapse and ids
// run v1..vn in class order.
inline std::vector<CandidateView> candidate_views(const Workload& w, const Partition& p,
                                                  const Catalog& catalog, const FusionOptions& opt = {}) {
  std::vector<CandidateView> out;
  auto same = [](const CandidateView& a, const CandidateView& b) {
    auto x = a.attributes, y = b.attributes;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    auto mx = a.measures, my = b.measures;
    std::sort(mx.begin(), mx.end());
    std::sort(my.begin(), my.end());
    return a.joins == b.joins && x == y && mx == my;
  };
  for (const auto& cls : p.classes) {
    std::vector<const Query*> qs;
    for (auto r : cls) qs.push_back(&w.queries[r]);
    for (auto& v : fuse(qs, catalog, opt)) {
      auto dup = std::find_if(out.begin(), out.end(), [&](const CandidateView& e) { return same(e, v); });
      if (dup != out.end()) {
        dup->source_queries.insert(dup->source_queries.end(), v.source_queries.begin(), v.source_queries.end());
        continue;
      }
      v.id = "v" + std::to_string(out.size() + 1);
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace pda
