#pragma once

// Explicit edge sets of the graphs G_g, evolution chains built from edge
// replacement pairs, and the chains attached to a pair (g1, g2).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/cosets.hpp"
#include "wreath/errors.hpp"
#include "wreath/perm.hpp"
#include "wreath/union_find.hpp"

namespace wreath {

// e^g_{r,s}: partners r < s of Gamma_cluster, joining v_a and v_b (a <= b).
// All indices 1-based.
struct Edge {
  int cluster = 0;
  int r = 0;
  int s = 0;
  int a = 0;
  int b = 0;

  auto operator<=>(const Edge&) const = default;
};

class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(int vertex_count, std::vector<Edge> edges = {}) : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count < 0) throw std::invalid_argument("EdgeSet: negative vertex count");
    for (const auto& e : edges_)
      if (e.a < 1 || e.b > vertex_count || e.a > e.b) throw std::invalid_argument("EdgeSet: endpoint out of range");
    std::sort(edges_.begin(), edges_.end());
  }

  int vertex_count() const noexcept { return vertex_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  void insert(const Edge& e) { edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e); }

  bool operator==(const EdgeSet&) const = default;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
};

inline EdgeSet edge_union(const EdgeSet& x, const EdgeSet& y) {
  if (x.vertex_count() != y.vertex_count()) throw std::invalid_argument("edge_union: vertex counts differ");
  std::vector<Edge> all = x.edges();
  all.insert(all.end(), y.edges().begin(), y.edges().end());
  return EdgeSet(x.vertex_count(), std::move(all));
}

inline Edge edge_of(const Permutation& g, int r, int s, const WreathContext& ctx) {
  ctx.require_degree(g);
  if (r == s || gamma_part(r, ctx.k) != gamma_part(s, ctx.k)) throw std::invalid_argument("edge_of: points are not partners");
  if (r > s) std::swap(r, s);
  Permutation inv = g.inverse();
  int a = gamma_part(inv(r), ctx.k), b = gamma_part(inv(s), ctx.k);
  return {gamma_part(r, ctx.k), r, s, std::min(a, b), std::max(a, b)};
}

// E^g_u
inline EdgeSet edges_of_cluster(const Permutation& g, int u, const WreathContext& ctx) {
  if (u < 1 || u > ctx.n) throw std::out_of_range("edges_of_cluster: block index out of range");
  EdgeSet out(ctx.n);
  int first = ctx.block_start0(u) + 1;
  for (int r = first; r < first + ctx.k; ++r)
    for (int s = r + 1; s < first + ctx.k; ++s) out.insert(edge_of(g, r, s, ctx));
  return out;
}

inline EdgeSet edges_of_clusters(const Permutation& g, const std::vector<int>& blocks, const WreathContext& ctx) {
  EdgeSet out(ctx.n);
  for (int u : blocks) out = edge_union(out, edges_of_cluster(g, u, ctx));
  return out;
}

// The whole edge set of G_g.
inline EdgeSet graph_edges(const Permutation& g, const WreathContext& ctx) {
  return edges_of_clusters(g, all_blocks(ctx), ctx);
}

inline std::vector<int> end_points(const EdgeSet& d) {
  std::set<int> v;
  for (const auto& e : d.edges()) {
    v.insert(e.a);
    v.insert(e.b);
  }
  return {v.begin(), v.end()};
}

// Components of the graph on all vertex_count vertices.
inline std::vector<std::vector<int>> graph_components(const EdgeSet& m) {
  UnionFind uf(m.vertex_count());
  for (const auto& e : m.edges()) uf.unite(e.a - 1, e.b - 1);
  auto classes = uf.classes();
  for (auto& c : classes)
    for (auto& v : c) ++v;
  return classes;
}

inline int graph_weight(const EdgeSet& m) {
  return m.vertex_count() - static_cast<int>(graph_components(m).size());
}

// s(D): components of G(D) on V(D); 0 for the empty set.
inline int nonrelative_size(const EdgeSet& d) {
  auto v = end_points(d);
  if (v.empty()) return 0;
  UnionFind uf(d.vertex_count());
  for (const auto& e : d.edges()) uf.unite(e.a - 1, e.b - 1);
  std::set<int> roots;
  for (int x : v) roots.insert(uf.find(x - 1));
  return static_cast<int>(roots.size());
}

// s_M(W): components of m meeting W.
inline int relative_size(const EdgeSet& m, const std::vector<int>& vertices) {
  UnionFind uf(m.vertex_count());
  for (const auto& e : m.edges()) uf.unite(e.a - 1, e.b - 1);
  std::set<int> roots;
  for (int x : vertices) {
    if (x < 1 || x > m.vertex_count()) throw std::invalid_argument("relative_size: vertex outside the graph");
    roots.insert(uf.find(x - 1));
  }
  return static_cast<int>(roots.size());
}

inline int relative_size(const EdgeSet& m, const EdgeSet& d) { return relative_size(m, end_points(d)); }

struct ClusterBound {
  int size = 0;
  int bound = 0;
  bool ok() const noexcept { return size <= bound; }
};

inline ClusterBound cluster_union_size_bound(const Permutation& g, const std::vector<int>& blocks, const WreathContext& ctx) {
  std::set<int> distinct(blocks.begin(), blocks.end());
  return {nonrelative_size(edges_of_clusters(g, {distinct.begin(), distinct.end()}, ctx)), static_cast<int>(distinct.size())};
}

// ---------------------------------------------------------------------------

struct ReplacementPair {
  EdgeSet removed;
  EdgeSet added;
};

struct EvolutionChain {
  std::vector<EdgeSet> graphs;  // G_0 .. G_t
  std::vector<ReplacementPair> pairs;

  int length() const noexcept { return static_cast<int>(pairs.size()); }
  const EdgeSet& start() const { return graphs.front(); }
  const EdgeSet& end() const { return graphs.back(); }
};

// Pair indices in errors are 1-based; index 0 means the pairs as a whole.
inline EvolutionChain evolve(const EdgeSet& m0, const std::vector<ReplacementPair>& pairs) {
  std::vector<Edge> covered;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int idx = static_cast<int>(i) + 1;
    const auto& p = pairs[i];
    if (p.removed.vertex_count() != m0.vertex_count() || p.added.vertex_count() != m0.vertex_count())
      throw InvalidEvolution(idx, "vertex count differs from the initial graph");
    if (end_points(p.removed) != end_points(p.added)) throw InvalidEvolution(idx, "end-points of the replaced and new edges differ");
    covered.insert(covered.end(), p.removed.edges().begin(), p.removed.edges().end());
  }
  std::sort(covered.begin(), covered.end());
  if (std::adjacent_find(covered.begin(), covered.end()) != covered.end())
    throw InvalidEvolution(0, "replaced edge sets overlap");
  if (covered != m0.edges()) throw InvalidEvolution(0, "replaced edge sets do not partition the initial graph");
  std::vector<Edge> added;
  for (const auto& p : pairs) added.insert(added.end(), p.added.edges().begin(), p.added.edges().end());
  std::sort(added.begin(), added.end());
  if (std::adjacent_find(added.begin(), added.end()) != added.end()) throw InvalidEvolution(0, "new edge sets overlap");

  EvolutionChain chain;
  chain.graphs.push_back(m0);
  chain.pairs = pairs;
  for (const auto& p : pairs) {
    std::vector<Edge> cur = chain.graphs.back().edges();
    for (const auto& e : p.removed.edges()) cur.erase(std::find(cur.begin(), cur.end(), e));
    cur.insert(cur.end(), p.added.edges().begin(), p.added.edges().end());
    chain.graphs.emplace_back(m0.vertex_count(), std::move(cur));
  }
  return chain;
}

struct WeightStep {
  int index = 0;
  int weight_before = 0;
  int weight_after = 0;
  int removed_size = 0;  // s(E_0i)
  int margin = 0;        // ||G_{i-1}|| + s(E_0i) - 1 - ||G_i||
};

struct WeightReport {
  std::vector<WeightStep> steps;
  int weight_start = 0;
  int weight_end = 0;
  int size_sum = 0;
  int aggregate_margin = 0;  // ||M0|| + sum s(E_0i) - t - ||M1||
  bool stepwise_ok = true;
  bool aggregate_equality = false;
  bool components_merge = false;  // every component of M0 lies in one of M1

  bool ok() const noexcept { return stepwise_ok && aggregate_margin >= 0 && (!aggregate_equality || components_merge); }
};

inline bool components_merge_into(const EdgeSet& m0, const EdgeSet& m1) {
  UnionFind uf(m1.vertex_count());
  for (const auto& e : m1.edges()) uf.unite(e.a - 1, e.b - 1);
  for (const auto& c : graph_components(m0))
    for (int v : c)
      if (!uf.same(c.front() - 1, v - 1)) return false;
  return true;
}

inline WeightReport check_weight_inequality(const EvolutionChain& chain) {
  WeightReport rep;
  rep.weight_start = graph_weight(chain.start());
  rep.weight_end = graph_weight(chain.end());
  for (int i = 1; i <= chain.length(); ++i) {
    WeightStep st;
    st.index = i;
    st.weight_before = graph_weight(chain.graphs[i - 1]);
    st.weight_after = graph_weight(chain.graphs[i]);
    st.removed_size = nonrelative_size(chain.pairs[i - 1].removed);
    st.margin = st.weight_before + st.removed_size - 1 - st.weight_after;
    if (st.margin < 0) rep.stepwise_ok = false;
    rep.size_sum += st.removed_size;
    rep.steps.push_back(st);
  }
  rep.aggregate_margin = rep.weight_start + rep.size_sum - chain.length() - rep.weight_end;
  rep.aggregate_equality = rep.aggregate_margin == 0;
  rep.components_merge = components_merge_into(chain.start(), chain.end());
  return rep;
}

inline void to_json(nlohmann::json& j, const WeightReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"index", s.index},
                     {"weight_before", s.weight_before},
                     {"weight_after", s.weight_after},
                     {"removed_size", s.removed_size},
                     {"margin", s.margin}});
  j = {{"steps", steps},
       {"weight_start", r.weight_start},
       {"weight_end", r.weight_end},
       {"size_sum", r.size_sum},
       {"aggregate_margin", r.aggregate_margin},
       {"stepwise_ok", r.stepwise_ok},
       {"aggregate_equality", r.aggregate_equality},
       {"components_merge", r.components_merge}};
}

// ---------------------------------------------------------------------------
// chains from (g1, g2): G_{g2} evolves into G_{g1 g2} through the pairs
// (E^{g2}_C, E^{g1 g2}_C), C running over the components of G_{g1}.

struct PairEvolution {
  std::vector<std::vector<int>> components;  // vertex indices of the components of G_{g1}
  EvolutionChain chain;
};

inline PairEvolution evolution_from_pair(const Permutation& g1, const Permutation& g2, const WreathContext& ctx) {
  ctx.require_degree(g1);
  ctx.require_degree(g2);
  if (!is_minimal(g1, ctx) || !has_closed_components(g1, ctx))
    throw std::invalid_argument("evolution_from_pair: g1 must be a minimal representative with closed connected components");
  PairEvolution out;
  out.components = graph_components(graph_edges(g1, ctx));
  std::sort(out.components.begin(), out.components.end());
  Permutation prod = g1 * g2;
  std::vector<ReplacementPair> pairs;
  for (const auto& c : out.components) pairs.push_back({edges_of_clusters(g2, c, ctx), edges_of_clusters(prod, c, ctx)});
  out.chain = evolve(graph_edges(g2, ctx), pairs);
  return out;
}

// Everything checked for one pair.
struct PairDiagnosis {
  bool product_minimal = false;
  bool weight_equality = false;  // ||G_{g1g2}|| = ||G_{g1}|| + ||G_{g2}||
  bool filtration_ok = false;    // ||G_{g1g2}|| <= ||G_{g1}|| + ||G_{g2}||
  WeightReport report;
  bool g2_support_inside = false;       // [g2]_H ⊆ [g1g2]_H
  bool g2_moved_inside = false;         // support(g2) ⊆ [g1g2]_H
  bool g1_support_inside = false;       // [g1]_H ⊆ [g1g2]_H

  bool inclusions() const noexcept { return g2_support_inside && g2_moved_inside && g1_support_inside; }
  // the inclusions concern minimal products; either equality triggers them
  bool inclusions_expected() const noexcept { return product_minimal && (weight_equality || report.aggregate_equality); }
  bool ok() const noexcept {
    return report.ok() && filtration_ok && (!inclusions_expected() || inclusions());
  }
};

inline PairDiagnosis diagnose_pair(const Permutation& g1, const Permutation& g2, const WreathContext& ctx) {
  PairDiagnosis d;
  PairEvolution ev = evolution_from_pair(g1, g2, ctx);
  d.report = check_weight_inequality(ev.chain);
  Permutation prod = g1 * g2;
  d.product_minimal = is_minimal(prod, ctx);
  int w1 = graph_weight(graph_edges(g1, ctx)), w2 = graph_weight(graph_edges(g2, ctx)), w12 = d.report.weight_end;
  d.weight_equality = w12 == w1 + w2;
  d.filtration_ok = w12 <= w1 + w2;
  auto sp = h_support(prod, ctx);
  auto inside = [&](const std::vector<int>& blocks) {
    return std::all_of(blocks.begin(), blocks.end(), [&](int b) { return sp.contains_block(b); });
  };
  d.g2_support_inside = inside(h_support(g2, ctx).block_indices);
  d.g1_support_inside = inside(h_support(g1, ctx).block_indices);
  auto moved = g2.support();
  d.g2_moved_inside = std::all_of(moved.begin(), moved.end(), [&](int p) { return sp.contains_point(p); });
  return d;
}

// ---------------------------------------------------------------------------
// randomized property suite: g1 in closed-components form; half the pairs use
// a uniform g2, half a g2 making g1 g2 minimal.

struct EvolutionSuiteReport {
  int k = 0;
  int n = 0;
  std::uint64_t seed = 0;
  int pairs = 0;
  int endpoint_failures = 0;
  int stepwise_failures = 0;
  int aggregate_failures = 0;
  int aggregate_equalities = 0;
  int merge_failures = 0;
  int filtration_failures = 0;
  int product_minimal = 0;
  int weight_equalities = 0;  // among pairs with g1 g2 minimal
  int inclusion_checks = 0;   // minimal products with aggregate or weight equality
  int inclusion_failures = 0;
  std::vector<std::string> examples;  // first few failures

  bool ok() const noexcept {
    return endpoint_failures + stepwise_failures + aggregate_failures + merge_failures + filtration_failures + inclusion_failures == 0;
  }
};

inline Permutation random_permutation(int degree, std::mt19937_64& rng) {
  std::vector<int> img(static_cast<std::size_t>(degree));
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation::from_images0(std::move(img));
}

inline EvolutionSuiteReport run_evolution_suite(const WreathContext& ctx, int pairs, std::uint64_t seed) {
  EvolutionSuiteReport rep;
  rep.k = ctx.k;
  rep.n = ctx.n;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  auto note = [&](const std::string& what, const Permutation& g1, const Permutation& g2) {
    if (rep.examples.size() < 5) rep.examples.push_back(what + ": g1=" + g1.to_cycle_string() + " g2=" + g2.to_cycle_string());
  };
  for (int i = 0; i < pairs; ++i) {
    Permutation g1 = closed_components_form(random_permutation(ctx.degree(), rng), ctx);
    Permutation z = random_permutation(ctx.degree(), rng);
    Permutation g2 = i % 2 == 0 ? z : g1.inverse() * minimal_representative(z, ctx);
    ++rep.pairs;
    PairDiagnosis d;
    try {
      d = diagnose_pair(g1, g2, ctx);
    } catch (const InvalidEvolution& e) {
      ++rep.endpoint_failures;
      note(e.what(), g1, g2);
      continue;
    }
    if (!d.report.stepwise_ok) ++rep.stepwise_failures, note("stepwise inequality", g1, g2);
    if (d.report.aggregate_margin < 0) ++rep.aggregate_failures, note("aggregate inequality", g1, g2);
    if (d.report.aggregate_equality) {
      ++rep.aggregate_equalities;
      if (!d.report.components_merge) ++rep.merge_failures, note("components do not merge", g1, g2);
    }
    if (!d.filtration_ok) ++rep.filtration_failures, note("weight of the product too large", g1, g2);
    if (d.product_minimal) {
      ++rep.product_minimal;
      if (d.weight_equality) ++rep.weight_equalities;
      if (d.inclusions_expected()) {
        ++rep.inclusion_checks;
        if (!d.inclusions()) ++rep.inclusion_failures, note("support inclusions", g1, g2);
      }
    }
  }
  return rep;
}

inline void to_json(nlohmann::json& j, const EvolutionSuiteReport& r) {
  j = {{"k", r.k},
       {"n", r.n},
       {"seed", r.seed},
       {"pairs", r.pairs},
       {"endpoint_failures", r.endpoint_failures},
       {"stepwise_failures", r.stepwise_failures},
       {"aggregate_failures", r.aggregate_failures},
       {"aggregate_equalities", r.aggregate_equalities},
       {"merge_failures", r.merge_failures},
       {"filtration_failures", r.filtration_failures},
       {"product_minimal", r.product_minimal},
       {"weight_equalities", r.weight_equalities},
       {"inclusion_checks", r.inclusion_checks},
       {"inclusion_failures", r.inclusion_failures},
       {"examples", r.examples},
       {"ok", r.ok()}};
}

}  // namespace wreath
