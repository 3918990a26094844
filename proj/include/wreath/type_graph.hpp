#pragma once

// Coset types: the clustered multigraph attached to g in S_{kn}, stored as
// one block per target part Gamma_u, each block the multiset of source
// vertices p(g^-1(r)) for r in Gamma_u.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/errors.hpp"
#include "wreath/perm.hpp"
#include "wreath/union_find.hpp"

namespace wreath {

using Block = std::vector<int>;  // sorted multiset of 1-based vertices, size k

struct CosetType {
  int k = 2;
  int vertex_count = 0;
  std::vector<Block> blocks;  // blocks[u-1] belongs to target part u

  friend bool operator==(const CosetType&, const CosetType&) = default;
};

struct CanonicalType {
  int k = 2;
  int vertex_count = 0;
  std::vector<Block> blocks;  // canonical labels, sorted

  std::string key() const {
    std::string s = std::to_string(vertex_count) + ":";
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (b) s += '|';
      for (std::size_t i = 0; i < blocks[b].size(); ++i) {
        if (i) s += '.';
        s += std::to_string(blocks[b][i]);
      }
    }
    return s;
  }

  friend bool operator==(const CanonicalType&, const CanonicalType&) = default;
  friend std::strong_ordering operator<=>(const CanonicalType& a, const CanonicalType& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.vertex_count <=> b.vertex_count; c != 0) return c;
    return a.blocks <=> b.blocks;
  }
};

struct ModifiedType {
  CanonicalType canonical;
  int weight = 0;
  std::vector<int> lambda;  // component sizes, non-increasing

  int k() const noexcept { return canonical.k; }
  int vertices() const noexcept { return canonical.vertex_count; }
  bool empty() const noexcept { return canonical.vertex_count == 0; }
  std::string key() const { return canonical.key(); }

  friend bool operator==(const ModifiedType& a, const ModifiedType& b) { return a.canonical == b.canonical; }
  // Listing order: weight, then vertex count, then canonical blocks.
  friend std::strong_ordering operator<=>(const ModifiedType& a, const ModifiedType& b) {
    if (auto c = a.canonical.k <=> b.canonical.k; c != 0) return c;
    if (auto c = a.weight <=> b.weight; c != 0) return c;
    return a.canonical <=> b.canonical;
  }
};

struct ModifiedTypeHash {
  std::size_t operator()(const ModifiedType& m) const { return std::hash<std::string>{}(m.key()) ^ static_cast<std::size_t>(m.k()); }
};

// ---------------------------------------------------------------------------
// construction

// A[i][u] = #{ s in Gamma_i : g(s) in Gamma_u }, row-major n x n.
inline std::vector<int> type_matrix(const Permutation& g, const WreathContext& ctx) {
  ctx.require_degree(g);
  const int n = ctx.n;
  std::vector<int> a(static_cast<std::size_t>(n * n), 0);
  for (int s = 0; s < ctx.degree(); ++s) ++a[static_cast<std::size_t>(ctx.block_of0(s) * n + ctx.block_of0(g.image0(s)))];
  return a;
}

inline CosetType type_from_matrix(int k, int n, const std::vector<int>& a) {
  CosetType t;
  t.k = k;
  t.vertex_count = n;
  t.blocks.assign(static_cast<std::size_t>(n), {});
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < a[static_cast<std::size_t>(i * n + u)]; ++c) t.blocks[u].push_back(i + 1);
  return t;
}

inline std::vector<int> matrix_of(const CosetType& t) {
  const int n = t.vertex_count;
  std::vector<int> a(static_cast<std::size_t>(n * n), 0);
  for (int u = 0; u < n; ++u)
    for (int v : t.blocks[u]) ++a[static_cast<std::size_t>((v - 1) * n + u)];
  return a;
}

inline CosetType coset_type(const Permutation& g, const WreathContext& ctx) {
  return type_from_matrix(ctx.k, ctx.n, type_matrix(g, ctx));
}

inline void validate(const CosetType& t) {
  if (static_cast<int>(t.blocks.size()) != t.vertex_count) throw std::invalid_argument("coset type: block count differs from vertex count");
  std::vector<int> mult(static_cast<std::size_t>(t.vertex_count), 0);
  for (const auto& b : t.blocks) {
    if (static_cast<int>(b.size()) != t.k) throw std::invalid_argument("coset type: block of wrong size");
    for (int v : b) {
      if (v < 1 || v > t.vertex_count) throw std::invalid_argument("coset type: vertex label out of range");
      ++mult[v - 1];
    }
  }
  for (int m : mult)
    if (m != t.k) throw std::invalid_argument("coset type: a vertex does not have multiplicity k");
}

// ---------------------------------------------------------------------------
// components and weight

inline std::vector<std::vector<int>> components_of(int vertex_count, const std::vector<Block>& blocks) {
  UnionFind uf(vertex_count);
  for (const auto& b : blocks)
    for (std::size_t i = 1; i < b.size(); ++i) uf.unite(b[0] - 1, b[i] - 1);
  auto cls = uf.classes();
  for (auto& c : cls)
    for (auto& v : c) ++v;
  return cls;
}

// Vertex sets (1-based) of the connected components, ordered by least vertex.
inline std::vector<std::vector<int>> connected_components(const CosetType& t) {
  return components_of(t.vertex_count, t.blocks);
}

inline int weight(const CosetType& t) {
  return t.vertex_count - static_cast<int>(connected_components(t).size());
}

namespace detail {

// Canonical labelling of one connected piece: colour refinement on the
// vertex/block incidence structure, then individualization of the first
// non-singleton cell, keeping the least relabelled block list over all leaves.
class ComponentCanonizer {
 public:
  ComponentCanonizer(int vertex_count, const std::vector<Block>& blocks) : nv_(vertex_count), blocks_(blocks) {
    incidence_.assign(blocks_.size(), std::vector<int>(static_cast<std::size_t>(nv_), 0));
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (int v : blocks_[b]) ++incidence_[b][v - 1];
  }

  std::vector<Block> run() {
    std::vector<int> colors(static_cast<std::size_t>(nv_), 0);
    search(colors);
    return best_;
  }

 private:
  static int rank_in_place(std::vector<int>& colors, const std::vector<std::vector<int>>& sigs) {
    std::vector<const std::vector<int>*> distinct;
    distinct.reserve(sigs.size());
    for (const auto& s : sigs) distinct.push_back(&s);
    std::sort(distinct.begin(), distinct.end(), [](auto* a, auto* b) { return *a < *b; });
    distinct.erase(std::unique(distinct.begin(), distinct.end(), [](auto* a, auto* b) { return *a == *b; }), distinct.end());
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      auto it = std::lower_bound(distinct.begin(), distinct.end(), &sigs[i], [](auto* a, auto* b) { return *a < *b; });
      colors[i] = static_cast<int>(it - distinct.begin());
    }
    return static_cast<int>(distinct.size());
  }

  int refine(std::vector<int>& colors) const {
    std::vector<std::vector<int>> vsig(static_cast<std::size_t>(nv_));
    for (int v = 0; v < nv_; ++v) vsig[v] = {colors[v]};
    int cells = rank_in_place(colors, vsig);
    while (true) {
      std::vector<std::vector<int>> bsig(blocks_.size());
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        for (int v = 0; v < nv_; ++v)
          if (incidence_[b][v]) {
            bsig[b].push_back(colors[v]);
            bsig[b].push_back(incidence_[b][v]);
          }
        // pairs sorted so the signature ignores vertex labels
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < bsig[b].size(); i += 2) pairs.emplace_back(bsig[b][i], bsig[b][i + 1]);
        std::sort(pairs.begin(), pairs.end());
        bsig[b].clear();
        for (auto [c, m] : pairs) {
          bsig[b].push_back(c);
          bsig[b].push_back(m);
        }
      }
      std::vector<int> bcol(blocks_.size(), 0);
      rank_in_place(bcol, bsig);
      for (int v = 0; v < nv_; ++v) {
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t b = 0; b < blocks_.size(); ++b)
          if (incidence_[b][v]) pairs.emplace_back(bcol[b], incidence_[b][v]);
        std::sort(pairs.begin(), pairs.end());
        vsig[v] = {colors[v]};
        for (auto [c, m] : pairs) {
          vsig[v].push_back(c);
          vsig[v].push_back(m);
        }
      }
      std::vector<int> next(static_cast<std::size_t>(nv_));
      int next_cells = rank_in_place(next, vsig);
      colors.swap(next);
      if (next_cells == cells) return cells;
      cells = next_cells;
    }
  }

  void search(std::vector<int> colors) {
    int cells = refine(colors);
    if (cells == nv_) {
      std::vector<Block> relabelled;
      relabelled.reserve(blocks_.size());
      for (const auto& b : blocks_) {
        Block nb;
        for (int v : b) nb.push_back(colors[v - 1] + 1);
        std::sort(nb.begin(), nb.end());
        relabelled.push_back(std::move(nb));
      }
      std::sort(relabelled.begin(), relabelled.end());
      if (best_.empty() || relabelled < best_) best_ = std::move(relabelled);
      return;
    }
    std::vector<int> count(static_cast<std::size_t>(cells), 0);
    for (int c : colors) ++count[c];
    int target = 0;
    while (count[target] < 2) ++target;
    for (int v = 0; v < nv_; ++v) {
      if (colors[v] != target) continue;
      std::vector<int> child(static_cast<std::size_t>(nv_));
      for (int x = 0; x < nv_; ++x) child[x] = 2 * colors[x] + ((colors[x] == target && x != v) ? 1 : 0);
      search(std::move(child));
    }
  }

  int nv_;
  std::vector<Block> blocks_;
  std::vector<std::vector<int>> incidence_;
  std::vector<Block> best_;
};

}  // namespace detail

// Canonical sorted block list. Components are labelled independently and
// laid out by decreasing size, then by their own canonical block list, so
// isolated vertices always receive the largest labels.
inline std::vector<Block> canonical_blocks(int vertex_count, const std::vector<Block>& blocks) {
  auto comps = components_of(vertex_count, blocks);
  std::vector<int> comp_of(static_cast<std::size_t>(vertex_count), 0), local(static_cast<std::size_t>(vertex_count), 0);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (std::size_t i = 0; i < comps[c].size(); ++i) {
      comp_of[comps[c][i] - 1] = static_cast<int>(c);
      local[comps[c][i] - 1] = static_cast<int>(i) + 1;
    }
  std::vector<std::vector<Block>> comp_blocks(comps.size());
  for (const auto& b : blocks) {
    int c = comp_of[b[0] - 1];
    Block nb;
    for (int v : b) nb.push_back(local[v - 1]);
    std::sort(nb.begin(), nb.end());
    comp_blocks[c].push_back(std::move(nb));
  }
  std::vector<std::pair<int, std::vector<Block>>> pieces;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    int size = static_cast<int>(comps[c].size());
    pieces.emplace_back(size, detail::ComponentCanonizer(size, comp_blocks[c]).run());
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<Block> out;
  int offset = 0;
  for (auto& [size, bl] : pieces) {
    for (auto& b : bl) {
      for (auto& v : b) v += offset;
      out.push_back(std::move(b));
    }
    offset += size;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline CanonicalType canonicalize(const CosetType& t) {
  CanonicalType c;
  c.k = t.k;
  c.vertex_count = t.vertex_count;
  c.blocks = canonical_blocks(t.vertex_count, t.blocks);
  return c;
}

// A vertex is isolated exactly when some block consists of k copies of it.
inline ModifiedType modify(const CosetType& t) {
  std::vector<bool> isolated(static_cast<std::size_t>(t.vertex_count), false);
  for (const auto& b : t.blocks)
    if (b.front() == b.back()) isolated[b.front() - 1] = true;
  std::vector<int> relabel(static_cast<std::size_t>(t.vertex_count), 0);
  int count = 0;
  for (int v = 0; v < t.vertex_count; ++v)
    if (!isolated[v]) relabel[v] = ++count;
  std::vector<Block> kept;
  for (const auto& b : t.blocks) {
    if (b.front() == b.back()) continue;
    Block nb;
    for (int v : b) nb.push_back(relabel[v - 1]);
    kept.push_back(std::move(nb));
  }
  ModifiedType m;
  m.canonical.k = t.k;
  m.canonical.vertex_count = count;
  m.canonical.blocks = canonical_blocks(count, kept);
  auto comps = components_of(count, m.canonical.blocks);
  m.weight = count - static_cast<int>(comps.size());
  for (const auto& c : comps) m.lambda.push_back(static_cast<int>(c.size()));
  std::sort(m.lambda.rbegin(), m.lambda.rend());
  return m;
}

inline ModifiedType modified_type(const Permutation& g, const WreathContext& ctx) { return modify(coset_type(g, ctx)); }

inline ModifiedType empty_type(int k) {
  ModifiedType m;
  m.canonical.k = k;
  return m;
}

inline ModifiedType make_modified_type(int k, int vertex_count, const std::vector<Block>& blocks) {
  CosetType t;
  t.k = k;
  t.vertex_count = vertex_count;
  t.blocks = blocks;
  for (auto& b : t.blocks) std::sort(b.begin(), b.end());
  validate(t);
  ModifiedType m = modify(t);
  if (m.vertices() != vertex_count) throw std::invalid_argument("modified type must not contain isolated vertices");
  return m;
}

inline CosetType embed(const ModifiedType& m, int n) {
  if (n < m.vertices()) {
    throw NotRealizable("type with " + std::to_string(m.vertices()) + " vertices is not realizable at n = " + std::to_string(n));
  }
  CosetType t;
  t.k = m.k();
  t.vertex_count = n;
  t.blocks = m.canonical.blocks;
  for (int v = m.vertices() + 1; v <= n; ++v) t.blocks.push_back(Block(static_cast<std::size_t>(m.k()), v));
  return t;
}

// Transposed incidence: the type of g^-1.
inline ModifiedType inverse_type(const ModifiedType& m) {
  const int v = m.vertices();
  std::vector<Block> blocks(static_cast<std::size_t>(v));
  for (int u = 0; u < v; ++u)
    for (int i : m.canonical.blocks[u]) blocks[i - 1].push_back(u + 1);
  return make_modified_type(m.k(), v, blocks);
}

// Minimal representative with closed components: the blocks of each
// component are sent to that component's own part indices, the diagonal
// multiplicity of a block is realized by fixed points, everything else is
// filled greedily. Vertices past |V_M| stay fixed.
inline Permutation representative_of_type(const ModifiedType& m, int n, const WreathContext& ctx) {
  if (ctx.n != n || ctx.k != m.k()) throw std::invalid_argument("representative_of_type: context does not match (k, n)");
  if (n < m.vertices()) {
    throw NotRealizable("type with " + std::to_string(m.vertices()) + " vertices is not realizable at n = " + std::to_string(n));
  }
  const int v = m.vertices();
  auto comps = components_of(v, m.canonical.blocks);
  std::vector<int> comp_of(static_cast<std::size_t>(v));
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int x : comps[c]) comp_of[x - 1] = static_cast<int>(c);
  std::vector<std::vector<int>> targets(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) targets[c] = comps[c];
  std::vector<std::size_t> next_target(comps.size(), 0);
  std::vector<int> target_of(static_cast<std::size_t>(v));
  for (int b = 0; b < v; ++b) {
    int c = comp_of[m.canonical.blocks[b][0] - 1];
    target_of[b] = targets[c][next_target[c]++];
  }

  std::vector<int> img(static_cast<std::size_t>(ctx.degree()), -1);
  std::vector<int> used_in_source(static_cast<std::size_t>(v + 1), 0);  // points of Gamma_i already used as sources
  std::vector<int> filled(static_cast<std::size_t>(v + 1), 0);          // points of Gamma_u already hit
  for (int b = 0; b < v; ++b) {
    int u = target_of[b];
    int d = static_cast<int>(std::count(m.canonical.blocks[b].begin(), m.canonical.blocks[b].end(), u));
    for (int r = 0; r < d; ++r) img[ctx.block_start0(u) + r] = ctx.block_start0(u) + r;
    used_in_source[u] = d;
    filled[u] = d;
  }
  for (int b = 0; b < v; ++b) {
    int u = target_of[b];
    for (int i : m.canonical.blocks[b]) {
      if (i == u) continue;
      img[ctx.block_start0(i) + used_in_source[i]++] = ctx.block_start0(u) + filled[u]++;
    }
  }
  for (int p = ctx.block_start0(v + 1); p < ctx.degree(); ++p) img[p] = p;
  return Permutation::from_images0(std::move(img));
}

// ---------------------------------------------------------------------------
// enumeration

namespace detail {

inline void multisets_of_size(int k, int vertex_count, int lo, Block& cur, std::vector<Block>& out) {
  if (static_cast<int>(cur.size()) == k) {
    if (cur.front() != cur.back()) out.push_back(cur);
    return;
  }
  for (int v = lo; v <= vertex_count; ++v) {
    cur.push_back(v);
    multisets_of_size(k, vertex_count, v, cur, out);
    cur.pop_back();
  }
}

inline void block_lists(const std::vector<Block>& choices, std::size_t from, int remaining, std::vector<int>& capacity,
                        std::vector<Block>& cur, int vertex_count, int k, std::map<CanonicalType, bool>& seen) {
  if (remaining == 0) {
    if (components_of(vertex_count, cur).size() != 1) return;
    CanonicalType c;
    c.k = k;
    c.vertex_count = vertex_count;
    c.blocks = canonical_blocks(vertex_count, cur);
    seen.emplace(std::move(c), true);
    return;
  }
  for (std::size_t i = from; i < choices.size(); ++i) {
    const auto& b = choices[i];
    bool ok = true;
    for (int v : b)
      if (--capacity[v - 1] < 0) ok = false;
    if (ok) {
      cur.push_back(b);
      block_lists(choices, i, remaining - 1, capacity, cur, vertex_count, k, seen);
      cur.pop_back();
    }
    for (int v : b) ++capacity[v - 1];
  }
}

}  // namespace detail

// Connected modified types with exactly vertex_count vertices.
inline std::vector<ModifiedType> enumerate_connected_types(int k, int vertex_count) {
  std::vector<ModifiedType> out;
  if (vertex_count < 2) return out;
  std::vector<Block> choices;
  Block cur;
  detail::multisets_of_size(k, vertex_count, 1, cur, choices);
  std::vector<int> capacity(static_cast<std::size_t>(vertex_count), k);
  std::vector<Block> chosen;
  std::map<CanonicalType, bool> seen;
  detail::block_lists(choices, 0, vertex_count, capacity, chosen, vertex_count, k, seen);
  for (const auto& [c, _] : seen) {
    ModifiedType m;
    m.canonical = c;
    m.weight = vertex_count - 1;
    m.lambda = {vertex_count};
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline ModifiedType disjoint_union(const std::vector<ModifiedType>& parts, int k) {
  CosetType t;
  t.k = k;
  for (const auto& p : parts) {
    for (const auto& b : p.canonical.blocks) {
      Block nb = b;
      for (auto& v : nb) v += t.vertex_count;
      t.blocks.push_back(std::move(nb));
    }
    t.vertex_count += p.vertices();
  }
  return modify(t);
}

// All modified types with at most max_vertices vertices (and, if
// max_weight >= 0, weight at most max_weight), each once, in listing order.
inline std::vector<ModifiedType> enumerate_modified_types(int k, int max_vertices, int max_weight = -1) {
  if (k < 2) throw std::invalid_argument("block size k must be at least 2");
  if (max_vertices < 0) throw std::invalid_argument("max_vertices must be non-negative");
  std::vector<ModifiedType> connected;
  for (int c = 2; c <= max_vertices; ++c) {
    if (max_weight >= 0 && c - 1 > max_weight) break;
    auto part = enumerate_connected_types(k, c);
    connected.insert(connected.end(), part.begin(), part.end());
  }
  std::vector<ModifiedType> out;
  std::vector<ModifiedType> chosen;
  auto rec = [&](auto&& self, std::size_t from, int vertices, int w) -> void {
    out.push_back(disjoint_union(chosen, k));
    for (std::size_t i = from; i < connected.size(); ++i) {
      int nv = vertices + connected[i].vertices();
      int nw = w + connected[i].weight;
      if (nv > max_vertices || (max_weight >= 0 && nw > max_weight)) continue;
      chosen.push_back(connected[i]);
      self(self, i, nv, nw);
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Types realizable at level n, i.e. with at most n vertices.
inline std::vector<ModifiedType> realizable_types(int k, int n) { return enumerate_modified_types(k, n); }

// ---------------------------------------------------------------------------
// serialization

inline ModifiedType parse_type_key(int k, std::string_view key) {
  auto colon = key.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("type key without ':'");
  int v = std::stoi(std::string(key.substr(0, colon)));
  std::vector<Block> blocks;
  std::string_view rest = key.substr(colon + 1);
  while (!rest.empty()) {
    auto bar = rest.find('|');
    std::string_view piece = rest.substr(0, bar);
    Block b;
    std::stringstream ss{std::string(piece)};
    std::string item;
    while (std::getline(ss, item, '.')) b.push_back(std::stoi(item));
    blocks.push_back(std::move(b));
    if (bar == std::string_view::npos) break;
    rest = rest.substr(bar + 1);
  }
  return make_modified_type(k, v, blocks);
}

inline void to_json(nlohmann::json& j, const ModifiedType& m) {
  j = nlohmann::json{{"k", m.k()}, {"vertices", m.vertices()}, {"blocks", m.canonical.blocks}};
}

inline void from_json(const nlohmann::json& j, ModifiedType& m) {
  m = make_modified_type(j.at("k").get<int>(), j.at("vertices").get<int>(), j.at("blocks").get<std::vector<Block>>());
}

inline std::string lambda_string(const ModifiedType& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.lambda.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(m.lambda[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// shared registry and per-thread classifier

class TypeRegistry {
 public:
  explicit TypeRegistry(int k) : k_(k) {}

  int k() const noexcept { return k_; }

  int intern(const ModifiedType& m) {
    std::string key = m.key();
    {
      std::shared_lock lock(mutex_);
      auto it = index_.find(key);
      if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = index_.emplace(key, static_cast<int>(types_.size()));
    if (inserted) types_.push_back(m);
    return it->second;
  }

  std::optional<int> find(const ModifiedType& m) const {
    std::shared_lock lock(mutex_);
    auto it = index_.find(m.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  ModifiedType at(int id) const {
    std::shared_lock lock(mutex_);
    return types_.at(static_cast<std::size_t>(id));
  }

  int size() const {
    std::shared_lock lock(mutex_);
    return static_cast<int>(types_.size());
  }

 private:
  int k_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, int> index_;
  std::deque<ModifiedType> types_;
};

// Not thread-safe; give each worker its own. Raw intersection matrices are
// memoized so the canonical search runs once per distinct matrix.
class TypeClassifier {
 public:
  TypeClassifier(TypeRegistry& registry, const WreathContext& ctx) : registry_(&registry), ctx_(ctx) {
    raw_.resize(static_cast<std::size_t>(ctx.n * ctx.n));
  }

  int classify(const Permutation& g) {
    std::fill(raw_.begin(), raw_.end(), '\0');
    for (int s = 0; s < ctx_.degree(); ++s) ++raw_[static_cast<std::size_t>(ctx_.block_of0(s) * ctx_.n + ctx_.block_of0(g.image0(s)))];
    return lookup();
  }

  // type of a^-1 b without forming the product
  int classify_quotient(const Permutation& a_inverse, const Permutation& b) {
    std::fill(raw_.begin(), raw_.end(), '\0');
    for (int s = 0; s < ctx_.degree(); ++s)
      ++raw_[static_cast<std::size_t>(ctx_.block_of0(s) * ctx_.n + ctx_.block_of0(a_inverse.image0(b.image0(s))))];
    return lookup();
  }

  // raw[i*n+u] = A[i][u] for an n x n intersection matrix
  int classify_counts(const std::string& raw) {
    raw_ = raw;
    return lookup();
  }

  std::size_t cache_size() const noexcept { return cache_.size(); }

 private:
  int lookup() {
    auto it = cache_.find(raw_);
    if (it != cache_.end()) return it->second;
    std::vector<int> a(raw_.begin(), raw_.end());
    int id = registry_->intern(modify(type_from_matrix(ctx_.k, ctx_.n, a)));
    cache_.emplace(raw_, id);
    return id;
  }

  TypeRegistry* registry_;
  WreathContext ctx_;
  std::string raw_;
  std::unordered_map<std::string, int> cache_;
};

}  // namespace wreath
