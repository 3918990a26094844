#pragma once

// Structure constants c_{M,N}^L(n) of the double-coset algebra, where
// S_M = (1/|H|) sum of the double coset M. Two engines:
//   oracle       counts factorizations g1 g2 = g_L over all of S_{kn};
//   centralizer  sums |C_H(x)| / |C_H(x) ∩ g1 H g1^-1| over orbit
//                representatives of left cosets g1 H with g1 in M and
//                g1^-1 g_L in N, computed once at a small level and carried
//                to every n by the falling-factorial form of each summand.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/cosets.hpp"
#include "wreath/errors.hpp"
#include "wreath/group_search.hpp"
#include "wreath/numeric.hpp"
#include "wreath/parallel.hpp"
#include "wreath/perm.hpp"
#include "wreath/type_graph.hpp"
#include "wreath/union_find.hpp"

namespace wreath {

inline constexpr int kOracleCeiling = 10;   // kn
inline constexpr int kLiteralCeiling = 8;   // kn, literal fiber enumeration
inline constexpr int kTableSchemaVersion = 1;

enum class Engine { oracle, centralizer };

inline std::string to_string(Engine e) { return e == Engine::oracle ? "oracle" : "centralizer"; }

inline Engine parse_engine(const std::string& s) {
  if (s == "oracle") return Engine::oracle;
  if (s == "centralizer") return Engine::centralizer;
  throw std::invalid_argument("unknown engine '" + s + "'");
}

inline void require_realizable(const ModifiedType& t, int n) {
  if (t.vertices() > n) {
    throw NotRealizable("type " + t.key() + " needs n >= " + std::to_string(t.vertices()) + ", got n = " + std::to_string(n));
  }
}

// ---------------------------------------------------------------------------
// oracle

class OracleEngine {
 public:
  using PairCounts = std::map<std::pair<std::string, std::string>, BigInt>;

  explicit OracleEngine(const WreathContext& ctx, int workers = 1) : ctx_(ctx), workers_(workers), registry_(ctx.k) {
    if (ctx.degree() > kOracleCeiling) {
      throw CeilingExceeded("oracle engine refused: kn = " + std::to_string(ctx.degree()) + " exceeds the ceiling " +
                            std::to_string(kOracleCeiling));
    }
  }

  const WreathContext& context() const noexcept { return ctx_; }

  // #{(g1, g2) : g1 g2 = g_L} split by (type g1, type g2)
  const PairCounts& pair_counts(const ModifiedType& L) {
    require_realizable(L, ctx_.n);
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find(L.key());
      if (it != cache_.end()) return it->second;
    }
    Permutation g = representative_of_type(L, ctx_.n, ctx_);
    const int degree = ctx_.degree();
    std::vector<std::unordered_map<long long, long long>> partial(static_cast<std::size_t>(degree));
    // y runs over S_{kn}; the pair is (y^-1, y g)
    parallel_chunks(degree, workers_, [&](int c) {
      TypeClassifier classify(registry_, ctx_);
      auto& out = partial[c];
      for_each_permutation_with_first(degree, c + 1, [&](const Permutation& y) {
        int a = classify.classify(y);
        int b = classify.classify_quotient(y, g);
        ++out[(static_cast<long long>(a) << 32) | b];
      });
    });
    std::map<std::pair<int, int>, BigInt> by_id;
    for (auto& part : partial)
      for (auto [key, cnt] : part) by_id[{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffff)}] += cnt;
    PairCounts counts;
    for (auto& [ids, cnt] : by_id) {
      ModifiedType first = inverse_type(registry_.at(ids.first));
      counts[{first.key(), registry_.at(ids.second).key()}] += cnt;
    }
    std::lock_guard lock(mutex_);
    return cache_.emplace(L.key(), std::move(counts)).first->second;
  }

  BigInt constant(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L) {
    require_realizable(M, ctx_.n);
    require_realizable(N, ctx_.n);
    const auto& counts = pair_counts(L);
    auto it = counts.find({M.key(), N.key()});
    if (it == counts.end()) return 0;
    return exact_div(it->second, wreath_order(ctx_.k, ctx_.n), "oracle structure constant");
  }

 private:
  WreathContext ctx_;
  int workers_;
  TypeRegistry registry_;
  std::mutex mutex_;
  std::map<std::string, PairCounts> cache_;
};

inline BigInt conv_constant_oracle(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, const WreathContext& ctx,
                                   int workers = 1) {
  if (ctx.n != n) throw std::invalid_argument("conv_constant_oracle: context does not match n");
  OracleEngine engine(ctx, workers);
  return engine.constant(M, N, L);
}

// ---------------------------------------------------------------------------
// literal fibers under the reverted action (h1, h2).(g1, g2) = (h1 g1 h2^-1, h2 g2 h1^-1)

struct FiberOrbit {
  Permutation g1;
  Permutation g2;
  BigInt orbit_size = 0;
  BigInt stabilizer_size = 0;
};

// |C_{H_n}(g1 g2) ∩ g1 H_n g1^-1| by filtering the centralizer element by element.
inline BigInt stabilizer_size(const Permutation& g1, const Permutation& g2, const WreathContext& ctx) {
  Permutation y = g1 * g2;
  Permutation g1_inv = g1.inverse();
  BigInt count = 0;
  for_each_wreath(ctx, [&](const Permutation& h) {
    if (h * y != y * h) return;
    if (is_wreath_member(g1_inv * h * g1, ctx)) ++count;
  });
  return count;
}

// Same intersection found by backtracking search; usable at larger n.
inline BigInt stabilizer_size_search(const Permutation& g1, const Permutation& g2, const WreathContext& ctx) {
  return WreathSubgroup(ctx, all_blocks(ctx)).commuting_with(g1 * g2).preserving_image_of(g1).order();
}

inline std::vector<FiberOrbit> fiber_orbits(const ModifiedType& M, const ModifiedType& N, const Permutation& g, const WreathContext& ctx) {
  if (ctx.degree() > kLiteralCeiling) {
    throw CeilingExceeded("fiber_orbits refused: kn = " + std::to_string(ctx.degree()) + " exceeds the ceiling " +
                          std::to_string(kLiteralCeiling));
  }
  std::set<Permutation> conj;
  for_each_wreath(ctx, [&](const Permutation& h) { conj.insert(h * g * h.inverse()); });

  TypeRegistry registry(ctx.k);
  TypeClassifier classify(registry, ctx);
  int m_id = registry.intern(M);
  int n_id = registry.intern(N);
  std::vector<std::pair<Permutation, Permutation>> pairs;
  for_each_permutation(ctx.degree(), [&](const Permutation& g1) {
    if (classify.classify(g1) != m_id) return;
    Permutation g1_inv = g1.inverse();
    for (const auto& y : conj) {
      Permutation g2 = g1_inv * y;
      if (classify.classify(g2) == n_id) pairs.emplace_back(g1, g2);
    }
  });
  std::map<std::pair<Permutation, Permutation>, int> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pairs[i], static_cast<int>(i));

  UnionFind uf(static_cast<int>(pairs.size()));
  auto gens = wreath_generators(ctx);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [g1, g2] = pairs[i];
    for (const auto& s : gens) {
      Permutation s_inv = s.inverse();
      std::pair<Permutation, Permutation> moved[2] = {{s * g1, g2 * s_inv}, {g1 * s_inv, s * g2}};
      for (const auto& mv : moved) {
        auto it = index.find(mv);
        if (it == index.end()) throw ConsistencyError("fiber_orbits: reverted action left the fiber set");
        uf.unite(static_cast<int>(i), it->second);
      }
    }
  }
  BigInt h = wreath_order(ctx.k, ctx.n);
  std::vector<FiberOrbit> out;
  for (const auto& cls : uf.classes()) {
    FiberOrbit o;
    o.g1 = pairs[cls.front()].first;
    o.g2 = pairs[cls.front()].second;
    o.orbit_size = static_cast<long long>(cls.size());
    o.stabilizer_size = stabilizer_size(o.g1, o.g2, ctx);
    if (o.orbit_size * o.stabilizer_size != h * h) throw ConsistencyError("fiber_orbits: orbit-stabilizer identity fails");
    out.push_back(std::move(o));
  }
  return out;
}

// sum over fiber orbits of |C_H(g1 g2)| / |C_H(g1 g2) ∩ g1 H g1^-1|, all by direct enumeration
inline BigInt conv_constant_centralizer_literal(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n,
                                                const WreathContext& ctx) {
  for (const auto* t : {&M, &N, &L}) require_realizable(*t, n);
  Permutation g = representative_of_type(L, n, ctx);
  BigInt total = 0;
  for (const auto& o : fiber_orbits(M, N, g, ctx)) {
    Permutation y = o.g1 * o.g2;
    BigInt cent = 0;
    for_each_wreath(ctx, [&](const Permutation& h) {
      if (h * y == y * h) ++cent;
    });
    total += exact_div(cent, o.stabilizer_size, "centralizer summand");
  }
  return total;
}

// ---------------------------------------------------------------------------
// centralizer engine on left cosets

// One orbit of C_H(g_L) on the cosets g1 H counted by c_{M,N}^L, in normal
// form: g1 minimal and product = g1 g2 a minimal conjugate of g_L.
struct OrbitTerm {
  Permutation g1;
  Permutation g2;
  Permutation product;
  int level = 0;           // n at which the representative lives
  BigInt orbit_size = 0;   // at `level`
  Rational zeta = 0;       // |C_{H_B}(product)| / |C_{H_T}(product) ∩ g1 H_T g1^-1|
  int support_base = 0;    // b = |[product]_H|
  int t3 = 0;              // |[g1]_H \ [product]_H|
  bool g1_support_inside = false;  // [g1]_H ⊆ [product]_H

  // zeta (k!)^t3 (n - b)_t3
  Rational summand(int n, int k) const {
    return zeta * Rational(power(factorial(k), t3) * falling_factorial(BigInt(n - support_base), t3));
  }
};

struct CentralizerRow {
  ModifiedType first;
  ModifiedType target;
  int level = 0;
  std::map<std::string, ModifiedType> seconds;
  std::map<std::string, std::vector<OrbitTerm>> terms;  // keyed by the second type
};

enum class CentralizerMode {
  reduced,  // orbits at level |V_M|+|V_L|, summands carried to n as polynomials
  level,    // orbits at level n, summands from full centralizer orders
  literal,  // fiber_orbits on S_{kn}
};

namespace detail {

inline void k_subsets(int n, int size, int from, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(cur.size()) == size) {
    visit(cur);
    return;
  }
  for (int i = from; i <= n - (size - static_cast<int>(cur.size())) + 1; ++i) {
    cur.push_back(i);
    k_subsets(n, size, i + 1, cur, visit);
    cur.pop_back();
  }
}

// Partitions of `points` into k-sets, none of which is a whole part Gamma_i.
inline void k_partitions(const std::vector<int>& points, const WreathContext& ctx, std::vector<int>& label, int next_label,
                         const std::function<void()>& visit) {
  int first = -1;
  for (int p : points)
    if (label[p] < 0) {
      first = p;
      break;
    }
  if (first < 0) {
    visit();
    return;
  }
  std::vector<int> free;
  for (int p : points)
    if (label[p] < 0 && p != first) free.push_back(p);
  std::vector<int> choose;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(choose.size()) == ctx.k - 1) {
      bool whole = true;
      for (int q : choose)
        if (ctx.block_of0(q) != ctx.block_of0(first)) whole = false;
      if (whole) return;
      label[first] = next_label;
      for (int q : choose) label[q] = next_label;
      k_partitions(points, ctx, label, next_label + 1, visit);
      label[first] = -1;
      for (int q : choose) label[q] = -1;
      return;
    }
    for (std::size_t i = from; i < free.size(); ++i) {
      choose.push_back(free[i]);
      rec(i + 1);
      choose.pop_back();
    }
  };
  rec(0);
}

// parts renumbered in order of their least point
inline std::string canonical_labels(const std::vector<int>& label) {
  std::vector<int> remap(label.size(), -1);
  std::string out(label.size(), '\0');
  int next = 0;
  for (std::size_t p = 0; p < label.size(); ++p) {
    int l = label[p];
    if (remap[l] < 0) remap[l] = next++;
    out[p] = static_cast<char>(remap[l]);
  }
  return out;
}

}  // namespace detail

class CentralizerEngine {
 public:
  explicit CentralizerEngine(int k) : k_(k) {}

  int k() const noexcept { return k_; }

  // Orbit data for all second types N at once. level defaults to |V_M| + |V_L|.
  CentralizerRow compute_row(const ModifiedType& M, const ModifiedType& L, int level, bool full_orders = false) const {
    require_realizable(M, level);
    require_realizable(L, level);
    WreathContext ctx(k_, level);
    const int k = k_;
    const int degree = ctx.degree();
    Permutation g = representative_of_type(L, level, ctx);
    TypeRegistry registry(k);
    TypeClassifier classify(registry, ctx);
    int m_id = registry.intern(M);

    std::vector<std::string> cands;
    std::vector<int> cand_second;
    std::unordered_map<std::string, int> index;
    std::vector<int> label(static_cast<std::size_t>(degree), -1);
    std::string raw(static_cast<std::size_t>(level * level), '\0');

    std::vector<int> subset;
    detail::k_subsets(level, M.vertices(), 1, subset, [&](const std::vector<int>& S) {
      std::vector<bool> in_s(static_cast<std::size_t>(level + 1), false);
      for (int b : S) in_s[b] = true;
      std::vector<int> points;
      std::fill(label.begin(), label.end(), -1);
      int next = 0;
      for (int b = 1; b <= level; ++b) {
        if (in_s[b]) {
          for (int r = 0; r < k; ++r) points.push_back(ctx.block_start0(b) + r);
        } else {
          for (int r = 0; r < k; ++r) label[ctx.block_start0(b) + r] = next;
          ++next;
        }
      }
      detail::k_partitions(points, ctx, label, next, [&] {
        std::string key = detail::canonical_labels(label);
        // rows: parts, columns: Gamma_u
        std::fill(raw.begin(), raw.end(), '\0');
        for (int p = 0; p < degree; ++p) ++raw[static_cast<std::size_t>(key[p] * level + ctx.block_of0(p))];
        if (classify.classify_counts(raw) != m_id) return;
        // rows: Gamma_i, columns: parts, entries |g(Gamma_i) ∩ P_u|
        std::fill(raw.begin(), raw.end(), '\0');
        for (int s = 0; s < degree; ++s) ++raw[static_cast<std::size_t>(ctx.block_of0(s) * level + key[g.image0(s)])];
        int n_id = classify.classify_counts(raw);
        if (index.emplace(key, static_cast<int>(cands.size())).second) {
          cands.push_back(key);
          cand_second.push_back(n_id);
        }
      });
    });

    // generators of C_{H_level}(g) = C_{H_B}(g) x H on the remaining parts
    std::vector<Permutation> gens;
    if (L.vertices() > 0) {
      std::vector<int> bset(static_cast<std::size_t>(L.vertices()));
      for (int i = 0; i < L.vertices(); ++i) bset[i] = i + 1;
      gens = WreathSubgroup(ctx, bset).commuting_with(g).generators();
    }
    for (int i = L.vertices() + 1; i <= level; ++i) {
      if (i < level) gens.push_back(tau(i, i + 1, ctx));
      for (int r = 1; r < k; ++r) gens.push_back(Permutation::from_cycles(degree, {{ctx.block_start0(i) + r, ctx.block_start0(i) + r + 1}}));
    }

    UnionFind uf(static_cast<int>(cands.size()));
    std::vector<int> moved(static_cast<std::size_t>(degree));
    for (std::size_t c = 0; c < cands.size(); ++c) {
      for (const auto& s : gens) {
        for (int p = 0; p < degree; ++p) moved[s.image0(p)] = cands[c][p];
        auto it = index.find(detail::canonical_labels(moved));
        if (it == index.end()) throw ConsistencyError("centralizer engine: C_H(g) moved a coset out of the fiber");
        uf.unite(static_cast<int>(c), it->second);
      }
    }

    CentralizerRow row;
    row.first = M;
    row.target = L;
    row.level = level;
    BigInt cent_b;  // |C_{H_B}(x')| is the same for every conjugate x' of g
    bool have_cent_b = false;
    for (const auto& cls : uf.classes()) {
      const std::string& key = cands[cls.front()];
      ModifiedType second = registry.at(cand_second[cls.front()]);
      std::vector<std::vector<int>> parts(static_cast<std::size_t>(level));
      for (int p = 0; p < degree; ++p) parts[key[p]].push_back(p);
      std::vector<int> ximg(static_cast<std::size_t>(degree));
      for (int j = 0; j < level; ++j)
        for (int r = 0; r < k; ++r) ximg[k * j + r] = parts[j][r];
      Permutation x = Permutation::from_images0(std::move(ximg));
      NormalizedElement nf = minimal_representative_with_factor(x, ctx);

      OrbitTerm t;
      t.level = level;
      t.g1 = nf.element;
      t.product = nf.left * g * nf.left.inverse();
      t.g2 = t.g1.inverse() * t.product;
      t.orbit_size = static_cast<long long>(cls.size());
      auto a = h_support(t.g1, ctx).block_indices;
      auto b = h_support(t.product, ctx).block_indices;
      std::vector<int> tset;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(tset));
      t.support_base = static_cast<int>(b.size());
      t.t3 = static_cast<int>(tset.size() - b.size());
      t.g1_support_inside = t.t3 == 0;

      if (!have_cent_b) {
        cent_b = b.empty() ? BigInt(1) : WreathSubgroup(ctx, b).commuting_with(t.product).order();
        have_cent_b = true;
      }
      BigInt inter = tset.empty() ? BigInt(1) : WreathSubgroup(ctx, tset).commuting_with(t.product).preserving_image_of(t.g1).order();
      t.zeta = Rational(cent_b, inter);
      if (t.summand(level, k) != Rational(t.orbit_size)) {
        throw ConsistencyError("centralizer engine: summand " + t.summand(level, k).str() + " differs from orbit size " +
                               t.orbit_size.str() + " for " + M.key() + " x " + second.key() + " -> " + L.key());
      }
      if (full_orders) {
        BigInt cent = centralizer_order(t.product, ctx);
        BigInt stab = stabilizer_size_search(t.g1, t.g2, ctx);
        if (exact_div(cent, stab, "centralizer summand") != t.orbit_size)
          throw ConsistencyError("centralizer engine: |C_H|/|stabilizer| differs from the orbit size");
      }
      row.seconds.emplace(second.key(), second);
      row.terms[second.key()].push_back(std::move(t));
    }
    return row;
  }

  const CentralizerRow& row(const ModifiedType& M, const ModifiedType& L) {
    std::string key = M.key() + "#" + L.key();
    {
      std::lock_guard lock(mutex_);
      auto it = rows_.find(key);
      if (it != rows_.end()) return it->second;
    }
    CentralizerRow r = compute_row(M, L, std::max(1, M.vertices() + L.vertices()));
    std::lock_guard lock(mutex_);
    return rows_.emplace(key, std::move(r)).first->second;
  }

  // Orbit terms for c_{M,N}^L. When |V_N| < |V_M| the identity
  // c_{M,N}^L = c_{N*,M*}^{L*} is used so the smaller type is enumerated.
  std::vector<OrbitTerm> terms(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L) {
    if (N.vertices() < M.vertices()) {
      ModifiedType ns = inverse_type(N), ms = inverse_type(M), ls = inverse_type(L);
      const auto& r = row(ns, ls);
      auto it = r.terms.find(ms.key());
      return it == r.terms.end() ? std::vector<OrbitTerm>{} : it->second;
    }
    const auto& r = row(M, L);
    auto it = r.terms.find(N.key());
    return it == r.terms.end() ? std::vector<OrbitTerm>{} : it->second;
  }

  BigInt constant(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
    for (const auto* t : {&M, &N, &L}) require_realizable(*t, n);
    Rational total = 0;
    for (const auto& t : terms(M, N, L)) total += t.summand(n, k_);
    return to_integer(total, "centralizer structure constant");
  }

  // Direct computation at level n (no carrying between levels). Uses the
  // same side choice as terms().
  BigInt constant_at_level(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, bool full_orders = true) {
    for (const auto* t : {&M, &N, &L}) require_realizable(*t, n);
    bool swap = N.vertices() < M.vertices();
    const ModifiedType first = swap ? inverse_type(N) : M;
    const ModifiedType target = swap ? inverse_type(L) : L;
    const std::string second = swap ? inverse_type(M).key() : N.key();
    std::string key = first.key() + "#" + target.key() + "#" + std::to_string(n) + (full_orders ? "#f" : "");
    const CentralizerRow* r = nullptr;
    {
      std::lock_guard lock(mutex_);
      auto it = level_rows_.find(key);
      if (it != level_rows_.end()) r = &it->second;
    }
    if (!r) {
      CentralizerRow computed = compute_row(first, target, n, full_orders);
      std::lock_guard lock(mutex_);
      r = &level_rows_.emplace(key, std::move(computed)).first->second;
    }
    auto it = r->terms.find(second);
    BigInt total = 0;
    if (it != r->terms.end())
      for (const auto& t : it->second) total += t.orbit_size;
    return total;
  }

 private:
  int k_;
  std::mutex mutex_;
  std::map<std::string, CentralizerRow> rows_;
  std::map<std::string, CentralizerRow> level_rows_;
};

inline BigInt conv_constant_centralizer(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, const WreathContext& ctx,
                                        CentralizerMode mode = CentralizerMode::reduced) {
  if (ctx.n != n) throw std::invalid_argument("conv_constant_centralizer: context does not match n");
  switch (mode) {
    case CentralizerMode::literal:
      return conv_constant_centralizer_literal(M, N, L, n, ctx);
    case CentralizerMode::level:
      return CentralizerEngine(ctx.k).constant_at_level(M, N, L, n);
    case CentralizerMode::reduced:
    default:
      return CentralizerEngine(ctx.k).constant(M, N, L, n);
  }
}

// ---------------------------------------------------------------------------
// tables

struct StructureEntry {
  int n = 0;
  ModifiedType M, N, L;
  BigInt value = 0;
  Engine engine = Engine::oracle;
};

class StructureTable {
 public:
  explicit StructureTable(int k = 2) : k_(k) {}

  int k() const noexcept { return k_; }

  void insert(StructureEntry e) {
    if (e.value < 0) throw ConsistencyError("negative structure constant");
    std::lock_guard lock(*mutex_);
    entries_[key_of(e.M, e.N, e.L, e.n, e.engine)] = std::move(e);
  }

  std::optional<BigInt> value(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, Engine engine) const {
    std::lock_guard lock(*mutex_);
    auto it = entries_.find(key_of(M, N, L, n, engine));
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  BigInt at(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, Engine engine) const {
    auto v = value(M, N, L, n, engine);
    if (!v) throw std::out_of_range("structure table has no entry " + M.key() + " x " + N.key() + " -> " + L.key());
    return *v;
  }

  std::vector<StructureEntry> entries() const {
    std::lock_guard lock(*mutex_);
    std::vector<StructureEntry> out;
    for (const auto& [_, e] : entries_) out.push_back(e);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::tie(a.n, a.M, a.N, a.L, a.engine) < std::tie(b.n, b.M, b.N, b.L, b.engine);
    });
    return out;
  }

  // Triples computed by both engines whose values differ.
  std::vector<std::string> disagreements() const {
    std::vector<std::string> out;
    for (const auto& e : entries()) {
      if (e.engine != Engine::oracle) continue;
      auto other = value(e.M, e.N, e.L, e.n, Engine::centralizer);
      if (other && *other != e.value) {
        out.push_back("n=" + std::to_string(e.n) + " " + e.M.key() + " x " + e.N.key() + " -> " + e.L.key() + ": oracle " + e.value.str() +
                      ", centralizer " + other->str());
      }
    }
    return out;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "k,n,M_key,N_key,L_key,value,engine\n";
    for (const auto& e : entries())
      os << k_ << ',' << e.n << ",\"" << e.M.key() << "\",\"" << e.N.key() << "\",\"" << e.L.key() << "\"," << e.value << ','
         << to_string(e.engine) << '\n';
    return os.str();
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : entries()) {
      rows.push_back({{"n", e.n}, {"M", e.M.key()}, {"N", e.N.key()}, {"L", e.L.key()}, {"value", e.value.str()}, {"engine", to_string(e.engine)}});
    }
    return {{"schema_version", kTableSchemaVersion}, {"k", k_}, {"entries", rows}};
  }

 private:
  static std::string key_of(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n, Engine e) {
    return std::to_string(n) + "/" + M.key() + "/" + N.key() + "/" + L.key() + "/" + to_string(e);
  }

  int k_;
  std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
  std::map<std::string, StructureEntry> entries_;
};

struct TableOptions {
  int workers = 1;
  CentralizerMode mode = CentralizerMode::reduced;
};

// Every c_{M,N}^L(n) with M, N, L realizable at n.
inline void fill_table(StructureTable& table, int n, Engine engine, const TableOptions& opt = {}) {
  const int k = table.k();
  WreathContext ctx(k, n);
  auto types = realizable_types(k, n);
  if (engine == Engine::oracle) {
    OracleEngine oracle(ctx, opt.workers);
    for (const auto& L : types)
      for (const auto& M : types)
        for (const auto& N : types) table.insert({n, M, N, L, oracle.constant(M, N, L), Engine::oracle});
    return;
  }
  CentralizerEngine cent(k);
  parallel_chunks(static_cast<int>(types.size()), opt.workers, [&](int li) {
    const auto& L = types[li];
    for (const auto& M : types)
      for (const auto& N : types) {
        BigInt v;
        switch (opt.mode) {
          case CentralizerMode::literal: v = conv_constant_centralizer_literal(M, N, L, n, ctx); break;
          case CentralizerMode::level: v = cent.constant_at_level(M, N, L, n); break;
          default: v = cent.constant(M, N, L, n); break;
        }
        table.insert({n, M, N, L, v, Engine::centralizer});
      }
  });
}

inline StructureTable compute_table(int k, int n, Engine engine, const TableOptions& opt = {}) {
  StructureTable t(k);
  fill_table(t, n, engine, opt);
  return t;
}

struct AxiomReport {
  bool associative = true;
  bool unital = true;
  std::vector<std::string> failures;
  bool ok() const { return associative && unital; }
};

inline AxiomReport check_algebra_axioms(const StructureTable& table, int n, Engine engine) {
  AxiomReport r;
  auto types = realizable_types(table.k(), n);
  auto c = [&](const ModifiedType& a, const ModifiedType& b, const ModifiedType& l) { return table.at(a, b, l, n, engine); };
  const ModifiedType unit = empty_type(table.k());
  for (const auto& M : types)
    for (const auto& L : types) {
      BigInt delta = M == L ? 1 : 0;
      if (c(unit, M, L) != delta || c(M, unit, L) != delta) {
        r.unital = false;
        r.failures.push_back("unit law fails at " + M.key() + " -> " + L.key());
      }
    }
  for (const auto& M : types)
    for (const auto& N : types)
      for (const auto& P : types)
        for (const auto& Q : types) {
          BigInt left = 0, right = 0;
          for (const auto& L : types) {
            left += c(M, N, L) * c(L, P, Q);
            right += c(N, P, L) * c(M, L, Q);
          }
          if (left != right) {
            r.associative = false;
            r.failures.push_back("associativity fails at (" + M.key() + ", " + N.key() + ", " + P.key() + ") -> " + Q.key());
          }
        }
  return r;
}

struct CommutativityWitness {
  ModifiedType M, N, L;
  BigInt forward, backward;
};

inline std::optional<CommutativityWitness> find_noncommutative_witness(const StructureTable& table, int n, Engine engine) {
  auto types = realizable_types(table.k(), n);
  for (const auto& M : types)
    for (const auto& N : types)
      for (const auto& L : types) {
        BigInt f = table.at(M, N, L, n, engine), b = table.at(N, M, L, n, engine);
        if (f != b) return CommutativityWitness{M, N, L, f, b};
      }
  return std::nullopt;
}

}  // namespace wreath
