#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/errors.hpp"
#include "wreath/group_search.hpp"
#include "wreath/numeric.hpp"
#include "wreath/parallel.hpp"
#include "wreath/perm.hpp"
#include "wreath/type_graph.hpp"

namespace wreath {

inline constexpr int kCosetCacheFormat = 1;
inline constexpr int kFullTableCeiling = 8;     // kn, member lists kept
inline constexpr int kCompactTableCeiling = 10;  // kn, counts only

// ---------------------------------------------------------------------------
// minimality

// Target part index (1-based) if g maps Gamma_i onto a whole part, else 0.
inline int block_image(const Permutation& g, int i, const WreathContext& ctx) {
  int first = ctx.block_of0(g.image0(ctx.block_start0(i)));
  for (int r = 1; r < ctx.k; ++r)
    if (ctx.block_of0(g.image0(ctx.block_start0(i) + r)) != first) return 0;
  return first + 1;
}

inline bool is_minimal(const Permutation& g, const WreathContext& ctx) {
  ctx.require_degree(g);
  for (int i = 1; i <= ctx.n; ++i) {
    int j = block_image(g, i, ctx);
    if (j == 0) continue;
    if (j != i) return false;
  }
  for (int s = 0; s < ctx.degree(); ++s)
    if (ctx.block_of0(g.image0(s)) == ctx.block_of0(s) && g.image0(s) != s) return false;
  return true;
}

struct NormalizedElement {
  Permutation element;  // h * g
  Permutation left;     // h, an element of H_n
};

namespace detail {

inline void straighten_within_blocks(std::vector<int>& img, std::vector<int>& left, const WreathContext& ctx) {
  // premultiply by the transposition (g(s), s) while some s stays in its part but moves
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < ctx.degree(); ++s) {
      int t = img[s];
      if (t == s || ctx.block_of0(t) != ctx.block_of0(s)) continue;
      // (t s) o g : the point mapped to s now goes to t, s is fixed
      for (auto& v : img) {
        if (v == t) v = s;
        else if (v == s) v = t;
      }
      for (auto& v : left) {
        if (v == t) v = s;
        else if (v == s) v = t;
      }
      changed = true;
    }
  }
}

}  // namespace detail

// Left normalization h*g: first every part carried onto a part is moved back
// onto itself and fixed pointwise (parts in increasing order), then points
// that stay in their own part are fixed.
inline NormalizedElement minimal_representative_with_factor(const Permutation& g, const WreathContext& ctx) {
  ctx.require_degree(g);
  std::vector<int> img(g.images0().begin(), g.images0().end());
  std::vector<int> left(static_cast<std::size_t>(ctx.degree()));
  for (int p = 0; p < ctx.degree(); ++p) left[p] = p;
  auto premultiply = [&](const std::vector<int>& a) {
    for (auto& v : img) v = a[v];
    for (auto& v : left) v = a[v];
  };
  for (int i = 1; i <= ctx.n; ++i) {
    int first = ctx.block_of0(img[ctx.block_start0(i)]);
    bool onto = true;
    for (int r = 1; r < ctx.k; ++r)
      if (ctx.block_of0(img[ctx.block_start0(i) + r]) != first) onto = false;
    if (!onto) continue;
    int j = first + 1;
    if (j != i) {
      auto t = tau(i, j, ctx);
      premultiply(std::vector<int>(t.images0().begin(), t.images0().end()));
    }
    std::vector<int> w(static_cast<std::size_t>(ctx.degree()));
    for (int p = 0; p < ctx.degree(); ++p) w[p] = p;
    for (int r = 0; r < ctx.k; ++r) w[img[ctx.block_start0(i) + r]] = ctx.block_start0(i) + r;
    premultiply(w);
  }
  detail::straighten_within_blocks(img, left, ctx);
  return {Permutation::from_images0(std::move(img)), Permutation::from_images0(std::move(left))};
}

inline Permutation minimal_representative(const Permutation& g, const WreathContext& ctx) {
  return minimal_representative_with_factor(g, ctx).element;
}

// Vertex sets of the components of G_g together with the target parts
// g(J_C) fed by each component.
struct ComponentImage {
  std::vector<int> vertices;  // J_C, 1-based
  std::vector<int> targets;   // g(J_C), 1-based
};

inline std::vector<ComponentImage> component_images(const Permutation& g, const WreathContext& ctx) {
  CosetType t = coset_type(g, ctx);
  auto comps = connected_components(t);
  std::vector<int> comp_of(static_cast<std::size_t>(ctx.n));
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int v : comps[c]) comp_of[v - 1] = static_cast<int>(c);
  std::vector<ComponentImage> out(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) out[c].vertices = comps[c];
  for (int u = 1; u <= ctx.n; ++u) out[comp_of[t.blocks[u - 1][0] - 1]].targets.push_back(u);
  return out;
}

inline bool has_closed_components(const Permutation& g, const WreathContext& ctx) {
  for (const auto& ci : component_images(g, ctx))
    if (ci.vertices != ci.targets) return false;
  return true;
}

inline NormalizedElement closed_components_form_with_factor(const Permutation& g, const WreathContext& ctx) {
  NormalizedElement m = minimal_representative_with_factor(g, ctx);
  std::vector<int> sigma(static_cast<std::size_t>(ctx.n));
  for (const auto& ci : component_images(m.element, ctx))
    for (std::size_t j = 0; j < ci.targets.size(); ++j) sigma[ci.targets[j] - 1] = ci.vertices[j] - 1;
  std::vector<int> h(static_cast<std::size_t>(ctx.degree()));
  for (int p = 0; p < ctx.degree(); ++p) h[p] = ctx.k * sigma[ctx.block_of0(p)] + p % ctx.k;
  std::vector<int> img(static_cast<std::size_t>(ctx.degree())), left(static_cast<std::size_t>(ctx.degree()));
  for (int p = 0; p < ctx.degree(); ++p) {
    img[p] = h[m.element.image0(p)];
    left[p] = h[m.left.image0(p)];
  }
  detail::straighten_within_blocks(img, left, ctx);
  return {Permutation::from_images0(std::move(img)), Permutation::from_images0(std::move(left))};
}

inline Permutation closed_components_form(const Permutation& g, const WreathContext& ctx) {
  return closed_components_form_with_factor(g, ctx).element;
}

// ---------------------------------------------------------------------------
// sizes

// |H_n g H_n| = |H_n|^2 / |H_n ∩ g H_n g^-1|, with the intersection split
// into the part on the |V_M| support blocks and the untouched H_{n-|V_M|}.
inline BigInt coset_size(const ModifiedType& m, int n, const WreathContext& ctx) {
  Permutation g = representative_of_type(m, n, ctx);
  const int v = m.vertices();
  std::vector<int> support(static_cast<std::size_t>(v));
  for (int i = 0; i < v; ++i) support[i] = i + 1;
  BigInt inner = v == 0 ? BigInt(1) : WreathSubgroup(ctx, support).preserving_image_of(g).order();
  BigInt h = wreath_order(ctx.k, n);
  return exact_div(h * h, inner * wreath_order(ctx.k, n - v), "coset_size");
}

// Closure of {g} under left and right multiplication by generators of H_n.
inline std::vector<Permutation> double_coset_closure(const Permutation& g, const WreathContext& ctx, std::size_t limit = 5'000'000) {
  auto gens = wreath_generators(ctx);
  std::unordered_set<Permutation, PermutationHash> seen{g};
  std::vector<Permutation> frontier{g};
  std::vector<Permutation> all{g};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        for (const Permutation& y : {s * x, x * s}) {
          if (seen.insert(y).second) {
            if (seen.size() > limit) throw CeilingExceeded("double_coset_closure: more than " + std::to_string(limit) + " elements");
            next.push_back(y);
            all.push_back(y);
          }
        }
      }
    }
    frontier.swap(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

// ---------------------------------------------------------------------------
// exhaustive table

enum class TableMode { full, compact };

struct DoubleCosetClass {
  ModifiedType type;
  Permutation representative;  // representative_of_type(type, n)
  BigInt size = 0;
  std::vector<Permutation> members;  // full mode only, increasing
};

class DoubleCosetTable {
 public:
  DoubleCosetTable() = default;
  DoubleCosetTable(WreathContext ctx, TableMode mode) : ctx_(ctx), mode_(mode) {}

  const WreathContext& context() const noexcept { return ctx_; }
  TableMode mode() const noexcept { return mode_; }
  const std::vector<DoubleCosetClass>& classes() const noexcept { return classes_; }

  const DoubleCosetClass* find(const ModifiedType& m) const {
    auto it = index_.find(m.key());
    return it == index_.end() ? nullptr : &classes_[it->second];
  }

  BigInt total() const {
    BigInt t = 0;
    for (const auto& c : classes_) t += c.size;
    return t;
  }

  void add(DoubleCosetClass c) {
    index_[c.type.key()] = classes_.size();
    classes_.push_back(std::move(c));
  }

  void sort() {
    std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) { return a.type < b.type; });
    index_.clear();
    for (std::size_t i = 0; i < classes_.size(); ++i) index_[classes_[i].type.key()] = i;
  }

  // Checks the partition and coset-size identities, and in full mode that
  // every class is one H-double coset (closure from the representative).
  std::vector<std::string> verify() const {
    std::vector<std::string> problems;
    if (total() != factorial(ctx_.degree())) problems.push_back("class sizes do not sum to (kn)!");
    for (const auto& c : classes_) {
      BigInt expected = coset_size(c.type, ctx_.n, ctx_);
      if (expected != c.size) problems.push_back("size mismatch for type " + c.type.key());
      if (modified_type(c.representative, ctx_) != c.type) problems.push_back("representative has wrong type for " + c.type.key());
      if (mode_ == TableMode::full) {
        auto closure = double_coset_closure(c.representative, ctx_);
        if (closure != c.members) problems.push_back("class " + c.type.key() + " is not a single double coset");
      }
    }
    return problems;
  }

  static std::string cache_file_name(const WreathContext& ctx) {
    return "cosets_k" + std::to_string(ctx.k) + "_n" + std::to_string(ctx.n) + "_v" + std::to_string(kCosetCacheFormat) + ".jsonl";
  }

  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / cache_file_name(ctx_));
    out << nlohmann::json{{"schema_version", kCosetCacheFormat}, {"kind", "double_cosets"}, {"k", ctx_.k}, {"n", ctx_.n}}.dump() << '\n';
    for (const auto& c : classes_) {
      nlohmann::json row{{"key", c.type.key()}, {"type", c.type}, {"size", c.size.str()}, {"representative", c.representative}};
      out << row.dump() << '\n';
    }
  }

  static std::optional<DoubleCosetTable> load(const std::filesystem::path& dir, const WreathContext& ctx) {
    std::ifstream in(dir / cache_file_name(ctx));
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    auto header = nlohmann::json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("schema_version", -1) != kCosetCacheFormat || header.value("k", -1) != ctx.k ||
        header.value("n", -1) != ctx.n)
      return std::nullopt;
    DoubleCosetTable t(ctx, TableMode::compact);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto row = nlohmann::json::parse(line, nullptr, false);
      if (row.is_discarded()) return std::nullopt;
      DoubleCosetClass c;
      c.type = row.at("type").get<ModifiedType>();
      c.size = BigInt(row.at("size").get<std::string>());
      c.representative = row.at("representative").get<Permutation>();
      t.add(std::move(c));
    }
    t.sort();
    return t;
  }

 private:
  WreathContext ctx_;
  TableMode mode_ = TableMode::compact;
  std::vector<DoubleCosetClass> classes_;
  std::map<std::string, std::size_t> index_;
};

struct CosetEnumerationOptions {
  TableMode mode = TableMode::full;
  int workers = 1;
  std::optional<std::filesystem::path> cache_dir;
};

// Partitions S_{kn} by modified type.
inline DoubleCosetTable enumerate_double_cosets(const WreathContext& ctx, const CosetEnumerationOptions& opt = {}) {
  const int degree = ctx.degree();
  int ceiling = opt.mode == TableMode::full ? kFullTableCeiling : kCompactTableCeiling;
  if (degree > ceiling) {
    throw CeilingExceeded("double coset enumeration refused: kn = " + std::to_string(degree) + " exceeds the " +
                          (opt.mode == TableMode::full ? "full-mode" : "compact-mode") + " ceiling " + std::to_string(ceiling));
  }
  if (opt.mode == TableMode::compact && opt.cache_dir) {
    if (auto cached = DoubleCosetTable::load(*opt.cache_dir, ctx)) return *cached;
  }

  TypeRegistry registry(ctx.k);
  struct Chunk {
    std::map<int, BigInt> counts;
    std::map<int, std::vector<Permutation>> members;
  };
  std::vector<Chunk> chunks(static_cast<std::size_t>(degree));
  parallel_chunks(degree, opt.workers, [&](int c) {
    TypeClassifier classify(registry, ctx);
    Chunk& out = chunks[c];
    std::map<int, long long> local;
    for_each_permutation_with_first(degree, c + 1, [&](const Permutation& g) {
      int id = classify.classify(g);
      ++local[id];
      if (opt.mode == TableMode::full) out.members[id].push_back(g);
    });
    for (auto [id, cnt] : local) out.counts[id] = cnt;
  });

  std::map<int, DoubleCosetClass> merged;
  for (auto& ch : chunks) {
    for (auto& [id, cnt] : ch.counts) {
      auto& cls = merged[id];
      cls.size += cnt;
      if (opt.mode == TableMode::full) {
        auto& src = ch.members[id];
        cls.members.insert(cls.members.end(), src.begin(), src.end());
      }
    }
  }
  DoubleCosetTable table(ctx, opt.mode);
  for (auto& [id, cls] : merged) {
    cls.type = registry.at(id);
    cls.representative = representative_of_type(cls.type, ctx.n, ctx);
    table.add(std::move(cls));
  }
  table.sort();
  if (opt.cache_dir) table.save(*opt.cache_dir);
  return table;
}

}  // namespace wreath
