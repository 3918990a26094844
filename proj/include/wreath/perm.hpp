#pragma once

// Permutations of {1..kn} and the wreath subgroup H_n = S_k wr S_n that
// stabilizes the block partition Gamma_i = {k(i-1)+1, ..., ki}.
//
// Products compose right to left: (a * b)(x) = a(b(x)). Every public
// interface speaks 1-based points; storage is 0-based.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wreath {

class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int degree) {
    Permutation p;
    p.images_.resize(static_cast<std::size_t>(degree));
    std::iota(p.images_.begin(), p.images_.end(), 0);
    return p;
  }

  // One-line notation, 1-based: images[i-1] is the image of i.
  static Permutation from_images(const std::vector<int>& images) {
    Permutation p;
    p.images_.reserve(images.size());
    for (int v : images) p.images_.push_back(v - 1);
    p.validate();
    return p;
  }

  static Permutation from_images0(std::vector<int> images0) {
    Permutation p;
    p.images_ = std::move(images0);
    p.validate();
    return p;
  }

  static Permutation from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
    Permutation p = identity(degree);
    std::vector<bool> seen(static_cast<std::size_t>(degree), false);
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        int from = cycle[i];
        int to = cycle[(i + 1) % cycle.size()];
        if (from < 1 || from > degree || to < 1 || to > degree) {
          throw std::invalid_argument("cycle entry out of range 1.." + std::to_string(degree));
        }
        if (seen[from - 1]) throw std::invalid_argument("point repeated in cycle notation");
        seen[from - 1] = true;
        p.images_[from - 1] = to - 1;
      }
    }
    return p;
  }

  // Parses "(1,8,18)(4,16)" or "()" for the identity.
  static Permutation parse_cycles(int degree, std::string_view text) {
    std::vector<std::vector<int>> cycles;
    std::vector<int>* current = nullptr;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '(') {
        if (current != nullptr) throw std::invalid_argument("nested '(' in cycle notation");
        cycles.emplace_back();
        current = &cycles.back();
        ++i;
      } else if (c == ')') {
        if (current == nullptr) throw std::invalid_argument("unbalanced ')' in cycle notation");
        current = nullptr;
        ++i;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        if (current == nullptr) throw std::invalid_argument("number outside of a cycle");
        int v = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + (text[i] - '0');
          ++i;
        }
        current->push_back(v);
      } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else {
        throw std::invalid_argument(std::string("unexpected character '") + c + "' in cycle notation");
      }
    }
    if (current != nullptr) throw std::invalid_argument("unterminated cycle");
    return from_cycles(degree, cycles);
  }

  int degree() const noexcept { return static_cast<int>(images_.size()); }

  // Image of a 1-based point.
  int operator()(int point) const { return images_.at(static_cast<std::size_t>(point - 1)) + 1; }

  int image0(int p0) const noexcept { return images_[static_cast<std::size_t>(p0)]; }
  std::span<const int> images0() const noexcept { return images_; }

  std::vector<int> images() const {
    std::vector<int> out(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out[i] = images_[i] + 1;
    return out;
  }

  Permutation inverse() const {
    Permutation p;
    p.images_.resize(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i) p.images_[images_[i]] = static_cast<int>(i);
    return p;
  }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) return false;
    return true;
  }

  // Moved points, 1-based, increasing.
  std::vector<int> support() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != static_cast<int>(i)) out.push_back(static_cast<int>(i) + 1);
    return out;
  }

  std::string to_cycle_string() const {
    std::ostringstream os;
    std::vector<bool> seen(images_.size(), false);
    for (std::size_t start = 0; start < images_.size(); ++start) {
      if (seen[start] || images_[start] == static_cast<int>(start)) continue;
      os << '(';
      std::size_t p = start;
      bool first = true;
      while (!seen[p]) {
        seen[p] = true;
        if (!first) os << ',';
        os << p + 1;
        first = false;
        p = static_cast<std::size_t>(images_[p]);
      }
      os << ')';
    }
    std::string s = os.str();
    return s.empty() ? "()" : s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("composing permutations of different degree");
    Permutation p;
    p.images_.resize(b.images_.size());
    for (std::size_t i = 0; i < b.images_.size(); ++i) p.images_[i] = a.images_[b.images_[i]];
    return p;
  }

 private:
  void validate() const {
    std::vector<bool> hit(images_.size(), false);
    for (int v : images_) {
      if (v < 0 || v >= degree() || hit[v]) throw std::invalid_argument("images do not form a bijection");
      hit[v] = true;
    }
  }

  std::vector<int> images_;
};

inline Permutation compose(const Permutation& a, const Permutation& b) { return a * b; }

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : p.images0()) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

inline void to_json(nlohmann::json& j, const Permutation& p) { j = p.images(); }
inline void from_json(const nlohmann::json& j, Permutation& p) {
  p = Permutation::from_images(j.get<std::vector<int>>());
}

// Block size k >= 2 and number of blocks n >= 1.
struct WreathContext {
  int k = 2;
  int n = 1;

  WreathContext() = default;
  WreathContext(int k_, int n_) : k(k_), n(n_) {
    if (k < 2) throw std::invalid_argument("block size k must be at least 2");
    if (n < 1) throw std::invalid_argument("number of blocks n must be at least 1");
  }

  int degree() const noexcept { return k * n; }

  // 0-based first point of 1-based block i.
  int block_start0(int i) const noexcept { return k * (i - 1); }

  // 0-based block index of a 0-based point.
  int block_of0(int p0) const noexcept { return p0 / k; }

  void require_degree(const Permutation& g) const {
    if (g.degree() != degree()) {
      throw std::invalid_argument("permutation of degree " + std::to_string(g.degree()) +
                                  " used with k*n = " + std::to_string(degree()));
    }
  }
};

// ceil(r / k): the index of the block containing r.
inline int gamma_part(int r, int k) {
  if (r < 1) throw std::domain_error("gamma_part: point must be >= 1");
  if (k < 1) throw std::domain_error("gamma_part: block size must be >= 1");
  return (r - 1) / k + 1;
}

inline bool is_wreath_member(const Permutation& g, const WreathContext& ctx) {
  ctx.require_degree(g);
  for (int i = 0; i < ctx.n; ++i) {
    int target = ctx.block_of0(g.image0(i * ctx.k));
    for (int r = 1; r < ctx.k; ++r)
      if (ctx.block_of0(g.image0(i * ctx.k + r)) != target) return false;
  }
  return true;
}

// Swaps blocks i and j monotonically.
inline Permutation tau(int i, int j, const WreathContext& ctx) {
  if (i == j) throw std::invalid_argument("tau: block indices must differ");
  if (i < 1 || j < 1 || i > ctx.n || j > ctx.n) throw std::invalid_argument("tau: block index out of range");
  Permutation p = Permutation::identity(ctx.degree());
  std::vector<int> img(p.images0().begin(), p.images0().end());
  for (int r = 0; r < ctx.k; ++r) {
    img[ctx.block_start0(i) + r] = ctx.block_start0(j) + r;
    img[ctx.block_start0(j) + r] = ctx.block_start0(i) + r;
  }
  return Permutation::from_images0(std::move(img));
}

struct HSupport {
  std::vector<int> block_indices;  // 1-based, increasing
  std::vector<int> point_union;    // 1-based, increasing

  bool contains_block(int i) const {
    return std::binary_search(block_indices.begin(), block_indices.end(), i);
  }
  bool contains_point(int r) const {
    return std::binary_search(point_union.begin(), point_union.end(), r);
  }
  friend bool operator==(const HSupport&, const HSupport&) = default;
};

// Blocks that g does not carry onto a block.
inline HSupport h_support(const Permutation& g, const WreathContext& ctx) {
  ctx.require_degree(g);
  HSupport s;
  for (int i = 1; i <= ctx.n; ++i) {
    int first = ctx.block_of0(g.image0(ctx.block_start0(i)));
    bool onto_block = true;
    for (int r = 1; r < ctx.k; ++r)
      if (ctx.block_of0(g.image0(ctx.block_start0(i) + r)) != first) onto_block = false;
    if (!onto_block) {
      s.block_indices.push_back(i);
      for (int r = 1; r <= ctx.k; ++r) s.point_union.push_back(ctx.block_start0(i) + r);
    }
  }
  return s;
}

// Calls visit(h) for every h in H_n, exactly once. Order: block permutations
// in lexicographic order outermost, then the tuple of within-block
// permutations (block 1 slowest) in lexicographic order. h = y * s where s
// moves blocks monotonically and y permutes inside blocks.
//
// first_rank/last_rank select a contiguous range of block permutations
// (by lexicographic rank) so work can be chunked.
template <class Visit>
void for_each_wreath(const WreathContext& ctx, Visit&& visit, long first_rank = 0, long last_rank = -1) {
  const int k = ctx.k;
  const int n = ctx.n;
  std::vector<int> blocks(static_cast<std::size_t>(n));
  std::iota(blocks.begin(), blocks.end(), 0);
  std::vector<int> local0(static_cast<std::size_t>(k));
  std::iota(local0.begin(), local0.end(), 0);
  std::vector<std::vector<int>> local(static_cast<std::size_t>(n), local0);
  std::vector<int> img(static_cast<std::size_t>(k * n));
  long rank = 0;
  do {
    if (rank >= first_rank && (last_rank < 0 || rank < last_rank)) {
      for (auto& l : local) l = local0;
      while (true) {
        // point k*i + r  ->  block blocks[i], position local[blocks[i]][r]
        for (int i = 0; i < n; ++i) {
          int b = blocks[static_cast<std::size_t>(i)];
          for (int r = 0; r < k; ++r) img[static_cast<std::size_t>(k * i + r)] = k * b + local[static_cast<std::size_t>(b)][static_cast<std::size_t>(r)];
        }
        visit(Permutation::from_images0(img));
        int pos = n - 1;
        while (pos >= 0 && !std::next_permutation(local[static_cast<std::size_t>(pos)].begin(), local[static_cast<std::size_t>(pos)].end())) --pos;
        if (pos < 0) break;
      }
    }
    ++rank;
    if (last_rank >= 0 && rank >= last_rank) break;
  } while (std::next_permutation(blocks.begin(), blocks.end()));
}

inline std::vector<Permutation> enumerate_wreath(const WreathContext& ctx) {
  std::vector<Permutation> out;
  for_each_wreath(ctx, [&](const Permutation& h) { out.push_back(h); });
  return out;
}

// Generators of H_n: adjacent block swaps and adjacent transpositions inside each block.
inline std::vector<Permutation> wreath_generators(const WreathContext& ctx) {
  std::vector<Permutation> gens;
  for (int i = 1; i < ctx.n; ++i) gens.push_back(tau(i, i + 1, ctx));
  for (int i = 1; i <= ctx.n; ++i) {
    for (int r = 1; r < ctx.k; ++r) {
      int a = ctx.block_start0(i) + r;
      gens.push_back(Permutation::from_cycles(ctx.degree(), {{a, a + 1}}));
    }
  }
  return gens;
}

// Natural embedding S_{kn} -> S_{k(n+t)}; the new points are fixed.
inline Permutation lift(const Permutation& g, int t, const WreathContext& ctx) {
  ctx.require_degree(g);
  if (t < 0) throw std::invalid_argument("lift: t must be non-negative");
  std::vector<int> img(g.images0().begin(), g.images0().end());
  for (int p = ctx.degree(); p < ctx.k * (ctx.n + t); ++p) img.push_back(p);
  return Permutation::from_images0(std::move(img));
}

}  // namespace wreath
