#pragma once

// Backtracking search for subgroups of Sym(D) given by constraints of the
// form "maps the parts of a partition onto parts" and "commutes with c".
// Orders come from a base and the orbit of each base point under its
// pointwise stabilizer; every orbit point is witnessed by an actual element,
// and the witnesses form a strong generating set.

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wreath/numeric.hpp"
#include "wreath/perm.hpp"

namespace wreath {

struct GroupConstraints {
  int degree = 0;
  std::vector<std::vector<int>> partitions;  // part label of each point
  std::vector<std::vector<int>> commute;     // images of permutations to commute with
};

struct GroupResult {
  BigInt order = 1;
  std::vector<int> base;
  std::vector<int> orbit_sizes;
  std::vector<std::vector<int>> generators;  // images on 0..degree-1
};

class SubgroupSearch {
 public:
  explicit SubgroupSearch(GroupConstraints c) : c_(std::move(c)) {
    const int d = c_.degree;
    for (const auto& cm : c_.commute) {
      std::vector<int> inv(static_cast<std::size_t>(d));
      for (int p = 0; p < d; ++p) inv[cm[p]] = p;
      inverses_.push_back(std::move(inv));
    }
    for (const auto& part : c_.partitions) {
      int parts = part.empty() ? 0 : *std::max_element(part.begin(), part.end()) + 1;
      std::vector<int> sizes(static_cast<std::size_t>(parts), 0);
      for (int l : part) ++sizes[l];
      part_sizes_.push_back(std::move(sizes));
    }
    reset();
  }

  int degree() const noexcept { return c_.degree; }

  // Some element satisfying all constraints and the forced assignments.
  std::optional<std::vector<int>> find(const std::vector<std::pair<int, int>>& forced) {
    reset();
    for (auto [p, q] : forced)
      if (!assign_and_propagate(p, q)) return std::nullopt;
    std::optional<std::vector<int>> found;
    dfs([&](const std::vector<int>& img) {
      found = img;
      return false;
    });
    return found;
  }

  // Visits every element; visit returns false to stop.
  void for_each_element(const std::function<bool(const std::vector<int>&)>& visit) {
    reset();
    dfs(visit);
  }

  GroupResult order() {
    const int d = c_.degree;
    GroupResult r;
    r.base.resize(static_cast<std::size_t>(d));
    for (int p = 0; p < d; ++p) r.base[p] = p;
    r.orbit_sizes.assign(static_cast<std::size_t>(d), 1);
    std::vector<std::vector<int>> gens;  // all fix base[0..i-1] when used at level i
    for (int i = d - 1; i >= 0; --i) {
      std::vector<char> in_orbit(static_cast<std::size_t>(d), 0), bad(static_cast<std::size_t>(d), 0);
      auto close = [&](std::vector<char>& mark, int start) {
        std::vector<int> stack{start};
        mark[start] = 1;
        while (!stack.empty()) {
          int x = stack.back();
          stack.pop_back();
          for (const auto& g : gens) {
            int y = g[x];
            if (!mark[y]) {
              mark[y] = 1;
              stack.push_back(y);
            }
          }
        }
      };
      close(in_orbit, i);
      for (int q = 0; q < d; ++q) {
        if (in_orbit[q] || bad[q]) continue;
        std::vector<std::pair<int, int>> forced;
        for (int j = 0; j < i; ++j) forced.emplace_back(j, j);
        forced.emplace_back(i, q);
        auto el = find(forced);
        if (el) {
          gens.push_back(std::move(*el));
          std::fill(in_orbit.begin(), in_orbit.end(), 0);
          close(in_orbit, i);
        } else {
          close(bad, q);
        }
      }
      int size = static_cast<int>(std::count(in_orbit.begin(), in_orbit.end(), 1));
      r.orbit_sizes[i] = size;
      r.order *= size;
    }
    r.generators = std::move(gens);
    return r;
  }

 private:
  void reset() {
    const int d = c_.degree;
    img_.assign(static_cast<std::size_t>(d), -1);
    pre_.assign(static_cast<std::size_t>(d), -1);
    pmap_.clear();
    pinv_.clear();
    for (const auto& sizes : part_sizes_) {
      pmap_.emplace_back(sizes.size(), -1);
      pinv_.emplace_back(sizes.size(), -1);
    }
    trail_.clear();
  }

  // trail entries: kind 0 = point, kind j+1 = part map of partition j
  struct Undo {
    int kind;
    int from;
    int to;
  };

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      Undo u = trail_.back();
      trail_.pop_back();
      if (u.kind == 0) {
        img_[u.from] = -1;
        pre_[u.to] = -1;
      } else {
        pmap_[u.kind - 1][u.from] = -1;
        pinv_[u.kind - 1][u.to] = -1;
      }
    }
  }

  bool compatible(int p, int q) const {
    if (img_[p] != -1) return img_[p] == q;
    if (pre_[q] != -1) return false;
    for (std::size_t j = 0; j < c_.partitions.size(); ++j) {
      int a = c_.partitions[j][p], b = c_.partitions[j][q];
      if (pmap_[j][a] != -1) {
        if (pmap_[j][a] != b) return false;
      } else if (pinv_[j][b] != -1 || part_sizes_[j][a] != part_sizes_[j][b]) {
        return false;
      }
    }
    return true;
  }

  bool assign_and_propagate(int p0, int q0) {
    std::vector<std::pair<int, int>> queue{{p0, q0}};
    while (!queue.empty()) {
      auto [p, q] = queue.back();
      queue.pop_back();
      if (img_[p] == q) continue;
      if (!compatible(p, q)) return false;
      for (std::size_t j = 0; j < c_.partitions.size(); ++j) {
        int a = c_.partitions[j][p], b = c_.partitions[j][q];
        if (pmap_[j][a] == -1) {
          pmap_[j][a] = b;
          pinv_[j][b] = a;
          trail_.push_back({static_cast<int>(j) + 1, a, b});
        }
      }
      img_[p] = q;
      pre_[q] = p;
      trail_.push_back({0, p, q});
      for (std::size_t t = 0; t < c_.commute.size(); ++t) {
        queue.emplace_back(c_.commute[t][p], c_.commute[t][q]);
        queue.emplace_back(inverses_[t][p], inverses_[t][q]);
      }
    }
    return true;
  }

  // returns false once visit asked to stop
  bool dfs(const std::function<bool(const std::vector<int>&)>& visit) {
    int p = 0;
    while (p < c_.degree && img_[p] != -1) ++p;
    if (p == c_.degree) return visit(img_);
    for (int q = 0; q < c_.degree; ++q) {
      if (!compatible(p, q)) continue;
      std::size_t mark = trail_.size();
      if (assign_and_propagate(p, q)) {
        if (!dfs(visit)) {
          undo_to(mark);
          return false;
        }
      }
      undo_to(mark);
    }
    return true;
  }

  GroupConstraints c_;
  std::vector<std::vector<int>> inverses_;
  std::vector<std::vector<int>> part_sizes_;
  std::vector<int> img_, pre_;
  std::vector<std::vector<int>> pmap_, pinv_;
  std::vector<Undo> trail_;
};

// ---------------------------------------------------------------------------
// wreath-flavoured front end: the subgroup H_B of H_n acting on the parts in
// a block set B (identity elsewhere), cut down by commuting with given
// permutations and by preserving the partitions g(Gamma) for given g.

class WreathSubgroup {
 public:
  WreathSubgroup(const WreathContext& ctx, std::vector<int> blocks) : ctx_(ctx), blocks_(std::move(blocks)) {
    std::sort(blocks_.begin(), blocks_.end());
    local_.assign(static_cast<std::size_t>(ctx.degree()), -1);
    for (int b : blocks_)
      for (int r = 0; r < ctx.k; ++r) {
        local_[ctx.block_start0(b) + r] = static_cast<int>(points_.size());
        points_.push_back(ctx.block_start0(b) + r);
      }
    std::vector<int> gamma;
    for (int p : points_) gamma.push_back(ctx.block_of0(p));
    constraints_.degree = static_cast<int>(points_.size());
    constraints_.partitions.push_back(relabel(gamma));
  }

  WreathSubgroup& commuting_with(const Permutation& g) {
    constraints_.commute.push_back(restrict(g, "commuting_with"));
    return *this;
  }

  // keep only elements preserving the partition {g(Gamma_i)}
  WreathSubgroup& preserving_image_of(const Permutation& g) {
    auto r = restrict(g, "preserving_image_of");
    std::vector<int> label(points_.size());
    for (std::size_t s = 0; s < points_.size(); ++s) label[r[s]] = ctx_.block_of0(points_[s]);
    constraints_.partitions.push_back(relabel(label));
    return *this;
  }

  GroupResult result() const {
    SubgroupSearch search(constraints_);
    GroupResult r = search.order();
    for (auto& b : r.base) b = points_[b];
    for (auto& gen : r.generators) gen = lift_images(gen);
    return r;
  }

  BigInt order() const { return result().order; }

  std::vector<Permutation> generators() const {
    std::vector<Permutation> out;
    for (auto& g : result().generators) out.push_back(Permutation::from_images0(g));
    return out;
  }

  std::vector<Permutation> elements() const {
    SubgroupSearch search(constraints_);
    std::vector<Permutation> out;
    search.for_each_element([&](const std::vector<int>& img) {
      out.push_back(Permutation::from_images0(lift_images(img)));
      return true;
    });
    return out;
  }

 private:
  static std::vector<int> relabel(const std::vector<int>& labels) {
    std::vector<int> seen;
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto it = std::find(seen.begin(), seen.end(), labels[i]);
      if (it == seen.end()) {
        out[i] = static_cast<int>(seen.size());
        seen.push_back(labels[i]);
      } else {
        out[i] = static_cast<int>(it - seen.begin());
      }
    }
    return out;
  }

  std::vector<int> restrict(const Permutation& g, const char* what) const {
    ctx_.require_degree(g);
    std::vector<int> r(points_.size());
    for (std::size_t s = 0; s < points_.size(); ++s) {
      int l = local_[g.image0(points_[s])];
      if (l < 0) throw std::invalid_argument(std::string(what) + ": permutation does not preserve the block set");
      r[s] = l;
    }
    return r;
  }

  std::vector<int> lift_images(const std::vector<int>& local_img) const {
    std::vector<int> full(static_cast<std::size_t>(ctx_.degree()));
    for (int p = 0; p < ctx_.degree(); ++p) full[p] = p;
    for (std::size_t s = 0; s < points_.size(); ++s) full[points_[s]] = points_[local_img[s]];
    return full;
  }

  WreathContext ctx_;
  std::vector<int> blocks_;
  std::vector<int> points_;
  std::vector<int> local_;
  GroupConstraints constraints_;
};

inline std::vector<int> all_blocks(const WreathContext& ctx) {
  std::vector<int> b(static_cast<std::size_t>(ctx.n));
  for (int i = 0; i < ctx.n; ++i) b[i] = i + 1;
  return b;
}

// |C_{H_n}(g)|
inline BigInt centralizer_order(const Permutation& g, const WreathContext& ctx) {
  return WreathSubgroup(ctx, all_blocks(ctx)).commuting_with(g).order();
}

}  // namespace wreath
