#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace wreath {

class UnionFind {
 public:
  explicit UnionFind(int size = 0) : parent_(static_cast<std::size_t>(size)), rank_size_(static_cast<std::size_t>(size), 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int size() const noexcept { return static_cast<int>(parent_.size()); }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_size_[a] < rank_size_[b]) std::swap(a, b);
    parent_[b] = a;
    rank_size_[a] += rank_size_[b];
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }
  int class_size(int x) { return rank_size_[find(x)]; }

  // Classes ordered by smallest member; members increasing.
  std::vector<std::vector<int>> classes() {
    std::vector<int> slot(parent_.size(), -1);
    std::vector<std::vector<int>> out;
    for (int x = 0; x < size(); ++x) {
      int r = find(x);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[slot[r]].push_back(x);
    }
    return out;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_size_;
};

}  // namespace wreath
