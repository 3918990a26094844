#pragma once

// Brute-force references used only by the tests. None of them go through
// coset types, canonical forms or the centralizer engine.

#include <map>
#include <unordered_map>
#include <set>
#include <vector>

#include "wreath/wreath.hpp"

namespace oracle {

using wreath::BigInt;
using wreath::Permutation;
using wreath::WreathContext;

inline std::vector<Permutation> all_permutations(int degree) {
  std::vector<Permutation> out;
  wreath::for_each_permutation(degree, [&](const Permutation& p) { out.push_back(p); });
  return out;
}

// H straight from the definition: permutations preserving the partners relation.
inline std::vector<Permutation> wreath_by_filter(const WreathContext& ctx) {
  std::vector<Permutation> out;
  wreath::for_each_permutation(ctx.degree(), [&](const Permutation& p) {
    for (int r = 1; r <= ctx.degree(); ++r)
      for (int s = 1; s <= ctx.degree(); ++s)
        if ((r - 1) / ctx.k == (s - 1) / ctx.k && (p(r) - 1) / ctx.k != (p(s) - 1) / ctx.k) return;
    out.push_back(p);
  });
  return out;
}

// Double-coset label of every permutation, by breadth-first closure under
// generators of H on both sides.
struct DoubleCosetPartition {
  std::unordered_map<Permutation, int, wreath::PermutationHash> label;
  std::vector<std::vector<Permutation>> classes;

  int of(const Permutation& g) const { return label.at(g); }
};

inline DoubleCosetPartition double_coset_partition(const WreathContext& ctx) {
  auto gens = wreath::wreath_generators(ctx);
  DoubleCosetPartition part;
  wreath::for_each_permutation(ctx.degree(), [&](const Permutation& g) {
    if (part.label.count(g)) return;
    int id = static_cast<int>(part.classes.size());
    part.classes.emplace_back();
    std::vector<Permutation> frontier{g};
    part.label.emplace(g, id);
    while (!frontier.empty()) {
      Permutation x = frontier.back();
      frontier.pop_back();
      part.classes[id].push_back(x);
      for (const auto& y : gens)
        for (const Permutation& z : {y * x, x * y}) {
          if (part.label.emplace(z, id).second) frontier.push_back(z);
        }
    }
  });
  return part;
}

// Dense convolution in the group algebra: c = #{(x, y) in D_M x D_N : x y = z} / |H|
// for a fixed z in D_L, with double cosets given by the partition.
inline BigInt dense_constant(const DoubleCosetPartition& part, int cm, int cn, int cl, const WreathContext& ctx) {
  const Permutation& z = part.classes[cl].front();
  long long count = 0;
  for (const auto& y : part.classes[cn]) {
    Permutation x = z * y.inverse();
    if (part.of(x) == cm) ++count;
  }
  return wreath::exact_div(count, wreath::wreath_order(ctx.k, ctx.n), "dense oracle");
}

// |{(h1, h2) in H x H : h1 g1 h2^-1 = g1, h1 g1 g2 h1^-1 = g1 g2}| by direct filtering.
inline BigInt brute_pair_stabilizer(const Permutation& g1, const Permutation& g2, const WreathContext& ctx) {
  auto h = wreath_by_filter(ctx);
  Permutation prod = g1 * g2;
  long long count = 0;
  for (const auto& a : h) {
    if (a * prod * a.inverse() != prod) continue;
    // a g1 H = g1 H
    Permutation t = g1.inverse() * a * g1;
    if (wreath::is_wreath_member(t, ctx)) ++count;
  }
  return count;
}

}  // namespace oracle
