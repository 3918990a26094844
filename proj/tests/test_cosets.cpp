#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "wreath/wreath.hpp"

using namespace wreath;

namespace {

const char* kExample = "(1,8,18,21,6,10,13,2,11,3,12)(4,16,19)(5,17,20)";

TEST(IsMinimal, Examples) {
  WreathContext ctx(3, 7);
  EXPECT_TRUE(is_minimal(Permutation::identity(21), ctx));
  EXPECT_TRUE(is_minimal(Permutation::parse_cycles(21, "(1,8,6,10,13,2,11,3,12)"), ctx));
  EXPECT_FALSE(is_minimal(tau(1, 2, ctx), ctx));
  EXPECT_FALSE(is_minimal(Permutation::parse_cycles(21, "(1,2)"), ctx));
  EXPECT_FALSE(is_minimal(Permutation::parse_cycles(21, kExample), ctx));
}

TEST(MinimalRepresentative, WorkedExample) {
  WreathContext ctx(3, 7);
  auto g = Permutation::parse_cycles(21, kExample);
  auto nf = minimal_representative_with_factor(g, ctx);
  EXPECT_EQ(nf.element.to_cycle_string(), "(1,8,6,10,13,2,11,3,12)");
  EXPECT_TRUE(is_wreath_member(nf.left, ctx));
  EXPECT_EQ(nf.left * g, nf.element);
  EXPECT_EQ(minimal_representative(g, ctx), nf.element);
}

TEST(MinimalRepresentative, ExhaustiveOnS6) {
  for (auto [k, n] : {std::pair{2, 3}, std::pair{3, 2}}) {
    WreathContext ctx(k, n);
    auto part = oracle::double_coset_partition(ctx);
    for (const auto& g : oracle::all_permutations(ctx.degree())) {
      auto nf = minimal_representative_with_factor(g, ctx);
      const auto& m = nf.element;
      ASSERT_TRUE(is_minimal(m, ctx)) << g.to_cycle_string();
      EXPECT_TRUE(is_wreath_member(nf.left, ctx));
      EXPECT_EQ(nf.left * g, m);
      EXPECT_EQ(part.of(m), part.of(g));
      auto again = minimal_representative(m, ctx);
      EXPECT_EQ(again, m);
      // support(g) inside [g]_H and [g]_H = [g^-1]_H for minimal g
      auto sp = h_support(m, ctx);
      for (int p : m.support()) EXPECT_TRUE(sp.contains_point(p));
      EXPECT_EQ(sp.block_indices, h_support(m.inverse(), ctx).block_indices);
      EXPECT_TRUE(is_minimal(m.inverse(), ctx));
    }
  }
}

TEST(MinimalRepresentative, WreathElementsGoToIdentity) {
  WreathContext ctx(3, 3);
  for (const auto& h : enumerate_wreath(ctx)) EXPECT_TRUE(minimal_representative(h, ctx).is_identity());
}

TEST(IsMinimal, StableUnderConjugationByH) {
  WreathContext ctx(2, 3);
  auto h = enumerate_wreath(ctx);
  for (const auto& g : oracle::all_permutations(6)) {
    if (!is_minimal(g, ctx)) continue;
    for (const auto& x : h) EXPECT_TRUE(is_minimal(x * g * x.inverse(), ctx));
  }
}

TEST(ClosedComponents, ExhaustiveOnS6) {
  for (auto [k, n] : {std::pair{2, 3}, std::pair{3, 2}}) {
    WreathContext ctx(k, n);
    for (const auto& g : oracle::all_permutations(ctx.degree())) {
      auto nf = closed_components_form_with_factor(g, ctx);
      const auto& c = nf.element;
      EXPECT_TRUE(is_minimal(c, ctx));
      EXPECT_TRUE(is_wreath_member(nf.left, ctx));
      EXPECT_EQ(nf.left * g, c);
      EXPECT_EQ(modified_type(c, ctx), modified_type(g, ctx));
      // the union of the parts of each component is mapped onto itself
      for (const auto& comp : connected_components(coset_type(c, ctx))) {
        std::set<int> pts;
        for (int u : comp)
          for (int r = 1; r <= k; ++r) pts.insert(k * (u - 1) + r);
        for (int p : pts) EXPECT_TRUE(pts.count(c(p))) << c.to_cycle_string();
      }
      EXPECT_TRUE(has_closed_components(c, ctx));
    }
  }
  WreathContext ctx(3, 4);
  EXPECT_TRUE(closed_components_form(Permutation::identity(12), ctx).is_identity());
}

TEST(ClosedComponents, WorkedExample) {
  WreathContext ctx(3, 7);
  auto c = closed_components_form(Permutation::parse_cycles(21, kExample), ctx);
  EXPECT_TRUE(has_closed_components(c, ctx));
  EXPECT_TRUE(is_minimal(c, ctx));
  EXPECT_EQ(modified_type(c, ctx).key(), "5:1.1.3|1.2.2|2.3.3|4.4.5|4.5.5");
}

TEST(CosetSize, AgreesWithBruteForce) {
  for (auto [k, n] : {std::pair{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
    WreathContext ctx(k, n);
    auto part = oracle::double_coset_partition(ctx);
    BigInt sum = 0;
    for (const auto& m : realizable_types(k, n)) {
      auto g = representative_of_type(m, n, ctx);
      BigInt size = coset_size(m, n, ctx);
      EXPECT_EQ(size, BigInt(part.classes[part.of(g)].size())) << m.key();
      sum += size;
    }
    EXPECT_EQ(sum, factorial(k * n));
    EXPECT_EQ(coset_size(empty_type(k), n, ctx), wreath_order(k, n));
  }
}

TEST(DoubleCosetTable, FullModeVerifies) {
  for (auto [k, n] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    WreathContext ctx(k, n);
    auto table = enumerate_double_cosets(ctx);
    EXPECT_TRUE(table.verify().empty());
    EXPECT_EQ(table.total(), factorial(k * n));
    EXPECT_EQ(table.classes().size(), realizable_types(k, n).size());
  }
  auto t = enumerate_double_cosets(WreathContext(2, 2));
  EXPECT_EQ(t.find(empty_type(2))->size, 8);
  EXPECT_EQ(enumerate_double_cosets(WreathContext(2, 1)).classes().size(), 1u);
}

TEST(DoubleCosetTable, InverseClosure) {
  WreathContext ctx(3, 2);
  auto table = enumerate_double_cosets(ctx);
  for (const auto& c : table.classes()) {
    const auto* inv = table.find(inverse_type(c.type));
    ASSERT_NE(inv, nullptr);
    EXPECT_EQ(inv->size, c.size);
    for (const auto& g : c.members)
      if (is_minimal(g, ctx)) {
        EXPECT_EQ(modified_type(g.inverse(), ctx), inv->type);
      }
  }
}

TEST(DoubleCosetTable, CacheRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "wreath_coset_cache_test";
  std::filesystem::remove_all(dir);
  WreathContext ctx(2, 3);
  CosetEnumerationOptions opt;
  opt.mode = TableMode::compact;
  opt.cache_dir = dir;
  opt.workers = 2;
  auto first = enumerate_double_cosets(ctx, opt);
  ASSERT_TRUE(std::filesystem::exists(dir / DoubleCosetTable::cache_file_name(ctx)));
  auto loaded = DoubleCosetTable::load(dir, ctx);
  ASSERT_TRUE(loaded.has_value());
  ASSERT_EQ(loaded->classes().size(), first.classes().size());
  for (std::size_t i = 0; i < first.classes().size(); ++i) {
    EXPECT_EQ(loaded->classes()[i].type, first.classes()[i].type);
    EXPECT_EQ(loaded->classes()[i].size, first.classes()[i].size);
    EXPECT_EQ(loaded->classes()[i].representative, first.classes()[i].representative);
  }
  EXPECT_TRUE(loaded->verify().empty());
  EXPECT_FALSE(DoubleCosetTable::load(dir, WreathContext(2, 2)).has_value());
  std::filesystem::remove_all(dir);
}

TEST(DoubleCosetTable, RefusesBeyondCeiling) {
  EXPECT_THROW(enumerate_double_cosets(WreathContext(3, 3)), CeilingExceeded);
  CosetEnumerationOptions opt;
  opt.mode = TableMode::compact;
  EXPECT_THROW(enumerate_double_cosets(WreathContext(2, 6), opt), CeilingExceeded);
}

}  // namespace
