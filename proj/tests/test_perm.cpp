#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "wreath/perm.hpp"

using namespace wreath;

namespace {

const char* kExample = "(1,8,18,21,6,10,13,2,11,3,12)(4,16,19)(5,17,20)";

TEST(Permutation, CycleParsingAndPrinting) {
  auto g = Permutation::parse_cycles(21, kExample);
  EXPECT_EQ(g.degree(), 21);
  EXPECT_EQ(g(1), 8);
  EXPECT_EQ(g(12), 1);
  EXPECT_EQ(g(7), 7);
  EXPECT_EQ(g.to_cycle_string(), kExample);
  EXPECT_EQ(Permutation::identity(4).to_cycle_string(), "()");
  EXPECT_TRUE(Permutation::parse_cycles(4, "()").is_identity());
}

TEST(Permutation, RejectsMalformedInput) {
  EXPECT_THROW(Permutation::parse_cycles(4, "(1,5)"), std::invalid_argument);
  EXPECT_THROW(Permutation::parse_cycles(4, "(1,2)(2,3)"), std::invalid_argument);
  EXPECT_THROW(Permutation::parse_cycles(4, "(1,2"), std::invalid_argument);
  EXPECT_THROW(Permutation::parse_cycles(4, "1,2)"), std::invalid_argument);
  EXPECT_THROW(Permutation::from_images({1, 1, 2}), std::invalid_argument);
}

TEST(Permutation, ComposesRightToLeft) {
  auto a = Permutation::parse_cycles(3, "(1,2)");
  auto b = Permutation::parse_cycles(3, "(2,3)");
  auto ab = a * b;
  for (int x = 1; x <= 3; ++x) EXPECT_EQ(ab(x), a(b(x)));
  EXPECT_EQ(ab(2), 3);
  EXPECT_EQ(compose(a, b), ab);
}

TEST(Permutation, InverseAndJson) {
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> img(9);
    std::iota(img.begin(), img.end(), 1);
    std::shuffle(img.begin(), img.end(), rng);
    auto g = Permutation::from_images(img);
    EXPECT_TRUE((g * g.inverse()).is_identity());
    nlohmann::json j = g;
    EXPECT_EQ(j.get<Permutation>(), g);
    EXPECT_EQ(Permutation::parse_cycles(9, g.to_cycle_string()), g);
  }
}

TEST(GammaPart, WorkedExample) {
  auto g = Permutation::parse_cycles(21, kExample);
  EXPECT_EQ(gamma_part(1, 3), 1);
  EXPECT_EQ(gamma_part(2, 3), 1);
  EXPECT_EQ(gamma_part(g(1), 3), 3);
  EXPECT_EQ(g(1), 8);
  EXPECT_EQ(gamma_part(g(2), 3), 4);
  EXPECT_EQ(g(2), 11);
  EXPECT_EQ(gamma_part(3, 3), 1);
  EXPECT_EQ(gamma_part(4, 3), 2);
  EXPECT_THROW(gamma_part(0, 3), std::domain_error);
}

TEST(WreathContext, Validates) {
  EXPECT_THROW(WreathContext(1, 3), std::invalid_argument);
  EXPECT_THROW(WreathContext(2, 0), std::invalid_argument);
  WreathContext ctx(2, 2);
  EXPECT_THROW(is_wreath_member(Permutation::identity(5), ctx), std::invalid_argument);
}

TEST(WreathMembership, ExampleAndTau) {
  WreathContext ctx(3, 7);
  EXPECT_FALSE(is_wreath_member(Permutation::parse_cycles(21, kExample), ctx));
  EXPECT_TRUE(is_wreath_member(Permutation::identity(21), ctx));
  EXPECT_TRUE(is_wreath_member(tau(1, 2, ctx), ctx));
}

TEST(WreathMembership, AgreesWithDefinitionOnS6) {
  for (auto [k, n] : {std::pair{2, 3}, std::pair{3, 2}}) {
    WreathContext ctx(k, n);
    auto h = oracle::wreath_by_filter(ctx);
    std::set<std::vector<int>> hs;
    for (const auto& x : h) hs.insert(x.images());
    for (const auto& g : oracle::all_permutations(ctx.degree())) EXPECT_EQ(is_wreath_member(g, ctx), hs.count(g.images()) == 1);
  }
}

TEST(Tau, SwapsBlocksMonotonically) {
  WreathContext ctx(2, 2);
  EXPECT_EQ(tau(1, 2, ctx), Permutation::parse_cycles(4, "(1,3)(2,4)"));
  WreathContext c3(3, 4);
  auto t = tau(2, 4, c3);
  EXPECT_TRUE((t * t).is_identity());
  EXPECT_EQ(t(4), 10);
  EXPECT_EQ(t(6), 12);
  EXPECT_THROW(tau(2, 2, c3), std::invalid_argument);
  EXPECT_THROW(tau(1, 5, c3), std::invalid_argument);
}

TEST(HSupport, WorkedExample) {
  WreathContext ctx(3, 7);
  auto s = h_support(Permutation::parse_cycles(21, kExample), ctx);
  EXPECT_EQ(s.block_indices, (std::vector<int>{1, 2, 3, 4, 5}));
  std::vector<int> pts(15);
  std::iota(pts.begin(), pts.end(), 1);
  EXPECT_EQ(s.point_union, pts);
  EXPECT_TRUE(h_support(Permutation::identity(21), ctx).block_indices.empty());
  EXPECT_TRUE(h_support(tau(1, 2, ctx), ctx).block_indices.empty());
}

TEST(EnumerateWreath, Cardinality) {
  for (auto [k, n] : {std::pair{2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3}}) {
    WreathContext ctx(k, n);
    auto h = enumerate_wreath(ctx);
    EXPECT_EQ(BigInt(h.size()), wreath_order(k, n)) << k << "," << n;
    std::set<std::vector<int>> distinct;
    for (const auto& x : h) {
      distinct.insert(x.images());
      EXPECT_TRUE(is_wreath_member(x, ctx));
    }
    EXPECT_EQ(distinct.size(), h.size());
  }
  EXPECT_EQ(enumerate_wreath(WreathContext(2, 2)).size(), 8u);
  EXPECT_EQ(enumerate_wreath(WreathContext(3, 2)).size(), 72u);
}

TEST(EnumerateWreath, RankRangesPartitionTheGroup) {
  WreathContext ctx(2, 3);
  std::size_t total = 0;
  for (long r = 0; r < 6; ++r) for_each_wreath(ctx, [&](const Permutation&) { ++total; }, r, r + 1);
  EXPECT_EQ(total, 48u);
}

TEST(EnumerateWreath, SubgroupClosedUnderProductAndInverse) {
  WreathContext ctx(3, 3);
  auto h = enumerate_wreath(ctx);
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, h.size() - 1);
  for (int t = 0; t < 500; ++t) {
    const auto& a = h[pick(rng)];
    const auto& b = h[pick(rng)];
    EXPECT_TRUE(is_wreath_member(a * b, ctx));
    EXPECT_TRUE(is_wreath_member(a.inverse(), ctx));
  }
}

TEST(WreathGenerators, GenerateH) {
  for (auto [k, n] : {std::pair{2, 3}, std::pair{3, 2}}) {
    WreathContext ctx(k, n);
    auto gens = wreath_generators(ctx);
    std::set<std::vector<int>> seen{Permutation::identity(ctx.degree()).images()};
    std::vector<Permutation> frontier{Permutation::identity(ctx.degree())};
    while (!frontier.empty()) {
      auto x = frontier.back();
      frontier.pop_back();
      for (const auto& s : gens)
        if (seen.insert((s * x).images()).second) frontier.push_back(s * x);
    }
    EXPECT_EQ(BigInt(seen.size()), wreath_order(k, n));
  }
}

TEST(Lift, FixesNewPoints) {
  WreathContext ctx(3, 2);
  auto g = Permutation::parse_cycles(6, "(1,4)(2,6)");
  auto l = lift(g, 2, ctx);
  EXPECT_EQ(l.degree(), 12);
  for (int p = 7; p <= 12; ++p) EXPECT_EQ(l(p), p);
  EXPECT_EQ(l(1), 4);
  EXPECT_TRUE(lift(Permutation::identity(6), 3, ctx).is_identity());
  EXPECT_TRUE(is_wreath_member(lift(tau(1, 2, ctx), 1, ctx), WreathContext(3, 3)));
  EXPECT_THROW(lift(g, -1, ctx), std::invalid_argument);
}

}  // namespace
