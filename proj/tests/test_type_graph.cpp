#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "wreath/wreath.hpp"

using namespace wreath;

namespace {

const char* kExample = "(1,8,18,21,6,10,13,2,11,3,12)(4,16,19)(5,17,20)";

std::vector<std::vector<int>> sorted(std::vector<std::vector<int>> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(CosetType, WorkedExampleComponents) {
  WreathContext ctx(3, 7);
  auto g = Permutation::parse_cycles(21, kExample);
  auto t = coset_type(g, ctx);
  EXPECT_NO_THROW(validate(t));
  EXPECT_EQ(sorted(connected_components(t)), (std::vector<std::vector<int>>{{1, 2, 3}, {4, 5}, {6}, {7}}));
  EXPECT_EQ(weight(t), 3);
  auto m = modify(t);
  EXPECT_EQ(m.vertices(), 5);
  EXPECT_EQ(m.weight, 3);
  EXPECT_EQ(m.lambda, (std::vector<int>{3, 2}));
  EXPECT_EQ(lambda_string(m), "(3,2)");
  EXPECT_EQ(m.key(), "5:1.1.3|1.2.2|2.3.3|4.4.5|4.5.5");
}

TEST(CosetType, MatrixRoundTrip) {
  WreathContext ctx(3, 4);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto g = random_permutation(12, rng);
    auto a = type_matrix(g, ctx);
    EXPECT_EQ(matrix_of(type_from_matrix(3, 4, a)), a);
    for (int i = 0; i < 4; ++i) {
      int row = 0, col = 0;
      for (int u = 0; u < 4; ++u) row += a[i * 4 + u], col += a[u * 4 + i];
      EXPECT_EQ(row, 3);
      EXPECT_EQ(col, 3);
    }
  }
}

TEST(CosetType, ValidateRejectsBadTypes) {
  CosetType t{2, 2, {{1, 1}, {1, 2}}};
  EXPECT_THROW(validate(t), std::invalid_argument);
  CosetType u{2, 2, {{1, 2}}};
  EXPECT_THROW(validate(u), std::invalid_argument);
}

TEST(ModifiedType, InvariantUnderDoubleCosetMoves) {
  WreathContext ctx(2, 2);
  auto h = enumerate_wreath(ctx);
  for (const auto& g : oracle::all_permutations(4)) {
    auto m = modified_type(g, ctx);
    for (const auto& a : h)
      for (const auto& b : h) EXPECT_EQ(modified_type(a * g * b, ctx), m);
  }
}

// canonical-type equality coincides with membership in one H-double coset
TEST(ModifiedType, SeparatesDoubleCosetsExhaustively) {
  for (auto [k, n] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {2, 4}}) {
    WreathContext ctx(k, n);
    auto part = oracle::double_coset_partition(ctx);
    std::map<std::string, int> class_of_key;
    std::set<std::string> keys;
    for (const auto& [g, label] : part.label) {
      auto key = modified_type(g, ctx).key();
      auto [it, fresh] = class_of_key.emplace(key, label);
      EXPECT_EQ(it->second, label) << key;
      keys.insert(key);
    }
    EXPECT_EQ(keys.size(), part.classes.size());
    EXPECT_EQ(realizable_types(k, n).size(), part.classes.size());
  }
}

TEST(ModifiedType, IndependentOfLevel) {
  WreathContext ctx(3, 3);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    auto g = random_permutation(9, rng);
    auto m = modified_type(g, ctx);
    EXPECT_EQ(modified_type(lift(g, 2, ctx), WreathContext(3, 5)), m);
    auto lifted = coset_type(lift(g, 1, ctx), WreathContext(3, 4));
    EXPECT_EQ(lifted.blocks.back(), (Block{4, 4, 4}));
    EXPECT_EQ(weight(lifted), weight(coset_type(g, ctx)));
  }
}

TEST(ModifiedType, InverseTypeIsTranspose) {
  WreathContext ctx(3, 3);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    auto g = random_permutation(9, rng);
    EXPECT_EQ(inverse_type(modified_type(g, ctx)), modified_type(g.inverse(), ctx));
  }
}

TEST(ModifiedType, KeyAndJsonRoundTrip) {
  for (int k : {2, 3}) {
    for (const auto& m : enumerate_modified_types(k, k == 2 ? 5 : 4)) {
      EXPECT_EQ(parse_type_key(k, m.key()), m);
      nlohmann::json j = m;
      EXPECT_EQ(j.get<ModifiedType>(), m);
      EXPECT_EQ(m.weight, m.vertices() - static_cast<int>(m.lambda.size()));
    }
  }
  EXPECT_EQ(empty_type(2).key(), "0:");
  EXPECT_EQ(parse_type_key(3, "0:"), empty_type(3));
}

TEST(ModifiedType, RejectsIsolatedVertices) {
  EXPECT_THROW(make_modified_type(2, 3, {{1, 2}, {1, 2}, {3, 3}}), std::invalid_argument);
  EXPECT_THROW(parse_type_key(2, "1:1.1"), std::invalid_argument);
  EXPECT_THROW(parse_type_key(2, "2:1.2"), std::invalid_argument);
}

TEST(Embed, RefusesUnrealizableLevels) {
  auto m = parse_type_key(2, "3:1.2|1.3|2.3");
  EXPECT_THROW(embed(m, 2), NotRealizable);
  auto t = embed(m, 5);
  EXPECT_EQ(t.vertex_count, 5);
  EXPECT_EQ(modify(t), m);
  EXPECT_THROW(representative_of_type(m, 2, WreathContext(2, 2)), NotRealizable);
}

// the number of types with at most V vertices equals the number of double
// cosets at n = V; for k=2 these are the partition numbers
TEST(Enumeration, CountsMatchDoubleCosetCounts) {
  std::vector<int> partitions{1, 1, 2, 3, 5, 7, 11, 15};
  for (int v = 0; v <= 7; ++v) EXPECT_EQ(enumerate_modified_types(2, v).size(), static_cast<std::size_t>(partitions[v])) << v;
  for (auto [k, n] : {std::pair{2, 4}, std::pair{3, 3}}) {
    WreathContext ctx(k, n);
    auto part = oracle::double_coset_partition(ctx);
    EXPECT_EQ(enumerate_modified_types(k, n).size(), part.classes.size());
  }
}

TEST(Enumeration, WeightBoundAndOrdering) {
  auto all = enumerate_modified_types(3, 5);
  auto light = enumerate_modified_types(3, 5, 1);
  for (const auto& m : light) EXPECT_LE(m.weight, 1);
  EXPECT_EQ(light.size(), static_cast<std::size_t>(std::count_if(all.begin(), all.end(), [](const auto& m) { return m.weight <= 1; })));
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  std::set<std::string> keys;
  for (const auto& m : all) keys.insert(m.key());
  EXPECT_EQ(keys.size(), all.size());
  auto w1 = enumerate_modified_types(3, 2, 1);
  ASSERT_EQ(w1.size(), 2u);
  EXPECT_EQ(w1[1].key(), "2:1.1.2|1.2.2");
}

TEST(RepresentativeOfType, RoundTripMinimalClosed) {
  for (auto [k, maxv] : {std::pair{2, 5}, std::pair{3, 4}}) {
    for (const auto& m : enumerate_modified_types(k, maxv)) {
      for (int n = std::max(1, m.vertices()); n <= m.vertices() + 1; ++n) {
        WreathContext ctx(k, n);
        auto g = representative_of_type(m, n, ctx);
        EXPECT_EQ(modified_type(g, ctx), m);
        EXPECT_EQ(canonicalize(coset_type(g, ctx)), canonicalize(embed(m, n)));
        EXPECT_TRUE(is_minimal(g, ctx)) << m.key();
        EXPECT_TRUE(has_closed_components(g, ctx)) << m.key();
      }
    }
  }
}

TEST(TypeClassifier, AgreesWithModifiedType) {
  WreathContext ctx(3, 3);
  TypeRegistry reg(3);
  TypeClassifier cls(reg, ctx);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    auto a = random_permutation(9, rng), b = random_permutation(9, rng);
    EXPECT_EQ(reg.at(cls.classify(a)), modified_type(a, ctx));
    EXPECT_EQ(reg.at(cls.classify_quotient(a, b)), modified_type(a * b, ctx));
  }
  EXPECT_LE(reg.size(), 5);
}

TEST(TypeRegistry, ConcurrentInterning) {
  TypeRegistry reg(2);
  auto types = enumerate_modified_types(2, 6);
  parallel_chunks(8, 4, [&](int) {
    for (const auto& m : types) reg.intern(m);
  });
  EXPECT_EQ(reg.size(), static_cast<int>(types.size()));
  for (const auto& m : types) EXPECT_EQ(reg.at(*reg.find(m)), m);
}

}  // namespace
