#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wreath/wreath.hpp"

using namespace wreath;

namespace {

// every triple at (k, n) against the dense group-algebra convolution
void compare_with_dense(int k, int n, bool literal) {
  WreathContext ctx(k, n);
  auto part = oracle::double_coset_partition(ctx);
  std::vector<ModifiedType> type_of;
  for (const auto& cls : part.classes) type_of.push_back(modified_type(cls.front(), ctx));
  OracleEngine oe(ctx);
  CentralizerEngine reduced(k), level(k);
  int nc = static_cast<int>(part.classes.size());
  for (int l = 0; l < nc; ++l)
    for (int a = 0; a < nc; ++a)
      for (int b = 0; b < nc; ++b) {
        const auto &M = type_of[a], &N = type_of[b], &L = type_of[l];
        BigInt expect = oracle::dense_constant(part, a, b, l, ctx);
        std::string where = M.key() + " x " + N.key() + " -> " + L.key();
        EXPECT_EQ(oe.constant(M, N, L), expect) << where;
        EXPECT_EQ(reduced.constant(M, N, L, n), expect) << where;
        EXPECT_EQ(level.constant_at_level(M, N, L, n), expect) << where;
        EXPECT_EQ(level.constant_at_level(M, N, L, n, false), expect) << where;
        if (literal) {
          EXPECT_EQ(conv_constant_centralizer_literal(M, N, L, n, ctx), expect) << where;
        }
      }
}

TEST(StructureConstants, AgreeWithDenseConvolution_2_2) { compare_with_dense(2, 2, true); }
TEST(StructureConstants, AgreeWithDenseConvolution_2_3) { compare_with_dense(2, 3, true); }
TEST(StructureConstants, AgreeWithDenseConvolution_3_2) { compare_with_dense(3, 2, true); }
TEST(StructureConstants, AgreeWithDenseConvolution_2_4) { compare_with_dense(2, 4, false); }

TEST(StructureConstants, SmallestNontrivialCase) {
  WreathContext ctx(3, 2);
  auto a = parse_type_key(3, "2:1.1.2|1.2.2");
  auto e = empty_type(3);
  EXPECT_EQ(conv_constant_oracle(a, a, e, 2, ctx), 9);
  EXPECT_EQ(conv_constant_oracle(a, a, a, 2, ctx), 8);
  EXPECT_EQ(conv_constant_centralizer(a, a, e, 2, ctx), 9);
  EXPECT_EQ(conv_constant_centralizer(a, a, a, 2, ctx), 8);
  EXPECT_EQ(conv_constant_centralizer(a, a, a, 2, ctx, CentralizerMode::literal), 8);
  EXPECT_EQ(conv_constant_centralizer(a, a, a, 2, ctx, CentralizerMode::level), 8);
}

TEST(StructureConstants, ReducedEngineBeyondOracleRange) {
  // reduced engine at n = 5, 6 against level-n orbit counting
  for (int k : {2, 3}) {
    CentralizerEngine reduced(k), level(k);
    auto types = enumerate_modified_types(k, 3, 1);
    for (int n : {4, 5}) {
      for (const auto& M : types)
        for (const auto& N : types)
          for (const auto& L : enumerate_modified_types(k, 4, 2))
            EXPECT_EQ(reduced.constant(M, N, L, n), level.constant_at_level(M, N, L, n, false))
                << k << " " << n << " " << M.key() << " " << N.key() << " " << L.key();
    }
  }
}

TEST(FiberOrbits, OrbitStabilizerAgainstBruteForce) {
  for (auto [k, n] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
    WreathContext ctx(k, n);
    auto types = realizable_types(k, n);
    BigInt h = wreath_order(k, n);
    for (const auto& L : types) {
      auto g = representative_of_type(L, n, ctx);
      for (const auto& M : types)
        for (const auto& N : types)
          for (const auto& o : fiber_orbits(M, N, g, ctx)) {
            BigInt stab = oracle::brute_pair_stabilizer(o.g1, o.g2, ctx);
            EXPECT_EQ(o.stabilizer_size, stab);
            EXPECT_EQ(stabilizer_size_search(o.g1, o.g2, ctx), stab);
            EXPECT_EQ(o.orbit_size * stab, h * h);
          }
    }
  }
}

TEST(FiberOrbits, RefusesBeyondCeiling) {
  WreathContext ctx(3, 3);
  auto e = empty_type(3);
  EXPECT_THROW(fiber_orbits(e, e, Permutation::identity(9), ctx), CeilingExceeded);
}

TEST(StructureTable, CsvAndJson) {
  auto t = compute_table(2, 2, Engine::centralizer);
  auto csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "k,n,M_key,N_key,L_key,value,engine");
  EXPECT_EQ(t.entries().size(), 8u);
  auto j = t.to_json();
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["entries"].size(), 8u);
  auto a = parse_type_key(2, "2:1.2|1.2");
  EXPECT_EQ(t.at(a, a, empty_type(2), 2, Engine::centralizer), 2);
  EXPECT_THROW(t.at(a, a, a, 3, Engine::centralizer), std::out_of_range);
  EXPECT_THROW(t.insert({2, a, a, a, -1, Engine::oracle}), ConsistencyError);
}

TEST(StructureTable, EnginesAgreeAndAxiomsHold) {
  for (auto [k, n] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{2, 4}}) {
    StructureTable t(k);
    fill_table(t, n, Engine::oracle);
    fill_table(t, n, Engine::centralizer, {2, CentralizerMode::reduced});
    EXPECT_TRUE(t.disagreements().empty());
    for (auto e : {Engine::oracle, Engine::centralizer}) {
      auto r = check_algebra_axioms(t, n, e);
      EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures.front());
    }
  }
}

TEST(StructureTable, CommutativeForK2) {
  for (int n : {2, 3, 4}) {
    auto t = compute_table(2, n, Engine::centralizer);
    EXPECT_FALSE(find_noncommutative_witness(t, n, Engine::centralizer).has_value());
  }
}

TEST(StructureTable, DisagreementIsReported) {
  StructureTable t(2);
  auto e = empty_type(2);
  t.insert({2, e, e, e, 1, Engine::oracle});
  t.insert({2, e, e, e, 2, Engine::centralizer});
  EXPECT_EQ(t.disagreements().size(), 1u);
}

TEST(Errors, UnrealizableAndCeiling) {
  auto big = parse_type_key(2, "3:1.2|1.3|2.3");
  WreathContext ctx(2, 2);
  EXPECT_THROW(conv_constant_oracle(big, big, empty_type(2), 2, ctx), NotRealizable);
  EXPECT_THROW(CentralizerEngine(2).constant(big, big, empty_type(2), 2), NotRealizable);
  EXPECT_THROW(OracleEngine(WreathContext(2, 6)), CeilingExceeded);
  EXPECT_THROW(conv_constant_oracle(big, big, big, 3, ctx), std::invalid_argument);
  EXPECT_EQ(parse_engine("oracle"), Engine::oracle);
  EXPECT_THROW(parse_engine("fast"), std::invalid_argument);
}

}  // namespace
