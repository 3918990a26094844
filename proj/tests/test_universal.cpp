#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wreath/wreath.hpp"

using namespace wreath;

namespace {

TopDegreeConstants make_constants(int k) { return TopDegreeConstants(k, reduced_sampler(std::make_shared<CentralizerEngine>(k))); }

TEST(FormalSum, Arithmetic) {
  auto a = parse_type_key(2, "2:1.2|1.2");
  auto e = empty_type(2);
  FormalSum s(a, 2);
  s.add(e, 3);
  s.add(a, -2);
  EXPECT_EQ(s, FormalSum(e, 3));
  EXPECT_TRUE(FormalSum(a, 0).empty());
  auto t = FormalSum(a) + FormalSum(e);
  EXPECT_FALSE(t.homogeneous());
  EXPECT_EQ(t.scaled(4).coefficient(a), 4);
  EXPECT_EQ(FormalSum(a, 3).to_string(), "3*X[2:1.2|1.2]");
  nlohmann::json j = FormalSum(a, 3);
  EXPECT_EQ(j["2:1.2|1.2"], "3");
}

TEST(TopDegree, UnitLaw) {
  for (int k : {2, 3}) {
    auto c = make_constants(k);
    auto e = empty_type(k);
    for (const auto& m : enumerate_modified_types(k, 3)) {
      c.populate(e, m);
      c.populate(m, e);
      EXPECT_EQ(top_product(e, m, c), FormalSum(m));
      EXPECT_EQ(top_product(m, e, c), FormalSum(m));
    }
  }
}

TEST(TopDegree, MissingPairRaises) {
  auto c = make_constants(2);
  auto a = parse_type_key(2, "2:1.2|1.2");
  EXPECT_FALSE(c.contains(a, a));
  EXPECT_THROW(c.product(a, a), DependencyError);
  EXPECT_THROW(top_product(FormalSum(a), FormalSum(a), c), DependencyError);
  c.populate(a, a);
  EXPECT_TRUE(c.contains(a, a));
  EXPECT_EQ(c.pair_count(), 1u);
}

// the top-degree part of X_A^2 for k = 2 against the dense convolution at n = 4
TEST(TopDegree, SquareOfWeightOneTypeK2) {
  auto c = make_constants(2);
  auto a = parse_type_key(2, "2:1.2|1.2");
  c.populate(a, a);
  auto sq = c.product(a, a);
  EXPECT_TRUE(sq.homogeneous());
  EXPECT_EQ(*sq.weights().begin(), 2);

  WreathContext ctx(2, 4);
  auto part = oracle::double_coset_partition(ctx);
  std::map<ModifiedType, int> cls;
  for (int i = 0; i < static_cast<int>(part.classes.size()); ++i) cls[modified_type(part.classes[i].front(), ctx)] = i;
  for (const auto& L : c.candidates(a, a)) EXPECT_EQ(sq.coefficient(L), oracle::dense_constant(part, cls[a], cls[a], cls[L], ctx)) << L.key();
  EXPECT_EQ(sq.coefficient(parse_type_key(2, "3:1.2|1.3|2.3")), 3);
  EXPECT_EQ(sq.coefficient(parse_type_key(2, "4:1.2|1.2|3.4|3.4")), 2);
}

TEST(TopDegree, CommutativeForK2) {
  auto c = make_constants(2);
  auto gens = enumerate_modified_types(2, 4, 2);
  for (const auto& m : gens)
    for (const auto& n : gens) {
      if (m.weight + n.weight > 2) continue;
      c.populate(m, n);
      c.populate(n, m);
      EXPECT_EQ(c.product(m, n), c.product(n, m)) << m.key() << " " << n.key();
    }
}

TEST(GradedAssociativity, K2AndK3) {
  for (int k : {2, 3}) {
    auto c = make_constants(k);
    auto rep = graded_associativity_check(c, 1);
    EXPECT_TRUE(rep.ok()) << (rep.failures.empty() ? "" : rep.failures.front());
    EXPECT_TRUE(rep.unit_ok);
    EXPECT_TRUE(rep.graded);
    EXPECT_TRUE(rep.support_bound);
    EXPECT_GT(rep.triples, 0);
    nlohmann::json j = rep;
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_FALSE(c.to_json().empty());
  }
}

}  // namespace
