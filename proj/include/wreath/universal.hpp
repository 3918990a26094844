#pragma once

// The associated graded product on the indeterminates X_M: only the
// top-degree constants (||L|| = ||M|| + ||N||), each verified independent of n.

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/errors.hpp"
#include "wreath/polyfit.hpp"
#include "wreath/type_graph.hpp"

namespace wreath {

class FormalSum {
 public:
  FormalSum() = default;
  explicit FormalSum(const ModifiedType& m, BigInt c = 1) { add(m, c); }

  void add(const ModifiedType& m, const BigInt& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<ModifiedType, BigInt>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  BigInt coefficient(const ModifiedType& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  // weights occurring with a nonzero coefficient
  std::set<int> weights() const {
    std::set<int> w;
    for (const auto& [m, c] : terms_) w.insert(m.weight);
    return w;
  }
  bool homogeneous() const { return weights().size() <= 1; }

  FormalSum operator+(const FormalSum& o) const {
    FormalSum r = *this;
    for (const auto& [m, c] : o.terms_) r.add(m, c);
    return r;
  }
  FormalSum scaled(const BigInt& s) const {
    FormalSum r;
    for (const auto& [m, c] : terms_) r.add(m, c * s);
    return r;
  }

  bool operator==(const FormalSum& o) const { return terms_ == o.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      os << (first ? "" : " + ") << c << "*X[" << m.key() << "]";
      first = false;
    }
    return os.str();
  }

 private:
  std::map<ModifiedType, BigInt> terms_;
};

inline void to_json(nlohmann::json& j, const FormalSum& s) {
  j = nlohmann::json::object();
  for (const auto& [m, c] : s.terms()) j[m.key()] = c.str();
}

// Top-degree constants c_{M,N}^L, stored per factor pair once every candidate
// L has been shown constant in n.
class TopDegreeConstants {
 public:
  TopDegreeConstants(int k, Sampler sampler) : k_(k), sampler_(std::move(sampler)) {}

  int k() const noexcept { return k_; }

  // Candidate L for X_M X_N.
  std::vector<ModifiedType> candidates(const ModifiedType& M, const ModifiedType& N) const {
    const int w = M.weight + N.weight;
    std::vector<ModifiedType> out;
    for (auto& L : enumerate_modified_types(k_, M.vertices() + N.vertices(), w))
      if (L.weight == w) out.push_back(std::move(L));
    return out;
  }

  bool contains(const ModifiedType& M, const ModifiedType& N) const { return pairs_.count(pair_key(M, N)) > 0; }

  // Computes and verifies all constants for the pair (idempotent).
  void populate(const ModifiedType& M, const ModifiedType& N) {
    if (contains(M, N)) return;
    std::map<std::string, BigInt> row;
    for (const auto& L : candidates(M, N)) {
      FitResult f = fit_structure_polynomial(M, N, L, k_, sampler_);
      if (!f.ok() || !f.polynomial.is_constant())
        throw ConsistencyError("top-degree constant for " + M.key() + " x " + N.key() + " -> " + L.key() + " is not constant in n: " +
                               f.polynomial.to_string());
      BigInt c = to_integer(f.polynomial(0), "top-degree constant");
      if (c < 0) throw ConsistencyError("negative top-degree constant for " + M.key() + " x " + N.key() + " -> " + L.key());
      if (c != 0) row.emplace(L.key(), c);
      types_.emplace(L.key(), L);
    }
    pairs_.emplace(pair_key(M, N), std::move(row));
  }

  FormalSum product(const ModifiedType& M, const ModifiedType& N) const {
    auto it = pairs_.find(pair_key(M, N));
    if (it == pairs_.end()) throw DependencyError("top-degree constants for " + M.key() + " x " + N.key() + " have not been verified");
    FormalSum s;
    for (const auto& [key, c] : it->second) s.add(types_.at(key), c);
    return s;
  }

  std::size_t pair_count() const noexcept { return pairs_.size(); }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [pk, row] : pairs_) {
      nlohmann::json r = nlohmann::json::object();
      for (const auto& [key, c] : row) r[key] = c.str();
      j[pk] = r;
    }
    return j;
  }

 private:
  static std::string pair_key(const ModifiedType& M, const ModifiedType& N) { return M.key() + " * " + N.key(); }

  int k_;
  Sampler sampler_;
  std::map<std::string, std::map<std::string, BigInt>> pairs_;
  std::map<std::string, ModifiedType> types_;
};

inline FormalSum top_product(const ModifiedType& M, const ModifiedType& N, const TopDegreeConstants& constants) {
  return constants.product(M, N);
}

// bilinear extension
inline FormalSum top_product(const FormalSum& a, const FormalSum& b, const TopDegreeConstants& constants) {
  FormalSum out;
  for (const auto& [m, cm] : a.terms())
    for (const auto& [n, cn] : b.terms()) out = out + constants.product(m, n).scaled(cm * cn);
  return out;
}

inline void populate_products(TopDegreeConstants& constants, const FormalSum& a, const FormalSum& b) {
  for (const auto& [m, cm] : a.terms())
    for (const auto& [n, cn] : b.terms()) constants.populate(m, n);
}

struct GradedAssociativityReport {
  int k = 0;
  int max_weight = 0;
  int triples = 0;
  bool unit_ok = true;
  bool graded = true;                  // products homogeneous of the summed weight
  bool support_bound = true;           // |V_L| <= |V_M| + |V_N|
  std::vector<std::string> failures;   // associativity failures

  bool ok() const noexcept { return unit_ok && graded && support_bound && failures.empty(); }
};

inline GradedAssociativityReport graded_associativity_check(TopDegreeConstants& constants, int max_weight) {
  const int k = constants.k();
  GradedAssociativityReport rep;
  rep.k = k;
  rep.max_weight = max_weight;
  auto gens = enumerate_modified_types(k, 2 * max_weight, max_weight);
  const ModifiedType unit = empty_type(k);
  for (const auto& M : gens) {
    constants.populate(unit, M);
    constants.populate(M, unit);
    if (constants.product(unit, M) != FormalSum(M) || constants.product(M, unit) != FormalSum(M)) rep.unit_ok = false;
  }
  for (const auto& M : gens)
    for (const auto& N : gens) {
      constants.populate(M, N);
      FormalSum p = constants.product(M, N);
      for (const auto& [L, c] : p.terms()) {
        if (L.weight != M.weight + N.weight) rep.graded = false;
        if (L.vertices() > M.vertices() + N.vertices()) rep.support_bound = false;
      }
    }
  for (const auto& M : gens)
    for (const auto& N : gens)
      for (const auto& P : gens) {
        FormalSum xm(M), xn(N), xp(P);
        FormalSum mn = constants.product(M, N), np = constants.product(N, P);
        populate_products(constants, mn, xp);
        populate_products(constants, xm, np);
        FormalSum left = top_product(mn, xp, constants), right = top_product(xm, np, constants);
        ++rep.triples;
        if (left != right)
          rep.failures.push_back("(" + M.key() + " " + N.key() + ") " + P.key() + ": " + left.to_string() + " vs " + right.to_string());
      }
  return rep;
}

inline void to_json(nlohmann::json& j, const GradedAssociativityReport& r) {
  j = {{"k", r.k},         {"max_weight", r.max_weight},       {"triples", r.triples}, {"unit_ok", r.unit_ok},
       {"graded", r.graded}, {"support_bound", r.support_bound}, {"failures", r.failures}, {"ok", r.ok()}};
}

}  // namespace wreath
