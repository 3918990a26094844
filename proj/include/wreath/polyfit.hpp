#pragma once

// Exact interpolation of n -> c_{M,N}^L(n) and the filtration / stability
// checks on every triple up to a weight bound.

#include <climits>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wreath/errors.hpp"
#include "wreath/hecke.hpp"
#include "wreath/numeric.hpp"
#include "wreath/parallel.hpp"
#include "wreath/type_graph.hpp"

namespace wreath {

class RationalPolynomial {
 public:
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }
  static RationalPolynomial constant(const Rational& v) { return RationalPolynomial({v}); }

  // the falling factorial (n - shift)_m
  static RationalPolynomial falling(const BigInt& shift, int m) {
    RationalPolynomial p = constant(1);
    for (int j = 0; j < m; ++j) p = p * RationalPolynomial({Rational(-(shift + j)), Rational(1)});
    return p;
  }

  const std::vector<Rational>& coefficients() const noexcept { return c_; }
  int degree() const noexcept { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  bool is_constant() const noexcept { return c_.size() <= 1; }

  Rational operator()(const Rational& x) const {
    Rational v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }
  Rational operator()(long long n) const { return (*this)(Rational(n)); }

  RationalPolynomial operator+(const RationalPolynomial& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return RationalPolynomial(std::move(r));
  }

  RationalPolynomial operator*(const RationalPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return RationalPolynomial(std::move(r));
  }

  bool operator==(const RationalPolynomial&) const = default;

  // b_j with p(n) = sum_j b_j (n)_j
  std::vector<Rational> falling_coefficients() const {
    if (is_zero()) return {};
    const int d = degree();
    std::vector<Rational> diff;
    for (int x = 0; x <= d; ++x) diff.push_back((*this)(x));
    std::vector<Rational> out;
    Rational fact = 1;
    for (int j = 0; j <= d; ++j) {
      if (j > 0) fact *= j;
      out.push_back(diff[0] / fact);
      for (int i = 0; i + 1 < static_cast<int>(diff.size()); ++i) diff[i] = diff[i + 1] - diff[i];
      diff.pop_back();
    }
    return out;
  }

  std::string to_string(const std::string& var = "n") const { return render(c_, [&](int j) { return j == 1 ? var : var + "^" + std::to_string(j); }); }

  std::string to_falling_string(const std::string& var = "n") const {
    return render(falling_coefficients(), [&](int j) { return "(" + var + ")_" + std::to_string(j); });
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  template <class Term>
  static std::string render(const std::vector<Rational>& c, Term term) {
    std::string out;
    for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) {
      if (c[j] == 0) continue;
      Rational a = abs(c[j]);
      bool neg = c[j] < 0;
      if (out.empty()) out = neg ? "-" : "";
      else out += neg ? " - " : " + ";
      if (j == 0) out += a.str();
      else out += (a == 1 ? "" : a.str() + "*") + term(j);
    }
    return out.empty() ? "0" : out;
  }

  std::vector<Rational> c_;
};

inline void to_json(nlohmann::json& j, const RationalPolynomial& p) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : p.coefficients()) coeffs.push_back(c.str());
  j = {{"coefficients", coeffs}, {"monomial", p.to_string()}, {"falling", p.to_falling_string()}};
}

using SamplePoint = std::pair<int, BigInt>;

// Newton divided differences, expanded to the monomial basis.
inline RationalPolynomial interpolate(const std::vector<SamplePoint>& points) {
  const std::size_t m = points.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (points[i].first == points[j].first) throw std::invalid_argument("interpolate: duplicate abscissa " + std::to_string(points[i].first));
  std::vector<Rational> dd;
  for (const auto& p : points) dd.emplace_back(p.second);
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = m - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / Rational(points[i].first - points[i - level].first);
  RationalPolynomial result, basis = RationalPolynomial::constant(1);
  for (std::size_t i = 0; i < m; ++i) {
    result = result + basis * RationalPolynomial::constant(dd[i]);
    basis = basis * RationalPolynomial({Rational(-points[i].first), Rational(1)});
  }
  return result;
}

// The exact polynomial carried by the reduced centralizer engine's terms.
inline RationalPolynomial term_polynomial(const std::vector<OrbitTerm>& terms, int k) {
  RationalPolynomial p;
  for (const auto& t : terms)
    p = p + RationalPolynomial::constant(t.zeta * Rational(power(factorial(k), t.t3))) * RationalPolynomial::falling(t.support_base, t.t3);
  return p;
}

// ---------------------------------------------------------------------------
// sources of structure constants

using ConstantFunction = std::function<BigInt(const ModifiedType&, const ModifiedType&, const ModifiedType&, int)>;

struct Sampler {
  std::string name;
  ConstantFunction value;
  int max_n = INT_MAX;

  bool reaches(int n) const noexcept { return n <= max_n; }
  BigInt operator()(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) const {
    if (!reaches(n)) throw CeilingExceeded(name + " sampler cannot reach n=" + std::to_string(n));
    return value(M, N, L, n);
  }
};

inline Sampler reduced_sampler(std::shared_ptr<CentralizerEngine> engine) {
  return {"centralizer", [engine](const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
            return engine->constant(M, N, L, n);
          }};
}

// Orbits counted directly at level n; independent of the carried polynomials.
inline Sampler level_sampler(std::shared_ptr<CentralizerEngine> engine, int max_n = INT_MAX) {
  return {"centralizer-level",
          [engine](const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
            return engine->constant_at_level(M, N, L, n, false);
          },
          max_n};
}

inline Sampler oracle_sampler(int k, int workers = 1, int max_degree = kOracleCeiling) {
  struct State {
    std::mutex mutex;
    std::map<int, std::unique_ptr<OracleEngine>> engines;
  };
  auto state = std::make_shared<State>();
  return {"oracle",
          [state, k, workers](const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
            std::lock_guard lock(state->mutex);
            auto& e = state->engines[n];
            if (!e) e = std::make_unique<OracleEngine>(WreathContext(k, n), workers);
            return e->constant(M, N, L);
          },
          max_degree / k};
}

// primary everywhere; where the secondary reaches, both must agree
inline Sampler checked_sampler(Sampler primary, Sampler secondary) {
  std::string name = primary.name + "+" + secondary.name;
  int max_n = primary.max_n;
  return {name,
          [primary, secondary](const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int n) {
            BigInt v = primary(M, N, L, n);
            if (secondary.reaches(n)) {
              BigInt w = secondary(M, N, L, n);
              if (v != w)
                throw ConsistencyError(primary.name + " and " + secondary.name + " disagree on " + M.key() + " x " + N.key() + " -> " +
                                       L.key() + " at n=" + std::to_string(n));
            }
            return v;
          },
          max_n};
}

// ---------------------------------------------------------------------------

inline int minimal_level(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L) {
  return std::max({1, M.vertices(), N.vertices(), L.vertices()});
}

struct FitResult {
  ModifiedType first, second, target;
  int n_min = 1;
  int degree_bound = 0;
  bool retried = false;
  std::vector<SamplePoint> samples;
  std::vector<SamplePoint> held_out;  // only the reachable ones
  int unreachable_held_out = 0;
  bool held_out_ok = false;
  bool integral = false;
  RationalPolynomial polynomial;

  bool ok() const noexcept { return held_out_ok && integral && polynomial.degree() <= degree_bound; }
};

// Samples n_min .. n_min + d with d = |V_M|, then checks `held_out_points`
// larger n against `holdout` (defaults to `sampler`). On a mismatch the bound
// is raised by one and the fit repeated once.
inline FitResult fit_structure_polynomial(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int k, const Sampler& sampler,
                                          const Sampler* holdout = nullptr, int held_out_points = 2) {
  for (const auto* t : {&M, &N, &L})
    if (t->k() != k) throw std::invalid_argument("fit_structure_polynomial: type has the wrong k");
  const Sampler& check = holdout ? *holdout : sampler;
  FitResult r;
  r.first = M;
  r.second = N;
  r.target = L;
  r.n_min = minimal_level(M, N, L);
  for (int attempt = 0; attempt < 2; ++attempt) {
    r.retried = attempt > 0;
    r.degree_bound = M.vertices() + attempt;
    r.samples.clear();
    r.held_out.clear();
    r.unreachable_held_out = 0;
    for (int n = r.n_min; n <= r.n_min + r.degree_bound; ++n) r.samples.emplace_back(n, sampler(M, N, L, n));
    r.polynomial = interpolate(r.samples);
    r.held_out_ok = true;
    for (int i = 1; i <= held_out_points; ++i) {
      int n = r.n_min + r.degree_bound + i;
      if (!check.reaches(n)) {
        ++r.unreachable_held_out;
        continue;
      }
      BigInt v = check(M, N, L, n);
      r.held_out.emplace_back(n, v);
      if (r.polynomial(n) != Rational(v)) r.held_out_ok = false;
    }
    if (r.held_out_ok) break;
  }
  r.integral = true;
  for (int n = r.n_min; n <= r.n_min + r.degree_bound + held_out_points; ++n)
    if (!is_integer(r.polynomial(n))) r.integral = false;
  return r;
}

inline void to_json(nlohmann::json& j, const FitResult& f) {
  auto pts = [](const std::vector<SamplePoint>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [n, c] : v) a.push_back({n, c.str()});
    return a;
  };
  j = {{"M", f.first.key()},
       {"N", f.second.key()},
       {"L", f.target.key()},
       {"n_min", f.n_min},
       {"degree_bound", f.degree_bound},
       {"retried", f.retried},
       {"samples", pts(f.samples)},
       {"held_out", pts(f.held_out)},
       {"unreachable_held_out", f.unreachable_held_out},
       {"held_out_ok", f.held_out_ok},
       {"integral", f.integral},
       {"polynomial", f.polynomial},
       {"ok", f.ok()}};
}

// ---------------------------------------------------------------------------

enum class Verdict { vanishes, constant, polynomial };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::vanishes: return "vanishes";
    case Verdict::constant: return "constant";
    default: return "polynomial";
  }
}

struct StabilityReport {
  ModifiedType first, second, target;
  Verdict verdict = Verdict::polynomial;  // expected from the weights
  std::vector<SamplePoint> samples;       // n in [max(n_lo, n_min), n_hi]
  std::optional<FitResult> fit;
  bool inclusion_holds = false;  // every orbit representative has [g1]_H inside [g1 g2]_H
  std::vector<std::string> problems;

  bool ok() const noexcept { return problems.empty(); }
};

struct StabilityOptions {
  int workers = 1;
  bool fit = false;
  const Sampler* fit_sampler = nullptr;  // defaults to the sampling one
  const Sampler* holdout = nullptr;
  std::shared_ptr<CentralizerEngine> terms;  // for the support-inclusion check
};

inline StabilityReport check_triple(const ModifiedType& M, const ModifiedType& N, const ModifiedType& L, int k, int n_lo, int n_hi,
                                    const Sampler& sampler, const StabilityOptions& opt = {}) {
  StabilityReport r;
  r.first = M;
  r.second = N;
  r.target = L;
  const int wm = M.weight, wn = N.weight, wl = L.weight;
  r.verdict = wl > wm + wn ? Verdict::vanishes : wl == wm + wn ? Verdict::constant : Verdict::polynomial;
  for (int n = std::max(n_lo, minimal_level(M, N, L)); n <= n_hi; ++n) r.samples.emplace_back(n, sampler(M, N, L, n));
  for (const auto& [n, v] : r.samples) {
    if (v < 0) r.problems.push_back("negative value at n=" + std::to_string(n));
    if (r.verdict == Verdict::vanishes && v != 0) r.problems.push_back("nonzero above the weight bound at n=" + std::to_string(n));
    if (r.verdict == Verdict::constant && v != r.samples.front().second)
      r.problems.push_back("value changes at n=" + std::to_string(n) + " under weight equality");
  }
  if (opt.fit) {
    r.fit = fit_structure_polynomial(M, N, L, k, opt.fit_sampler ? *opt.fit_sampler : sampler, opt.holdout);
    const auto& f = *r.fit;
    if (!f.held_out_ok) r.problems.push_back("held-out values missed by the fitted polynomial");
    if (!f.integral) r.problems.push_back("fitted polynomial not integral on its domain");
    if (f.polynomial.degree() > M.vertices()) r.problems.push_back("fitted degree exceeds |V_M|");
    for (const auto& [n, v] : r.samples)
      if (f.polynomial(n) != Rational(v)) r.problems.push_back("fit disagrees with the sample at n=" + std::to_string(n));
    if (r.verdict == Verdict::vanishes && !f.polynomial.is_zero()) r.problems.push_back("fit is not zero above the weight bound");
    if (r.verdict == Verdict::constant && !f.polynomial.is_constant()) r.problems.push_back("fit is not constant under weight equality");
  }
  if (opt.terms) {
    auto terms = opt.terms->terms(M, N, L);
    r.inclusion_holds = std::all_of(terms.begin(), terms.end(), [](const OrbitTerm& t) { return t.g1_support_inside; });
    if (r.inclusion_holds) {
      if (r.fit && !r.fit->polynomial.is_constant()) r.problems.push_back("support inclusion holds but the fit is not constant");
      for (const auto& [n, v] : r.samples)
        if (v != r.samples.front().second) r.problems.push_back("support inclusion holds but the value changes at n=" + std::to_string(n));
    }
  }
  return r;
}

// All triples with ||M||, ||N|| <= max_weight and L realizable at n_hi.
inline std::vector<StabilityReport> verify_stability(int k, int max_weight, int n_lo, int n_hi, const Sampler& sampler,
                                                     const StabilityOptions& opt = {}) {
  auto factors = enumerate_modified_types(k, 2 * max_weight, max_weight);
  auto targets = realizable_types(k, n_hi);
  struct Triple {
    const ModifiedType *M, *N, *L;
  };
  std::vector<Triple> triples;
  for (const auto& M : factors)
    for (const auto& N : factors)
      for (const auto& L : targets)
        if (minimal_level(M, N, L) <= n_hi) triples.push_back({&M, &N, &L});
  std::vector<StabilityReport> out(triples.size());
  parallel_chunks(static_cast<int>(triples.size()), opt.workers, [&](int i) {
    out[i] = check_triple(*triples[i].M, *triples[i].N, *triples[i].L, k, n_lo, n_hi, sampler, opt);
  });
  return out;
}

inline void to_json(nlohmann::json& j, const StabilityReport& r) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [n, v] : r.samples) s.push_back({n, v.str()});
  j = {{"M", r.first.key()},   {"N", r.second.key()},           {"L", r.target.key()},
       {"weights", {r.first.weight, r.second.weight, r.target.weight}},
       {"verdict", to_string(r.verdict)},
       {"samples", s},         {"inclusion_holds", r.inclusion_holds}, {"problems", r.problems},
       {"ok", r.ok()}};
  if (r.fit) j["fit"] = *r.fit;
}

inline std::string format_reports(const std::vector<StabilityReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    os << r.first.key() << " * " << r.second.key() << " -> " << r.target.key() << "  [" << to_string(r.verdict) << "]";
    for (const auto& [n, v] : r.samples) os << "  n=" << n << ":" << v;
    if (r.fit) os << "  fit: " << r.fit->polynomial.to_string() << " = " << r.fit->polynomial.to_falling_string();
    os << (r.ok() ? "  ok" : "  FAIL");
    for (const auto& p : r.problems) os << "; " << p;
    os << "\n";
  }
  return os.str();
}

}  // namespace wreath
