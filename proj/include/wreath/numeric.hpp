#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "wreath/errors.hpp"

namespace wreath {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// (x)_m = x (x-1) ... (x-m+1); empty product is 1.
inline BigInt falling_factorial(const BigInt& x, int m) {
  BigInt r = 1;
  for (int i = 0; i < m; ++i) r *= (x - i);
  return r;
}

inline BigInt power(const BigInt& base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// |S_k wr S_n| = n! (k!)^n
inline BigInt wreath_order(int k, int n) {
  return factorial(n) * power(factorial(k), n);
}

// Division that must be exact; anything else is an internal inconsistency.
inline BigInt exact_div(const BigInt& num, const BigInt& den, const char* what) {
  if (den == 0) throw ConsistencyError(std::string(what) + ": division by zero");
  BigInt q, r;
  boost::multiprecision::divide_qr(num, den, q, r);
  if (r != 0) {
    throw ConsistencyError(std::string(what) + ": " + num.str() + " is not divisible by " +
                           den.str());
  }
  return q;
}

inline bool is_integer(const Rational& q) {
  return boost::multiprecision::denominator(q) == 1;
}

inline BigInt to_integer(const Rational& q, const char* what) {
  if (!is_integer(q)) throw ConsistencyError(std::string(what) + ": non-integral value " + q.str());
  return boost::multiprecision::numerator(q);
}

}  // namespace wreath
