#pragma once

#include <stdexcept>
#include <string>

namespace wreath {

// A double-coset type that cannot be realized in S_{kn} at the requested n.
class NotRealizable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration that would exceed the configured size ceiling.
class CeilingExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// An internal identity failed (inexact division, engine disagreement, ...).
// Seeing one of these means the implementation is wrong, not the input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Edge replacement pairs that do not satisfy the partition / end-point rules.
class InvalidEvolution : public std::invalid_argument {
 public:
  InvalidEvolution(int index, const std::string& what)
      : std::invalid_argument("evolution step " + std::to_string(index) + ": " + what),
        index_(index) {}

  int index() const noexcept { return index_; }

 private:
  int index_;
};

// A product was requested whose structure constants have not been verified.
class DependencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wreath
