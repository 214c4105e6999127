#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orderdual {

/// Base class of every error thrown by the library.
class OrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A relation handed to a constructor is not a partial order.
class InvalidPoset : public OrderError {
 public:
  using OrderError::OrderError;
};

/// A construction would exceed the configured element cap.
class CapExceeded : public OrderError {
 public:
  CapExceeded(std::string what, std::size_t requested, std::size_t cap)
      : OrderError(std::move(what) + ": " + std::to_string(requested) + " elements exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// A map that was required to be monotone is not; `witness` is a pair x <= y
/// with m(x) not <= m(y).
class NotMonotone : public OrderError {
 public:
  NotMonotone(std::string what, std::size_t x, std::size_t y) : OrderError(std::move(what)), witness_{x, y} {}
  std::pair<std::size_t, std::size_t> witness() const { return witness_; }

 private:
  std::pair<std::size_t, std::size_t> witness_;
};

/// A map that was required to be additive is not. `element` is the first dual
/// state y whose preimage m^{-1}({y'}v) is not a principal ideal.
class NotAdditive : public OrderError {
 public:
  NotAdditive(std::string what, std::size_t element) : OrderError(std::move(what)), element_(element) {}
  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

/// An exhaustive enumeration would exceed its budget.
class BudgetExceeded : public OrderError {
 public:
  using OrderError::OrderError;
};

/// A model description is inconsistent (wrong shapes, clashing indices, ...).
class ModelError : public OrderError {
 public:
  using OrderError::OrderError;
};

}  // namespace orderdual
