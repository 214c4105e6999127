#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/rational.hpp>

namespace orderdual {

using Rational = boost::rational<long long>;

namespace detail {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? -v : v;
}

}  // namespace detail

/// Dense row-major matrix over any field-like scalar (double or Rational).
template <class Scalar>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Scalar fill = Scalar(0)) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar aik = a(i, k);
        if (aik == Scalar(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const Scalar& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  /// max |a_ij|
  Scalar max_abs() const {
    Scalar m(0);
    for (const auto& v : data_)
      if (detail::abs_value(v) > m) m = detail::abs_value(v);
    return m;
  }

  template <class To, class Convert>
  Matrix<To> map(Convert&& f) const {
    Matrix<To> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

 private:
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("Matrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return boost::rational_cast<double>(v); }

/// The exact value of a double as a rational. Throws std::domain_error unless the
/// value is a multiple of 2^-40 of moderate size (so 0.5 converts, 0.1 does not).
inline Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw std::domain_error("exact_rational: not finite");
  long long den = 1;
  double scaled = v;
  while (scaled != std::floor(scaled)) {
    if (den >= (1LL << 40)) throw std::domain_error("exact_rational: " + std::to_string(v) + " has no small exact denominator");
    scaled *= 2;
    den *= 2;
  }
  if (std::fabs(scaled) >= 9.0e15) throw std::domain_error("exact_rational: value too large");
  return Rational(static_cast<long long>(scaled), den);
}

template <class Scalar>
Scalar scalar_from_double(double v) {
  if constexpr (std::is_same_v<Scalar, Rational>) return exact_rational(v);
  else return static_cast<Scalar>(v);
}

}  // namespace orderdual
