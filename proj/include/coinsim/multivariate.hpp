#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "coinsim/polynomial.hpp"
#include "coinsim/rational_function.hpp"

namespace coinsim {

using Exponents = std::vector<int>;

/// Sparse polynomial with integer coefficients in a fixed number of variables.
/// Terms with zero coefficient are never stored.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(int variables) : variables_(variables) {}

  static MultiPoly constant(int variables, const BigInt& c);
  static MultiPoly variable(int variables, int index);
  /// x_0 + x_1 + ... + x_{n-1}
  static MultiPoly simplex_sum(int variables);
  static MultiPoly from_univariate(const IntPolynomial& poly);

  int variables() const noexcept { return variables_; }
  const std::map<Exponents, BigInt>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous() const;
  BigInt coeff(const Exponents& e) const;
  void add_term(const Exponents& e, const BigInt& c);

  BigRational eval(std::span<const BigRational> x) const;
  long double eval(std::span<const long double> x) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const BigInt& c);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) = default;

  BigInt content() const;
  MultiPoly exact_divide(const BigInt& c) const;

  /// Collapses a one-variable polynomial into IntPolynomial.
  IntPolynomial to_univariate() const;

  /// Names default to p1, p2, ... unless given.
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  int variables_ = 0;
  std::map<Exponents, BigInt> terms_;
};

/// Rational function of several variables, kept as an unreduced num/den pair
/// with the integer content removed and a positive leading denominator term.
/// Equality is decided by cross multiplication, so two representations of
/// the same function compare equal.
class MultiRational {
 public:
  MultiRational() = default;
  MultiRational(MultiPoly num, MultiPoly den);
  explicit MultiRational(MultiPoly poly);
  static MultiRational from_univariate(const RationalFunction& f);

  const MultiPoly& num() const noexcept { return num_; }
  const MultiPoly& den() const noexcept { return den_; }
  int variables() const noexcept { return num_.variables(); }

  BigRational eval(std::span<const BigRational> x) const;
  /// Canonical univariate form; only valid when variables() == 1.
  RationalFunction to_univariate() const;

  MultiRational operator-() const;
  friend MultiRational operator+(const MultiRational& a, const MultiRational& b);
  friend MultiRational operator-(const MultiRational& a, const MultiRational& b);
  friend MultiRational operator*(const MultiRational& a, const MultiRational& b);
  friend MultiRational operator/(const MultiRational& a, const MultiRational& b);
  friend bool operator==(const MultiRational& a, const MultiRational& b);

  MultiRational pow(unsigned exponent) const;
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void normalize();

  MultiPoly num_;
  MultiPoly den_;
};

}  // namespace coinsim
