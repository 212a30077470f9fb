#pragma once

#include <string>

#include "coinsim/polynomial.hpp"

namespace coinsim {

/// Ratio num(p)/den(p) of integer polynomials in canonical form.
///
/// Canonical means: the polynomial gcd of num and den is 1, the gcd of all
/// integer coefficients of num and den together is 1, and den has a
/// positive leading coefficient. Zero is stored as 0/1. Because the form is
/// unique, equality is component-wise.
class RationalFunction {
 public:
  RationalFunction() : den_(IntPolynomial{1}) {}
  RationalFunction(IntPolynomial num, IntPolynomial den);
  explicit RationalFunction(IntPolynomial poly);

  static RationalFunction constant(const BigRational& c);
  /// The identity function p.
  static RationalFunction variable();

  const IntPolynomial& num() const noexcept { return num_; }
  const IntPolynomial& den() const noexcept { return den_; }
  bool is_constant() const noexcept { return num_.degree() <= 0 && den_.degree() == 0; }

  /// Throws Error(kPoleAtPoint) when den(x) = 0.
  BigRational eval(const BigRational& x) const;
  double eval(double x) const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  /// Throws Error(kDivisionByZeroPolynomial) when b is zero.
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) = default;

  RationalFunction pow(unsigned exponent) const;

  /// "p^2/(2p^2-2p+1)", "1/2", "(3p^2-3p+1)/2". The output parses back to
  /// the same canonical form.
  std::string to_string() const;

 private:
  IntPolynomial num_;
  IntPolynomial den_;
};

BigRational ratfunc_eval(const RationalFunction& f, const BigRational& x);

}  // namespace coinsim
