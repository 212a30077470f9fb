#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <string>
#include <vector>

namespace coinsim {

using BigInt = mpz_class;
using BigRational = mpq_class;

BigInt binomial(unsigned long n, unsigned long k);

/// Univariate polynomial in p with arbitrary-precision integer coefficients.
///
/// Entry i of coeffs() is the coefficient of p^i. The representation is kept
/// trimmed: the zero polynomial has no coefficients and every other
/// polynomial has a nonzero last entry.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  static IntPolynomial constant(const BigInt& c);
  /// c * p^k
  static IntPolynomial monomial(const BigInt& c, unsigned k);

  const std::vector<BigInt>& coeffs() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  BigInt coeff(int i) const;
  const BigInt& leading() const;

  /// gcd of the coefficients; 0 for the zero polynomial.
  BigInt content() const;
  IntPolynomial primitive_part() const;

  BigRational eval(const BigRational& x) const;
  double eval(double x) const;

  IntPolynomial operator-() const;
  IntPolynomial& operator+=(const IntPolynomial& o);
  IntPolynomial& operator-=(const IntPolynomial& o);
  IntPolynomial& operator*=(const IntPolynomial& o);
  IntPolynomial& operator*=(const BigInt& c);

  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(IntPolynomial a, const IntPolynomial& b) { return a *= b; }
  friend IntPolynomial operator*(IntPolynomial a, const BigInt& c) { return a *= c; }
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) = default;

  /// Exact quotient in Z[p]. Throws std::domain_error when divisor does not
  /// divide *this over the integers.
  IntPolynomial exact_divide(const IntPolynomial& divisor) const;
  /// Exact quotient of every coefficient by c.
  IntPolynomial exact_divide(const BigInt& c) const;

  /// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
  static IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);
  /// Primitive gcd with positive leading coefficient (primitive PRS).
  static IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);

  /// Human-readable form in descending powers, e.g. "2p^2-2p+1".
  std::string to_string(const std::string& var = "p") const;

 private:
  void trim();

  std::vector<BigInt> coeffs_;
};

/// Exact Horner evaluation.
BigRational poly_eval(const IntPolynomial& poly, const BigRational& x);

}  // namespace coinsim
