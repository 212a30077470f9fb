#include "coinsim/rational_function.hpp"

#include <utility>

#include "coinsim/errors.hpp"

namespace coinsim {

RationalFunction::RationalFunction(IntPolynomial num, IntPolynomial den) {
  if (den.is_zero()) throw Error(ErrorKind::kDivisionByZeroPolynomial, "denominator is the zero polynomial");
  if (num.is_zero()) {
    num_ = {};
    den_ = IntPolynomial{1};
    return;
  }
  IntPolynomial g = IntPolynomial::gcd(num, den);
  if (g.degree() > 0) {
    num = num.exact_divide(g);
    den = den.exact_divide(g);
  }
  BigInt c = num.content();
  BigInt cd = den.content();
  mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), cd.get_mpz_t());
  if (den.leading() < 0) c = -c;
  num_ = num.exact_divide(c);
  den_ = den.exact_divide(c);
}

RationalFunction::RationalFunction(IntPolynomial poly) : RationalFunction(std::move(poly), IntPolynomial{1}) {}

RationalFunction RationalFunction::constant(const BigRational& c) {
  return RationalFunction(IntPolynomial::constant(c.get_num()), IntPolynomial::constant(c.get_den()));
}

RationalFunction RationalFunction::variable() { return RationalFunction(IntPolynomial{0, 1}); }

BigRational RationalFunction::eval(const BigRational& x) const {
  BigRational d = den_.eval(x);
  if (d == 0) throw Error(ErrorKind::kPoleAtPoint, "denominator vanishes at p = " + x.get_str());
  BigRational out = num_.eval(x) / d;
  out.canonicalize();
  return out;
}

double RationalFunction::eval(double x) const { return num_.eval(x) / den_.eval(x); }

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.num_.is_zero()) throw Error(ErrorKind::kDivisionByZeroPolynomial, "division by the zero function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(unsigned exponent) const {
  RationalFunction out(IntPolynomial{1});
  RationalFunction base = *this;
  while (exponent > 0) {
    if (exponent & 1U) out = out * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return out;
}

namespace {

bool is_single_term(const IntPolynomial& poly) {
  int terms = 0;
  for (const auto& c : poly.coeffs()) terms += (c != 0);
  return terms <= 1;
}

}  // namespace

std::string RationalFunction::to_string() const {
  std::string n = num_.to_string();
  if (den_ == IntPolynomial{1}) return n;
  if (!is_single_term(num_) || num_.leading() < 0) n = "(" + n + ")";
  std::string d = den_.to_string();
  if (den_.degree() > 0) d = "(" + d + ")";
  return n + "/" + d;
}

BigRational ratfunc_eval(const RationalFunction& f, const BigRational& x) { return f.eval(x); }

}  // namespace coinsim
