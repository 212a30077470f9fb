#include "coinsim/multivariate.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "coinsim/errors.hpp"

namespace coinsim {

MultiPoly MultiPoly::constant(int variables, const BigInt& c) {
  MultiPoly out(variables);
  out.add_term(Exponents(variables, 0), c);
  return out;
}

MultiPoly MultiPoly::variable(int variables, int index) {
  MultiPoly out(variables);
  Exponents e(variables, 0);
  e.at(index) = 1;
  out.add_term(e, 1);
  return out;
}

MultiPoly MultiPoly::simplex_sum(int variables) {
  MultiPoly out(variables);
  for (int i = 0; i < variables; ++i) out += variable(variables, i);
  return out;
}

MultiPoly MultiPoly::from_univariate(const IntPolynomial& poly) {
  MultiPoly out(1);
  for (int i = 0; i <= poly.degree(); ++i) out.add_term({i}, poly.coeffs()[i]);
  return out;
}

int MultiPoly::total_degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    deg = std::max(deg, d);
  }
  return deg;
}

bool MultiPoly::is_homogeneous() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int x : e) d += x;
    if (deg >= 0 && d != deg) return false;
    deg = d;
  }
  return true;
}

BigInt MultiPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

void MultiPoly::add_term(const Exponents& e, const BigInt& c) {
  if (static_cast<int>(e.size()) != variables_) throw std::invalid_argument("exponent arity mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BigRational MultiPoly::eval(std::span<const BigRational> x) const {
  BigRational acc = 0;
  for (const auto& [e, c] : terms_) {
    BigRational term = c;
    for (int i = 0; i < variables_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= x[i];
    }
    acc += term;
  }
  return acc;
}

long double MultiPoly::eval(std::span<const long double> x) const {
  long double acc = 0;
  for (const auto& [e, c] : terms_) {
    long double term = c.get_d();
    for (int i = 0; i < variables_; ++i) term *= std::pow(x[i], static_cast<long double>(e[i]));
    acc += term;
  }
  return acc;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (variables_ == 0 && terms_.empty()) variables_ = o.variables_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (variables_ == 0 && terms_.empty()) variables_ = o.variables_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly out(std::max(a.variables_, b.variables_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e(out.variables_, 0);
      for (int i = 0; i < out.variables_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly operator*(MultiPoly a, const BigInt& c) {
  if (c == 0) return MultiPoly(a.variables_);
  for (auto& [e, x] : a.terms_) x *= c;
  return a;
}

BigInt MultiPoly::content() const {
  BigInt g = 0;
  for (const auto& [e, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

MultiPoly MultiPoly::exact_divide(const BigInt& c) const {
  MultiPoly out = *this;
  for (auto& [e, x] : out.terms_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
  return out;
}

IntPolynomial MultiPoly::to_univariate() const {
  if (variables_ != 1) throw std::logic_error("to_univariate on a multivariate polynomial");
  std::vector<BigInt> coeffs(std::max(total_degree() + 1, 0));
  for (const auto& [e, c] : terms_) coeffs[e[0]] = c;
  return IntPolynomial(std::move(coeffs));
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    BigInt mag = abs(c);
    if (c < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    bool any_var = false;
    std::string factors;
    for (int i = 0; i < variables_; ++i) {
      if (e[i] == 0) continue;
      if (any_var) factors += "*";
      factors += i < static_cast<int>(names.size()) ? names[i] : "p" + std::to_string(i + 1);
      if (e[i] > 1) factors += "^" + std::to_string(e[i]);
      any_var = true;
    }
    if (!any_var) {
      out += mag.get_str();
    } else {
      if (mag != 1) out += mag.get_str() + "*";
      out += factors;
    }
  }
  return out;
}

MultiRational::MultiRational(MultiPoly num, MultiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::kDivisionByZeroPolynomial, "denominator is the zero polynomial");
  if (num_.variables() == 0) num_ = MultiPoly(den_.variables());
  normalize();
}

MultiRational::MultiRational(MultiPoly poly)
    : MultiRational(poly, MultiPoly::constant(poly.variables(), 1)) {}

MultiRational MultiRational::from_univariate(const RationalFunction& f) {
  return MultiRational(MultiPoly::from_univariate(f.num()), MultiPoly::from_univariate(f.den()));
}

void MultiRational::normalize() {
  if (num_.variables() == 1 && den_.variables() == 1) {
    RationalFunction f(num_.to_univariate(), den_.to_univariate());
    num_ = MultiPoly::from_univariate(f.num());
    den_ = MultiPoly::from_univariate(f.den());
    return;
  }
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(den_.variables(), 1);
    return;
  }
  BigInt g = num_.content();
  BigInt gd = den_.content();
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), gd.get_mpz_t());
  // The largest exponent vector in the term map acts as the leading term.
  if (den_.terms().rbegin()->second < 0) g = -g;
  num_ = num_.exact_divide(g);
  den_ = den_.exact_divide(g);
}

BigRational MultiRational::eval(std::span<const BigRational> x) const {
  BigRational d = den_.eval(x);
  if (d == 0) throw Error(ErrorKind::kPoleAtPoint, "denominator vanishes at the evaluation point");
  return num_.eval(x) / d;
}

RationalFunction MultiRational::to_univariate() const {
  return RationalFunction(num_.to_univariate(), den_.to_univariate());
}

MultiRational MultiRational::operator-() const { return MultiRational(-num_, den_); }

MultiRational operator+(const MultiRational& a, const MultiRational& b) {
  if (a.den_ == b.den_) return MultiRational(a.num_ + b.num_, a.den_);
  return MultiRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

MultiRational operator-(const MultiRational& a, const MultiRational& b) {
  if (a.den_ == b.den_) return MultiRational(a.num_ - b.num_, a.den_);
  return MultiRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

MultiRational operator*(const MultiRational& a, const MultiRational& b) {
  return MultiRational(a.num_ * b.num_, a.den_ * b.den_);
}

MultiRational operator/(const MultiRational& a, const MultiRational& b) {
  if (b.num_.is_zero()) throw Error(ErrorKind::kDivisionByZeroPolynomial, "division by the zero function");
  return MultiRational(a.num_ * b.den_, a.den_ * b.num_);
}

bool operator==(const MultiRational& a, const MultiRational& b) {
  return a.num_ * b.den_ == b.num_ * a.den_;
}

MultiRational MultiRational::pow(unsigned exponent) const {
  MultiRational out(MultiPoly::constant(variables(), 1));
  MultiRational base = *this;
  while (exponent > 0) {
    if (exponent & 1U) out = out * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return out;
}

std::string MultiRational::to_string(const std::vector<std::string>& names) const {
  std::string n = num_.to_string(names);
  if (den_ == MultiPoly::constant(den_.variables(), 1)) return n;
  return "(" + n + ")/(" + den_.to_string(names) + ")";
}

}  // namespace coinsim
