#include "coinsim/bernstein.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "coinsim/errors.hpp"

namespace coinsim {

bool HomogeneousPoly::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const BigInt& c) { return c == 0; });
}

bool HomogeneousPoly::nonnegative() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](const BigInt& c) { return c >= 0; });
}

IntPolynomial HomogeneousPoly::dehomogenize() const {
  // p^i (1-p)^(k-i) expanded with signed binomials.
  std::vector<BigInt> out(degree + 1);
  for (int i = 0; i <= degree; ++i) {
    if (coeffs[i] == 0) continue;
    for (int j = 0; j <= degree - i; ++j) {
      BigInt term = coeffs[i] * binomial(degree - i, j);
      if (j % 2) term = -term;
      out[i + j] += term;
    }
  }
  return IntPolynomial(std::move(out));
}

HomogeneousPoly operator-(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  HomogeneousPoly out{a.degree, a.coeffs};
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs.at(i);
  return out;
}

namespace {

HomogeneousPoly homogenize_poly(const IntPolynomial& poly, int k) {
  // a_i p^i (p+q)^(k-i) contributes a_i C(k-i, j-i) to p^j q^(k-j).
  HomogeneousPoly out{k, std::vector<BigInt>(k + 1)};
  for (int i = 0; i <= poly.degree(); ++i) {
    const BigInt& a = poly.coeffs()[i];
    if (a == 0) continue;
    for (int j = i; j <= k; ++j) out.coeffs[j] += a * binomial(k - i, j - i);
  }
  return out;
}

}  // namespace

std::pair<HomogeneousPoly, HomogeneousPoly> homogenize(const RationalFunction& f) {
  const int k = std::max({f.num().degree(), f.den().degree(), 0});
  return {homogenize_poly(f.num(), k), homogenize_poly(f.den(), k)};
}

HomogeneousPoly polya_shift(const HomogeneousPoly& poly, int n) {
  HomogeneousPoly out = poly;
  for (int step = 0; step < n; ++step) {
    std::vector<BigInt> next(out.coeffs.size() + 1);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
      next[i] += out.coeffs[i];
      next[i + 1] += out.coeffs[i];
    }
    out.coeffs = std::move(next);
    ++out.degree;
  }
  return out;
}

int polya_exponent(const std::vector<HomogeneousPoly>& polys, int cap) {
  std::vector<HomogeneousPoly> current = polys;
  for (const auto& poly : current) {
    if (poly.is_zero()) throw Error(ErrorKind::kInvalidArgument, "Polya exponent of the zero polynomial");
  }
  for (int n = 0; n <= cap; ++n) {
    if (std::all_of(current.begin(), current.end(), [](const auto& poly) { return poly.nonnegative(); })) {
      return n;
    }
    for (auto& poly : current) poly = polya_shift(poly, 1);
  }
  throw Error(ErrorKind::kCapExceeded,
              "no Polya exponent n <= " + std::to_string(cap) +
                  " gives nonnegative coefficients; the function may leave (0,1) or the cap is too low");
}

namespace {

BigRational grid_point(int j, int denominator) { return BigRational(j, denominator); }

}  // namespace

BernsteinPair bernstein_from_rational(const RationalFunction& f, int cap) {
  IntPolynomial num = f.num();
  IntPolynomial den = f.den();
  const BigRational half(1, 2);
  if (den.eval(half) < 0) {
    num = -num;
    den = -den;
  }
  if (num.eval(half) <= 0) {
    throw Error(ErrorKind::kInvalidRange, f.to_string() + " is not positive at p = 1/2");
  }
  for (int j = 1; j <= 99; ++j) {
    const BigRational x = grid_point(j, 100);
    const BigRational nx = num.eval(x);
    const BigRational dx = den.eval(x);
    if (dx <= 0 || nx <= 0 || nx >= dx) {
      std::string value = dx == 0 ? std::string("pole") : BigRational(nx / dx).get_str();
      throw Error(ErrorKind::kInvalidRange,
                  f.to_string() + " leaves (0,1): f(" + x.get_str() + ") = " + value);
    }
  }
  const int k = std::max({num.degree(), den.degree(), 0});
  HomogeneousPoly d = homogenize_poly(num, k);
  HomogeneousPoly e = homogenize_poly(den, k);
  const int n = polya_exponent({d, e, e - d}, cap);
  d = polya_shift(d, n);
  e = polya_shift(e, n);
  return BernsteinPair{k + n, d.coeffs, e.coeffs, n};
}

namespace {

bool all_nonnegative(const MultiPoly& poly) {
  return std::all_of(poly.terms().begin(), poly.terms().end(), [](const auto& t) { return t.second >= 0; });
}

// Interior points of the simplex with coordinates c_i / denominator, c_i >= 1,
// in affine coordinates (letters 1..s-1).
void for_each_interior_point(int alphabet, int denominator,
                             const std::function<void(const std::vector<BigRational>&)>& visit) {
  std::vector<int> counts(alphabet, 1);
  std::vector<BigRational> x(alphabet - 1);
  std::function<void(int, int)> rec = [&](int letter, int remaining) {
    if (letter == alphabet - 1) {
      if (remaining < 1) return;
      counts[letter] = remaining;
      for (int i = 1; i < alphabet; ++i) x[i - 1] = BigRational(counts[i], denominator);
      visit(x);
      return;
    }
    for (int c = 1; c <= remaining - (alphabet - 1 - letter); ++c) {
      counts[letter] = c;
      rec(letter + 1, remaining - c);
    }
  };
  rec(0, denominator);
}

int grid_denominator(int alphabet) {
  if (alphabet == 2) return 100;
  if (alphabet == 3) return 24;
  return std::max(12, alphabet + 2);
}

}  // namespace

int polya_multi(const std::vector<MultiPoly>& polys, int cap) {
  if (polys.empty()) throw Error(ErrorKind::kInvalidArgument, "no polynomials given");
  const int s = polys.front().variables();
  if (s < 2) throw Error(ErrorKind::kInvalidArgument, "Polya positivization needs at least two variables");
  for (const auto& poly : polys) {
    if (poly.is_zero()) throw Error(ErrorKind::kInvalidArgument, "Polya exponent of the zero polynomial");
    if (poly.variables() != s || !poly.is_homogeneous()) {
      throw Error(ErrorKind::kInvalidArgument, "Polya positivization needs homogeneous polynomials of equal arity");
    }
  }
  const MultiPoly sum = MultiPoly::simplex_sum(s);
  std::vector<MultiPoly> current = polys;
  for (int n = 0; n <= cap; ++n) {
    if (std::all_of(current.begin(), current.end(), all_nonnegative)) return n;
    for (auto& poly : current) poly = poly * sum;
  }
  throw Error(ErrorKind::kCapExceeded, "no Polya exponent n <= " + std::to_string(cap) +
                                           " gives nonnegative coefficients");
}

int polya_multi(const MultiPoly& poly, int cap) { return polya_multi(std::vector<MultiPoly>{poly}, cap); }

std::pair<MultiPoly, MultiPoly> homogenize_multi(const MultiRational& f, int alphabet) {
  if (f.variables() != alphabet - 1) {
    throw Error(ErrorKind::kAlphabetMismatch, "function has " + std::to_string(f.variables()) +
                                                  " free variables, expected " + std::to_string(alphabet - 1));
  }
  const int k = std::max({f.num().total_degree(), f.den().total_degree(), 0});
  std::vector<MultiPoly> sum_powers{MultiPoly::constant(alphabet, 1)};
  const MultiPoly sum = MultiPoly::simplex_sum(alphabet);
  for (int i = 1; i <= k; ++i) sum_powers.push_back(sum_powers.back() * sum);
  auto lift = [&](const MultiPoly& poly) {
    MultiPoly out(alphabet);
    for (const auto& [e, c] : poly.terms()) {
      Exponents lifted(alphabet, 0);
      int degree = 0;
      for (int i = 0; i < alphabet - 1; ++i) {
        lifted[i + 1] = e[i];
        degree += e[i];
      }
      MultiPoly term(alphabet);
      term.add_term(lifted, c);
      out += term * sum_powers[k - degree];
    }
    return out;
  };
  return {lift(f.num()), lift(f.den())};
}

MultiBernsteinPair multi_bernstein_from_rational(const MultiRational& f, int alphabet, int cap) {
  if (alphabet < 2) throw Error(ErrorKind::kInvalidArgument, "alphabet must have at least two letters");
  MultiPoly num = f.num();
  MultiPoly den = f.den();
  std::vector<BigRational> barycenter(alphabet - 1, BigRational(1, alphabet));
  if (num.variables() != alphabet - 1) {
    throw Error(ErrorKind::kAlphabetMismatch, "function arity does not match the alphabet");
  }
  if (den.eval(barycenter) < 0) {
    num = -num;
    den = -den;
  }
  if (num.eval(barycenter) <= 0) {
    throw Error(ErrorKind::kInvalidRange, f.to_string() + " is not positive at the barycenter");
  }
  for_each_interior_point(alphabet, grid_denominator(alphabet), [&](const std::vector<BigRational>& x) {
    const BigRational nx = num.eval(x);
    const BigRational dx = den.eval(x);
    if (dx <= 0 || nx <= 0 || nx >= dx) {
      std::string where;
      for (const auto& c : x) where += (where.empty() ? "" : ",") + c.get_str();
      throw Error(ErrorKind::kInvalidRange, f.to_string() + " leaves (0,1) at (" + where + ")");
    }
  });
  auto [d, e] = homogenize_multi(MultiRational(num, den), alphabet);
  if (d.is_zero()) throw Error(ErrorKind::kInvalidRange, "function is identically zero");
  const int k = std::max(d.total_degree(), e.total_degree());
  const int n = polya_multi({d, e, e - d}, cap);
  const MultiPoly sum = MultiPoly::simplex_sum(alphabet);
  for (int i = 0; i < n; ++i) {
    d = d * sum;
    e = e * sum;
  }
  MultiBernsteinPair out{alphabet, k + n, {}, n};
  for (const auto& [type, ecoef] : e.terms()) out.thresholds[type] = {d.coeff(type), ecoef};
  return out;
}

}  // namespace coinsim
