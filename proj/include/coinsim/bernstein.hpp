#pragma once

#include <map>
#include <utility>
#include <vector>

#include "coinsim/multivariate.hpp"
#include "coinsim/rational_function.hpp"

namespace coinsim {

inline constexpr int kDefaultPolyaCap = 200;

/// Homogeneous form sum_i coeffs[i] p^i q^(degree-i).
struct HomogeneousPoly {
  int degree = 0;
  std::vector<BigInt> coeffs;  // size degree + 1

  bool is_zero() const;
  bool nonnegative() const;
  /// Value at (p, q) = (p, 1 - p); a polynomial in p.
  IntPolynomial dehomogenize() const;
  friend bool operator==(const HomogeneousPoly&, const HomogeneousPoly&) = default;
};

HomogeneousPoly operator-(const HomogeneousPoly& a, const HomogeneousPoly& b);

/// Integer Bernstein coefficients with 0 <= d_i <= e_i, so that
/// f(p) = sum d_i p^i (1-p)^(k-i) / sum e_i p^i (1-p)^(k-i).
struct BernsteinPair {
  int degree = 0;
  std::vector<BigInt> d;
  std::vector<BigInt> e;
  int polya_exponent = 0;

  friend bool operator==(const BernsteinPair&, const BernsteinPair&) = default;
};

/// Degree-k forms D, E with D(p, 1-p) = num(p) and E(p, 1-p) = den(p),
/// k = max(deg num, deg den).
std::pair<HomogeneousPoly, HomogeneousPoly> homogenize(const RationalFunction& f);

/// Multiplies by (p + q)^n via n Pascal shifts c'_i = c_i + c_{i-1}.
HomogeneousPoly polya_shift(const HomogeneousPoly& poly, int n);

/// Smallest n <= cap such that (p+q)^n P has nonnegative coefficients for
/// every P in polys. Throws Error(kCapExceeded).
int polya_exponent(const std::vector<HomogeneousPoly>& polys, int cap = kDefaultPolyaCap);

/// Sign-normalizes f, rejects it if it visibly leaves (0,1) on the grid
/// j/100, then positivizes D, E and E - D jointly.
/// Throws Error(kInvalidRange) or Error(kCapExceeded).
BernsteinPair bernstein_from_rational(const RationalFunction& f, int cap = kDefaultPolyaCap);

/// Smallest n <= cap with all coefficients of (x_1 + ... + x_s)^n poly
/// nonnegative, for a homogeneous poly in s >= 2 variables.
int polya_multi(const MultiPoly& poly, int cap = kDefaultPolyaCap);
/// Joint version over several homogeneous polys of equal arity.
int polya_multi(const std::vector<MultiPoly>& polys, int cap = kDefaultPolyaCap);

/// Multivariate analogue of BernsteinPair over the letters 0..s-1 of an
/// s-sided die. Keys are count vectors (length s) summing to degree.
struct MultiBernsteinPair {
  int alphabet = 2;
  int degree = 0;
  std::map<Exponents, std::pair<BigInt, BigInt>> thresholds;  // type -> (d, e)
  int polya_exponent = 0;
};

/// Homogenizes an affine-coordinate function of the letter probabilities
/// (variables are letters 1..s-1; letter 0 has probability 1 - sum) to
/// degree-k forms in s variables, padding with powers of x_0 + ... + x_{s-1}.
std::pair<MultiPoly, MultiPoly> homogenize_multi(const MultiRational& f, int alphabet);

/// Dice analogue of bernstein_from_rational. Sign is normalized at the
/// barycenter and a simplex grid pre-check rejects functions leaving (0,1).
MultiBernsteinPair multi_bernstein_from_rational(const MultiRational& f, int alphabet,
                                                 int cap = kDefaultPolyaCap);

}  // namespace coinsim
