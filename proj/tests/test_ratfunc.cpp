#include <gtest/gtest.h>

#include <random>

#include "coinsim/bernstein.hpp"
#include "coinsim/errors.hpp"
#include "coinsim/expression.hpp"
#include "coinsim/rational_function.hpp"

using namespace coinsim;

namespace {

RationalFunction rf(const char* text) { return parse_rational(text); }

std::vector<BigInt> big(std::initializer_list<long> v) {
  std::vector<BigInt> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

HomogeneousPoly hp(std::initializer_list<long> v) {
  return HomogeneousPoly{static_cast<int>(v.size()) - 1, big(v)};
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no coinsim::Error thrown";
  return ErrorKind::kInvalidArgument;
}

IntPolynomial random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree), coef(-6, 6);
  std::vector<BigInt> c(deg(rng) + 1);
  for (auto& x : c) x = coef(rng);
  return IntPolynomial(c);
}

RationalFunction random_rf(std::mt19937_64& rng, int max_degree) {
  IntPolynomial den;
  do den = random_poly(rng, max_degree);
  while (den.is_zero());
  return RationalFunction(random_poly(rng, max_degree), den);
}

// Coefficients of (p+q)^n * P by direct binomial convolution, independent of
// the Pascal shift.
std::vector<BigInt> expand_direct(const HomogeneousPoly& poly, int n) {
  std::vector<BigInt> out(poly.degree + n + 1);
  for (int i = 0; i <= poly.degree; ++i) {
    for (int j = 0; j <= n; ++j) out[i + j] += poly.coeffs[i] * binomial(n, j);
  }
  return out;
}

bool nonneg(const std::vector<BigInt>& v) {
  for (const auto& x : v) {
    if (x < 0) return false;
  }
  return true;
}

IntPolynomial bernstein_sum(const std::vector<BigInt>& c, int k) {
  IntPolynomial sum;
  const IntPolynomial p{0, 1}, q{1, -1};
  for (int i = 0; i <= k; ++i) {
    IntPolynomial term = IntPolynomial::constant(c[i]);
    for (int a = 0; a < i; ++a) term *= p;
    for (int b = 0; b < k - i; ++b) term *= q;
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(PolyEval, Examples) {
  EXPECT_EQ(poly_eval(IntPolynomial(), BigRational(1, 2)), 0);
  EXPECT_EQ(poly_eval(IntPolynomial{0, 0, 1}, BigRational(1, 2)), BigRational(1, 4));
  EXPECT_EQ(poly_eval(IntPolynomial{1, -3, 3}, BigRational(1, 2)), BigRational(1, 4));
}

TEST(RatfuncEval, Examples) {
  EXPECT_EQ(ratfunc_eval(rf("1/2"), BigRational(3, 10)), BigRational(1, 2));
  const RationalFunction ratio = rf("p^2/(p^2+(1-p)^2)");
  EXPECT_EQ(ratfunc_eval(ratio, BigRational(1, 2)), BigRational(1, 2));
  EXPECT_EQ(ratfunc_eval(ratio, BigRational(1, 3)), BigRational(1, 5));
  EXPECT_EQ(kind_of([] { ratfunc_eval(rf("1/(2p-1)"), BigRational(1, 2)); }), ErrorKind::kPoleAtPoint);
}

TEST(Canonical, ExamplesAndInvariants) {
  const RationalFunction f = rf("(3*p^2-3*p+1)/2");
  EXPECT_EQ(f.num(), (IntPolynomial{1, -3, 3}));
  EXPECT_EQ(f.den(), (IntPolynomial{2}));
  EXPECT_EQ(rf("1/2"), RationalFunction::constant(BigRational(1, 2)));
  EXPECT_EQ(rf("(p^2-1)/(2-2p)"), rf("-(p+1)/2"));
  EXPECT_EQ(rf("0/(p+3)"), RationalFunction());
  EXPECT_GT(rf("1/(-p-1)").den().leading(), 0);
}

TEST(Canonical, IdempotentOnRandomInput) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const RationalFunction f = random_rf(rng, 4);
    const RationalFunction again(f.num(), f.den());
    EXPECT_EQ(again, f);
    EXPECT_EQ(IntPolynomial::gcd(f.num(), f.den()).degree() <= 0, true);
    if (!f.num().is_zero()) {
      BigInt c = f.num().content();
      mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), f.den().content().get_mpz_t());
      EXPECT_EQ(c, 1);
    }
  }
}

TEST(Arithmetic, AgreesWithPointEvaluation) {
  std::mt19937_64 rng(2);
  const BigRational xs[] = {BigRational(1, 7), BigRational(2, 5), BigRational(9, 10)};
  for (int t = 0; t < 150; ++t) {
    const RationalFunction f = random_rf(rng, 3), g = random_rf(rng, 3);
    for (const auto& x : xs) {
      if (f.den().eval(x) == 0 || g.den().eval(x) == 0) continue;
      const BigRational fx = f.eval(x), gx = g.eval(x);
      EXPECT_EQ((f + g).eval(x), fx + gx);
      EXPECT_EQ((f - g).eval(x), fx - gx);
      EXPECT_EQ((f * g).eval(x), fx * gx);
      if (gx != 0) EXPECT_EQ((f / g).eval(x), fx / gx);
    }
  }
  EXPECT_EQ(kind_of([] { rf("p") / RationalFunction(); }), ErrorKind::kDivisionByZeroPolynomial);
}

TEST(Parser, RoundTripOfPrintedForms) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 400; ++t) {
    const RationalFunction f = random_rf(rng, 5);
    EXPECT_EQ(parse_rational(f.to_string()), f) << f.to_string();
  }
  EXPECT_EQ(rf("p^2/(p^2+(1-p)^2)").to_string(), "p^2/(2p^2-2p+1)");
  EXPECT_EQ(rf("(3*p^2-3*p+1)/2").to_string(), "(3p^2-3p+1)/2");
}

TEST(Parser, Grammar) {
  EXPECT_EQ(rf("2p(1-p)"), rf("2*p*(1-p)"));
  EXPECT_EQ(rf("-p + 1"), rf("1-p"));
  EXPECT_EQ(rf("(p)^0"), rf("1"));
  EXPECT_EQ(rf("1/2/2"), rf("1/4"));
  EXPECT_EQ(rf("2^10"), rf("1024"));
}

TEST(Parser, Errors) {
  for (const char* bad : {"", "p+", "(p", "p)", "2 3", "q", "p^-1", "p^x", "1..2", "p**2"}) {
    EXPECT_EQ(kind_of([&] { parse_rational(bad); }), ErrorKind::kSyntaxError) << bad;
  }
  try {
    parse_rational("1+*p");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("position 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { parse_rational("1/(p-p)"); }), ErrorKind::kDivisionByZeroPolynomial);
}

TEST(Homogenize, Examples) {
  auto [d, e] = homogenize(rf("1/3"));
  EXPECT_EQ(d, hp({1}));
  EXPECT_EQ(e, hp({3}));
  std::tie(d, e) = homogenize(rf("(3*p^2-3*p+1)/2"));
  EXPECT_EQ(d, hp({1, -1, 1}));
  EXPECT_EQ(e, hp({2, 4, 2}));
  std::tie(d, e) = homogenize(rf("2*p*(1-p)"));
  EXPECT_EQ(d, hp({0, 2, 0}));
  EXPECT_EQ(e, hp({1, 2, 1}));
}

TEST(Homogenize, DehomogenizeRoundTrip) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const RationalFunction f = random_rf(rng, 6);
    const auto [d, e] = homogenize(f);
    EXPECT_EQ(d.dehomogenize(), f.num());
    EXPECT_EQ(e.dehomogenize(), f.den());
  }
}

TEST(Polya, Examples) {
  EXPECT_EQ(polya_exponent({hp({0, 2, 0})}), 0);
  EXPECT_EQ(polya_exponent({hp({1, -1, 1})}), 1);
  EXPECT_EQ(polya_shift(hp({1, -1, 1}), 1), hp({1, 0, 0, 1}));
  EXPECT_EQ(polya_exponent({hp({1, -1, 1}), hp({2, 4, 2}), hp({1, 5, 1})}), 1);
  // (p - q)^2 vanishes at p = q, so no power of (p + q) can help.
  EXPECT_EQ(kind_of([] { polya_exponent({hp({1, -2, 1})}, 40); }), ErrorKind::kCapExceeded);
}

TEST(Polya, ShiftMatchesDirectExpansion) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-9, 9), deg(0, 8);
  for (int t = 0; t < 100; ++t) {
    HomogeneousPoly h;
    h.degree = deg(rng);
    for (int i = 0; i <= h.degree; ++i) h.coeffs.emplace_back(coef(rng));
    for (int n = 0; n <= 5; ++n) EXPECT_EQ(polya_shift(h, n).coeffs, expand_direct(h, n));
  }
}

TEST(Polya, ExponentIsSmallestByDirectSearch) {
  // Positive forms on the open simplex: random nonnegative sums with a
  // negative middle coefficient that keeps the form positive.
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> outer(1, 9), dip(1, 30);
  for (int t = 0; t < 60; ++t) {
    const long a = outer(rng), c = outer(rng);
    long b = -dip(rng);
    if (b * b >= 4 * a * c) b = -static_cast<long>(std::sqrt(4.0 * a * c - 1.0));
    const HomogeneousPoly h = hp({a, b, c});
    int want = 0;
    while (!nonneg(expand_direct(h, want))) ++want;
    EXPECT_EQ(polya_exponent({h}), want) << a << " " << b << " " << c;
  }
}

TEST(Bernstein, Examples) {
  BernsteinPair b = bernstein_from_rational(rf("1/3"));
  EXPECT_EQ(b.degree, 0);
  EXPECT_EQ(b.d, big({1}));
  EXPECT_EQ(b.e, big({3}));
  EXPECT_EQ(b.polya_exponent, 0);
  b = bernstein_from_rational(rf("(3*p^2-3*p+1)/2"));
  EXPECT_EQ(b.degree, 3);
  EXPECT_EQ(b.d, big({1, 0, 0, 1}));
  EXPECT_EQ(b.e, big({2, 6, 6, 2}));
  EXPECT_EQ(b.polya_exponent, 1);
  EXPECT_EQ(kind_of([] { bernstein_from_rational(rf("2*p")); }), ErrorKind::kInvalidRange);
  EXPECT_EQ(kind_of([] { bernstein_from_rational(rf("1+p")); }), ErrorKind::kInvalidRange);
  EXPECT_EQ(kind_of([] { bernstein_from_rational(rf("p-1")); }), ErrorKind::kInvalidRange);
  EXPECT_EQ(kind_of([] { bernstein_from_rational(rf("(2p-1)^2")); }), ErrorKind::kInvalidRange);
}

TEST(Bernstein, SoundnessAndCertification) {
  const char* corpus[] = {"1/3",          "2*p*(1-p)",         "(3*p^2-3*p+1)/2", "p^2",
                          "p/(1+p)",      "p^2/(p^2+(1-p)^2)", "(1+p)/3",         "(p^3+1)/(p+2)",
                          "(p^2-p+1)/3",  "1/(2+p^4)",         "(5p^2-5p+2)/3",   "p(1-p)+1/8"};
  for (const char* text : corpus) {
    const RationalFunction f = rf(text);
    const BernsteinPair b = bernstein_from_rational(f);
    ASSERT_EQ(b.d.size(), static_cast<std::size_t>(b.degree + 1));
    bool some_e = false;
    for (int i = 0; i <= b.degree; ++i) {
      EXPECT_GE(b.d[i], 0);
      EXPECT_LE(b.d[i], b.e[i]);
      some_e = some_e || b.e[i] > 0;
    }
    EXPECT_TRUE(some_e);
    // Exact identity D(p, 1-p) den(p) = E(p, 1-p) num(p).
    EXPECT_EQ(bernstein_sum(b.d, b.degree) * f.den(), bernstein_sum(b.e, b.degree) * f.num()) << text;
    for (int j = 1; j < 100; ++j) {
      const BigRational v = f.eval(BigRational(j, 100));
      EXPECT_TRUE(v > 0 && v < 1) << text << " at " << j << "/100";
    }
  }
}

TEST(PolyaMulti, Examples) {
  const MultiPoly x = MultiPoly::variable(2, 0), y = MultiPoly::variable(2, 1);
  EXPECT_EQ(polya_multi(x * y), 0);
  EXPECT_EQ(polya_multi(x * x - x * y + y * y), 1);

  // x^2 + y^2 + z^2 - xy - yz - xz vanishes at the barycenter (and along the
  // whole diagonal), so it is not positive on the simplex and every
  // (x+y+z)^n multiple keeps a negative coefficient.
  const MultiPoly a = MultiPoly::variable(3, 0), b = MultiPoly::variable(3, 1), c = MultiPoly::variable(3, 2);
  const MultiPoly diag = a * a + b * b + c * c - a * b - b * c - a * c;
  EXPECT_EQ(kind_of([&] { polya_multi(diag, 30); }), ErrorKind::kCapExceeded);

  // Direct-expansion oracle for a strictly positive ternary form.
  const MultiPoly form = (a * a + b * b + c * c) * BigInt(2) - a * b * BigInt(3);
  MultiPoly power = form;
  int want = 0;
  const MultiPoly s = MultiPoly::simplex_sum(3);
  for (;; ++want) {
    bool ok = true;
    for (const auto& [e, coef] : power.terms()) ok = ok && coef >= 0;
    if (ok) break;
    power = power * s;
  }
  EXPECT_EQ(polya_multi(form), want);
  EXPECT_GT(want, 0);
}
