#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "coinsim/multivariate.hpp"
#include "coinsim/rational_function.hpp"

namespace coinsim {

/// Parsed arithmetic expression. Grammar:
///   expr   := ['+' | '-'] term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor | factor)*   -- juxtaposition multiplies
///   factor := base ('^' uint)?
///   base   := uint | name | '(' expr ')'
/// Juxtaposition is accepted before a name or '(' only, so "2p^2-2p+1" is
/// read as 2*p^2 - 2*p + 1 but "2 3" is rejected.
struct ExpressionAST {
  enum class Kind { kInteger, kVariable, kAdd, kSub, kMul, kDiv, kPow, kNeg };
  struct Node {
    Kind kind = Kind::kInteger;
    BigInt value;        // kInteger
    std::string name;    // kVariable
    unsigned exponent = 0;  // kPow
    int lhs = -1;
    int rhs = -1;
    std::size_t position = 0;  // offset into the source text
  };
  std::vector<Node> nodes;
  int root = -1;
};

/// Throws Error(kSyntaxError) naming the offending position.
ExpressionAST parse_expression(std::string_view text);

/// Univariate in p. Throws Error(kSyntaxError) (also for names other than
/// p) and Error(kDivisionByZeroPolynomial).
RationalFunction parse_rational(std::string_view text);

/// Function of an s-sided die in affine coordinates (s - 1 variables). The
/// names p1 .. p{s-1} are the probabilities of letters 1 .. s-1 and p0 is
/// 1 - p1 - ... - p{s-1}; for s = 2, p means p1.
MultiRational parse_dice_function(std::string_view text, int alphabet);

/// Polynomial in the given variable names (in order). Throws
/// Error(kSyntaxError) if the expression divides by a non-constant or has
/// a non-integer coefficient.
MultiPoly parse_polynomial(std::string_view text, const std::vector<std::string>& names);

}  // namespace coinsim
