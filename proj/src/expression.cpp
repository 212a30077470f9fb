#include "coinsim/expression.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "coinsim/errors.hpp"

namespace coinsim {

namespace {

using Kind = ExpressionAST::Kind;

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExpressionAST parse() {
    if (text_.find_first_not_of(" \t\n\r") == std::string_view::npos) fail(0, "empty expression");
    ast_.root = expr();
    skip();
    if (pos_ != text_.size()) fail(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return std::move(ast_);
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    throw Error(ErrorKind::kSyntaxError, what + " at position " + std::to_string(at) + " in \"" + std::string(text_) + "\"");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  int add(ExpressionAST::Node node) {
    ast_.nodes.push_back(std::move(node));
    return static_cast<int>(ast_.nodes.size()) - 1;
  }
  int binary(Kind kind, int lhs, int rhs, std::size_t at) {
    ExpressionAST::Node n;
    n.kind = kind;
    n.lhs = lhs;
    n.rhs = rhs;
    n.position = at;
    return add(std::move(n));
  }

  int expr() {
    int node;
    const char c = peek();
    if (c == '-' || c == '+') {
      const std::size_t at = pos_++;
      node = term();
      if (c == '-') node = binary(Kind::kNeg, node, -1, at);
    } else {
      node = term();
    }
    for (;;) {
      const char op = peek();
      if (op != '+' && op != '-') return node;
      const std::size_t at = pos_++;
      node = binary(op == '+' ? Kind::kAdd : Kind::kSub, node, term(), at);
    }
  }

  int term() {
    int node = factor();
    for (;;) {
      const char op = peek();
      if (op == '*' || op == '/') {
        const std::size_t at = pos_++;
        node = binary(op == '*' ? Kind::kMul : Kind::kDiv, node, factor(), at);
      } else if (op == '(' || std::isalpha(static_cast<unsigned char>(op)) || op == '_') {
        node = binary(Kind::kMul, node, factor(), pos_);
      } else {
        return node;
      }
    }
  }

  int factor() {
    const int node = base();
    if (peek() != '^') return node;
    const std::size_t at = pos_++;
    skip();
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) fail(digits, "expected a nonnegative integer exponent");
    const std::string_view e = text_.substr(digits, pos_ - digits);
    if (e.size() > 6) fail(digits, "exponent too large");
    ExpressionAST::Node n;
    n.kind = Kind::kPow;
    n.lhs = node;
    n.exponent = static_cast<unsigned>(std::stoul(std::string(e)));
    n.position = at;
    return add(std::move(n));
  }

  int base() {
    const char c = peek();
    const std::size_t at = pos_;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      ExpressionAST::Node n;
      n.kind = Kind::kInteger;
      n.value = BigInt(std::string(text_.substr(at, pos_ - at)));
      n.position = at;
      return add(std::move(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      ExpressionAST::Node n;
      n.kind = Kind::kVariable;
      n.name = std::string(text_.substr(at, pos_ - at));
      n.position = at;
      return add(std::move(n));
    }
    if (c == '(') {
      ++pos_;
      const int node = expr();
      if (peek() != ')') fail(pos_, "expected ')'");
      ++pos_;
      return node;
    }
    if (c == '\0') fail(pos_, "unexpected end of expression");
    fail(pos_, std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  ExpressionAST ast_;
};

template <typename T>
T lower(const ExpressionAST& ast, int index, const std::function<T(const BigInt&)>& integer,
        const std::function<T(const ExpressionAST::Node&)>& variable) {
  const auto& n = ast.nodes.at(index);
  switch (n.kind) {
    case Kind::kInteger: return integer(n.value);
    case Kind::kVariable: return variable(n);
    case Kind::kNeg: return -lower(ast, n.lhs, integer, variable);
    case Kind::kPow: return lower(ast, n.lhs, integer, variable).pow(n.exponent);
    default: break;
  }
  const T a = lower(ast, n.lhs, integer, variable);
  const T b = lower(ast, n.rhs, integer, variable);
  switch (n.kind) {
    case Kind::kAdd: return a + b;
    case Kind::kSub: return a - b;
    case Kind::kMul: return a * b;
    default: return a / b;
  }
}

[[noreturn]] void unknown_name(const ExpressionAST::Node& n, const std::string& allowed) {
  throw Error(ErrorKind::kSyntaxError,
              "unknown variable '" + n.name + "' at position " + std::to_string(n.position) + " (expected " + allowed + ")");
}

MultiRational lower_multi(const ExpressionAST& ast, int variables,
                          const std::function<MultiRational(const ExpressionAST::Node&)>& variable) {
  return lower<MultiRational>(
      ast, ast.root, [&](const BigInt& c) { return MultiRational(MultiPoly::constant(variables, c)); }, variable);
}

}  // namespace

ExpressionAST parse_expression(std::string_view text) { return Parser(text).parse(); }

RationalFunction parse_rational(std::string_view text) {
  const ExpressionAST ast = parse_expression(text);
  return lower<RationalFunction>(
      ast, ast.root, [](const BigInt& c) { return RationalFunction(IntPolynomial(std::vector<BigInt>{c})); },
      [](const ExpressionAST::Node& n) {
        if (n.name != "p") unknown_name(n, "p");
        return RationalFunction::variable();
      });
}

MultiRational parse_dice_function(std::string_view text, int alphabet) {
  if (alphabet < 2) throw Error(ErrorKind::kInvalidArgument, "alphabet must have at least two letters");
  const int vars = alphabet - 1;
  const ExpressionAST ast = parse_expression(text);
  const std::string allowed = alphabet == 2 ? "p, p0 or p1" : "p0 .. p" + std::to_string(vars);
  return lower_multi(ast, vars, [&](const ExpressionAST::Node& n) {
    if (alphabet == 2 && n.name == "p") return MultiRational(MultiPoly::variable(vars, 0));
    if (n.name.size() < 2 || n.name[0] != 'p' || !std::all_of(n.name.begin() + 1, n.name.end(), ::isdigit) ||
        (n.name.size() > 2 && n.name[1] == '0')) {
      unknown_name(n, allowed);
    }
    const int letter = std::stoi(n.name.substr(1));
    if (letter > vars) unknown_name(n, allowed);
    if (letter > 0) return MultiRational(MultiPoly::variable(vars, letter - 1));
    MultiPoly rest = MultiPoly::constant(vars, 1);
    for (int i = 0; i < vars; ++i) rest -= MultiPoly::variable(vars, i);
    return MultiRational(rest);
  });
}

MultiPoly parse_polynomial(std::string_view text, const std::vector<std::string>& names) {
  const int vars = static_cast<int>(names.size());
  if (vars == 0) throw Error(ErrorKind::kInvalidArgument, "no variable names");
  const ExpressionAST ast = parse_expression(text);
  std::string allowed;
  for (const auto& name : names) allowed += (allowed.empty() ? "" : ", ") + name;
  const MultiRational f = lower_multi(ast, vars, [&](const ExpressionAST::Node& n) {
    for (int i = 0; i < vars; ++i) {
      if (names[i] == n.name) return MultiRational(MultiPoly::variable(vars, i));
    }
    unknown_name(n, allowed);
  });
  if (f.den().total_degree() != 0 || f.den().coeff(Exponents(vars, 0)) != 1) {
    throw Error(ErrorKind::kSyntaxError, "\"" + std::string(text) + "\" is not a polynomial with integer coefficients");
  }
  return f.num();
}

}  // namespace coinsim
