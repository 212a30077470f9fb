#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coinsim/multivariate.hpp"
#include "coinsim/pushdown.hpp"

namespace coinsim {

inline constexpr double kDefaultAlphaTol = 1e-12;
inline constexpr std::uint64_t kDefaultAlphaIterCap = 1'000'000;

enum class AlphaMethod {
  kKleene,  // plain monotone iteration from zero
  kNewton,  // monotone Newton from zero, then a normalized polish
};

/// alpha(b, s, s'): probability that, started in state s with b on top of the
/// stack, the machine first removes b while entering state s'.
struct AlphaSystem {
  int states = 0;
  int stack_symbols = 0;
  double p = 0.0;
  std::vector<double> alpha;     // [(b * states + s) * states + s']
  std::vector<double> goodness;  // [b * states + s] = sum over s' of alpha
  std::uint64_t iterations = 0;
  double last_change = 0.0;  // sup-norm of the final update
  double residual = 0.0;     // sup-norm of F(alpha) - alpha at the end
  bool polished = false;

  double at(int b, int s, int s2) const { return alpha[(static_cast<std::size_t>(b) * states + s) * states + s2]; }
  double min_goodness() const;
  /// (b, s) with the smallest goodness sum.
  std::pair<int, int> worst_pair() const;
};

/// Right-hand side F of the alpha equations at the given symbol law:
/// F(b, s, s') = sum_a P(a) (e_next^T M_{c_1} ... M_{c_r})[s'] where the
/// transition on (s, a, b) moves to next and pushes c_1 ... c_r.
std::vector<double> alpha_step(const PushdownCoinAutomaton& m, std::span<const double> law,
                               std::span<const double> alpha);

/// Least fixed point of the alpha equations, approached from zero. Newton
/// steps are kept monotone (never decreasing an entry) and fall back to a
/// plain step when the linear solve misbehaves. For pairs whose goodness is
/// within 1e-6 of 1 the result is then refined with the constraint that the
/// goodness is exactly 1; the refinement is kept only if it converges.
/// Throws Error(kIterCapExceeded).
AlphaSystem alpha_fixed_point(const PushdownCoinAutomaton& m, double p, double tol = kDefaultAlphaTol,
                              std::uint64_t iter_cap = kDefaultAlphaIterCap,
                              AlphaMethod method = AlphaMethod::kNewton);

/// M_b[s, s'] = alpha(b, s, s'), one matrix per stack symbol.
std::vector<Eigen::MatrixXd> transfer_matrices(const AlphaSystem& a);

/// M_{w_1} ... M_{w_r}; the identity for the empty word.
Eigen::MatrixXd word_transfer(const std::vector<Eigen::MatrixXd>& matrices, std::span<const int> word);

struct PdaValue {
  double value = 0.0;
  AlphaSystem alpha;
};

/// Probability of output 1: sum over label-1 states s' of
/// (M_{tau_1} ... M_{tau_r})[start, s'] for the initial stack tau.
/// Throws Error(kNotAlmostSurelyHalting) if some goodness sum is below
/// 1 - tol, and propagates Error(kIterCapExceeded).
PdaValue pda_value(const PushdownCoinAutomaton& m, double p, double tol = kDefaultAlphaTol,
                   std::uint64_t iter_cap = kDefaultAlphaIterCap, AlphaMethod method = AlphaMethod::kNewton);

struct AlgebraicReport {
  bool pass = false;
  double max_residual = 0.0;
  std::vector<double> residuals;
};

/// |P(f, p)| at every (p, f) pair, with P a polynomial in the two variables
/// (f, p) in that order. Passes iff every residual is <= tol.
/// Throws Error(kInvalidArgument) for a zero P or the wrong arity.
AlgebraicReport verify_algebraic(std::span<const std::pair<double, double>> values, const MultiPoly& relation,
                                 double tol);

}  // namespace coinsim
