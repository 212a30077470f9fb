#include <gtest/gtest.h>

#include <cmath>
#include <unordered_map>
#include <random>

#include "coinsim/alpha.hpp"
#include "coinsim/expression.hpp"
#include "coinsim/monte_carlo.hpp"
#include "coinsim/pushdown.hpp"

using namespace coinsim;

namespace {

RationalFunction rf(const char* text) { return parse_rational(text); }

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

double gamma_closed(double p) { return (1 - std::sqrt(p)) / (1 - p); }

PushdownCoinAutomaton random_pda(std::mt19937_64& rng, int states, int stack) {
  std::uniform_int_distribution<int> st(0, states - 1), sym(0, stack - 1), len(0, 5), lab(0, 1);
  PushdownCoinAutomaton m;
  m.state_count = states;
  m.input_alphabet = 2;
  m.stack_alphabet = stack;
  m.initial_stack = {sym(rng)};
  for (int i = 0; i < states * 2 * stack; ++i) {
    PdaTransition t;
    t.next = st(rng);
    // Replacement length 0 half the time, so the stack drifts down.
    const int l = len(rng);
    const int length = l <= 2 ? 0 : l == 3 ? 1 : 2;
    for (int j = 0; j < length; ++j) t.push.push_back(sym(rng));
    m.transitions.push_back(t);
  }
  for (int s = 0; s < states; ++s) m.output.push_back(lab(rng));
  return m;
}

// Probability of output 1 by pushing the distribution over configurations
// forward step by step. Returns (value, mass still unresolved). Stack symbols
// must be 0 or 1; a configuration packs state, depth and stack bits (top at
// bit depth - 1) into one key.
std::pair<double, double> configuration_oracle(const PushdownCoinAutomaton& m, double p) {
  constexpr int kMaxDepth = 16;
  auto key = [](std::uint64_t state, std::uint64_t depth, std::uint64_t bits) { return state << 32 | depth << 16 | bits; };
  std::unordered_map<std::uint64_t, double> now;
  const std::size_t n = m.initial_stack.size();  // listed top first
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < n; ++i) packed |= static_cast<std::uint64_t>(m.initial_stack[i]) << (n - 1 - i);
  now[key(m.start, n, packed)] = 1.0;
  double one = 0.0, dropped = 0.0;
  for (int step = 0; step < 400 && !now.empty(); ++step) {
    std::unordered_map<std::uint64_t, double> next;
    for (const auto& [k, mass] : now) {
      const int state = static_cast<int>(k >> 32);
      const int depth = static_cast<int>((k >> 16) & 0xFFFF);
      const std::uint64_t bits = k & 0xFFFF;
      const int top = static_cast<int>((bits >> (depth - 1)) & 1U);
      for (int a = 0; a < 2; ++a) {
        const double w = mass * (a ? p : 1 - p);
        const PdaTransition& t = m.transition(state, a, top);
        int d = depth - 1;
        std::uint64_t b = bits & ((std::uint64_t{1} << d) - 1);
        for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) b |= static_cast<std::uint64_t>(*it) << d++;
        if (d == 0) {
          if (*m.output[t.next] == 1) one += w;
        } else if (d > kMaxDepth || w < 1e-18) {
          dropped += w;
        } else {
          next[key(t.next, d, b)] += w;
        }
      }
    }
    now.swap(next);
  }
  for (const auto& [k, mass] : now) dropped += mass;
  return {one, dropped};
}

}  // namespace

TEST(Ladder, ConstantStepValues) {
  const PushdownCoinAutomaton quarter = build_ladder_pda(rf("1/4"));
  for (double p : {0.2, 0.5, 0.7}) EXPECT_NEAR(pda_value(quarter, p).value, 2 - std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(pda_value(build_ladder_pda(rf("3/8")), 0.4).value, 2.0 / 3, 1e-9);
  EXPECT_EQ(kind_of([] { build_ladder_pda(rf("1/2")); }), ErrorKind::kInvalidRange);
  EXPECT_EQ(kind_of([] { build_ladder_pda(rf("p")); }), ErrorKind::kInvalidRange);
}

TEST(Ladder, BiasedStepSolvesTheQuadratic) {
  const PushdownCoinAutomaton ladder = build_ladder_pda(rf("(1-p)/2"));
  for (double p = 0.1; p < 0.95; p += 0.1) {
    const double g = (1 - p) / 2;
    const double v = pda_value(ladder, p).value;
    EXPECT_NEAR(v, gamma_closed(p), 1e-9) << p;
    EXPECT_LE(std::abs(2 * g * v * v - 2 * v + 1), 1e-8) << p;
  }
}

TEST(Gamma, ComposedMachine) {
  const PushdownCoinAutomaton gamma = build_gamma_pda();
  EXPECT_EQ(gamma.input_alphabet, 2);
  EXPECT_NEAR(pda_value(gamma, 0.25).value, 2.0 / 3, 1e-9);
  EXPECT_NEAR(pda_value(gamma, 4.0 / 9).value, 3.0 / 5, 1e-9);
  EXPECT_NEAR(pda_value(gamma, 0.5).value, 2 - std::sqrt(2.0), 1e-9);
}

TEST(Sqrt, ValuesAndGoodness) {
  const PushdownCoinAutomaton m = build_sqrt_pda();
  for (int j = 1; j <= 9; ++j) {
    const double p = j / 10.0;
    const PdaValue v = pda_value(m, p);
    EXPECT_NEAR(v.value, std::sqrt(p), 1e-9);
    EXPECT_GE(v.alpha.min_goodness(), 1 - 1e-9);
    for (double x : v.alpha.alpha) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
  EXPECT_NEAR(pda_value(m, 4.0 / 9).value, 2.0 / 3, 1e-6);
}

TEST(Transient, RefusedWithDiagnostics) {
  const PushdownCoinAutomaton m = build_ladder_variant(rf("3/8"), rf("1/4"));
  const AlphaSystem a = alpha_fixed_point(m, 0.5);
  EXPECT_LT(a.min_goodness(), 1 - 1e-6);
  EXPECT_NEAR(a.min_goodness(), 2.0 / 3, 1e-9);  // down/up for a biased walk
  EXPECT_EQ(kind_of([&] { pda_value(m, 0.5); }), ErrorKind::kNotAlmostSurelyHalting);
  EXPECT_EQ(kind_of([] { build_ladder_variant(rf("3/4"), rf("1/2")); }), ErrorKind::kNotAProbabilityVector);

  // The sampler sees the escape as trials that hit the step cap.
  MonteCarloConfig c;
  c.p = 0.5;
  c.n = 2000;
  c.step_cap = 20000;
  const MonteCarloReport r = simulate(m, c);
  EXPECT_GT(r.did_not_halt, 0u);
  EXPECT_EQ(r.n_trials + r.did_not_halt, r.attempted);
}

TEST(Alpha, KleeneAndNewtonAgree) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int t = 0; t < 200 && checked < 25; ++t) {
    const PushdownCoinAutomaton m = random_pda(rng, 2 + t % 2, 1 + t % 2);
    const double p = 0.3 + 0.05 * (t % 7);
    const AlphaSystem newton = alpha_fixed_point(m, p);
    if (newton.min_goodness() > 1 - 1e-3 && newton.min_goodness() < 1 - 1e-12) continue;  // near-critical
    AlphaSystem kleene;
    try {
      kleene = alpha_fixed_point(m, p, 1e-14, 200000, AlphaMethod::kKleene);
    } catch (const Error&) {
      continue;  // slow (near-critical) convergence; Newton is the tool for those
    }
    ++checked;
    for (std::size_t i = 0; i < newton.alpha.size(); ++i) EXPECT_NEAR(newton.alpha[i], kleene.alpha[i], 1e-9);
  }
  EXPECT_GE(checked, 10);
}

TEST(Alpha, ValueMatchesConfigurationOracle) {
  std::mt19937_64 rng(22);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 25; ++t) {
    const PushdownCoinAutomaton m = random_pda(rng, 2 + t % 3, 1 + t % 2);
    const double p = 0.2 + 0.1 * (t % 7);
    PdaValue v;
    try {
      v = pda_value(m, p);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kNotAlmostSurelyHalting);
      continue;
    }
    const auto [want, unresolved] = configuration_oracle(m, p);
    if (unresolved > 1e-7) continue;
    ++checked;
    EXPECT_NEAR(v.value, want, unresolved + 1e-9);
  }
  EXPECT_GE(checked, 10);
}

TEST(Alpha, MatrixPathSumsMatchEnumeration) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const PushdownCoinAutomaton m = random_pda(rng, 3, 2);
    const AlphaSystem a = alpha_fixed_point(m, 0.45);
    const auto mats = transfer_matrices(a);
    std::uniform_int_distribution<int> sym(0, 1), len(0, 3);
    std::vector<int> word(len(rng));
    for (auto& b : word) b = sym(rng);
    const Eigen::MatrixXd product = word_transfer(mats, word);
    const int S = a.states;
    for (int s = 0; s < S; ++s) {
      for (int s2 = 0; s2 < S; ++s2) {
        // sum over s = s_0, s_1, ..., s_r = s2 of prod alpha(w_i, s_{i-1}, s_i)
        double total = 0.0;
        const int r = static_cast<int>(word.size());
        long paths = 1;
        for (int i = 1; i < r; ++i) paths *= S;
        for (long code = 0; code < (r ? paths : 1); ++code) {
          std::vector<int> path{s};
          long c = code;
          for (int i = 1; i < r; ++i) {
            path.push_back(static_cast<int>(c % S));
            c /= S;
          }
          path.push_back(s2);
          double prod = 1.0;
          if (r == 0) prod = s == s2 ? 1.0 : 0.0;
          for (int i = 0; i < r; ++i) prod *= a.at(word[i], path[i], path[i + 1]);
          total += prod;
        }
        EXPECT_NEAR(product(s, s2), total, 1e-12);
      }
    }
  }
}

TEST(PdaRun, ImmediateHaltAndScripted) {
  PushdownCoinAutomaton m;
  m.state_count = 2;
  m.stack_alphabet = 1;
  m.initial_stack = {0};
  m.transitions = {{1, {}}, {1, {}}, {0, {0}}, {0, {0}}};
  m.output = {std::nullopt, 1};
  ScriptedSource src({0, 1});
  const PdaRunResult r = pda_run(m, src);
  EXPECT_EQ(r.outcome, PdaOutcome::kHalted);
  EXPECT_EQ(r.label, 1);
  EXPECT_EQ(r.consumed, 1u);

  // Ladder: push (2), switch (1), pop, pop -> empty on the right, label 0.
  const PushdownCoinAutomaton ladder = build_ladder_pda(rf("1/4"));
  ScriptedSource walk({2, 1, 0, 0});
  const PdaRunResult w = pda_run(ladder, walk);
  EXPECT_EQ(w.label, 0);
  EXPECT_EQ(w.consumed, 4u);

  m.output = {std::nullopt, std::nullopt};
  ScriptedSource again({0});
  EXPECT_EQ(kind_of([&] { pda_run(m, again); }), ErrorKind::kUndefinedFinal);
}

TEST(PdaRun, RunnerMatchesReferenceInterpreter) {
  // The table-driven runner against a literal reading of the definition.
  const PushdownCoinAutomaton m = build_sqrt_pda();
  const PdaRunner runner(m);
  for (std::uint64_t i = 0; i < 3000; ++i) {
    BitSource a(3, i, 0.36), b(3, i, 0.36);
    const PdaRunResult fast = runner.run(a);
    int state = m.start;
    std::vector<int> stack(m.initial_stack.rbegin(), m.initial_stack.rend());
    std::uint64_t steps = 0;
    while (!stack.empty()) {
      const int top = stack.back();
      stack.pop_back();
      const PdaTransition& t = m.transition(state, b.next(), top);
      for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) stack.push_back(*it);
      state = t.next;
      ++steps;
    }
    EXPECT_EQ(fast.label, *m.output[state]);
    EXPECT_EQ(fast.consumed, steps);
    EXPECT_EQ(fast.consumed % 3, 1u);  // one wrapper bit, then whole dice blocks
  }
}

TEST(Compose, IdentityDicePreservesValue) {
  std::mt19937_64 rng(24);
  const DiceBlockSimulation identity = dice_rational_to_block(std::vector{rf("1-p"), rf("p")});
  int checked = 0;
  for (int t = 0; t < 100 && checked < 5; ++t) {
    const PushdownCoinAutomaton m = random_pda(rng, 3, 2);
    const PushdownCoinAutomaton c = compose_with_block(identity, m);
    try {
      for (double p : {0.15, 0.3, 0.5, 0.65, 0.85}) {
        EXPECT_NEAR(pda_value(c, p).value, pda_value(m, p).value, 1e-9);
      }
      ++checked;
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::kNotAlmostSurelyHalting);
    }
  }
  EXPECT_EQ(checked, 5);
  EXPECT_EQ(kind_of([&] { compose_with_block(sqrt_dice(), random_pda(rng, 2, 1)); }), ErrorKind::kAlphabetMismatch);
}

TEST(Compose, ConsumptionIsWholeBlocks) {
  const PushdownCoinAutomaton gamma = build_gamma_pda();
  const PdaRunner runner(gamma);
  const int length = sqrt_dice().block_length();
  for (std::uint64_t i = 0; i < 2000; ++i) {
    BitSource src(8, i, 0.6);
    const PdaRunResult r = runner.run(src);
    if (r.outcome == PdaOutcome::kHalted) EXPECT_EQ(r.consumed % length, 0u);
  }
}

TEST(Algebraic, RelationsOnSolvedValues) {
  std::vector<std::pair<double, double>> sqrt_values, gamma_values;
  for (int j = 1; j <= 9; ++j) {
    const double p = j / 10.0;
    sqrt_values.emplace_back(p, pda_value(build_sqrt_pda(), p).value);
    gamma_values.emplace_back(p, pda_value(build_gamma_pda(), p).value);
  }
  const std::vector<std::string> names = {"f", "p"};
  EXPECT_TRUE(verify_algebraic(sqrt_values, parse_polynomial("f^2-p", names), 1e-9).pass);
  EXPECT_TRUE(verify_algebraic(gamma_values, parse_polynomial("(1-p)f^2-2f+1", names), 1e-9).pass);
  const AlgebraicReport wrong = verify_algebraic(sqrt_values, parse_polynomial("f-p", names), 1e-9);
  EXPECT_FALSE(wrong.pass);
  EXPECT_GT(wrong.max_residual, 0.1);
  EXPECT_EQ(kind_of([&] { verify_algebraic(sqrt_values, parse_polynomial("f-f", names), 1e-9); }),
            ErrorKind::kInvalidArgument);
}

TEST(MonteCarlo, AgreesWithPdaValue) {
  // 10^5 trials per bias keeps this under a minute on one core; the
  // acceptance run repeats two biases at 10^6.
  for (const auto& m : {build_sqrt_pda(), build_gamma_pda()}) {
    for (double p : {0.3, 0.5, 0.8}) {
      const double target = pda_value(m, p).value;
      MonteCarloConfig c;
      c.p = p;
      c.n = 100000;
      c.target = target;
      const MonteCarloReport r = simulate(m, c);
      EXPECT_LE(std::abs(*r.z_score), 4.0) << p;
      EXPECT_LE(double(r.did_not_halt) / r.attempted, 1e-3);
    }
  }
}
