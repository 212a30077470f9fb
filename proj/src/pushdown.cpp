#include "coinsim/pushdown.hpp"

#include <cmath>

#include "coinsim/bernstein.hpp"

namespace coinsim {

void check_pushdown(const PushdownCoinAutomaton& m) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kInvalidArgument, what); };
  if (m.state_count <= 0) fail("pushdown automaton has no states");
  if (m.input_alphabet < 2) fail("input alphabet needs at least two symbols");
  if (m.stack_alphabet < 1) fail("stack alphabet is empty");
  if (m.start < 0 || m.start >= m.state_count) fail("start state out of range");
  if (m.initial_stack.empty()) fail("initial stack must be nonempty");
  for (int b : m.initial_stack) {
    if (b < 0 || b >= m.stack_alphabet) fail("initial stack symbol out of range");
  }
  const std::size_t expected = static_cast<std::size_t>(m.state_count) * m.input_alphabet * m.stack_alphabet;
  if (m.transitions.size() != expected) {
    fail("transition table has " + std::to_string(m.transitions.size()) + " entries, expected " +
         std::to_string(expected));
  }
  for (const auto& t : m.transitions) {
    if (t.next < 0 || t.next >= m.state_count) fail("transition target out of range");
    for (int b : t.push) {
      if (b < 0 || b >= m.stack_alphabet) fail("pushed stack symbol out of range");
    }
  }
  if (static_cast<int>(m.output.size()) != m.state_count) fail("output table size differs from the state count");
  for (const auto& o : m.output) {
    if (o && *o != 0 && *o != 1) fail("pushdown output labels must be 0 or 1");
  }
  if (m.symbol_law.empty()) {
    if (m.input_alphabet != 2) fail("a symbol law is required for inputs beyond a coin");
    return;
  }
  if (static_cast<int>(m.symbol_law.size()) != m.input_alphabet) fail("symbol law length differs from the alphabet");
  RationalFunction total;
  for (const auto& f : m.symbol_law) {
    total = total + f;
    // Constants may sit on 0 or 1; anything else must stay strictly inside on (0,1).
    bool ok = true;
    if (f.is_constant()) {
      const BigRational c = f.eval(BigRational(0));
      ok = c >= 0 && c <= 1;
    } else {
      try {
        bernstein_from_rational(f);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kInvalidRange && e.kind() != ErrorKind::kCapExceeded) throw;
        ok = false;
      }
    }
    if (!ok) throw Error(ErrorKind::kNotAProbabilityVector, "symbol law entry " + f.to_string() + " leaves [0,1]");
  }
  if (!(total == RationalFunction(IntPolynomial{1}))) {
    throw Error(ErrorKind::kNotAProbabilityVector, "symbol law sums to " + total.to_string() + ", not 1");
  }
}

std::vector<double> symbol_probabilities(const PushdownCoinAutomaton& m, double p) {
  if (m.symbol_law.empty()) return {1.0 - p, p};
  std::vector<double> law;
  law.reserve(m.symbol_law.size());
  for (const auto& f : m.symbol_law) law.push_back(f.eval(p));
  return law;
}

PdaRunner::PdaRunner(const PushdownCoinAutomaton& m)
    : input_alphabet_(m.input_alphabet),
      row_(static_cast<std::size_t>(m.stack_alphabet) * m.input_alphabet),
      start_(m.start) {
  check_pushdown(m);
  initial_stack_.assign(m.initial_stack.rbegin(), m.initial_stack.rend());
  steps_.resize(m.transitions.size());
  for (int s = 0; s < m.state_count; ++s) {
    for (int top = 0; top < m.stack_alphabet; ++top) {
      for (int a = 0; a < m.input_alphabet; ++a) {
        const PdaTransition& t = m.transition(s, a, top);
        Step step{t.next * row_, static_cast<int>(t.push.size()), {0, 0}, static_cast<int>(pool_.size())};
        if (step.length >= 1) step.next_key += static_cast<std::size_t>(t.push[0]) * m.input_alphabet;
        if (step.length == 1) step.slot[0] = t.push[0];
        if (step.length == 2) step.slot[0] = t.push[1], step.slot[1] = t.push[0];
        if (step.length > 2) pool_.insert(pool_.end(), t.push.begin(), t.push.end());
        steps_[(static_cast<std::size_t>(s) * m.stack_alphabet + top) * m.input_alphabet + a] = step;
      }
    }
  }
  for (const auto& o : m.output) output_.push_back(o ? *o : -1);
}

namespace {

PushdownCoinAutomaton ladder_with_law(std::vector<RationalFunction> law) {
  // States: 0 left (label 1), 1 right (label 0). Stack alphabet {x}.
  PushdownCoinAutomaton m;
  m.state_count = 2;
  m.input_alphabet = 3;
  m.stack_alphabet = 1;
  m.start = 0;
  m.initial_stack = {0};
  m.transitions.resize(6);
  for (int s = 0; s < 2; ++s) {
    m.transitions[m.index(s, 0, 0)] = {s, {}};
    m.transitions[m.index(s, 1, 0)] = {1 - s, {0}};
    m.transitions[m.index(s, 2, 0)] = {s, {0, 0}};
  }
  m.output = {1, 0};
  m.symbol_law = std::move(law);
  check_pushdown(m);
  return m;
}

}  // namespace

PushdownCoinAutomaton build_ladder_pda(const RationalFunction& g) {
  const RationalFunction one(IntPolynomial{1});
  const RationalFunction middle = one - g - g;
  try {
    bernstein_from_rational(g);
    bernstein_from_rational(middle);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kInvalidRange || e.kind() == ErrorKind::kCapExceeded) {
      throw Error(ErrorKind::kInvalidRange, "ladder needs 0 < g < 1/2 on (0,1); g = " + g.to_string() + ": " + e.what());
    }
    throw;
  }
  return ladder_with_law({g, middle, g});
}

PushdownCoinAutomaton build_ladder_variant(const RationalFunction& up, const RationalFunction& down) {
  const RationalFunction one(IntPolynomial{1});
  return ladder_with_law({down, one - up - down, up});
}

PushdownCoinAutomaton compose_with_block(const DiceBlockSimulation& dice, const PushdownCoinAutomaton& m) {
  check_pushdown(m);
  if (dice.alphabet != 2) throw Error(ErrorKind::kAlphabetMismatch, "composition reads coin tosses, not dice rolls");
  if (dice.outputs() != m.input_alphabet) {
    throw Error(ErrorKind::kAlphabetMismatch, "dice has " + std::to_string(dice.outputs()) +
                                                  " outputs but the machine reads " +
                                                  std::to_string(m.input_alphabet) + " symbols");
  }
  const int length = dice.block_length();
  if (length < 1 || length > 16) {
    throw Error(ErrorKind::kInvalidArgument, "composition needs a block length between 1 and 16");
  }
  // Outcome per complete block, first bit most significant; -1 discards.
  std::vector<int> outcome(std::size_t{1} << length);
  Word word(length);
  for (std::size_t index = 0; index < outcome.size(); ++index) {
    for (int i = 0; i < length; ++i) word[i] = static_cast<std::uint8_t>((index >> (length - 1 - i)) & 1U);
    const auto label = classify_dice(dice, word);
    outcome[index] = label ? *label : -1;
  }

  const int prefixes = (1 << length) - 1;  // prefix (len, bits) has index 2^len - 1 + bits
  PushdownCoinAutomaton out;
  out.state_count = m.state_count * prefixes;
  out.input_alphabet = 2;
  out.stack_alphabet = m.stack_alphabet;
  out.start = m.start * prefixes;
  out.initial_stack = m.initial_stack;
  out.transitions.resize(static_cast<std::size_t>(out.state_count) * 2 * out.stack_alphabet);
  out.output.assign(out.state_count, std::nullopt);
  for (int ms = 0; ms < m.state_count; ++ms) {
    out.output[ms * prefixes] = m.output[ms];
    for (int len = 0; len < length; ++len) {
      for (int bits = 0; bits < (1 << len); ++bits) {
        const int state = ms * prefixes + (1 << len) - 1 + bits;
        for (int b = 0; b < 2; ++b) {
          const int extended = bits * 2 + b;
          for (int top = 0; top < m.stack_alphabet; ++top) {
            PdaTransition& t = out.transitions[out.index(state, b, top)];
            if (len + 1 < length) {
              t = {ms * prefixes + (1 << (len + 1)) - 1 + extended, {top}};
            } else if (outcome[extended] < 0) {
              t = {ms * prefixes, {top}};
            } else {
              const PdaTransition& inner = m.transition(ms, outcome[extended], top);
              t = {inner.next * prefixes, inner.push};
            }
          }
        }
      }
    }
  }
  return out;
}

DiceBlockSimulation sqrt_dice() {
  const RationalFunction p = RationalFunction::variable();
  const RationalFunction g = RationalFunction(IntPolynomial{1, -1}, IntPolynomial{2});
  return dice_rational_to_block(std::vector<RationalFunction>{g, p, g}, kDefaultPolyaCap, {1, 0, 2});
}

PushdownCoinAutomaton build_gamma_pda() {
  const RationalFunction g(IntPolynomial{1, -1}, IntPolynomial{2});
  return compose_with_block(sqrt_dice(), build_ladder_pda(g));
}

PushdownCoinAutomaton sqrt_wrapper(const PushdownCoinAutomaton& m) {
  check_pushdown(m);
  if (m.input_alphabet != 2 || !m.symbol_law.empty()) {
    throw Error(ErrorKind::kAlphabetMismatch, "the wrapper needs a machine reading coin tosses");
  }
  // States: 0 wrapper start, 1 final with label 1 (pops until empty), then m shifted by 2.
  constexpr int kShift = 2;
  PushdownCoinAutomaton out;
  out.state_count = m.state_count + kShift;
  out.input_alphabet = 2;
  out.stack_alphabet = m.stack_alphabet;
  out.start = 0;
  out.initial_stack = m.initial_stack;
  out.transitions.resize(static_cast<std::size_t>(out.state_count) * 2 * out.stack_alphabet);
  for (int top = 0; top < out.stack_alphabet; ++top) {
    out.transitions[out.index(0, 1, top)] = {1, {}};
    out.transitions[out.index(0, 0, top)] = {m.start + kShift, {top}};
    for (int b = 0; b < 2; ++b) out.transitions[out.index(1, b, top)] = {1, {}};
  }
  for (int s = 0; s < m.state_count; ++s) {
    for (int b = 0; b < 2; ++b) {
      for (int top = 0; top < m.stack_alphabet; ++top) {
        const PdaTransition& t = m.transition(s, b, top);
        out.transitions[out.index(s + kShift, b, top)] = {t.next + kShift, t.push};
      }
    }
  }
  out.output = {std::nullopt, 1};
  for (const auto& o : m.output) out.output.push_back(o ? std::optional<int>(1 - *o) : std::nullopt);
  return out;
}

PushdownCoinAutomaton build_sqrt_pda() { return sqrt_wrapper(build_gamma_pda()); }

}  // namespace coinsim
