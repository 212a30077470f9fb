#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinsim/bit_source.hpp"
#include "coinsim/dice.hpp"
#include "coinsim/errors.hpp"
#include "coinsim/rational_function.hpp"

namespace coinsim {

inline constexpr std::uint64_t kDefaultPdaStepCap = 100'000'000;

struct PdaTransition {
  int next = 0;
  std::vector<int> push;  // replaces the popped top symbol; first entry ends on top

  friend bool operator==(const PdaTransition&, const PdaTransition&) = default;
};

/// Pushdown coin automaton. Each step reads one input symbol, pops the top of
/// the stack and pushes a replacement word; the machine stops as soon as the
/// stack is empty and outputs the label of the state it is in.
struct PushdownCoinAutomaton {
  int state_count = 0;
  int input_alphabet = 2;
  int stack_alphabet = 1;
  int start = 0;
  std::vector<int> initial_stack;          // top first, nonempty
  std::vector<PdaTransition> transitions;  // [(state * input_alphabet + symbol) * stack_alphabet + top]
  std::vector<std::optional<int>> output;  // label in {0, 1} for final states
  // Probability of each input symbol as a function of p. Empty means the
  // binary coin (1 - p, p).
  std::vector<RationalFunction> symbol_law;

  std::size_t index(int state, int symbol, int top) const noexcept {
    return (static_cast<std::size_t>(state) * input_alphabet + symbol) * stack_alphabet + top;
  }
  const PdaTransition& transition(int state, int symbol, int top) const { return transitions.at(index(state, symbol, top)); }

  friend bool operator==(const PushdownCoinAutomaton&, const PushdownCoinAutomaton&) = default;
};

/// Structural checks: table sizes, index ranges, labels in {0, 1}, nonempty
/// initial stack, symbol law of the right length summing to 1.
/// Throws Error(kInvalidArgument) or Error(kNotAProbabilityVector).
void check_pushdown(const PushdownCoinAutomaton& m);

/// Input-symbol probabilities at bias p.
std::vector<double> symbol_probabilities(const PushdownCoinAutomaton& m, double p);

enum class PdaOutcome { kHalted, kDidNotHalt };

struct PdaRunResult {
  PdaOutcome outcome = PdaOutcome::kHalted;
  int label = -1;  // -1 unless halted
  std::uint64_t consumed = 0;
};

/// Flattened transition table for fast repeated runs.
class PdaRunner {
 public:
  explicit PdaRunner(const PushdownCoinAutomaton& m);

  /// DidNotHalt after step_cap transitions is an outcome, not an error.
  /// Throws Error(kUndefinedFinal) when the stack empties in a non-final state.
  template <SymbolStream Source>
  PdaRunResult run(Source& src, std::uint64_t step_cap = kDefaultPdaStepCap) const {
    const std::uint64_t before = src.consumed();
    // Stack cells [0, height) with the top at height - 1, and the top also
    // held in a register. Words of length <= 2 are applied without branching
    // on the length: the two cells at the top are always written and the
    // height moves by length - 1.
    std::vector<int> stack(initial_stack_.size() + 64);
    std::copy(initial_stack_.begin(), initial_stack_.end(), stack.begin());
    std::size_t height = initial_stack_.size();
    // Row of the step table for the current (state, top): the symbol read
    // picks the entry within the row.
    std::size_t key = static_cast<std::size_t>(start_) * row_ + static_cast<std::size_t>(stack[height - 1]) * input_alphabet_;
    // Locals, so stores into the stack cannot force reloads of members.
    const Step* const steps = steps_.data();
    const std::size_t alphabet = static_cast<std::size_t>(input_alphabet_);
    int* cells = stack.data();
    std::size_t capacity = stack.size();
    for (std::uint64_t n = 0; n < step_cap; ++n) {
      if (height + 2 > capacity) [[unlikely]] {
        stack.resize(capacity * 2);
        cells = stack.data();
        capacity = stack.size();
      }
      const Step step = steps[key + static_cast<unsigned>(src.next())];
      key = step.next_key;
      if (step.length <= 2) [[likely]] {
        cells[height - 1] = step.slot[0];
        cells[height] = step.slot[1];
        height = height + step.length - 1;
      } else {
        --height;
        for (int i = step.length - 1; i >= 0; --i) {
          if (height + 1 > capacity) {
            stack.resize(capacity * 2);
            cells = stack.data();
            capacity = stack.size();
          }
          cells[height++] = pool_[step.offset + i];
        }
      }
      if (height == 0) [[unlikely]] {
        const int state = static_cast<int>(key / row_);
        if (output_[state] < 0) {
          throw Error(ErrorKind::kUndefinedFinal, "stack emptied in non-final state " + std::to_string(state));
        }
        return {PdaOutcome::kHalted, output_[state], src.consumed() - before};
      }
      // A branch rather than a select: pops are rare, and a select would make
      // every step wait on the store to the stack just made.
      if (__builtin_expect(step.length == 0, 0)) key += static_cast<std::size_t>(cells[height - 1]) * alphabet;
    }
    return {PdaOutcome::kDidNotHalt, -1, src.consumed() - before};
  }

 private:
  // Steps are laid out as [(state * stack_alphabet + top) * input_alphabet + symbol].
  struct Step {
    // Row of the next step: next state * row_, plus the new top * alphabet
    // when the step pushes (a pop adds the exposed top at run time).
    std::size_t next_key;
    int length;
    int slot[2];  // new contents of the cells at height - 1 and height
    int offset;   // into pool_ for longer words
  };
  int input_alphabet_;
  std::size_t row_;  // stack_alphabet * input_alphabet
  int start_;
  std::vector<int> initial_stack_;
  std::vector<Step> steps_;
  std::vector<int> pool_;
  std::vector<int> output_;  // -1 for non-final
};

template <SymbolStream Source>
PdaRunResult pda_run(const PushdownCoinAutomaton& m, Source& src, std::uint64_t step_cap = kDefaultPdaStepCap) {
  return PdaRunner(m).run(src, step_cap);
}

/// Ladder walk over input {0, 1, 2} with law (g, 1 - 2g, g): states left
/// (label 1) and right (label 0), stack alphabet {x}, initial stack "x".
/// 0 pops, 1 switches side, 2 pushes x. Halts on the left with probability
/// (1 - sqrt(1 - 2g)) / (2g).
/// Throws Error(kInvalidRange) unless 0 < g < 1/2 on (0, 1).
PushdownCoinAutomaton build_ladder_pda(const RationalFunction& g);

/// Same walk with law (down, 1 - up - down, up); recurrent iff down >= up.
/// No range check beyond the law being a probability vector.
PushdownCoinAutomaton build_ladder_variant(const RationalFunction& up, const RationalFunction& down);

/// Binary-input machine feeding m one symbol per kept block of the dice
/// simulation: dice output i is read by m as symbol i. Control states are
/// (state of m, block prefix read so far); the stack is only touched when a
/// block completes.
/// Throws Error(kAlphabetMismatch) unless the dice reads bits and has one
/// output per input symbol of m.
PushdownCoinAutomaton compose_with_block(const DiceBlockSimulation& dice, const PushdownCoinAutomaton& m);

/// Dice simulation of (g, 1 - 2g, g) for g = (1 - p)/2, splitting off the
/// middle output first.
DiceBlockSimulation sqrt_dice();

/// Reads one bit; on 1 halts with label 1, on 0 runs the composed ladder
/// machine for g = (1 - p)/2 with labels swapped. Value p + (1 - p)(1 - gamma)
/// = sqrt(p).
PushdownCoinAutomaton build_sqrt_pda();

/// The composed binary ladder machine for g = (1 - p)/2, value
/// (1 - sqrt(p)) / (1 - p).
PushdownCoinAutomaton build_gamma_pda();

/// Wraps a binary machine m: bit 1 halts with label 1, bit 0 runs m with its
/// labels swapped.
PushdownCoinAutomaton sqrt_wrapper(const PushdownCoinAutomaton& m);

}  // namespace coinsim
