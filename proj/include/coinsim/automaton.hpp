#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coinsim/bit_source.hpp"
#include "coinsim/errors.hpp"
#include "coinsim/rational_function.hpp"

namespace coinsim {

inline constexpr std::uint64_t kDefaultAutomatonStepCap = std::uint64_t{1} << 32;

/// Finite coin automaton. Final states carry an output label and are
/// absorbing; the machine stops on entering one.
struct FiniteCoinAutomaton {
  int alphabet_size = 2;
  int start = 0;
  std::vector<std::vector<int>> delta;     // delta[state][symbol]
  std::vector<std::optional<int>> output;  // label of each final state

  int state_count() const noexcept { return static_cast<int>(delta.size()); }
  bool is_final(int s) const { return output.at(s).has_value(); }
  int label_count() const;

  friend bool operator==(const FiniteCoinAutomaton&, const FiniteCoinAutomaton&) = default;
};

/// An automaton known to halt with probability 1 for every bias: only states
/// reachable from the start remain, and each of them reaches a final state.
class ValidatedAutomaton {
 public:
  const FiniteCoinAutomaton& machine() const noexcept { return machine_; }
  /// Index of each kept state in the automaton passed to validate().
  const std::vector<int>& original_index() const noexcept { return original_index_; }

 private:
  friend ValidatedAutomaton validate(const FiniteCoinAutomaton& a);
  FiniteCoinAutomaton machine_;
  std::vector<int> original_index_;
};

/// Throws Error(kInvalidArgument) for malformed tables or non-absorbing
/// finals and Error(kNonHaltingState) when a reachable state cannot reach a
/// final state.
ValidatedAutomaton validate(const FiniteCoinAutomaton& a);

struct RunResult {
  int label = 0;
  std::uint64_t consumed = 0;
};

template <SymbolStream Source>
RunResult run(const ValidatedAutomaton& va, Source& src, std::uint64_t step_cap = kDefaultAutomatonStepCap) {
  const FiniteCoinAutomaton& m = va.machine();
  const std::uint64_t before = src.consumed();
  int state = m.start;
  std::uint64_t steps = 0;
  while (!m.output[state]) {
    if (steps++ >= step_cap) {
      throw Error(ErrorKind::kStepCapExceeded, "automaton did not stop within " + std::to_string(step_cap) + " symbols");
    }
    state = m.delta[state][src.next()];
  }
  return {*m.output[state], src.consumed() - before};
}

/// Solves the harmonic system F(s) = sum_b P(b) F(delta(s, b)) over Q(p),
/// one right-hand side per label, by fraction-free Gauss-Jordan elimination
/// with polynomial entries. Entry l is the probability of output l.
/// Binary alphabet only.
std::vector<RationalFunction> extract_rational(const ValidatedAutomaton& a);

/// Figure-one machines: "von_neumann", "square", "ratio".
FiniteCoinAutomaton builtin_automaton(std::string_view name);

/// Swaps labels 0 and 1.
FiniteCoinAutomaton relabel_complement(const FiniteCoinAutomaton& a);

}  // namespace coinsim
