#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coinsim/bernstein.hpp"
#include "coinsim/errors.hpp"
#include "coinsim/bit_source.hpp"
#include "coinsim/multivariate.hpp"
#include "coinsim/ranking.hpp"

namespace coinsim {

/// Two-output block stage over an s-letter alphabet. A segment is a payload
/// of k letters followed by a padding of s*r letters; it is kept only when
/// the padding contains every letter exactly r times. For payload type a
/// (letter counts) and 1-based combined rank B it outputs 1 for B <= d_a,
/// 0 for d_a < B <= e_a and discards otherwise.
struct DiceStage {
  int alphabet = 2;
  int k = 0;
  int r = 0;
  std::map<Exponents, std::pair<BigInt, BigInt>> thresholds;  // type -> (d, e)
  int polya_exponent = 0;

  int length() const noexcept { return k + alphabet * r; }
  friend bool operator==(const DiceStage&, const DiceStage&) = default;
};

/// Number of paddings with every letter exactly r times: (s r)! / (r!)^s.
BigInt balanced_padding_count(int alphabet, int r);

DiceStage build_dice_stage(const MultiBernsteinPair& b);

enum class StageOutcome { kFirst, kRest, kDiscard };
StageOutcome classify_stage(const DiceStage& stage, std::span<const std::uint8_t> segment);

/// Chain of stages read as one block. The block is kept when every segment
/// is kept; the output is labels[j] for the first stage j that outputs 1,
/// or labels.back() when every stage outputs 0.
struct DiceBlockSimulation {
  int alphabet = 2;
  std::vector<int> labels;  // stages.size() + 1 entries, a permutation of 0..t
  std::vector<DiceStage> stages;

  int outputs() const noexcept { return static_cast<int>(labels.size()); }
  int block_length() const noexcept;
  friend bool operator==(const DiceBlockSimulation&, const DiceBlockSimulation&) = default;
};

/// Output label of a full block, or nullopt for a discarded block.
/// Throws Error(kLengthMismatch).
std::optional<int> classify_dice(const DiceBlockSimulation& sim, std::span<const std::uint8_t> word);

/// Block simulation of (f_0, ..., f_t) over an s-sided die. Functions are in
/// affine coordinates: variable i-1 is the probability of letter i, and
/// letter 0 has probability one minus the rest. Outputs are split off one at
/// a time in `order` (default 0, 1, ..., t): a stage simulates
/// (f_j, 1 - f_j) and the remainder recurses on f_m / (1 - f_j).
/// Throws Error(kNotAProbabilityVector), Error(kInvalidRange),
/// Error(kCapExceeded).
DiceBlockSimulation dice_rational_to_block(const std::vector<MultiRational>& fs, int alphabet,
                                           int cap = kDefaultPolyaCap, std::vector<int> order = {});
/// Coin (s = 2) convenience overload.
DiceBlockSimulation dice_rational_to_block(const std::vector<RationalFunction>& fs, int cap = kDefaultPolyaCap,
                                           std::vector<int> order = {});

/// Closed-form probability of each label, indexed by label.
std::vector<MultiRational> dice_exact_distribution(const DiceBlockSimulation& sim);

/// Enumerates all s^L blocks (bounded by 2^22 words) and sums monomial
/// measures per label.
std::vector<MultiRational> dice_brute_force_distribution(const DiceBlockSimulation& sim);

struct DiceRunResult {
  int label = 0;
  std::uint64_t consumed = 0;
};

template <SymbolStream Source>
DiceRunResult run_dice(const DiceBlockSimulation& sim, Source& src, std::uint64_t block_cap = std::uint64_t{1} << 32) {
  const std::uint64_t before = src.consumed();
  Word word(sim.block_length());
  for (std::uint64_t blocks = 0; blocks < block_cap; ++blocks) {
    for (auto& letter : word) letter = static_cast<std::uint8_t>(src.next());
    if (auto label = classify_dice(sim, word)) return {*label, src.consumed() - before};
  }
  throw Error(ErrorKind::kStepCapExceeded, "no block kept within " + std::to_string(block_cap) + " blocks");
}

}  // namespace coinsim
