#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coinsim/automaton.hpp"
#include "coinsim/bernstein.hpp"
#include "coinsim/bit_source.hpp"
#include "coinsim/ranking.hpp"

namespace coinsim {

inline constexpr std::uint64_t kDefaultBlockCap = std::uint64_t{1} << 32;
inline constexpr int kMaxEnumerableBlock = 24;

enum class BlockOutcome { kOut0, kOut1, kDiscard };

/// Reads words v w with |v| = k and |w| = 2r. A word is kept only when w
/// has exactly r ones; with i = weight(v) and the 1-based combined rank
/// B = rank(v) C(2r, r) + rank(w) + 1 it outputs 1 for B <= d_i, 0 for
/// d_i < B <= e_i, and is discarded otherwise.
struct BlockSimulation {
  int k = 0;
  int r = 0;
  std::vector<BigInt> d;
  std::vector<BigInt> e;
  int polya_exponent = 0;  // metadata: exponent used to produce d, e

  int block_length() const noexcept { return k + 2 * r; }
  friend bool operator==(const BlockSimulation&, const BlockSimulation&) = default;
};

/// Picks the smallest r with e_i <= C(k, i) C(2r, r) for all i.
BlockSimulation build_block(const BernsteinPair& b);

/// Throws Error(kLengthMismatch).
BlockOutcome classify_block(const BlockSimulation& sim, std::span<const std::uint8_t> word);

/// Per-word outcome table, indexed by the word read as a binary number with
/// the first symbol in the most significant position.
std::vector<BlockOutcome> classification_table(const BlockSimulation& sim);

struct BlockRunResult {
  int bit = 0;
  std::uint64_t consumed = 0;
};

/// Repeatedly reads and classifies blocks until one is kept.
class BlockRunner {
 public:
  explicit BlockRunner(BlockSimulation sim);

  const BlockSimulation& simulation() const noexcept { return sim_; }

  template <SymbolStream Source>
  BlockRunResult run(Source& src, std::uint64_t block_cap = kDefaultBlockCap) const {
    const int length = sim_.block_length();
    const std::uint64_t before = src.consumed();
    Word word(length);
    for (std::uint64_t blocks = 0; blocks < block_cap; ++blocks) {
      std::uint64_t index = 0;
      for (int i = 0; i < length; ++i) {
        word[i] = static_cast<std::uint8_t>(src.next());
        index = (index << 1) | word[i];
      }
      const BlockOutcome out = table_.empty() ? classify_block(sim_, word) : table_[index];
      if (out != BlockOutcome::kDiscard) {
        return {out == BlockOutcome::kOut1 ? 1 : 0, src.consumed() - before};
      }
    }
    throw Error(ErrorKind::kStepCapExceeded, "no block kept within " + std::to_string(block_cap) + " blocks");
  }

 private:
  BlockSimulation sim_;
  std::vector<BlockOutcome> table_;  // empty for blocks too long to tabulate
};

template <SymbolStream Source>
BlockRunResult run_block(const BlockSimulation& sim, Source& src, std::uint64_t block_cap = kDefaultBlockCap) {
  return BlockRunner(sim).run(src, block_cap);
}

/// D/E from the Bernstein sums.
RationalFunction exact_distribution(const BlockSimulation& sim);

/// Independent route: classifies all 2^L words and sums their monomial
/// measures. Throws Error(kInvalidArgument) beyond kMaxEnumerableBlock.
RationalFunction brute_force_distribution(const BlockSimulation& sim);

/// Counts of whole blocks by number of ones j = 0..L and outcome.
struct WeightClassCounts {
  std::vector<std::uint64_t> out1, out0, discard;
};
WeightClassCounts enumerate_classes(const BlockSimulation& sim);
/// Reference single-threaded enumeration kept for checking the parallel one.
WeightClassCounts enumerate_classes_serial(const BlockSimulation& sim);

/// bernstein_from_rational followed by build_block.
BlockSimulation rational_to_block(const RationalFunction& f, int cap = kDefaultPolyaCap);

/// Explicit finite automaton realizing the block procedure: a prefix tree
/// over one block with two absorbing finals. Diagnostics only, so limited to
/// block_length <= 12.
FiniteCoinAutomaton compile_block_automaton(const BlockSimulation& sim);

}  // namespace coinsim
