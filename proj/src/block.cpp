#include "coinsim/block.hpp"

#include <algorithm>
#include <bit>

namespace coinsim {

BlockSimulation build_block(const BernsteinPair& b) {
  const int k = b.degree;
  if (static_cast<int>(b.d.size()) != k + 1 || static_cast<int>(b.e.size()) != k + 1) {
    throw Error(ErrorKind::kInvalidArgument, "Bernstein coefficient vectors must have degree + 1 entries");
  }
  bool any_positive = false;
  for (int i = 0; i <= k; ++i) {
    if (b.d[i] < 0 || b.d[i] > b.e[i]) {
      throw Error(ErrorKind::kInvalidArgument, "Bernstein pair violates 0 <= d_i <= e_i at i = " + std::to_string(i));
    }
    any_positive = any_positive || b.e[i] > 0;
  }
  if (!any_positive) throw Error(ErrorKind::kInvalidArgument, "Bernstein pair has no positive e_i");

  int r = 0;
  for (;; ++r) {
    const BigInt pad = binomial(2 * r, r);
    bool fits = true;
    for (int i = 0; i <= k && fits; ++i) fits = b.e[i] <= binomial(k, i) * pad;
    if (fits) break;
  }
  return BlockSimulation{k, r, b.d, b.e, b.polya_exponent};
}

BlockOutcome classify_block(const BlockSimulation& sim, std::span<const std::uint8_t> word) {
  if (static_cast<int>(word.size()) != sim.block_length()) {
    throw Error(ErrorKind::kLengthMismatch, "block has length " + std::to_string(word.size()) + ", expected " +
                                                std::to_string(sim.block_length()));
  }
  const auto payload = word.first(sim.k);
  const auto padding = word.subspan(sim.k);
  int padding_weight = 0;
  for (auto b : padding) padding_weight += (b != 0);
  if (padding_weight != sim.r) return BlockOutcome::kDiscard;
  int i = 0;
  for (auto b : payload) i += (b != 0);
  const BigInt position = colex_rank(payload) * binomial(2 * sim.r, sim.r) + colex_rank(padding) + 1;
  if (position <= sim.d[i]) return BlockOutcome::kOut1;
  if (position <= sim.e[i]) return BlockOutcome::kOut0;
  return BlockOutcome::kDiscard;
}

namespace {

Word word_of_index(std::uint64_t index, int length) {
  Word w(length);
  for (int i = length - 1; i >= 0; --i) {
    w[i] = static_cast<std::uint8_t>(index & 1U);
    index >>= 1U;
  }
  return w;
}

void require_enumerable(const BlockSimulation& sim) {
  if (sim.block_length() > kMaxEnumerableBlock) {
    throw Error(ErrorKind::kInvalidArgument,
                "block length " + std::to_string(sim.block_length()) + " is too long to enumerate");
  }
}

}  // namespace

std::vector<BlockOutcome> classification_table(const BlockSimulation& sim) {
  require_enumerable(sim);
  const int length = sim.block_length();
  const std::uint64_t words = std::uint64_t{1} << length;
  std::vector<BlockOutcome> table(words);
  for (std::uint64_t index = 0; index < words; ++index) table[index] = classify_block(sim, word_of_index(index, length));
  return table;
}

BlockRunner::BlockRunner(BlockSimulation sim) : sim_(std::move(sim)) {
  if (sim_.block_length() <= 16) table_ = classification_table(sim_);
}

RationalFunction exact_distribution(const BlockSimulation& sim) {
  HomogeneousPoly d{sim.k, sim.d};
  HomogeneousPoly e{sim.k, sim.e};
  return RationalFunction(d.dehomogenize(), e.dehomogenize());
}

WeightClassCounts enumerate_classes_serial(const BlockSimulation& sim) {
  require_enumerable(sim);
  const int length = sim.block_length();
  WeightClassCounts counts{std::vector<std::uint64_t>(length + 1), std::vector<std::uint64_t>(length + 1),
                           std::vector<std::uint64_t>(length + 1)};
  const std::uint64_t words = std::uint64_t{1} << length;
  for (std::uint64_t index = 0; index < words; ++index) {
    const int weight = std::popcount(index);
    switch (classify_block(sim, word_of_index(index, length))) {
      case BlockOutcome::kOut1: ++counts.out1[weight]; break;
      case BlockOutcome::kOut0: ++counts.out0[weight]; break;
      case BlockOutcome::kDiscard: ++counts.discard[weight]; break;
    }
  }
  return counts;
}

WeightClassCounts enumerate_classes(const BlockSimulation& sim) {
  require_enumerable(sim);
  const int length = sim.block_length();
  const int width = length + 1;
  const std::int64_t words = std::int64_t{1} << length;
  std::vector<std::uint64_t> flat(3 * static_cast<std::size_t>(width), 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(flat.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t index = 0; index < words; ++index) {
      const int weight = std::popcount(static_cast<std::uint64_t>(index));
      const BlockOutcome out = classify_block(sim, word_of_index(static_cast<std::uint64_t>(index), length));
      const int slot = out == BlockOutcome::kOut1 ? 0 : out == BlockOutcome::kOut0 ? 1 : 2;
      ++local[slot * width + weight];
    }
#pragma omp critical
    for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += local[i];
  }
  WeightClassCounts counts;
  counts.out1.assign(flat.begin(), flat.begin() + width);
  counts.out0.assign(flat.begin() + width, flat.begin() + 2 * width);
  counts.discard.assign(flat.begin() + 2 * width, flat.end());
  return counts;
}

RationalFunction brute_force_distribution(const BlockSimulation& sim) {
  const WeightClassCounts counts = enumerate_classes(sim);
  const int length = sim.block_length();
  // sum_j count_j p^j (1-p)^(L-j), with counts collected over whole blocks.
  HomogeneousPoly accepted{length, std::vector<BigInt>(length + 1)};
  HomogeneousPoly ones{length, std::vector<BigInt>(length + 1)};
  for (int j = 0; j <= length; ++j) {
    ones.coeffs[j] = BigInt(static_cast<unsigned long>(counts.out1[j]));
    accepted.coeffs[j] = BigInt(static_cast<unsigned long>(counts.out1[j] + counts.out0[j]));
  }
  return RationalFunction(ones.dehomogenize(), accepted.dehomogenize());
}

BlockSimulation rational_to_block(const RationalFunction& f, int cap) {
  return build_block(bernstein_from_rational(f, cap));
}

FiniteCoinAutomaton compile_block_automaton(const BlockSimulation& sim) {
  const int length = sim.block_length();
  if (length > 12) throw Error(ErrorKind::kInvalidArgument, "explicit compilation is limited to blocks of length <= 12");
  if (length == 0) throw Error(ErrorKind::kInvalidArgument, "empty block");
  const std::vector<BlockOutcome> table = classification_table(sim);
  const int prefixes = (1 << length) - 1;
  const int final0 = prefixes;
  const int final1 = prefixes + 1;
  FiniteCoinAutomaton a;
  a.start = 0;
  a.delta.assign(prefixes + 2, std::vector<int>(2));
  a.output.assign(prefixes + 2, std::nullopt);
  for (int len = 0; len < length; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      const int node = (1 << len) - 1 + bits;
      for (int b = 0; b < 2; ++b) {
        const int next_bits = bits * 2 + b;
        if (len + 1 < length) {
          a.delta[node][b] = (1 << (len + 1)) - 1 + next_bits;
          continue;
        }
        switch (table[next_bits]) {
          case BlockOutcome::kOut1: a.delta[node][b] = final1; break;
          case BlockOutcome::kOut0: a.delta[node][b] = final0; break;
          case BlockOutcome::kDiscard: a.delta[node][b] = 0; break;
        }
      }
    }
  }
  a.delta[final0] = {final0, final0};
  a.delta[final1] = {final1, final1};
  a.output[final0] = 0;
  a.output[final1] = 1;
  return a;
}

}  // namespace coinsim
