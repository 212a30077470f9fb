#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coinsim/polynomial.hpp"

namespace coinsim {

using Word = std::vector<std::uint8_t>;

/// A binary word with its weight and colexicographic rank among words of
/// the same length and weight.
struct RankedWord {
  Word word;
  int weight = 0;
  BigInt rank;
};

/// Combinatorial number system: with ones at positions c_1 < ... < c_w the
/// rank is sum_j C(c_j, j), so 0 <= rank < C(length, weight).
RankedWord rank_word(std::span<const std::uint8_t> word);
BigInt colex_rank(std::span<const std::uint8_t> word);
Word unrank_word(int length, int weight, BigInt rank);

/// Count of words over {0..s-1} with the given letter counts.
BigInt multinomial(std::span<const int> counts);

/// Rank of a word among all words with the same letter counts. Letters are
/// peeled from the top: the positions of letter s-1 get their colex rank R,
/// the word with that letter removed is ranked recursively as Q, and the
/// result is R + C(length, count_{s-1}) * Q. For s = 2 this is colex_rank.
BigInt multiset_rank(std::span<const std::uint8_t> word, int alphabet);
Word multiset_unrank(std::span<const int> counts, BigInt rank);

}  // namespace coinsim
