#include "coinsim/ranking.hpp"

#include <stdexcept>

namespace coinsim {

BigInt colex_rank(std::span<const std::uint8_t> word) {
  BigInt rank = 0;
  unsigned long order = 0;
  for (std::size_t pos = 0; pos < word.size(); ++pos) {
    if (word[pos]) rank += binomial(pos, ++order);
  }
  return rank;
}

RankedWord rank_word(std::span<const std::uint8_t> word) {
  RankedWord out{Word(word.begin(), word.end()), 0, colex_rank(word)};
  for (auto b : word) out.weight += (b != 0);
  return out;
}

Word unrank_word(int length, int weight, BigInt rank) {
  if (weight < 0 || weight > length || rank < 0 || rank >= binomial(length, weight)) {
    throw std::out_of_range("rank outside the weight class");
  }
  Word word(length, 0);
  // Greedy from the top position: the largest c with C(c, j) <= rank.
  for (int j = weight; j >= 1; --j) {
    int c = j - 1;
    while (c + 1 < length && binomial(c + 1, j) <= rank) ++c;
    word[c] = 1;
    rank -= binomial(c, j);
    length = c;
  }
  return word;
}

BigInt multinomial(std::span<const int> counts) {
  BigInt out = 1;
  unsigned long total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative letter count");
    total += c;
    out *= binomial(total, c);
  }
  return out;
}

BigInt multiset_rank(std::span<const std::uint8_t> word, int alphabet) {
  if (alphabet <= 1 || word.empty()) return 0;
  const std::uint8_t top = static_cast<std::uint8_t>(alphabet - 1);
  Word marks(word.size());
  Word rest;
  rest.reserve(word.size());
  int count = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= alphabet) throw std::out_of_range("letter outside the alphabet");
    if (word[i] == top) {
      marks[i] = 1;
      ++count;
    } else {
      rest.push_back(word[i]);
    }
  }
  BigInt inner = multiset_rank(rest, alphabet - 1);
  return colex_rank(marks) + binomial(word.size(), count) * inner;
}

Word multiset_unrank(std::span<const int> counts, BigInt rank) {
  const int alphabet = static_cast<int>(counts.size());
  int length = 0;
  for (int c : counts) length += c;
  if (rank < 0 || rank >= multinomial(counts)) throw std::out_of_range("rank outside the type class");
  if (alphabet <= 1) return Word(length, 0);
  const int top = counts[alphabet - 1];
  const BigInt block = binomial(length, top);
  BigInt inner_rank;
  BigInt marks_rank;
  mpz_fdiv_qr(inner_rank.get_mpz_t(), marks_rank.get_mpz_t(), rank.get_mpz_t(), block.get_mpz_t());
  Word marks = unrank_word(length, top, marks_rank);
  Word rest = multiset_unrank(counts.first(alphabet - 1), inner_rank);
  Word out(length);
  std::size_t r = 0;
  for (int i = 0; i < length; ++i) out[i] = marks[i] ? static_cast<std::uint8_t>(alphabet - 1) : rest[r++];
  return out;
}

}  // namespace coinsim
