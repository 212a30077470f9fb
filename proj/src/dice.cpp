#include "coinsim/dice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coinsim {

BigInt balanced_padding_count(int alphabet, int r) {
  return multinomial(std::vector<int>(alphabet, r));
}

DiceStage build_dice_stage(const MultiBernsteinPair& b) {
  DiceStage stage{b.alphabet, b.degree, 0, b.thresholds, b.polya_exponent};
  bool any_positive = false;
  for (const auto& [type, de] : b.thresholds) {
    if (de.first < 0 || de.first > de.second) {
      throw Error(ErrorKind::kInvalidArgument, "dice thresholds violate 0 <= d <= e");
    }
    any_positive = any_positive || de.second > 0;
  }
  if (!any_positive) throw Error(ErrorKind::kInvalidArgument, "dice thresholds have no positive e");
  for (;; ++stage.r) {
    const BigInt pad = balanced_padding_count(stage.alphabet, stage.r);
    bool fits = true;
    for (const auto& [type, de] : stage.thresholds) {
      if (de.second > multinomial(type) * pad) {
        fits = false;
        break;
      }
    }
    if (fits) return stage;
  }
}

StageOutcome classify_stage(const DiceStage& stage, std::span<const std::uint8_t> segment) {
  if (static_cast<int>(segment.size()) != stage.length()) {
    throw Error(ErrorKind::kLengthMismatch, "segment length differs from the stage length");
  }
  const auto payload = segment.first(stage.k);
  const auto padding = segment.subspan(stage.k);
  std::vector<int> padding_counts(stage.alphabet, 0);
  for (auto letter : padding) ++padding_counts.at(letter);
  for (int c : padding_counts) {
    if (c != stage.r) return StageOutcome::kDiscard;
  }
  Exponents type(stage.alphabet, 0);
  for (auto letter : payload) ++type.at(letter);
  auto it = stage.thresholds.find(type);
  if (it == stage.thresholds.end()) return StageOutcome::kDiscard;
  const BigInt position = multiset_rank(payload, stage.alphabet) * balanced_padding_count(stage.alphabet, stage.r) +
                          multiset_rank(padding, stage.alphabet) + 1;
  if (position <= it->second.first) return StageOutcome::kFirst;
  if (position <= it->second.second) return StageOutcome::kRest;
  return StageOutcome::kDiscard;
}

int DiceBlockSimulation::block_length() const noexcept {
  int length = 0;
  for (const auto& stage : stages) length += stage.length();
  return length;
}

std::optional<int> classify_dice(const DiceBlockSimulation& sim, std::span<const std::uint8_t> word) {
  if (static_cast<int>(word.size()) != sim.block_length()) {
    throw Error(ErrorKind::kLengthMismatch, "block length differs from the dice simulation");
  }
  std::optional<int> label;
  std::size_t offset = 0;
  for (std::size_t j = 0; j < sim.stages.size(); ++j) {
    const int length = sim.stages[j].length();
    const StageOutcome out = classify_stage(sim.stages[j], word.subspan(offset, length));
    offset += length;
    if (out == StageOutcome::kDiscard) return std::nullopt;
    if (out == StageOutcome::kFirst && !label) label = sim.labels[j];
  }
  return label ? label : std::optional<int>(sim.labels.back());
}

namespace {

MultiRational one_function(int variables) {
  return MultiRational(MultiPoly::constant(variables, 1));
}

void check_order(std::vector<int>& order, int outputs) {
  if (order.empty()) {
    order.resize(outputs);
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < outputs; ++i) {
    if (static_cast<int>(sorted.size()) != outputs || sorted[i] != i) {
      throw Error(ErrorKind::kInvalidArgument, "split order must be a permutation of the outputs");
    }
  }
}

// Homogeneous poly in x_0..x_{s-1} to affine coordinates via x_0 = 1 - sum.
MultiPoly dehomogenize_multi(const MultiPoly& poly) {
  const int s = poly.variables();
  MultiPoly out(s - 1);
  MultiPoly base = MultiPoly::constant(s - 1, 1);
  for (int i = 0; i < s - 1; ++i) base -= MultiPoly::variable(s - 1, i);
  std::vector<MultiPoly> powers{MultiPoly::constant(s - 1, 1)};
  for (const auto& [e, c] : poly.terms()) {
    while (static_cast<int>(powers.size()) <= e[0]) powers.push_back(powers.back() * base);
    Exponents rest(e.begin() + 1, e.end());
    MultiPoly term(s - 1);
    term.add_term(rest, c);
    out += term * powers[e[0]];
  }
  return out;
}

}  // namespace

DiceBlockSimulation dice_rational_to_block(const std::vector<MultiRational>& fs, int alphabet, int cap,
                                           std::vector<int> order) {
  const int outputs = static_cast<int>(fs.size());
  if (outputs < 2) throw Error(ErrorKind::kInvalidArgument, "a dice simulation needs at least two outputs");
  if (alphabet < 2) throw Error(ErrorKind::kInvalidArgument, "alphabet must have at least two letters");
  for (const auto& f : fs) {
    if (f.variables() != alphabet - 1) {
      throw Error(ErrorKind::kAlphabetMismatch, "output function arity does not match the alphabet");
    }
  }
  check_order(order, outputs);
  MultiRational total(MultiPoly(alphabet - 1), MultiPoly::constant(alphabet - 1, 1));
  for (const auto& f : fs) total = total + f;
  if (!(total == one_function(alphabet - 1))) {
    throw Error(ErrorKind::kNotAProbabilityVector, "output functions sum to " + total.to_string() + ", not 1");
  }

  DiceBlockSimulation sim;
  sim.alphabet = alphabet;
  sim.labels = order;
  std::vector<MultiRational> remaining;
  for (int label : order) remaining.push_back(fs[label]);
  while (remaining.size() >= 2) {
    const MultiRational head = remaining.front();
    sim.stages.push_back(build_dice_stage(multi_bernstein_from_rational(head, alphabet, cap)));
    const MultiRational rest = one_function(alphabet - 1) - head;
    std::vector<MultiRational> next;
    for (std::size_t i = 1; i < remaining.size(); ++i) next.push_back(remaining[i] / rest);
    remaining = std::move(next);
  }
  return sim;
}

DiceBlockSimulation dice_rational_to_block(const std::vector<RationalFunction>& fs, int cap, std::vector<int> order) {
  std::vector<MultiRational> lifted;
  for (const auto& f : fs) lifted.push_back(MultiRational::from_univariate(f));
  return dice_rational_to_block(lifted, 2, cap, std::move(order));
}

std::vector<MultiRational> dice_exact_distribution(const DiceBlockSimulation& sim) {
  const int vars = sim.alphabet - 1;
  std::vector<MultiRational> out(sim.outputs(), MultiRational(MultiPoly(vars), MultiPoly::constant(vars, 1)));
  MultiRational reach = one_function(vars);
  for (std::size_t j = 0; j < sim.stages.size(); ++j) {
    const DiceStage& stage = sim.stages[j];
    MultiPoly d(sim.alphabet);
    MultiPoly e(sim.alphabet);
    for (const auto& [type, de] : stage.thresholds) {
      d.add_term(type, de.first);
      e.add_term(type, de.second);
    }
    const MultiRational first(dehomogenize_multi(d), dehomogenize_multi(e));
    out[sim.labels[j]] = reach * first;
    reach = reach * (one_function(vars) - first);
  }
  out[sim.labels.back()] = reach;
  return out;
}

std::vector<MultiRational> dice_brute_force_distribution(const DiceBlockSimulation& sim) {
  const int s = sim.alphabet;
  const int length = sim.block_length();
  double words_d = std::pow(static_cast<double>(s), length);
  if (words_d > static_cast<double>(1 << 22)) {
    throw Error(ErrorKind::kInvalidArgument, "dice block too long to enumerate");
  }
  const std::uint64_t words = static_cast<std::uint64_t>(words_d);
  std::vector<std::map<Exponents, std::uint64_t>> counts(sim.outputs());
  Word word(length);
  Exponents type(s);
  for (std::uint64_t index = 0; index < words; ++index) {
    std::uint64_t rest = index;
    std::fill(type.begin(), type.end(), 0);
    for (int i = length - 1; i >= 0; --i) {
      word[i] = static_cast<std::uint8_t>(rest % s);
      rest /= s;
      ++type[word[i]];
    }
    if (auto label = classify_dice(sim, word)) ++counts[*label][type];
  }
  MultiPoly accepted(s);
  std::vector<MultiPoly> per_label(sim.outputs(), MultiPoly(s));
  for (int l = 0; l < sim.outputs(); ++l) {
    for (const auto& [t, c] : counts[l]) per_label[l].add_term(t, BigInt(static_cast<unsigned long>(c)));
    accepted += per_label[l];
  }
  const MultiPoly den = dehomogenize_multi(accepted);
  std::vector<MultiRational> out;
  for (const auto& poly : per_label) out.emplace_back(dehomogenize_multi(poly), den);
  return out;
}

}  // namespace coinsim
