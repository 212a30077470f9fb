#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coinsim {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: word i of stream (seed, trial) is
/// mix64(key + (i + 1) * golden), key derived from seed and trial only, so
/// any trial can be regenerated independently of every other trial.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  CounterRng(std::uint64_t seed, std::uint64_t trial) noexcept
      : key_(mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + mix64(trial + kGolden))) {}

  std::uint64_t next_u64() noexcept {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }
  /// 53-bit uniform in [0, 1).
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Anything that hands out input symbols one at a time and counts them.
template <typename S>
concept SymbolStream = requires(S s, const S cs) {
  { s.next() } -> std::convertible_to<int>;
  { cs.consumed() } -> std::convertible_to<std::uint64_t>;
};

/// i.i.d. p-coin tosses: bit = 1 iff the next 53-bit uniform is < p.
class BitSource {
 public:
  BitSource(std::uint64_t seed, std::uint64_t trial, double p)
      : rng_(seed, trial), p_(p), threshold_(static_cast<std::uint64_t>(std::ceil(std::ldexp(p, 53)))) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bias must lie in (0,1)");
  }

  int next() noexcept {
    ++consumed_;
    return (rng_.next_u64() >> 11) < threshold_ ? 1 : 0;
  }
  std::uint64_t consumed() const noexcept { return consumed_; }
  double bias() const noexcept { return p_; }

 private:
  CounterRng rng_;
  double p_;
  std::uint64_t threshold_;
  std::uint64_t consumed_ = 0;
};

/// i.i.d. letters drawn from a finite distribution (a die).
class LetterSource {
 public:
  LetterSource(std::uint64_t seed, std::uint64_t trial, std::span<const double> law) : rng_(seed, trial) {
    double acc = 0.0;
    for (double w : law) {
      if (!(w >= 0.0)) throw std::invalid_argument("letter probabilities must be nonnegative");
      acc += w;
      cumulative_.push_back(acc);
    }
    if (cumulative_.empty() || std::abs(acc - 1.0) > 1e-9) {
      throw std::invalid_argument("letter probabilities must sum to 1");
    }
  }

  int next() noexcept {
    ++consumed_;
    const double u = rng_.next_unit();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
      if (u < cumulative_[i]) return static_cast<int>(i);
    }
    return static_cast<int>(cumulative_.size() - 1);
  }
  std::uint64_t consumed() const noexcept { return consumed_; }

 private:
  CounterRng rng_;
  std::vector<double> cumulative_;
  std::uint64_t consumed_ = 0;
};

/// Fixed symbol sequence, for tests and replays. Throws once exhausted.
class ScriptedSource {
 public:
  explicit ScriptedSource(std::vector<int> symbols) : symbols_(std::move(symbols)) {}

  int next() {
    if (consumed_ >= symbols_.size()) throw std::out_of_range("scripted symbol stream exhausted");
    return symbols_[consumed_++];
  }
  std::uint64_t consumed() const noexcept { return consumed_; }

 private:
  std::vector<int> symbols_;
  std::uint64_t consumed_ = 0;
};

}  // namespace coinsim
