#include "coinsim/monte_carlo.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace coinsim {

namespace {

struct Outcome {
  int label;  // -1: did not halt
  std::uint64_t bits;
};

struct Trial {
  int labels = 2;
  std::uint64_t step_cap = 0;
  std::function<Outcome(std::uint64_t)> run;
};

Trial make_trial(const MachineDocument& doc, const MonteCarloConfig& c) {
  if (!(c.p > 0.0 && c.p < 1.0)) throw Error(ErrorKind::kInvalidRange, "bias must lie in (0,1)");
  if (c.n == 0) throw Error(ErrorKind::kInvalidArgument, "need at least one trial");
  const double p = c.p;
  const std::uint64_t seed = c.seed;
  Trial t;
  if (const auto* a = std::get_if<FiniteCoinAutomaton>(&doc)) {
    auto va = std::make_shared<ValidatedAutomaton>(validate(*a));
    if (va->machine().alphabet_size != 2) throw Error(ErrorKind::kAlphabetMismatch, "simulation tosses a coin");
    t.labels = std::max(2, va->machine().label_count());
    t.step_cap = c.step_cap ? c.step_cap : kDefaultAutomatonStepCap;
    t.run = [va, seed, p, cap = t.step_cap](std::uint64_t i) {
      BitSource src(seed, i, p);
      const RunResult r = run(*va, src, cap);
      return Outcome{r.label, r.consumed};
    };
  } else if (const auto* b = std::get_if<BlockSimulation>(&doc)) {
    auto runner = std::make_shared<BlockRunner>(*b);
    t.step_cap = c.step_cap ? c.step_cap : kDefaultBlockCap;
    t.run = [runner, seed, p, cap = t.step_cap](std::uint64_t i) {
      BitSource src(seed, i, p);
      const BlockRunResult r = runner->run(src, cap);
      return Outcome{r.bit, r.consumed};
    };
  } else if (const auto* d = std::get_if<DiceBlockSimulation>(&doc)) {
    if (d->alphabet != 2) throw Error(ErrorKind::kAlphabetMismatch, "simulation tosses a coin; the dice reads more letters");
    auto sim = std::make_shared<DiceBlockSimulation>(*d);
    t.labels = d->outputs();
    t.step_cap = c.step_cap ? c.step_cap : kDefaultBlockCap;
    t.run = [sim, seed, p, cap = t.step_cap](std::uint64_t i) {
      BitSource src(seed, i, p);
      const DiceRunResult r = run_dice(*sim, src, cap);
      return Outcome{r.label, r.consumed};
    };
  } else {
    const auto& m = std::get<PushdownCoinAutomaton>(doc);
    auto runner = std::make_shared<PdaRunner>(m);
    t.step_cap = c.step_cap ? c.step_cap : kDefaultPdaStepCap;
    if (m.symbol_law.empty()) {
      t.run = [runner, seed, p, cap = t.step_cap](std::uint64_t i) {
        BitSource src(seed, i, p);
        const PdaRunResult r = runner->run(src, cap);
        return Outcome{r.label, r.consumed};
      };
    } else {
      auto law = std::make_shared<std::vector<double>>(symbol_probabilities(m, p));
      t.run = [runner, law, seed, cap = t.step_cap](std::uint64_t i) {
        LetterSource src(seed, i, *law);
        const PdaRunResult r = runner->run(src, cap);
        return Outcome{r.label, r.consumed};
      };
    }
  }
  return t;
}

// counts layout: [0, labels) label tallies, then did-not-halt, then bits.
void tally(std::vector<std::uint64_t>& counts, int labels, const Outcome& o) {
  if (o.label < 0) {
    ++counts[labels];
  } else {
    ++counts[o.label];
  }
  counts[labels + 1] += o.bits;
}

MonteCarloReport finish(const MachineDocument& doc, const MonteCarloConfig& c, const Trial& t,
                        const std::vector<std::uint64_t>& counts) {
  MonteCarloReport r;
  r.kind = std::string(document_kind(doc));
  r.p = c.p;
  r.seed = c.seed;
  r.step_cap = t.step_cap;
  r.attempted = c.n;
  r.label_counts.assign(counts.begin(), counts.begin() + t.labels);
  r.did_not_halt = counts[t.labels];
  r.total_bits = counts[t.labels + 1];
  r.n_trials = r.attempted - r.did_not_halt;
  r.successes = t.labels > 1 ? r.label_counts[1] : 0;
  if (r.n_trials > 0) {
    const double n = static_cast<double>(r.n_trials);
    r.estimate = static_cast<double>(r.successes) / n;
    r.standard_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
    r.target = c.target;
    if (c.target) {
      const double sigma = std::sqrt(*c.target * (1.0 - *c.target) / n);
      r.z_score = sigma > 0.0 ? (r.estimate - *c.target) / sigma : 0.0;
    }
  } else {
    r.target = c.target;
  }
  r.mean_bits_consumed = static_cast<double>(r.total_bits) / static_cast<double>(r.attempted);
  return r;
}

}  // namespace

MonteCarloReport simulate_serial(const MachineDocument& doc, const MonteCarloConfig& config) {
  const Trial t = make_trial(doc, config);
  std::vector<std::uint64_t> counts(t.labels + 2, 0);
  for (std::uint64_t i = 0; i < config.n; ++i) tally(counts, t.labels, t.run(i));
  return finish(doc, config, t, counts);
}

MonteCarloReport simulate(const MachineDocument& doc, const MonteCarloConfig& config) {
  const Trial t = make_trial(doc, config);
  std::vector<std::uint64_t> counts(t.labels + 2, 0);
  std::exception_ptr error;
  const auto n = static_cast<std::int64_t>(config.n);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(counts.size(), 0);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        tally(local, t.labels, t.run(static_cast<std::uint64_t>(i)));
      } catch (...) {
#pragma omp critical(coinsim_mc_error)
        if (!error) error = std::current_exception();
      }
    }
#pragma omp critical(coinsim_mc_reduce)
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += local[k];
  }
  if (error) std::rethrow_exception(error);
  return finish(doc, config, t, counts);
}

std::string report_json(const MonteCarloReport& r) {
  nlohmann::json j = {{"kind", r.kind},
                      {"p", r.p},
                      {"seed", r.seed},
                      {"step_cap", r.step_cap},
                      {"attempted", r.attempted},
                      {"n_trials", r.n_trials},
                      {"did_not_halt", r.did_not_halt},
                      {"successes", r.successes},
                      {"label_counts", r.label_counts},
                      {"total_bits", r.total_bits},
                      {"estimate", r.estimate},
                      {"standard_error", r.standard_error},
                      {"mean_bits_consumed", r.mean_bits_consumed}};
  j["target"] = r.target ? nlohmann::json(*r.target) : nlohmann::json(nullptr);
  j["z_score"] = r.z_score ? nlohmann::json(*r.z_score) : nlohmann::json(nullptr);
  return j.dump(2) + "\n";
}

std::string report_text(const MonteCarloReport& r) {
  std::ostringstream out;
  out.precision(6);
  out << "machine        " << r.kind << "\n"
      << "bias p         " << r.p << "\n"
      << "seed           " << r.seed << "\n"
      << "trials         " << r.n_trials << " of " << r.attempted << " halted";
  if (r.did_not_halt) out << " (" << r.did_not_halt << " hit the step cap " << r.step_cap << ")";
  out << "\n"
      << "successes      " << r.successes << "\n"
      << "estimate       " << r.estimate << " +/- " << r.standard_error << "\n";
  if (r.target) out << "target         " << *r.target << "  z = " << *r.z_score << "\n";
  out << "mean bits      " << r.mean_bits_consumed << "\n";
  if (r.label_counts.size() > 2) {
    out << "label counts  ";
    for (auto c : r.label_counts) out << " " << c;
    out << "\n";
  }
  return out.str();
}

}  // namespace coinsim
