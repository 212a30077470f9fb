#include "coinsim/automaton.hpp"

#include <algorithm>
#include <deque>

namespace coinsim {

int FiniteCoinAutomaton::label_count() const {
  int labels = 0;
  for (const auto& o : output) {
    if (o) labels = std::max(labels, *o + 1);
  }
  return labels;
}

namespace {

void check_well_formed(const FiniteCoinAutomaton& a) {
  const int n = a.state_count();
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "automaton has no states");
  if (a.alphabet_size < 2) throw Error(ErrorKind::kInvalidArgument, "alphabet needs at least two symbols");
  if (static_cast<int>(a.output.size()) != n) {
    throw Error(ErrorKind::kInvalidArgument, "output table size differs from the state count");
  }
  if (a.start < 0 || a.start >= n) throw Error(ErrorKind::kInvalidArgument, "start state out of range");
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(a.delta[s].size()) != a.alphabet_size) {
      throw Error(ErrorKind::kInvalidArgument, "state " + std::to_string(s) + " has a short transition row");
    }
    for (int t : a.delta[s]) {
      if (t < 0 || t >= n) throw Error(ErrorKind::kInvalidArgument, "transition target out of range");
    }
    if (a.output[s]) {
      if (*a.output[s] < 0) throw Error(ErrorKind::kInvalidArgument, "negative output label");
      for (int t : a.delta[s]) {
        if (t != s) throw Error(ErrorKind::kInvalidArgument, "final state " + std::to_string(s) + " is not absorbing");
      }
    }
  }
}

}  // namespace

ValidatedAutomaton validate(const FiniteCoinAutomaton& a) {
  check_well_formed(a);
  const int n = a.state_count();

  std::vector<bool> reachable(n, false);
  std::deque<int> queue{a.start};
  reachable[a.start] = true;
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int t : a.delta[s]) {
      if (!reachable[t]) {
        reachable[t] = true;
        queue.push_back(t);
      }
    }
  }

  std::vector<int> new_index(n, -1);
  ValidatedAutomaton out;
  for (int s = 0; s < n; ++s) {
    if (reachable[s]) {
      new_index[s] = static_cast<int>(out.original_index_.size());
      out.original_index_.push_back(s);
    }
  }
  FiniteCoinAutomaton& m = out.machine_;
  m.alphabet_size = a.alphabet_size;
  m.start = new_index[a.start];
  for (int s : out.original_index_) {
    std::vector<int> row;
    for (int t : a.delta[s]) row.push_back(new_index[t]);
    m.delta.push_back(std::move(row));
    m.output.push_back(a.output[s]);
  }

  const int kept = m.state_count();
  std::vector<std::vector<int>> reverse(kept);
  for (int s = 0; s < kept; ++s) {
    for (int t : m.delta[s]) reverse[t].push_back(s);
  }
  std::vector<bool> halts(kept, false);
  for (int s = 0; s < kept; ++s) {
    if (m.output[s]) {
      halts[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop_front();
    for (int s : reverse[t]) {
      if (!halts[s]) {
        halts[s] = true;
        queue.push_back(s);
      }
    }
  }
  for (int s = 0; s < kept; ++s) {
    if (!halts[s]) {
      throw Error(ErrorKind::kNonHaltingState,
                  "state " + std::to_string(out.original_index_[s]) + " cannot reach a final state");
    }
  }
  return out;
}

std::vector<RationalFunction> extract_rational(const ValidatedAutomaton& va) {
  const FiniteCoinAutomaton& m = va.machine();
  if (m.alphabet_size != 2) {
    throw Error(ErrorKind::kAlphabetMismatch, "exact extraction is implemented for binary automata");
  }
  const int labels = m.label_count();
  std::vector<int> unknown(m.state_count(), -1);
  int n = 0;
  for (int s = 0; s < m.state_count(); ++s) {
    if (!m.output[s]) unknown[s] = n++;
  }
  if (m.output[m.start]) {
    std::vector<RationalFunction> out(labels);
    out[*m.output[m.start]] = RationalFunction(IntPolynomial{1});
    return out;
  }

  // Augmented system [A | B]: row i is F(s) - p F(delta(s,1)) - (1-p) F(delta(s,0)).
  const IntPolynomial weight[2] = {IntPolynomial{1, -1}, IntPolynomial{0, 1}};
  const int cols = n + labels;
  std::vector<std::vector<IntPolynomial>> mat(n, std::vector<IntPolynomial>(cols));
  for (int s = 0; s < m.state_count(); ++s) {
    const int i = unknown[s];
    if (i < 0) continue;
    mat[i][i] += IntPolynomial{1};
    for (int b = 0; b < 2; ++b) {
      const int t = m.delta[s][b];
      if (m.output[t]) {
        mat[i][n + *m.output[t]] += weight[b];
      } else {
        mat[i][unknown[t]] -= weight[b];
      }
    }
  }

  IntPolynomial previous{1};
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    while (pivot < n && mat[pivot][k].is_zero()) ++pivot;
    if (pivot == n) throw std::logic_error("singular harmonic system for a validated automaton");
    std::swap(mat[k], mat[pivot]);
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = 0; j < cols; ++j) {
        if (j == k) continue;
        IntPolynomial v = mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j];
        mat[i][j] = v.exact_divide(previous);
      }
      mat[i][k] = IntPolynomial{};
    }
    previous = mat[k][k];
  }

  // Every diagonal entry now equals the determinant.
  const int start = unknown[m.start];
  std::vector<RationalFunction> out;
  out.reserve(labels);
  for (int l = 0; l < labels; ++l) out.emplace_back(mat[start][n + l], mat[start][start]);
  return out;
}

namespace {

FiniteCoinAutomaton two_toss_machine(int after00, int after01, int after10, int after11) {
  // States: 0 start, 1 read 0, 2 read 1, 3 final label 0, 4 final label 1.
  // A target of 0 restarts the two-toss round.
  FiniteCoinAutomaton a;
  a.start = 0;
  a.delta = {{1, 2}, {after00, after01}, {after10, after11}, {3, 3}, {4, 4}};
  a.output = {std::nullopt, std::nullopt, std::nullopt, 0, 1};
  return a;
}

}  // namespace

FiniteCoinAutomaton builtin_automaton(std::string_view name) {
  if (name == "von_neumann") return two_toss_machine(0, 3, 4, 0);
  if (name == "square") return two_toss_machine(3, 3, 3, 4);
  if (name == "ratio") return two_toss_machine(3, 0, 0, 4);
  throw Error(ErrorKind::kUnknownName, "no built-in automaton named '" + std::string(name) + "'");
}

FiniteCoinAutomaton relabel_complement(const FiniteCoinAutomaton& a) {
  FiniteCoinAutomaton out = a;
  for (auto& o : out.output) {
    if (!o) continue;
    if (*o > 1) throw Error(ErrorKind::kInvalidArgument, "complement needs a two-label automaton");
    o = 1 - *o;
  }
  return out;
}

}  // namespace coinsim
