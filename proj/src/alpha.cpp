#include "coinsim/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coinsim {

double AlphaSystem::min_goodness() const {
  return goodness.empty() ? 1.0 : *std::min_element(goodness.begin(), goodness.end());
}

std::pair<int, int> AlphaSystem::worst_pair() const {
  const auto it = std::min_element(goodness.begin(), goodness.end());
  const int i = static_cast<int>(it - goodness.begin());
  return {i / states, i % states};
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Newton is used when the support is at most this large; beyond it only the
// plain iteration runs, since the Jacobian is dense.
constexpr std::size_t kMaxNewtonVariables = 2000;
constexpr double kPolishThreshold = 1e-6;

struct Layout {
  int states;
  int symbols;
  std::size_t size() const { return static_cast<std::size_t>(symbols) * states * states; }
  std::size_t idx(int b, int s, int s2) const { return (static_cast<std::size_t>(b) * states + s) * states + s2; }
};

std::vector<Eigen::MatrixXd> matrices_of(const Layout& lay, std::span<const double> x) {
  std::vector<Eigen::MatrixXd> mats(lay.symbols, Eigen::MatrixXd(lay.states, lay.states));
  for (int b = 0; b < lay.symbols; ++b) {
    for (int s = 0; s < lay.states; ++s) {
      for (int t = 0; t < lay.states; ++t) mats[b](s, t) = x[lay.idx(b, s, t)];
    }
  }
  return mats;
}

// F(x) and, if jac is given, its dense Jacobian dF/dx.
void evaluate(const PushdownCoinAutomaton& m, std::span<const double> law, std::span<const double> x,
              std::vector<double>& fx, Eigen::MatrixXd* jac) {
  const Layout lay{m.state_count, m.stack_alphabet};
  const int n_states = lay.states;
  const auto mats = matrices_of(lay, x);
  fx.assign(lay.size(), 0.0);
  if (jac) jac->setZero(static_cast<Eigen::Index>(lay.size()), static_cast<Eigen::Index>(lay.size()));
  std::vector<Eigen::RowVectorXd> prefix;
  std::vector<Eigen::MatrixXd> suffix;
  for (int b = 0; b < lay.symbols; ++b) {
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < m.input_alphabet; ++a) {
        const double w = law[a];
        if (w <= 0.0) continue;
        const PdaTransition& t = m.transition(s, a, b);
        const int r = static_cast<int>(t.push.size());
        if (r == 0) {
          fx[lay.idx(b, s, t.next)] += w;
          continue;
        }
        prefix.assign(r + 1, Eigen::RowVectorXd::Zero(n_states));
        prefix[0](t.next) = 1.0;
        for (int i = 1; i <= r; ++i) prefix[i] = prefix[i - 1] * mats[t.push[i - 1]];
        for (int s2 = 0; s2 < n_states; ++s2) fx[lay.idx(b, s, s2)] += w * prefix[r](s2);
        if (!jac) continue;
        suffix.assign(r + 1, Eigen::MatrixXd::Identity(n_states, n_states));
        for (int i = r; i >= 1; --i) suffix[i - 1] = mats[t.push[i - 1]] * suffix[i];
        // d/d M_c[u, v] of prefix[i-1] M_c suffix[i] at position i.
        for (int i = 1; i <= r; ++i) {
          const int c = t.push[i - 1];
          for (int u = 0; u < n_states; ++u) {
            const double left = prefix[i - 1](u);
            if (left == 0.0) continue;
            for (int v = 0; v < n_states; ++v) {
              for (int s2 = 0; s2 < n_states; ++s2) {
                const double right = suffix[i](v, s2);
                if (right != 0.0) (*jac)(lay.idx(b, s, s2), lay.idx(c, u, v)) += w * left * right;
              }
            }
          }
        }
      }
    }
  }
}

// Variables that are positive in the least fixed point.
std::vector<std::size_t> support_of(const PushdownCoinAutomaton& m, std::span<const double> law, const Layout& lay) {
  std::vector<double> ind(lay.size(), 0.0);
  std::vector<double> fx;
  for (;;) {
    evaluate(m, law, ind, fx, nullptr);
    bool changed = false;
    for (std::size_t i = 0; i < ind.size(); ++i) {
      if (fx[i] > 0.0 && ind[i] == 0.0) {
        ind[i] = 1.0;
        changed = true;
      }
    }
    if (!changed) break;
  }
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < ind.size(); ++i) {
    if (ind[i] > 0.0) support.push_back(i);
  }
  return support;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> goodness_of(const Layout& lay, std::span<const double> x) {
  std::vector<double> g(static_cast<std::size_t>(lay.symbols) * lay.states, 0.0);
  for (int b = 0; b < lay.symbols; ++b) {
    for (int s = 0; s < lay.states; ++s) {
      double sum = 0.0;
      for (int s2 = 0; s2 < lay.states; ++s2) sum += x[lay.idx(b, s, s2)];
      g[static_cast<std::size_t>(b) * lay.states + s] = sum;
    }
  }
  return g;
}

[[noreturn]] void iter_cap_hit(std::uint64_t cap, double change) {
  throw Error(ErrorKind::kIterCapExceeded,
              "alpha iteration did not settle within " + std::to_string(cap) + " iterations (last change " +
                  std::to_string(change) + ")");
}

void solve_kleene(const PushdownCoinAutomaton& m, std::span<const double> law, double tol, std::uint64_t iter_cap,
                  AlphaSystem& out) {
  std::vector<double>& x = out.alpha;
  std::vector<double> fx;
  for (;;) {
    if (out.iterations >= iter_cap) iter_cap_hit(iter_cap, out.last_change);
    evaluate(m, law, x, fx, nullptr);
    ++out.iterations;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (fx[i] < x[i] - 8 * kEps || fx[i] > 1.0 + 8 * kEps) {
        throw std::logic_error("alpha iteration lost monotonicity");
      }
    }
    out.last_change = sup_distance(fx, x);
    x = fx;
    if (out.last_change < tol) return;
  }
}

void solve_newton(const PushdownCoinAutomaton& m, std::span<const double> law, double tol, std::uint64_t iter_cap,
                  const std::vector<std::size_t>& support, AlphaSystem& out) {
  std::vector<double>& x = out.alpha;
  const auto n = static_cast<Eigen::Index>(support.size());
  std::vector<double> fx;
  Eigen::MatrixXd jac;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs(n);
  for (;;) {
    evaluate(m, law, x, fx, &jac);
    const double residual = sup_distance(fx, x);
    if (residual <= 8 * kEps) return;
    if (out.iterations >= iter_cap) iter_cap_hit(iter_cap, out.last_change);
    for (Eigen::Index i = 0; i < n; ++i) {
      rhs(i) = fx[support[i]] - x[support[i]];
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - jac(support[i], support[j]);
    }
    const Eigen::VectorXd delta = a.partialPivLu().solve(rhs);
    const bool usable = delta.allFinite() && delta.minCoeff() > -1e-9;
    std::vector<double> next = x;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::size_t k = support[i];
      const double candidate = usable ? x[k] + delta(i) : fx[k];
      next[k] = std::max(x[k], std::clamp(candidate, 0.0, 1.0));
    }
    out.last_change = sup_distance(next, x);
    x = std::move(next);
    ++out.iterations;
    if (out.last_change < tol) return;
  }
}

// Gauss-Newton on F(x) = x together with goodness = 1 for nearly good pairs.
// The extra rows pin down the direction left flat by a critical (null
// recurrent) walk, where F - I is singular at the solution.
bool polish(const PushdownCoinAutomaton& m, std::span<const double> law, const std::vector<std::size_t>& support,
            AlphaSystem& out) {
  const Layout lay{m.state_count, m.stack_alphabet};
  std::vector<int> good;
  for (std::size_t i = 0; i < out.goodness.size(); ++i) {
    if (out.goodness[i] >= 1.0 - kPolishThreshold) good.push_back(static_cast<int>(i));
  }
  if (good.empty()) return false;
  const auto n = static_cast<Eigen::Index>(support.size());
  const auto rows = n + static_cast<Eigen::Index>(good.size());
  std::vector<Eigen::Index> column_of(lay.size(), -1);
  for (Eigen::Index j = 0; j < n; ++j) column_of[support[j]] = j;

  std::vector<double> y = out.alpha;
  std::vector<double> fy;
  Eigen::MatrixXd jac;
  Eigen::MatrixXd a(rows, n);
  Eigen::VectorXd g(rows);
  for (int it = 0; it < 50; ++it) {
    evaluate(m, law, y, fy, &jac);
    a.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i) = fy[support[i]] - y[support[i]];
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = jac(support[i], support[j]) - (i == j ? 1.0 : 0.0);
    }
    for (std::size_t r = 0; r < good.size(); ++r) {
      const int b = good[r] / lay.states;
      const int s = good[r] % lay.states;
      double sum = -1.0;
      for (int s2 = 0; s2 < lay.states; ++s2) {
        const Eigen::Index j = column_of[lay.idx(b, s, s2)];
        if (j < 0) continue;
        sum += y[lay.idx(b, s, s2)];
        a(n + static_cast<Eigen::Index>(r), j) = 1.0;
      }
      g(n + static_cast<Eigen::Index>(r)) = sum;
    }
    if (g.lpNorm<Eigen::Infinity>() <= 16 * kEps) {
      for (double v : y) {
        if (v < -1e-12 || v > 1.0 + 1e-12) return false;
      }
      if (sup_distance(y, out.alpha) > 1e-4) return false;
      for (double& v : y) v = std::clamp(v, 0.0, 1.0);
      out.alpha = std::move(y);
      out.residual = 0.0;
      return true;
    }
    const Eigen::VectorXd step = a.colPivHouseholderQr().solve(-g);
    if (!step.allFinite()) return false;
    for (Eigen::Index j = 0; j < n; ++j) y[support[j]] += step(j);
  }
  return false;
}

}  // namespace

std::vector<double> alpha_step(const PushdownCoinAutomaton& m, std::span<const double> law,
                               std::span<const double> alpha) {
  std::vector<double> fx;
  evaluate(m, law, alpha, fx, nullptr);
  return fx;
}

AlphaSystem alpha_fixed_point(const PushdownCoinAutomaton& m, double p, double tol, std::uint64_t iter_cap,
                              AlphaMethod method) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::kInvalidRange, "bias must lie in (0,1)");
  check_pushdown(m);
  const Layout lay{m.state_count, m.stack_alphabet};
  const std::vector<double> law = symbol_probabilities(m, p);
  AlphaSystem out;
  out.states = lay.states;
  out.stack_symbols = lay.symbols;
  out.p = p;
  out.alpha.assign(lay.size(), 0.0);

  const std::vector<std::size_t> support = support_of(m, law, lay);
  if (method == AlphaMethod::kNewton && support.size() <= kMaxNewtonVariables) {
    solve_newton(m, law, tol, iter_cap, support, out);
    out.goodness = goodness_of(lay, out.alpha);
    out.polished = polish(m, law, support, out);
  } else {
    solve_kleene(m, law, tol, iter_cap, out);
  }
  std::vector<double> fx;
  evaluate(m, law, out.alpha, fx, nullptr);
  out.residual = sup_distance(fx, out.alpha);
  out.goodness = goodness_of(lay, out.alpha);
  return out;
}

std::vector<Eigen::MatrixXd> transfer_matrices(const AlphaSystem& a) {
  return matrices_of(Layout{a.states, a.stack_symbols}, a.alpha);
}

Eigen::MatrixXd word_transfer(const std::vector<Eigen::MatrixXd>& matrices, std::span<const int> word) {
  if (matrices.empty()) throw Error(ErrorKind::kInvalidArgument, "no transfer matrices");
  const auto n = matrices.front().rows();
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(n, n);
  for (int b : word) product = product * matrices.at(b);
  return product;
}

PdaValue pda_value(const PushdownCoinAutomaton& m, double p, double tol, std::uint64_t iter_cap, AlphaMethod method) {
  PdaValue out{0.0, alpha_fixed_point(m, p, tol, iter_cap, method)};
  const AlphaSystem& a = out.alpha;
  if (a.min_goodness() < 1.0 - tol) {
    const auto [b, s] = a.worst_pair();
    throw Error(ErrorKind::kNotAlmostSurelyHalting,
                "pair (stack symbol " + std::to_string(b) + ", state " + std::to_string(s) + ") has goodness " +
                    std::to_string(a.min_goodness()) + " < 1 - tol; the machine does not halt almost surely at p = " +
                    std::to_string(p));
  }
  const Eigen::MatrixXd t = word_transfer(transfer_matrices(a), m.initial_stack);
  for (int s2 = 0; s2 < m.state_count; ++s2) {
    if (m.output[s2] == 1) out.value += t(m.start, s2);
  }
  return out;
}

AlgebraicReport verify_algebraic(std::span<const std::pair<double, double>> values, const MultiPoly& relation,
                                 double tol) {
  if (relation.variables() != 2) throw Error(ErrorKind::kInvalidArgument, "relation must be in the variables (f, p)");
  if (relation.is_zero()) throw Error(ErrorKind::kInvalidArgument, "relation is the zero polynomial");
  AlgebraicReport report;
  report.pass = true;
  for (const auto& [p, f] : values) {
    const long double point[2] = {static_cast<long double>(f), static_cast<long double>(p)};
    const double r = static_cast<double>(std::fabs(relation.eval(std::span<const long double>(point, 2))));
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
    report.pass = report.pass && r <= tol;
  }
  return report;
}

}  // namespace coinsim
