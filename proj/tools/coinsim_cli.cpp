// coinsim command-line front end. Every failure maps to a stable exit code:
// 0 ok, 1 mismatch, 2 range, 3 cap, 4 parse, 5 non-halting.

#include <charconv>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coinsim/alpha.hpp"
#include "coinsim/bernstein.hpp"
#include "coinsim/document.hpp"
#include "coinsim/errors.hpp"
#include "coinsim/expression.hpp"
#include "coinsim/monte_carlo.hpp"

using namespace coinsim;
using nlohmann::json;

namespace {

std::string join(const std::vector<BigInt>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].get_str();
  return out + "]";
}

json big_array(const std::vector<BigInt>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

void emit(const std::string& path, const MachineDocument& doc) {
  if (path.empty() || path == "-") {
    std::cout << serialize_document(doc);
  } else {
    write_document(path, doc);
  }
}

// A bare decimal ("0.8") or an expression in p evaluated exactly at p.
double parse_target(const std::string& text, double p) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, value); ec == std::errc() && ptr == end) return value;
  const RationalFunction f = parse_rational(text);
  return f.eval(BigRational(p)).get_d();
}

// Probability of label 1 for the machines that have a closed form.
RationalFunction closed_form(const MachineDocument& doc) {
  if (const auto* a = std::get_if<FiniteCoinAutomaton>(&doc)) {
    const auto labels = extract_rational(validate(*a));
    return labels.size() > 1 ? labels[1] : RationalFunction();
  }
  if (const auto* b = std::get_if<BlockSimulation>(&doc)) return exact_distribution(*b);
  if (const auto* d = std::get_if<DiceBlockSimulation>(&doc)) {
    if (d->alphabet == 2 && d->outputs() == 2) return dice_exact_distribution(*d)[1].to_univariate();
  }
  throw Error(ErrorKind::kInvalidArgument,
              "no closed form for a " + std::string(document_kind(doc)) + " machine; use pda-value or simulate");
}

std::vector<BigInt> parse_coeffs(const std::string& text) {
  std::vector<BigInt> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto a = item.find_first_not_of(" []");
    const auto b = item.find_last_not_of(" []");
    if (a == std::string::npos) continue;
    try {
      out.emplace_back(item.substr(a, b - a + 1));
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::kSyntaxError, "'" + item + "' is not an integer coefficient");
    }
  }
  if (out.empty()) throw Error(ErrorKind::kSyntaxError, "no coefficients given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact f(p)-coin simulation from a p-coin"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string expr, out_path, machine_path, target;
  int cap = kDefaultPolyaCap;
  double p = 0.5, tol = kDefaultAlphaTol;
  std::uint64_t n = 1'000'000, seed = 42, step_cap = 0;
  bool serial = false;

  auto* build = app.add_subcommand("build-block", "block simulation of a rational f(p)");
  build->add_option("--f", expr, "f as an expression in p")->required();
  build->add_option("--cap", cap, "largest Polya exponent tried");
  build->add_option("--out", out_path, "machine file (default: stdout)");
  build->add_flag("--json", as_json, "print the summary as JSON");

  auto* extract = app.add_subcommand("extract", "output probability of each label");
  extract->add_option("--machine", machine_path)->required();

  auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo run");
  sim->add_option("--machine", machine_path)->required();
  sim->add_option("--p", p, "bias of the input coin");
  sim->add_option("--n", n, "number of trials");
  sim->add_option("--seed", seed);
  sim->add_option("--step-cap", step_cap, "per-trial cap (0: default for the machine kind)");
  sim->add_option("--target", target, "exact value, decimal or expression in p");
  sim->add_flag("--serial", serial, "single-threaded reference run");
  sim->add_flag("--json", as_json);

  auto* verify = app.add_subcommand("verify-exact", "compare a machine with f by canonical form");
  verify->add_option("--machine", machine_path)->required();
  verify->add_option("--f", expr)->required();

  auto* value = app.add_subcommand("pda-value", "output probability of a pushdown machine");
  value->add_option("--machine", machine_path)->required();
  value->add_option("--p", p);
  value->add_option("--tol", tol);
  value->add_flag("--json", as_json);

  std::string coeffs;
  auto* polya = app.add_subcommand("polya", "Polya exponent and shifted coefficients");
  auto* polya_f = polya->add_option("--f", expr, "f(p); positivizes D, E and E - D jointly");
  polya->add_option("--coeffs", coeffs, "one homogeneous form, coefficients of p^i q^(k-i)")->excludes(polya_f);
  polya->add_option("--cap", cap);
  polya->add_flag("--json", as_json);

  std::vector<std::string> dice_fs;
  std::vector<int> order;
  int alphabet = 2;
  auto* dice = app.add_subcommand("dice-build", "block simulation of a distribution over labels");
  dice->add_option("--f", dice_fs, "one function per label, in p1 .. p{s-1} (p0 = 1 - sum)")->required();
  dice->add_option("--alphabet", alphabet, "sides of the input die");
  dice->add_option("--order", order, "order in which labels are split off");
  dice->add_option("--cap", cap);
  dice->add_option("--out", out_path);

  std::string name, g_expr, up_expr, down_expr;
  auto* builtin = app.add_subcommand("builtin", "write a built-in machine");
  builtin->add_option("name", name, "von_neumann, square, ratio, sqrt, gamma, ladder or ladder-variant")->required();
  builtin->add_option("--g", g_expr, "ladder step probability");
  builtin->add_option("--up", up_expr, "ladder-variant push probability");
  builtin->add_option("--down", down_expr, "ladder-variant pop probability");
  builtin->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ErrorKind::kParseError);
  }

  try {
    if (*build) {
      const BlockSimulation b = rational_to_block(parse_rational(expr), cap);
      if (!out_path.empty()) write_document(out_path, b);
      if (as_json) {
        json j = {{"k", b.k}, {"r", b.r}, {"polya_exponent", b.polya_exponent},
                  {"block_length", b.block_length()}, {"d", big_array(b.d)}, {"e", big_array(b.e)}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "k " << b.k << "\nr " << b.r << "\nn " << b.polya_exponent << "\nblock_length "
                  << b.block_length() << "\nd " << join(b.d) << "\ne " << join(b.e) << "\n";
      }
      if (out_path.empty() && !as_json) std::cout << serialize_document(b);
      return 0;
    }

    if (*extract) {
      const MachineDocument doc = read_document(machine_path);
      if (const auto* a = std::get_if<FiniteCoinAutomaton>(&doc)) {
        const auto labels = extract_rational(validate(*a));
        for (std::size_t i = 0; i < labels.size(); ++i) std::cout << "label " << i << ": " << labels[i].to_string() << "\n";
      } else {
        const RationalFunction f = closed_form(doc);
        std::cout << "label 0: " << (RationalFunction::constant(1) - f).to_string() << "\n"
                  << "label 1: " << f.to_string() << "\n";
      }
      return 0;
    }

    if (*sim) {
      const MachineDocument doc = read_document(machine_path);
      MonteCarloConfig config;
      config.p = p;
      config.n = n;
      config.seed = seed;
      config.step_cap = step_cap;
      if (!target.empty()) config.target = parse_target(target, p);
      const MonteCarloReport r = serial ? simulate_serial(doc, config) : simulate(doc, config);
      std::cout << (as_json ? report_json(r) : report_text(r));
      return 0;
    }

    if (*verify) {
      const RationalFunction want = parse_rational(expr);
      const RationalFunction got = closed_form(read_document(machine_path));
      if (got == want) {
        std::cout << "pass: " << got.to_string() << "\n";
        return 0;
      }
      std::cout << "fail\n  machine:  " << got.to_string() << "\n  expected: " << want.to_string() << "\n";
      return 1;
    }

    if (*value) {
      const MachineDocument doc = read_document(machine_path);
      const auto* m = std::get_if<PushdownCoinAutomaton>(&doc);
      if (!m) throw Error(ErrorKind::kInvalidArgument, "pda-value needs a pushdown machine");
      if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::kInvalidRange, "bias must lie in (0,1)");
      const PdaValue v = pda_value(*m, p, tol);
      if (as_json) {
        json j = {{"p", p}, {"value", v.value}, {"iterations", v.alpha.iterations},
                  {"min_goodness", v.alpha.min_goodness()}, {"residual", v.alpha.residual}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout.precision(17);
        std::cout << "value " << v.value << "\niterations " << v.alpha.iterations << "\nmin_goodness "
                  << v.alpha.min_goodness() << "\n";
      }
      return 0;
    }

    if (*polya) {
      std::vector<HomogeneousPoly> forms;
      std::vector<std::string> names;
      if (!coeffs.empty()) {
        HomogeneousPoly h;
        h.coeffs = parse_coeffs(coeffs);
        h.degree = static_cast<int>(h.coeffs.size()) - 1;
        forms = {h};
        names = {"P"};
      } else if (!expr.empty()) {
        const auto [d, e] = homogenize(parse_rational(expr));
        forms = {d, e, e - d};
        names = {"D", "E", "E-D"};
      } else {
        throw Error(ErrorKind::kInvalidArgument, "polya needs --f or --coeffs");
      }
      const int exponent = polya_exponent(forms, cap);
      json j = {{"exponent", exponent}};
      std::cout << (as_json ? "" : "exponent " + std::to_string(exponent) + "\n");
      for (std::size_t i = 0; i < forms.size(); ++i) {
        const HomogeneousPoly shifted = polya_shift(forms[i], exponent);
        j["forms"][names[i]] = big_array(shifted.coeffs);
        if (!as_json) std::cout << names[i] << " " << join(forms[i].coeffs) << " -> " << join(shifted.coeffs) << "\n";
      }
      if (as_json) std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (*dice) {
      std::vector<MultiRational> fs;
      for (const auto& text : dice_fs) fs.push_back(parse_dice_function(text, alphabet));
      const DiceBlockSimulation d = dice_rational_to_block(fs, alphabet, cap, order);
      std::cout << "outputs " << d.outputs() << "\nstages " << d.stages.size() << "\nblock_length "
                << d.block_length() << "\n";
      for (std::size_t i = 0; i < d.stages.size(); ++i) {
        std::cout << "stage " << i << ": k " << d.stages[i].k << " r " << d.stages[i].r << " n "
                  << d.stages[i].polya_exponent << "\n";
      }
      if (!out_path.empty()) write_document(out_path, d);
      return 0;
    }

    if (*builtin) {
      if (name == "sqrt") {
        emit(out_path, build_sqrt_pda());
      } else if (name == "gamma") {
        emit(out_path, build_gamma_pda());
      } else if (name == "ladder") {
        emit(out_path, build_ladder_pda(parse_rational(g_expr.empty() ? "(1-p)/2" : g_expr)));
      } else if (name == "ladder-variant") {
        if (up_expr.empty() || down_expr.empty()) throw Error(ErrorKind::kInvalidArgument, "ladder-variant needs --up and --down");
        emit(out_path, build_ladder_variant(parse_rational(up_expr), parse_rational(down_expr)));
      } else {
        emit(out_path, builtin_automaton(name));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
