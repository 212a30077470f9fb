#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "coinsim/document.hpp"
#include "coinsim/expression.hpp"
#include "coinsim/monte_carlo.hpp"

using namespace coinsim;
using nlohmann::json;

namespace {

RationalFunction rf(const char* text) { return parse_rational(text); }

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no coinsim::Error thrown";
  return ErrorKind::kInvalidArgument;
}

std::vector<MachineDocument> sample_documents() {
  std::vector<MachineDocument> docs;
  for (const char* name : {"von_neumann", "square", "ratio"}) docs.emplace_back(builtin_automaton(name));
  for (const char* f : {"1/3", "(3*p^2-3*p+1)/2", "p/(1+p)"}) docs.emplace_back(rational_to_block(rf(f)));
  // Thresholds beyond 64 bits must survive the trip.
  BlockSimulation huge = rational_to_block(rf("1/3"));
  huge.r = 40;
  huge.d = {BigInt("35345263800")};
  huge.e = {BigInt("107507208733336176461620")};
  docs.emplace_back(huge);
  docs.emplace_back(build_sqrt_pda());
  docs.emplace_back(build_gamma_pda());
  docs.emplace_back(build_ladder_pda(rf("(1-p)/2")));
  docs.emplace_back(build_ladder_variant(rf("3/8"), rf("1/4")));
  docs.emplace_back(sqrt_dice());
  docs.emplace_back(dice_rational_to_block({parse_dice_function("(1-p1+p2)/2", 3), parse_dice_function("(1+p1-p2)/2", 3)}, 3));
  return docs;
}

json doc_json(const MachineDocument& d) { return json::parse(serialize_document(d)); }

}  // namespace

TEST(Document, RoundTripIsByteIdentical) {
  for (const MachineDocument& doc : sample_documents()) {
    const std::string once = serialize_document(doc);
    const MachineDocument back = parse_document(once);
    EXPECT_EQ(back, doc) << once;
    EXPECT_EQ(serialize_document(back), once);
    EXPECT_EQ(once.back(), '\n');
  }
}

TEST(Document, KindsAndVersion) {
  const auto docs = sample_documents();
  EXPECT_EQ(document_kind(docs[0]), "finite");
  EXPECT_EQ(document_kind(docs[3]), "block");
  EXPECT_EQ(document_kind(docs[7]), "pushdown");
  EXPECT_EQ(document_kind(docs.back()), "dice-block");
  const json j = doc_json(docs[3]);
  EXPECT_EQ(j["kind"], "block");
  EXPECT_EQ(j["version"], kDocumentVersion);
  EXPECT_TRUE(j["e"][0].is_string());
}

TEST(Document, StrictParsing) {
  const auto docs = sample_documents();
  for (const MachineDocument& doc : docs) {
    json extra = doc_json(doc);
    extra["comment"] = "hi";
    EXPECT_EQ(kind_of([&] { parse_document(extra.dump()); }), ErrorKind::kParseError);
    json missing = doc_json(doc);
    missing.erase("start");
    missing.erase("k");
    missing.erase("alphabet");
    EXPECT_EQ(kind_of([&] { parse_document(missing.dump()); }), ErrorKind::kParseError);
  }
  json j = doc_json(docs[3]);
  j["version"] = 99;
  EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError);
  j = doc_json(docs[3]);
  j["kind"] = "turing";
  EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError);
  for (const char* bad_int : {"007", "-1", "1e3", "", " 3"}) {
    j = doc_json(docs[3]);
    j["e"][0] = bad_int;
    EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError) << bad_int;
  }
  j = doc_json(docs[3]);
  j["e"][0] = 3;  // numbers are not accepted for thresholds
  EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError);
  // Structurally invalid machines are rejected at load time.
  j = doc_json(docs[0]);
  j["delta"][0][0] = 17;
  EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError);
  j = doc_json(docs[9]);
  j["symbol_law"][0] = "p^2";
  EXPECT_EQ(kind_of([&] { parse_document(j.dump()); }), ErrorKind::kParseError);
  EXPECT_EQ(kind_of([] { parse_document("{\"kind\": \"finite\""); }), ErrorKind::kParseError);
  EXPECT_EQ(kind_of([] { read_document("/nonexistent/machine.json"); }), ErrorKind::kParseError);
}

TEST(Document, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "coinsim_doc_test.json";
  const MachineDocument doc = build_sqrt_pda();
  write_document(path, doc);
  EXPECT_EQ(read_document(path), doc);
  std::filesystem::remove(path);
}

TEST(Expression, DiceNames) {
  const MultiRational a = parse_dice_function("p0*p2 + p1", 3);
  const BigRational x[2] = {BigRational(1, 5), BigRational(1, 2)};
  EXPECT_EQ(a.eval(x), BigRational(3, 10) * BigRational(1, 2) + BigRational(1, 5));
  EXPECT_EQ(parse_dice_function("p", 2), parse_dice_function("p1", 2));
  EXPECT_EQ(parse_dice_function("p0", 2), parse_dice_function("1-p", 2));
  for (const char* bad : {"p3", "p", "q1", "p01"}) {
    EXPECT_EQ(kind_of([&] { parse_dice_function(bad, 3); }), ErrorKind::kSyntaxError) << bad;
  }
}

TEST(Expression, Polynomials) {
  const MultiPoly rel = parse_polynomial("(1-p)f^2 - 2f + 1", {"f", "p"});
  EXPECT_EQ(rel.total_degree(), 3);
  EXPECT_EQ(rel.coeff({2, 1}), -1);
  EXPECT_EQ(kind_of([] { parse_polynomial("f/p", {"f", "p"}); }), ErrorKind::kSyntaxError);
  EXPECT_EQ(kind_of([] { parse_polynomial("f/2", {"f", "p"}); }), ErrorKind::kSyntaxError);
}

TEST(MonteCarlo, ReportInvariants) {
  MonteCarloConfig c;
  c.p = 0.3;
  c.n = 50000;
  c.target = 0.5;
  const MonteCarloReport r = simulate(builtin_automaton("von_neumann"), c);
  EXPECT_EQ(r.n_trials, 50000u);
  EXPECT_DOUBLE_EQ(r.estimate, double(r.successes) / r.n_trials);
  EXPECT_DOUBLE_EQ(r.standard_error, std::sqrt(r.estimate * (1 - r.estimate) / r.n_trials));
  EXPECT_DOUBLE_EQ(*r.z_score, (r.estimate - 0.5) / std::sqrt(0.25 / r.n_trials));
  EXPECT_EQ(r.label_counts[0] + r.label_counts[1], r.n_trials);
  EXPECT_DOUBLE_EQ(r.mean_bits_consumed, double(r.total_bits) / r.attempted);
  // A two-toss round succeeds with probability 2pq, so 1/(pq) bits on average.
  EXPECT_NEAR(r.mean_bits_consumed, 1 / (0.3 * 0.7), 0.05);

  const json j = json::parse(report_json(r));
  for (const char* key : {"n_trials", "successes", "estimate", "target", "standard_error", "z_score",
                          "mean_bits_consumed", "seed", "p"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(kind_of([&] {
              MonteCarloConfig bad = c;
              bad.p = 1.0;
              simulate(builtin_automaton("square"), bad);
            }),
            ErrorKind::kInvalidRange);
  EXPECT_EQ(kind_of([&] {
              MonteCarloConfig bad = c;
              bad.n = 0;
              simulate(builtin_automaton("square"), bad);
            }),
            ErrorKind::kInvalidArgument);
}

TEST(MonteCarlo, ParallelEqualsSerialAndRepeats) {
  MonteCarloConfig c;
  c.p = 0.62;
  c.n = 20000;
  c.seed = 1234;
  c.target = 0.7;
  for (const MachineDocument& doc : sample_documents()) {
    if (const auto* d = std::get_if<DiceBlockSimulation>(&doc); d && d->alphabet != 2) {
      EXPECT_EQ(kind_of([&] { simulate(doc, c); }), ErrorKind::kAlphabetMismatch);
      continue;
    }
    if (const auto* b = std::get_if<BlockSimulation>(&doc); b && b->r == 40) continue;  // not a real machine
    if (std::holds_alternative<PushdownCoinAutomaton>(doc)) c.step_cap = 20000;
    const std::string a = report_json(simulate(doc, c));
    EXPECT_EQ(report_json(simulate(doc, c)), a);
    EXPECT_EQ(report_json(simulate_serial(doc, c)), a);
    c.step_cap = 0;
  }
  MonteCarloConfig other = c;
  other.seed = 1235;
  EXPECT_NE(report_json(simulate(builtin_automaton("ratio"), c)),
            report_json(simulate(builtin_automaton("ratio"), other)));
}
