#include "coinsim/document.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coinsim/expression.hpp"

namespace coinsim {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::kParseError, what); }

// Field access on one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown fields.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) parse_fail(where_ + " must be an object");
  }

  const json& at(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) parse_fail(where_ + " is missing field \"" + key + "\"");
    seen_.insert(key);
    return *it;
  }
  bool has(const std::string& key) const { return j_.contains(key); }

  int integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) parse_fail(where_ + "." + key + " must be an integer");
    return v.get<int>();
  }
  const json& array(const std::string& key) {
    const json& v = at(key);
    if (!v.is_array()) parse_fail(where_ + "." + key + " must be an array");
    return v;
  }
  std::string string(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) parse_fail(where_ + "." + key + " must be a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) parse_fail(where_ + " has unknown field \"" + it.key() + "\"");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) parse_fail(where + " must be an integer");
  return v.get<int>();
}

std::vector<int> int_list(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + " must be an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

BigInt as_bigint(const json& v, const std::string& where) {
  if (!v.is_string()) parse_fail(where + " must be a decimal string");
  const std::string s = v.get<std::string>();
  const bool digits = !s.empty() && s.find_first_not_of("0123456789") == std::string::npos &&
                      (s.size() == 1 || s[0] != '0');
  if (!digits) parse_fail(where + " must be a nonnegative decimal integer, got \"" + s + "\"");
  return BigInt(s);
}

std::vector<BigInt> bigint_list(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + " must be an array");
  std::vector<BigInt> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_bigint(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json bigint_json(const std::vector<BigInt>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.get_str());
  return out;
}

json label_json(const std::vector<std::optional<int>>& output) {
  json out = json::array();
  for (const auto& o : output) out.push_back(o ? json(*o) : json(nullptr));
  return out;
}

std::vector<std::optional<int>> label_list(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + " must be an array");
  std::vector<std::optional<int>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_null()) {
      out.emplace_back();
    } else {
      out.emplace_back(as_int(v[i], where + "[" + std::to_string(i) + "]"));
    }
  }
  return out;
}

// ---- finite ----

json to_json(const FiniteCoinAutomaton& a) {
  return {{"alphabet_size", a.alphabet_size}, {"start", a.start}, {"delta", a.delta}, {"output", label_json(a.output)}};
}

FiniteCoinAutomaton finite_from(Fields& f) {
  FiniteCoinAutomaton a;
  a.alphabet_size = f.integer("alphabet_size");
  a.start = f.integer("start");
  const json& delta = f.array("delta");
  for (std::size_t s = 0; s < delta.size(); ++s) a.delta.push_back(int_list(delta[s], "delta[" + std::to_string(s) + "]"));
  a.output = label_list(f.at("output"), "output");
  const int n = a.state_count();
  if (n == 0 || a.alphabet_size < 2) parse_fail("finite automaton needs states and at least two symbols");
  if (static_cast<int>(a.output.size()) != n) parse_fail("output has the wrong length");
  if (a.start < 0 || a.start >= n) parse_fail("start state out of range");
  for (const auto& row : a.delta) {
    if (static_cast<int>(row.size()) != a.alphabet_size) parse_fail("delta row has the wrong length");
    for (int t : row) {
      if (t < 0 || t >= n) parse_fail("delta target out of range");
    }
  }
  for (const auto& o : a.output) {
    if (o && *o < 0) parse_fail("negative output label");
  }
  return a;
}

// ---- block ----

json to_json(const BlockSimulation& b) {
  return {{"k", b.k}, {"r", b.r}, {"d", bigint_json(b.d)}, {"e", bigint_json(b.e)}, {"polya_exponent", b.polya_exponent}};
}

BlockSimulation block_from(Fields& f) {
  BlockSimulation b;
  b.k = f.integer("k");
  b.r = f.integer("r");
  b.d = bigint_list(f.at("d"), "d");
  b.e = bigint_list(f.at("e"), "e");
  b.polya_exponent = f.integer("polya_exponent");
  if (b.k < 0 || b.r < 0 || b.polya_exponent < 0) parse_fail("k, r and polya_exponent must be nonnegative");
  if (static_cast<int>(b.d.size()) != b.k + 1 || static_cast<int>(b.e.size()) != b.k + 1) {
    parse_fail("d and e must have k + 1 entries");
  }
  const BigInt pad = binomial(2 * b.r, b.r);
  for (int i = 0; i <= b.k; ++i) {
    if (b.d[i] > b.e[i] || b.e[i] > binomial(b.k, i) * pad) {
      parse_fail("thresholds violate d_i <= e_i <= C(k,i) C(2r,r) at i = " + std::to_string(i));
    }
  }
  return b;
}

// ---- pushdown ----

json to_json(const PushdownCoinAutomaton& m) {
  json transitions = json::array();
  for (const auto& t : m.transitions) transitions.push_back({{"next", t.next}, {"push", t.push}});
  json law = json::array();
  for (const auto& f : m.symbol_law) law.push_back(f.to_string());
  return {{"states", m.state_count},
          {"input_alphabet", m.input_alphabet},
          {"stack_alphabet", m.stack_alphabet},
          {"start", m.start},
          {"initial_stack", m.initial_stack},
          {"transitions", transitions},
          {"output", label_json(m.output)},
          {"symbol_law", law}};
}

PushdownCoinAutomaton pushdown_from(Fields& f) {
  PushdownCoinAutomaton m;
  m.state_count = f.integer("states");
  m.input_alphabet = f.integer("input_alphabet");
  m.stack_alphabet = f.integer("stack_alphabet");
  m.start = f.integer("start");
  m.initial_stack = int_list(f.at("initial_stack"), "initial_stack");
  const json& transitions = f.array("transitions");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    Fields t(transitions[i], "transitions[" + std::to_string(i) + "]");
    m.transitions.push_back({t.integer("next"), int_list(t.at("push"), "push")});
    t.finish();
  }
  m.output = label_list(f.at("output"), "output");
  const json& law = f.array("symbol_law");
  for (std::size_t i = 0; i < law.size(); ++i) {
    if (!law[i].is_string()) parse_fail("symbol_law entries must be expression strings");
    try {
      m.symbol_law.push_back(parse_rational(law[i].get<std::string>()));
    } catch (const Error& e) {
      parse_fail(std::string("symbol_law[") + std::to_string(i) + "]: " + e.what());
    }
  }
  try {
    check_pushdown(m);
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  return m;
}

// ---- dice-block ----

json to_json(const DiceBlockSimulation& sim) {
  json stages = json::array();
  for (const auto& st : sim.stages) {
    json thresholds = json::array();
    for (const auto& [type, de] : st.thresholds) {
      thresholds.push_back({{"type", type}, {"d", de.first.get_str()}, {"e", de.second.get_str()}});
    }
    stages.push_back({{"k", st.k}, {"r", st.r}, {"polya_exponent", st.polya_exponent}, {"thresholds", thresholds}});
  }
  return {{"alphabet", sim.alphabet}, {"labels", sim.labels}, {"stages", stages}};
}

DiceBlockSimulation dice_from(Fields& f) {
  DiceBlockSimulation sim;
  sim.alphabet = f.integer("alphabet");
  sim.labels = int_list(f.at("labels"), "labels");
  if (sim.alphabet < 2) parse_fail("dice alphabet must have at least two letters");
  const json& stages = f.array("stages");
  if (stages.size() + 1 != sim.labels.size()) parse_fail("labels must have one more entry than stages");
  std::vector<int> sorted = sim.labels;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) parse_fail("labels must be a permutation of 0 .. stages");
  }
  const BigInt unused;
  for (std::size_t j = 0; j < stages.size(); ++j) {
    const std::string where = "stages[" + std::to_string(j) + "]";
    Fields sf(stages[j], where);
    DiceStage st;
    st.alphabet = sim.alphabet;
    st.k = sf.integer("k");
    st.r = sf.integer("r");
    st.polya_exponent = sf.integer("polya_exponent");
    if (st.k < 0 || st.r < 0 || st.polya_exponent < 0) parse_fail(where + ": k, r, polya_exponent must be >= 0");
    const json& thresholds = sf.array("thresholds");
    const BigInt pad = balanced_padding_count(sim.alphabet, st.r);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      const std::string w = where + ".thresholds[" + std::to_string(i) + "]";
      Fields tf(thresholds[i], w);
      Exponents type = int_list(tf.at("type"), w + ".type");
      BigInt d = as_bigint(tf.at("d"), w + ".d");
      BigInt e = as_bigint(tf.at("e"), w + ".e");
      tf.finish();
      int total = 0;
      for (int c : type) {
        if (c < 0) parse_fail(w + ": negative letter count");
        total += c;
      }
      if (static_cast<int>(type.size()) != sim.alphabet || total != st.k) parse_fail(w + ": type must count k letters");
      if (d > e || e > multinomial(type) * pad) parse_fail(w + ": thresholds out of range");
      if (!st.thresholds.emplace(std::move(type), std::make_pair(d, e)).second) parse_fail(w + ": duplicate type");
    }
    sf.finish();
    sim.stages.push_back(std::move(st));
  }
  return sim;
}

}  // namespace

std::string_view document_kind(const MachineDocument& doc) {
  static constexpr std::string_view kKinds[] = {"finite", "block", "pushdown", "dice-block"};
  return kKinds[doc.index()];
}

std::string serialize_document(const MachineDocument& doc) {
  json j = std::visit([](const auto& m) { return to_json(m); }, doc);
  j["kind"] = std::string(document_kind(doc));
  j["version"] = kDocumentVersion;
  return j.dump(2) + "\n";
}

MachineDocument parse_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  try {
    Fields f(j, "document");
    const std::string kind = f.string("kind");
    const int version = f.integer("version");
    if (version != kDocumentVersion) parse_fail("unsupported document version " + std::to_string(version));
    MachineDocument doc;
    if (kind == "finite") {
      doc = finite_from(f);
    } else if (kind == "block") {
      doc = block_from(f);
    } else if (kind == "pushdown") {
      doc = pushdown_from(f);
    } else if (kind == "dice-block") {
      doc = dice_from(f);
    } else {
      parse_fail("unknown document kind \"" + kind + "\"");
    }
    f.finish();
    return doc;
  } catch (const json::exception& e) {
    parse_fail(std::string("bad document: ") + e.what());
  }
}

MachineDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

void write_document(const std::filesystem::path& path, const MachineDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << serialize_document(doc);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "failed writing " + path.string());
}

}  // namespace coinsim
