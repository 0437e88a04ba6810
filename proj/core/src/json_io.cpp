#include "cl12/json_io.hpp"

#include <fstream>
#include <sstream>

namespace cl12 {

namespace {

const char* op_name(Op op) {
  switch (op) {
    case Op::Atom: return "Atom";
    case Op::Equality: return "Equality";
    case Op::Top: return "Top";
    case Op::Bottom: return "Bottom";
    case Op::ParAnd: return "ParAnd";
    case Op::ParOr: return "ParOr";
    case Op::ChoAnd: return "ChoAnd";
    case Op::ChoOr: return "ChoOr";
    case Op::BlindAll: return "BlindAll";
    case Op::BlindEx: return "BlindEx";
    case Op::ChoAll: return "ChoAll";
    case Op::ChoEx: return "ChoEx";
  }
  return "?";
}

const Json& field(const Json& j, const char* camel, const char* snake = nullptr) {
  static const Json null_json;
  if (!j.is_object()) return null_json;
  if (auto it = j.find(camel); it != j.end()) return *it;
  if (snake)
    if (auto it = j.find(snake); it != j.end()) return *it;
  return null_json;
}

template <class T>
T get_or(const Json& j, const char* camel, const char* snake, T fallback) {
  const Json& v = field(j, camel, snake);
  if (v.is_null()) return fallback;
  try {
    return v.get<T>();
  } catch (const Json::exception& ex) {
    throw JsonFormatError(std::string("field ") + camel + ": " + ex.what());
  }
}

Term witness_term(const std::string& s) {
  if (s.empty()) throw JsonFormatError("empty witness");
  return is_numeral(s) ? Term::constant(s) : Term::variable(s);
}

std::vector<std::vector<Element>> rows_of(const Json& j, const std::string& letter) {
  if (!j.is_array()) throw JsonFormatError("table of " + letter + " must be a list of rows");
  std::vector<std::vector<Element>> rows;
  for (const auto& r : j) {
    if (!r.is_array() || r.empty()) throw JsonFormatError("bad row in table of " + letter);
    std::vector<Element> row;
    for (const auto& v : r) {
      if (!v.is_number_unsigned() && !v.is_number_integer()) throw JsonFormatError("non-numeric row in " + letter);
      row.push_back(v.get<Element>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Table table_from_rows(const std::vector<std::vector<Element>>& rows, std::size_t domain, const std::string& letter,
                      bool predicate) {
  Table t;
  t.arity = rows.empty() ? 0 : rows.front().size() - 1;
  std::size_t cells = 1;
  for (std::size_t k = 0; k < t.arity; ++k) cells *= domain;
  t.values.assign(cells, 0);
  for (const auto& row : rows) {
    if (row.size() != t.arity + 1) throw JsonFormatError("inconsistent arity in table of " + letter);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < t.arity; ++k) {
      if (row[k] >= domain) throw JsonFormatError("argument outside the domain in table of " + letter);
      idx = idx * domain + row[k];
    }
    Element v = row.back();
    if (predicate ? v > 1 : v >= domain) throw JsonFormatError("value outside range in table of " + letter);
    t.values[idx] = v;
  }
  return t;
}

Json table_rows(const Table& t, std::size_t domain) {
  Json rows = Json::array();
  for (std::size_t idx = 0; idx < t.values.size(); ++idx) {
    Json row = Json::array();
    std::vector<Element> args(t.arity);
    std::size_t rest = idx;
    for (std::size_t k = t.arity; k-- > 0;) {
      args[k] = rest % domain;
      rest /= domain;
    }
    for (auto a : args) row.push_back(a);
    row.push_back(t.values[idx]);
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kind_name(GraphTerm::Kind k) {
  switch (k) {
    case GraphTerm::Kind::Zero: return "Zero";
    case GraphTerm::Kind::Var: return "Var";
    case GraphTerm::Kind::Succ: return "Succ";
    case GraphTerm::Kind::Plus: return "Plus";
    case GraphTerm::Kind::Times: return "Times";
    case GraphTerm::Kind::FnApp: return "FnApp";
  }
  return "?";
}

const char* schema_kind_name(MoveSchema::Kind k) {
  switch (k) {
    case MoveSchema::Kind::ChooseLeft: return "ChooseLeft";
    case MoveSchema::Kind::ChooseRight: return "ChooseRight";
    case MoveSchema::Kind::ChooseConstant: return "ChooseConstant";
    case MoveSchema::Kind::Replicate: return "Replicate";
  }
  return "?";
}

}  // namespace

Json term_to_json(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable: return {{"kind", "Variable"}, {"name", t.name()}};
    case Term::Kind::Constant: return {{"kind", "Constant"}, {"name", t.name()}};
    case Term::Kind::Application: {
      Json args = Json::array();
      for (const auto& a : t.args()) args.push_back(term_to_json(a));
      return {{"kind", "Application"}, {"name", t.name()}, {"args", args}};
    }
  }
  return {};
}

Json formula_to_json(const Formula& f) {
  Json j{{"op", op_name(f.op())}, {"text", f.str()}};
  switch (f.op()) {
    case Op::Atom: {
      Json args = Json::array();
      for (const auto& a : f.terms()) args.push_back(term_to_json(a));
      j["letter"] = f.name();
      j["args"] = args;
      j["negated"] = f.negated();
      break;
    }
    case Op::Equality:
      j["lhs"] = term_to_json(f.terms()[0]);
      j["rhs"] = term_to_json(f.terms()[1]);
      j["negated"] = f.negated();
      break;
    case Op::Top:
    case Op::Bottom: break;
    default:
      if (is_quantifier(f.op())) {
        j["var"] = f.name();
        j["body"] = formula_to_json(f.body());
      } else {
        j["left"] = formula_to_json(f.left());
        j["right"] = formula_to_json(f.right());
      }
  }
  return j;
}

Json sequent_to_json(const Sequent& s) {
  Json ant = Json::array();
  for (const auto& g : s.antecedent) ant.push_back(formula_to_json(g));
  return {{"text", s.str()}, {"antecedent", ant}, {"succedent", formula_to_json(s.succedent)}};
}

Json proof_to_json(const Proof& p) {
  Json steps = Json::array();
  for (const auto& st : p.steps) {
    Json j{{"sequent", st.sequent.str()}, {"rule", rule_name(st.app.rule)}, {"premises", st.premises}};
    const RuleApp& a = st.app;
    if (a.slot >= 0) j["slot"] = a.slot;
    if (a.choice >= 0) j["choice"] = a.choice;
    if (a.witness) j["witness"] = a.witness->str();
    if (a.occ) j["occ"] = *a.occ;
    if (a.slot_b >= 0) j["slotB"] = a.slot_b;
    if (!a.inserted.empty()) j["inserted"] = a.inserted;
    steps.push_back(std::move(j));
  }
  return {{"steps", steps}};
}

Proof proof_from_json(const Json& j) {
  const Json& steps = j.is_array() ? j : field(j, "steps");
  if (!steps.is_array() || steps.empty()) throw JsonFormatError("a proof needs a nonempty \"steps\" list");
  Proof p;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Json& s = steps[i];
    std::string where = "step " + std::to_string(i) + ": ";
    if (!s.is_object()) throw JsonFormatError(where + "expected an object");
    ProofStep st;
    auto text = get_or<std::string>(s, "sequent", nullptr, "");
    if (text.empty()) throw JsonFormatError(where + "missing sequent");
    try {
      st.sequent = parse_sequent_or_formula(text);
    } catch (const ParseError& ex) {
      throw JsonFormatError(where + ex.what() + " at offset " + std::to_string(ex.offset()));
    }
    auto rule = rule_from_name(get_or<std::string>(s, "rule", nullptr, ""));
    if (!rule) throw JsonFormatError(where + "unknown rule");
    st.app.rule = *rule;
    st.app.slot = get_or<int>(s, "slot", nullptr, -1);
    st.app.choice = get_or<int>(s, "choice", nullptr, -1);
    st.app.slot_b = get_or<int>(s, "slotB", "slot_b", -1);
    st.app.inserted = get_or<std::vector<int>>(s, "inserted", nullptr, {});
    if (!field(s, "witness").is_null()) st.app.witness = witness_term(get_or<std::string>(s, "witness", nullptr, ""));
    if (!field(s, "occ").is_null()) st.app.occ = get_or<Path>(s, "occ", nullptr, {});
    auto prem = get_or<std::vector<long long>>(s, "premises", nullptr, {});
    for (auto k : prem) {
      if (k < 0) throw JsonFormatError(where + "negative premise index");
      st.premises.push_back(static_cast<std::size_t>(k));
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

Json check_report_to_json(const CheckReport& r, const Proof& p) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& v = r.steps[i];
    const char* verdict = v.kind == StepVerdict::Kind::Ok ? "ok"
                          : v.kind == StepVerdict::Kind::Fail ? "fail"
                                                              : "unverified-stability";
    Json s{{"index", i}, {"verdict", verdict}};
    if (i < p.steps.size()) s["rule"] = rule_name(p.steps[i].app.rule);
    if (!v.reason.empty()) s["reason"] = v.reason;
    steps.push_back(std::move(s));
  }
  return {{"overall", overall_name(r.overall)}, {"steps", steps}};
}

ClassicalBudget classical_budget_from_json(const Json& j) {
  ClassicalBudget b;
  b.max_steps = get_or<std::size_t>(j, "maxSteps", "max_steps", b.max_steps);
  b.max_rounds = get_or<std::size_t>(j, "maxRounds", "max_rounds", b.max_rounds);
  b.model_domain = get_or<std::size_t>(j, "modelDomain", "model_domain", b.model_domain);
  b.model_nodes = get_or<std::size_t>(j, "modelNodes", "model_nodes", b.model_nodes);
  return b;
}

SearchBudget search_budget_from_json(const Json& j) {
  SearchBudget b;
  if (j.is_null()) return b;
  if (!j.is_object()) throw JsonFormatError("budget must be an object");
  b.max_steps = get_or<int>(j, "maxSteps", "max_steps", b.max_steps);
  b.max_replications = get_or<int>(j, "maxReplications", "max_replications", b.max_replications);
  b.max_nodes = get_or<std::size_t>(j, "maxNodes", "max_nodes", b.max_nodes);
  if (!field(j, "stability").is_null()) b.stability = classical_budget_from_json(field(j, "stability"));
  return b;
}

Json model_to_json(const FiniteModel& m) {
  Json fns = Json::object(), preds = Json::object(), naming = Json::object();
  for (const auto& [f, t] : m.functions) fns[f] = table_rows(t, m.domain_size);
  for (const auto& [p, t] : m.predicates) preds[p] = table_rows(t, m.domain_size);
  for (const auto& [c, v] : m.naming) naming[c] = v;
  return {{"domainSize", m.domain_size}, {"naming", naming}, {"functions", fns}, {"predicates", preds}};
}

FiniteModel model_from_json(const Json& j) {
  if (!j.is_object()) throw JsonFormatError("interpretation must be an object");
  FiniteModel m;
  m.domain_size = get_or<std::size_t>(j, "domainSize", "domain_size", 0);
  if (m.domain_size == 0) throw JsonFormatError("domainSize must be positive");
  const Json& naming = field(j, "naming");
  if (naming.is_object())
    for (const auto& [c, v] : naming.items()) {
      if (!is_numeral(c)) throw JsonFormatError("naming keys must be numerals");
      Element e = v.get<Element>();
      if (e >= m.domain_size) throw JsonFormatError("named element outside the domain");
      m.naming[c] = e;
    }
  const Json& fns = field(j, "functions");
  if (fns.is_object())
    for (const auto& [f, rows] : fns.items())
      m.functions[f] = table_from_rows(rows_of(rows, f), m.domain_size, f, false);
  const Json& preds = field(j, "predicates");
  if (preds.is_object())
    for (const auto& [p, rows] : preds.items())
      m.predicates[p] = table_from_rows(rows_of(rows, p), m.domain_size, p, true);
  return m;
}

Interpretation interpretation_from_json(const Json& j) {
  if (j.is_object() && get_or<std::string>(j, "universe", nullptr, "") == "ideal") return Interpretation::ideal();
  return Interpretation::of(model_from_json(j));
}

Json labmove_to_json(const LabMove& m) { return {{"player", player_symbol(m.player)}, {"move", m.move}}; }

Json run_to_json(const Run& r) {
  Json out = Json::array();
  for (const auto& m : r) out.push_back(labmove_to_json(m));
  return out;
}

Run run_from_json(const Json& j) {
  if (!j.is_array()) throw JsonFormatError("a run is a list of labeled moves");
  Run r;
  for (const auto& m : j) {
    auto who = get_or<std::string>(m, "player", nullptr, "");
    if (who != "T" && who != "B") throw JsonFormatError("player must be \"T\" or \"B\"");
    r.push_back({who == "T" ? Player::Top : Player::Bot, get_or<std::string>(m, "move", nullptr, "")});
  }
  return r;
}

Json schema_to_json(const MoveSchema& s) {
  Json j{{"kind", schema_kind_name(s.kind)}, {"owner", player_symbol(s.owner)}, {"prefix", s.prefix},
         {"focused", s.focused}, {"needsConstant", s.kind == MoveSchema::Kind::ChooseConstant}};
  if (s.slot >= 0) {
    j["slot"] = s.slot;
    j["address"] = s.address;
  }
  return j;
}

Json position_to_json(const SequentPosition& p) {
  Json ant = Json::array();
  for (const auto& t : p.antecedent) {
    Json leaves = Json::array();
    for (const auto& w : t.leaf_addresses()) leaves.push_back({{"address", w}, {"formula", t.leaf_at(w)->str()}});
    ant.push_back({{"text", t.str()}, {"leaves", leaves}});
  }
  Json val = Json::object();
  for (const auto& [v, c] : p.valuation) val[v] = c;
  return {{"text", p.str()},
          {"closurePending", p.closure_pending},
          {"valuation", val},
          {"antecedent", ant},
          {"succedent", p.succedent.str()}};
}

Json play_result_to_json(const PlayResult& r) {
  Json j{{"verdict", r.verdict()},
         {"outcome", outcome_name(r.outcome)},
         {"run", run_to_json(r.run)},
         {"runText", run_to_string(r.run)},
         {"finalPosition", r.final_position.str()},
         {"ticks", r.ticks}};
  if (r.illegal_by) j["illegalReason"] = r.illegal_reason;
  if (r.machine_error) j["machineError"] = *r.machine_error;
  if (r.env_error) j["envError"] = *r.env_error;
  return j;
}

Json trace_entry_to_json(const TraceEntry& t) {
  Json delivered = Json::array(), emitted = Json::array();
  Player other = opponent(t.who);
  for (const auto& m : t.delivered) delivered.push_back(labmove_to_json({other, m}));
  for (const auto& m : t.emitted) emitted.push_back(m);
  return {{"tick", t.tick},
          {"agent", player_symbol(t.who)},
          {"delivered", delivered},
          {"emitted", emitted},
          {"state_digest", t.state_digest}};
}

Json graph_term_to_json(const GraphTerm& g) {
  Json nodes = Json::array();
  for (const auto& n : g.nodes()) {
    Json j{{"kind", kind_name(n.kind)}};
    switch (n.kind) {
      case GraphTerm::Kind::Var: j["name"] = n.name; break;
      case GraphTerm::Kind::Succ: j["a"] = n.a; break;
      case GraphTerm::Kind::FnApp:
        j["name"] = n.name;
        j["a"] = n.a;
        break;
      case GraphTerm::Kind::Plus:
      case GraphTerm::Kind::Times:
        j["a"] = n.a;
        j["b"] = n.b;
        break;
      default: break;
    }
    nodes.push_back(std::move(j));
  }
  return {{"root", g.root()}, {"nodes", nodes}, {"size", g.size()}};
}

GraphTerm graph_term_from_json(const Json& j) {
  const Json& nodes = field(j, "nodes");
  if (!nodes.is_array() || nodes.empty()) throw JsonFormatError("graph term needs a nonempty node list");
  GraphTerm g;
  std::vector<GraphTerm::Id> ids;
  auto child = [&](const Json& n, const char* key) {
    auto k = get_or<std::size_t>(n, key, nullptr, ids.size());
    if (k >= ids.size()) throw JsonFormatError("graph term children must precede their parents");
    return ids[k];
  };
  for (const auto& n : nodes) {
    auto kind = get_or<std::string>(n, "kind", nullptr, "");
    auto name = get_or<std::string>(n, "name", nullptr, "");
    if (kind == "Zero") ids.push_back(g.zero());
    else if (kind == "Var") ids.push_back(g.var(name));
    else if (kind == "Succ") ids.push_back(g.succ(child(n, "a")));
    else if (kind == "Plus") ids.push_back(g.plus(child(n, "a"), child(n, "b")));
    else if (kind == "Times") ids.push_back(g.times(child(n, "a"), child(n, "b")));
    else if (kind == "FnApp") ids.push_back(g.apply(name, child(n, "a")));
    else throw JsonFormatError("unknown graph term node kind " + kind);
  }
  auto root = get_or<std::size_t>(j, "root", nullptr, ids.size() - 1);
  if (root >= ids.size()) throw JsonFormatError("graph term root out of range");
  g.set_root(ids[root]);
  return g;
}

Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw JsonFormatError("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw JsonFormatError(p.string() + ": " + ex.what());
  }
}

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw JsonFormatError("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<Agent> solution_from_json(const Json& j, const Formula& e, std::shared_ptr<const Interpretation> i,
                                          const std::filesystem::path& base) {
  auto kind = get_or<std::string>(j, "kind", nullptr, "");
  if (kind == "silent") return make_silent_agent();
  if (kind == "greedy") return make_greedy_solution(e, std::move(i), get_or<bool>(j, "sabotage", nullptr, false));
  if (kind == "proof") {
    Proof p;
    if (!field(j, "proof").is_null()) p = proof_from_json(field(j, "proof"));
    else p = proof_from_json(read_json_file(base / get_or<std::string>(j, "file", nullptr, "")));
    if (!(p.conclusion() == Sequent{{}, e}))
      throw JsonFormatError("solution proof does not conclude ||- " + e.str());
    return extract_strategy(p);
  }
  throw JsonFormatError("unknown solution kind \"" + kind + "\"");
}

}  // namespace cl12
