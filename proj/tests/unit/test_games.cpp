#include <doctest.h>

#include <set>

#include "cl12/games.hpp"
#include "support/oracles.hpp"

using namespace cl12;

namespace {

const char* kEx25 = "(0=0 & 0=1) -> (10=11 & 10=10)";

LabMove T(const std::string& m) { return {Player::Top, m}; }
LabMove B(const std::string& m) { return {Player::Bot, m}; }

std::set<std::string> encodings(const std::vector<MoveSchema>& ss, const std::vector<std::string>& pool) {
  std::set<std::string> out;
  for (const auto& s : ss) {
    if (s.kind == MoveSchema::Kind::ChooseConstant)
      for (const auto& c : pool) out.insert(s.encode(c));
    else
      out.insert(s.encode());
  }
  return out;
}

Interpretation propositions(std::map<std::string, bool> values) {
  FiniteModel m;
  m.domain_size = 1;
  for (auto [p, v] : values) m.set_predicate(p, 0, [v = v](std::span<const Element>) { return v; });
  return Interpretation::of(m);
}

}  // namespace

TEST_CASE("initial_position") {
  auto p = SequentPosition::initial(parse_sequent(std::string("||- ") + kEx25));
  CHECK(p.closure_pending.empty());
  CHECK(p.antecedent.empty());
  auto cube = SequentPosition::initial(
      parse_sequent("Ax: (cube(x) = mult(mult(x,x),x)), !x: !y: ?z: (z = mult(x,y)) ||- !x: ?y: (y = cube(x))"));
  REQUIRE(cube.antecedent.size() == 2);
  for (const auto& t : cube.antecedent) {
    CHECK(t.is_leaf());
    CHECK(t.leaf_addresses() == std::vector<std::string>{""});
  }
  auto st = SequentPosition::initial(parse_sequent("p(t) ||- q(s)"));
  CHECK(st.closure_pending == std::vector<std::string>{"s", "t"});
}

TEST_CASE("legal_move_schemas") {
  auto f = parse_formula(kEx25);
  CHECK(encodings(formula_move_schemas(f, Role::Positive, Player::Top), {}) == std::set<std::string>{"0.0", "0.1"});
  CHECK(encodings(formula_move_schemas(f, Role::Positive, Player::Bot), {}) == std::set<std::string>{"1.0", "1.1"});
  auto after = std::get<FormulaStep>(apply_formula_move(f, Role::Positive, Player::Bot, "1.1")).next;
  CHECK(encodings(formula_move_schemas(after, Role::Positive, Player::Top), {}) ==
        std::set<std::string>{"0.0", "0.1"});
  CHECK(formula_move_schemas(after, Role::Positive, Player::Bot).empty());

  auto leaf = GameTree::leaf(parse_formula("!x: !y: ?z: (z = mult(x,y))"));
  auto top = tree_move_schemas(leaf, Role::Negative, Player::Top);
  CHECK(encodings(top, {"10"}) == std::set<std::string>{":", ".10"});
  CHECK(tree_move_schemas(leaf, Role::Negative, Player::Bot).empty());

  auto closure = SequentPosition::initial(parse_sequent("p(t) ||- q(s) & r"));
  CHECK(legal_move_schemas(closure, Player::Top).empty());
  auto bot = legal_move_schemas(closure, Player::Bot);
  REQUIRE(bot.size() == 1);
  CHECK(bot[0].kind == MoveSchema::Kind::ChooseConstant);
  CHECK(bot[0].encode("11") == "11");
}

TEST_CASE("apply_move: closure, antecedent and succedent") {
  auto p0 = SequentPosition::initial(parse_sequent("p(t) ||- q(s) & r"));
  auto p1 = std::get<PositionStep>(apply_move(p0, B("10"))).next;
  CHECK(p1.valuation.at("s") == "10");
  CHECK(std::holds_alternative<Illegal>(apply_move(p1, B("1.0"))));  // closure first
  auto p2 = std::get<PositionStep>(apply_move(p1, B("11"))).next;
  CHECK(p2.closure_pending.empty());
  CHECK(std::holds_alternative<Illegal>(apply_move(p2, T("1.0"))));  // wrong owner
  auto p3 = std::get<PositionStep>(apply_move(p2, B("1.1"))).next;
  CHECK(p3.succedent == parse_formula("r"));
  CHECK(std::holds_alternative<Illegal>(apply_move(p3, B("1.1"))));  // choice already made
  CHECK(std::holds_alternative<PositionStep>(apply_move(p3, T("0.0.:"))));  // any leaf can be replicated
}

TEST_CASE("branching recurrence: replication and unfocused moves") {
  auto g = parse_formula("p | (q & (r & (s | t)))");
  auto t0 = GameTree::leaf(g);
  auto s1 = std::get<TreeStep>(apply_tree_move(t0, Role::Positive, Player::Bot, ":"));
  CHECK(s1.replicative);
  CHECK(s1.next == GameTree::node(GameTree::leaf(g), GameTree::leaf(g)));
  auto s2 = std::get<TreeStep>(apply_tree_move(s1.next, Role::Positive, Player::Top, ".1"));
  CHECK_FALSE(s2.focused);
  CHECK(s2.effects.size() == 2);
  auto h = parse_formula("q & (r & (s | t))");
  CHECK(s2.next == GameTree::node(GameTree::leaf(h), GameTree::leaf(h)));
  CHECK(std::holds_alternative<Illegal>(apply_tree_move(s1.next, Role::Positive, Player::Top, ":")));
  CHECK(std::holds_alternative<Illegal>(apply_tree_move(s1.next, Role::Positive, Player::Top, "01.1")));
}

TEST_CASE("run projections") {
  CHECK(project_component({T("0.0"), B("1.1")}, 0) == Run{T("0")});
  Run gamma = {B(":"), T(".1"), B("0.0"), B("1.1"), B("1:"), B("10.0"), B("11.1"), T("11.0")};
  CHECK(project_branch(gamma, "11") == Run{T("1"), B("1"), B("1"), T("0")});
  CHECK(project_branch(gamma, "10") == Run{T("1"), B("1"), B("0")});
  CHECK(project_branch(gamma, "0") == Run{T("1"), B("0")});
  CHECK(project_branch({}, "0").empty());
  CHECK(project_component({}, 1).empty());
}

TEST_CASE("adjudicate") {
  auto f = parse_formula(kEx25);
  auto ideal = Interpretation::ideal();
  CHECK(run_outcome(f, Role::Positive, {}, ideal).outcome == Outcome::TopWins);
  CHECK(run_outcome(f, Role::Positive, {T("0.0"), B("1.0")}, ideal).outcome == Outcome::BotWins);
  auto leaves = GameTree::node(GameTree::leaf(parse_formula("q")),
                               GameTree::node(GameTree::leaf(parse_formula("r")), GameTree::leaf(parse_formula("s"))));
  CHECK(adjudicate_tree(leaves, Role::Positive, propositions({{"q", true}, {"r", true}, {"s", true}})) ==
        Outcome::TopWins);
  CHECK(adjudicate_tree(leaves, Role::Positive, propositions({{"q", true}, {"r", false}, {"s", true}})) ==
        Outcome::BotWins);
  auto illegal = run_outcome(f, Role::Positive, {T("1.0")}, ideal);
  CHECK(illegal.illegal_by == Player::Top);
  CHECK(illegal.outcome == Outcome::BotWins);
  CHECK(illegal.illegal_index == 0);
}

TEST_CASE("is_delay") {
  Run g = {B("a"), T("b"), B("c")};
  CHECK(is_delay(g, g, Player::Top));
  CHECK(is_delay(g, g, Player::Bot));
  CHECK(is_delay({B("a"), B("c"), T("b")}, g, Player::Top));
  CHECK_FALSE(is_delay({B("a"), B("c"), T("b")}, g, Player::Bot));
  Run g2 = {T("b"), B("a")};
  CHECK(is_delay({B("a"), T("b")}, g2, Player::Top));
  CHECK_FALSE(is_delay({B("a"), T("b")}, g2, Player::Bot));
  CHECK_FALSE(is_delay({B("c"), T("b"), B("a")}, g, Player::Top));
}

TEST_CASE("run_to_string") {
  CHECK(run_to_string({T("0.1.:"), B("1.10")}) == "<T0.1.:, B1.10>");
}

// ---------------------------------------------------------------- properties

TEST_CASE("property: is_delay agrees with the reference implementation") {
  oracle::Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    std::size_t n = oracle::pick(rng, 6);
    Run g;
    for (std::size_t k = 0; k < n; ++k)
      g.push_back({oracle::coin(rng) ? Player::Top : Player::Bot, std::string(1, char('a' + oracle::pick(rng, 3)))});
    Run u = g;
    std::shuffle(u.begin(), u.end(), rng);
    for (Player p : {Player::Top, Player::Bot}) {
      CHECK(is_delay(u, g, p) == oracle::is_delay(u, g, p));
      auto d = oracle::random_delay(rng, g, p, 4);
      CHECK(oracle::is_delay(d, g, p));
      CHECK(is_delay(d, g, p));
    }
  }
}

TEST_CASE("property: schemas generate exactly the accepted moves") {
  oracle::Rng rng(32);
  oracle::GenOptions o;
  o.constants = {"0", "1"};
  const std::vector<std::string> pool = {"0", "1", "10", "11"};
  std::vector<std::string> candidates;
  std::vector<std::string> prefixes = {""};
  for (int depth = 0; depth < 3; ++depth) {
    std::vector<std::string> more;
    for (const auto& p : prefixes)
      for (const char* c : {"0.", "1."}) more.push_back(p + c);
    prefixes.insert(prefixes.end(), more.begin(), more.end());
  }
  for (const auto& p : prefixes)
    for (const auto& c : pool) candidates.push_back(p + c);
  candidates.push_back("");
  candidates.push_back("2");
  int checked = 0;
  while (checked < 200) {
    auto f = oracle::random_formula(rng, 4, o);
    if (oracle::choice_count(f) > 3) continue;
    ++checked;
    for (Role role : {Role::Positive, Role::Negative})
      for (Player who : {Player::Top, Player::Bot}) {
        auto generated = encodings(formula_move_schemas(f, role, who), pool);
        std::set<std::string> accepted;
        for (const auto& m : candidates)
          if (std::holds_alternative<FormulaStep>(apply_formula_move(f, role, who, m))) accepted.insert(m);
        INFO(f.str());
        CHECK(generated == accepted);
      }
  }
}

TEST_CASE("property: a run is legal iff every prefix is accepted move by move") {
  oracle::Rng rng(33);
  oracle::GenOptions o;
  const std::vector<std::string> pool = {"0", "1", "10"};
  for (int i = 0; i < 300; ++i) {
    Sequent x{{oracle::random_formula(rng, 3, o)}, oracle::random_formula(rng, 3, o)};
    auto start = SequentPosition::initial(x);
    auto pos = start;
    Run run;
    for (int k = 0; k < 8; ++k) {
      Player who = oracle::coin(rng) ? Player::Top : Player::Bot;
      auto moves = encodings(legal_move_schemas(pos, who), pool);
      std::vector<std::string> options(moves.begin(), moves.end());
      options.push_back("1.0.0.1");  // noise that is usually illegal
      std::string m = options[oracle::pick(rng, options.size())];
      run.push_back({who, m});
      auto r = apply_move(pos, {who, m});
      if (auto* st = std::get_if<PositionStep>(&r)) pos = st->next;
      else break;
    }
    std::optional<std::size_t> first_bad;
    auto p = start;
    for (std::size_t k = 0; k < run.size(); ++k) {
      auto r = apply_move(p, run[k]);
      if (std::holds_alternative<Illegal>(r)) {
        first_bad = k;
        break;
      }
      p = std::get<PositionStep>(r).next;
    }
    FiniteModel m;
    m.domain_size = 2;
    m.set_predicate("p", 1, [](std::span<const Element> a) { return a[0] == 0; });
    m.set_predicate("q", 0, [](std::span<const Element>) { return true; });
    auto verdict = run_outcome(start, run, Interpretation::of(m));
    CHECK(verdict.illegal_index == first_bad);
    for (std::size_t k = 0; k < (first_bad ? *first_bad : run.size()); ++k) {
      Run prefix(run.begin(), run.begin() + k + 1);
      CHECK_FALSE(run_outcome(start, prefix, Interpretation::of(m)).illegal_by.has_value());
    }
  }
}
