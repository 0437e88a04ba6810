#include <doctest.h>

#include "cl12/calculus.hpp"
#include "support/data.hpp"
#include "support/oracles.hpp"

using namespace cl12;

namespace {

std::vector<Sequent> premises_of(const Proof& p, std::size_t i) {
  std::vector<Sequent> out;
  for (auto k : p.steps[i].premises) out.push_back(p.steps[k].sequent);
  return out;
}

}  // namespace

TEST_CASE("check_step on the cube proof") {
  auto p = testdata::proof("cube.proof.json");
  REQUIRE(p.steps.size() == 10);
  auto v1 = check_step(p.steps[1].sequent, p.steps[1].app, premises_of(p, 1));
  CHECK(v1.kind == StepVerdict::Kind::Ok);
  CHECK(v1.resolved.witness == Term::variable("r"));
  auto v8 = check_step(p.steps[8].sequent, p.steps[8].app, premises_of(p, 8));
  CHECK(v8.kind == StepVerdict::Kind::Ok);
  auto v9 = check_step(p.steps[9].sequent, p.steps[9].app, {});
  CHECK(v9.kind == StepVerdict::Kind::Fail);
  // a wrong witness
  RuleApp bad = p.steps[1].app;
  bad.witness = Term::variable("t");
  CHECK(check_step(p.steps[1].sequent, bad, premises_of(p, 1)).kind == StepVerdict::Kind::Fail);
  // replicate with the copy in the wrong place
  Sequent wrong = p.steps[7].sequent;
  std::swap(wrong.antecedent[0], wrong.antecedent[1]);
  CHECK(check_step(p.steps[8].sequent, p.steps[8].app, {wrong}).kind == StepVerdict::Kind::Fail);
}

TEST_CASE("check_proof") {
  auto cube = testdata::proof("cube.proof.json");
  CHECK(check_proof(cube).overall == CheckReport::Overall::Valid);
  CHECK(check_proof(testdata::proof("choose.proof.json")).overall == CheckReport::Overall::Valid);
  auto swapped = cube;
  std::swap(swapped.steps[0], swapped.steps[1]);
  CHECK(check_proof(swapped).overall == CheckReport::Overall::Invalid);
  auto forward = cube;
  forward.steps[3].premises = {4};
  CHECK(check_proof(forward).overall == CheckReport::Overall::Invalid);
  auto report = check_proof(cube);
  for (const auto& s : report.steps) CHECK(s.kind == StepVerdict::Kind::Ok);
}

TEST_CASE("wait_obligations") {
  auto w = wait_obligations(parse_sequent("||- !x: ?y: (p(x) -> p(y))"));
  REQUIRE(w.size() == 1);
  CHECK(w[0].kind == WaitObligation::Kind::SuccUniversal);
  CHECK(w[0].premise == parse_sequent("||- ?y: (p(v1) -> p(y))"));
  auto cube = testdata::proof("cube.proof.json");
  CHECK(wait_obligations(cube.steps[0].sequent).empty());
  CHECK(wait_obligations(parse_sequent("p & q ||- p")).empty());
  auto both = wait_obligations(parse_sequent("p | q ||- r & s"));
  REQUIRE(both.size() == 4);
  CHECK(both[0].premise == parse_sequent("p | q ||- r"));
  CHECK(both[1].premise == parse_sequent("p | q ||- s"));
  CHECK(both[2].premise == parse_sequent("p ||- r & s"));
  CHECK(both[3].premise == parse_sequent("q ||- r & s"));
}

TEST_CASE("wait accepts premises that match up to the fresh variable and extra premises") {
  Sequent x = parse_sequent("||- !x: ?y: (p(x) -> p(y))");
  RuleApp wait;
  auto prem = parse_sequent("||- ?y: (p(w) -> p(y))");
  CHECK(check_step(x, wait, {prem}).kind == StepVerdict::Kind::Ok);
  CHECK(check_step(x, wait, {parse_sequent("p ||- p"), prem}).kind == StepVerdict::Kind::Ok);
  // a variable that occurs in the conclusion is not fresh
  CHECK(check_step(parse_sequent("p(w) ||- !x: q(x)"), wait, {parse_sequent("p(w) ||- q(w)")}).kind ==
        StepVerdict::Kind::Fail);
}

TEST_CASE("search_proof") {
  auto found = search_proof(parse_sequent("||- Ax: p(x) -> !x: p(x)"));
  REQUIRE(found.proof);
  CHECK(found.proof->steps.size() == 2);
  for (const auto& s : found.proof->steps) CHECK(s.app.rule == Rule::Wait);
  auto none = search_proof(parse_sequent("||- !x: p(x) -> Ax: p(x)"));
  CHECK_FALSE(none.proof);
  CHECK(none.exhaustive);
  CHECK(search_proof(parse_sequent("p & q ||- (p & q) /\\ (p & q)")).proof);
  CHECK_FALSE(search_proof(parse_sequent("||- (p & q) -> (p & q) /\\ (p & q)")).proof);
}

TEST_CASE("search results check and survive rendering") {
  for (const char* text : {"||- Ax: p(x) -> !x: p(x)", "||- !x: ?y: (p(x) -> p(y))", "p & q ||- (p & q) /\\ (p & q)",
                           "?x: !y: p(x,y) ||- ?x: (!y: p(x,y) /\\ !y: p(x,y))"}) {
    auto r = search_proof(parse_sequent(text));
    REQUIRE(r.proof);
    CHECK(check_proof(*r.proof).overall != CheckReport::Overall::Invalid);
    CHECK(r.proof->conclusion() == parse_sequent(text));
    for (const auto& step : r.proof->steps) CHECK(parse_sequent(step.sequent.str()) == step.sequent);
  }
}

TEST_CASE("exchange and weakening extend proofs") {
  auto p = testdata::proof("cube.proof.json");
  const Sequent& x = p.conclusion();

  Proof exchanged = p;
  Sequent swapped = x;
  std::swap(swapped.antecedent[0], swapped.antecedent[1]);
  RuleApp ex;
  ex.rule = Rule::Exchange;
  ex.slot = 0;
  ex.slot_b = 1;
  exchanged.steps.push_back({swapped, ex, {p.steps.size() - 1}});
  CHECK(check_proof(exchanged).overall == CheckReport::Overall::Valid);

  Proof weakened = p;
  Sequent wider = x;
  wider.antecedent.insert(wider.antecedent.begin() + 1, parse_formula("q & r"));
  RuleApp wk;
  wk.rule = Rule::Weakening;
  wk.inserted = {1};
  weakened.steps.push_back({wider, wk, {p.steps.size() - 1}});
  CHECK(check_proof(weakened).overall == CheckReport::Overall::Valid);

  RuleApp wrong = wk;
  wrong.inserted = {0};
  Proof bad = p;
  bad.steps.push_back({wider, wrong, {p.steps.size() - 1}});
  CHECK(check_proof(bad).overall == CheckReport::Overall::Invalid);
}

TEST_CASE("choose_options and replicate_premise") {
  auto s = parse_sequent("p & q ||- ?x: r(x)");
  auto opts = choose_options(s, default_witnesses(s));
  bool ant = false, succ = false;
  for (const auto& o : opts) {
    if (o.app.rule == Rule::AntChooseConjunct && o.premise == parse_sequent("q ||- ?x: r(x)")) ant = true;
    if (o.app.rule == Rule::SuccChooseWitness && o.premise == parse_sequent("p & q ||- r(0)")) succ = true;
  }
  CHECK(ant);
  CHECK(succ);
  CHECK(replicate_premise(s, 0) == parse_sequent("p & q, p & q ||- ?x: r(x)"));
}

TEST_CASE("rule names round trip") {
  for (Rule r : {Rule::Wait, Rule::SuccChooseDisjunct, Rule::AntChooseConjunct, Rule::SuccChooseWitness,
                 Rule::AntChooseInstance, Rule::Replicate, Rule::Exchange, Rule::Weakening})
    CHECK(rule_from_name(rule_name(r)) == r);
  CHECK_FALSE(rule_from_name("cut").has_value());
}

TEST_CASE("property: permuted and weakened conclusions remain provable") {
  const char* base[] = {"p & q ||- (p & q) /\\ (p & q)", "?x: !y: p(x,y) ||- ?x: (!y: p(x,y) /\\ !y: p(x,y))"};
  for (const char* text : base) {
    auto r = search_proof(parse_sequent(text));
    REQUIRE(r.proof);
    Proof p = *r.proof;
    Sequent w = p.conclusion();
    w.antecedent.push_back(parse_formula("s | t"));
    RuleApp wk;
    wk.rule = Rule::Weakening;
    wk.inserted = {int(w.antecedent.size()) - 1};
    p.steps.push_back({w, wk, {p.steps.size() - 1}});
    Sequent e = w;
    std::swap(e.antecedent[0], e.antecedent[1]);
    RuleApp ex;
    ex.rule = Rule::Exchange;
    ex.slot = 0;
    ex.slot_b = 1;
    p.steps.push_back({e, ex, {p.steps.size() - 1}});
    CHECK(check_proof(p).overall == CheckReport::Overall::Valid);
  }
}
