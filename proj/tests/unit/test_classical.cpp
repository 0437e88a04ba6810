#include <doctest.h>

#include "cl12/classical.hpp"
#include "support/oracles.hpp"

using namespace cl12;

namespace {

FiniteModel parity_mod8() {
  FiniteModel m;
  m.domain_size = 8;
  m.set_function("plus", 2, [](std::span<const Element> a) { return a[0] + a[1]; });
  m.set_predicate("Even", 1, [](std::span<const Element> a) { return a[0] % 2 == 0; });
  m.set_predicate("Odd", 1, [](std::span<const Element> a) { return a[0] % 2 == 1; });
  return m;
}

}  // namespace

TEST_CASE("prove_valid") {
  CHECK(prove_valid(parse_formula("p \\/ ~p")).valid());
  auto cube = parse_formula(
      "Ax: (cube(x) = mult(mult(x,x),x)) /\\ t = mult(s,s) /\\ r = mult(t,s) -> r = cube(s)");
  CHECK(prove_valid(cube).valid());
  auto v = prove_valid(parse_formula("F \\/ Ax: p(x)"));
  REQUIRE(v.invalid());
  CHECK(v.countermodel->model.domain_size == 1);
  CHECK_FALSE(oracle::eval(parse_formula("F \\/ Ax: p(x)"), v.countermodel->model, {}));
  CHECK(prove_valid(parse_formula("x = x")).valid());
  CHECK(prove_valid(parse_formula("x = y -> f(x) = f(y)")).valid());
  CHECK(prove_valid(parse_formula("x = y /\\ p(x) -> p(y)")).valid());
  CHECK(prove_valid(parse_formula("Ey: Ax: (p(x) -> p(y))")).kind != ClassicalVerdict::Kind::Countermodel);
}

TEST_CASE("find_countermodel") {
  auto c = find_countermodel(parse_formula("p /\\ ~p"));
  REQUIRE(c);
  CHECK(c->model.domain_size == 1);

  auto f = parse_formula("~p(t) \\/ Ax: p(x)");
  auto d = find_countermodel(f);
  REQUIRE(d);
  CHECK(d->model.domain_size == 2);
  CHECK_FALSE(oracle::eval(f, d->model, d->assignment));
  CHECK_FALSE(eval_elementary(f, d->model, d->assignment));

  CHECK_FALSE(find_countermodel(parse_formula("Ax: p(x) -> p(y)")).has_value());
}

TEST_CASE("check_stability") {
  CHECK(check_stability(parse_sequent("||- p \\/ ~p")).valid());
  CHECK(check_stability(parse_sequent("||- ?x: ~p(x) \\/ Ax: p(x)")).invalid());
  CHECK(check_stability(parse_sequent("||- !x: ?y: (y = f(x))")).valid());
}

TEST_CASE("eval_elementary") {
  FiniteModel any;
  any.domain_size = 3;
  CHECK(eval_elementary(parse_formula("0 = 0"), any));
  CHECK(eval_elementary(parse_formula("Ay: (Even(y) -> Odd(plus(11,y)))"), parity_mod8()));
  FiniteModel four;
  four.domain_size = 4;
  CHECK_FALSE(eval_elementary(parse_formula("10 = 11"), four));
  CHECK_THROWS_AS(eval_elementary(parse_formula("p"), four), UninterpretedLetter);
  CHECK_THROWS(eval_elementary(parse_formula("p(x)"), parity_mod8()));
}

TEST_CASE("numerals") {
  CHECK(numeral_mod("1111", 16) == 15);
  CHECK(numeral_mod(std::string(100, '1'), 7) == 1);  // 2^100 - 1, and 2^3 = 1 mod 7
  CHECK(to_numeral(0) == "0");
  CHECK(to_numeral(6) == "110");
  CHECK(numeral_value("1011") == 11);
  CHECK_FALSE(numeral_value(std::string(70, '1')).has_value());
}

TEST_CASE("ideal interpretation") {
  Interpretation i = Interpretation::ideal();
  i.functions["mult"] = [](std::span<const Element> a) { return a[0] * a[1]; };
  CHECK(eval_elementary(parse_formula("110 = mult(10,11)"), i) == true);
  CHECK(eval_elementary(parse_formula("111 = mult(10,11)"), i) == false);
  CHECK_FALSE(eval_elementary(parse_formula("Ax: x = x"), i).has_value());
}

// ---------------------------------------------------------------- properties

TEST_CASE("property: prover and model finder never contradict; countermodels falsify") {
  oracle::Rng rng(21);
  oracle::GenOptions o;
  o.choice = false;
  o.free = {"a"};
  o.bound = {"x", "y"};
  o.constants = {"0", "1"};
  int valid = 0, refuted = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::random_formula(rng, 4, o);
    INFO(f.str());
    ClassicalBudget b;
    b.max_steps = 4000;
    auto v = prove_valid(f, b);
    auto c = find_countermodel(f, 3, 50000);
    if (v.valid()) {
      ++valid;
      CHECK_FALSE(c.has_value());
    }
    if (c) {
      ++refuted;
      CHECK_FALSE(v.valid());
      CHECK_FALSE(oracle::eval(f, c->model, c->assignment));
    }
    if (v.invalid()) CHECK_FALSE(oracle::eval(f, v.countermodel->model, v.countermodel->assignment));
  }
  CHECK(valid > 10);
  CHECK(refuted > 10);
}

TEST_CASE("property: quantifier-free validity agrees with exhaustive small models") {
  oracle::Rng rng(22);
  oracle::GenOptions o;
  o.choice = false;
  o.blind = false;
  o.free = {"a", "b"};
  o.constants = {"0", "1"};
  o.unary_preds = {"p"};
  o.nullary_preds = {"q"};
  int agreed = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::random_formula(rng, 4, o);
    INFO(f.str());
    std::vector<std::string> vars(o.free.begin(), o.free.end());
    // Four terms at most, so four elements suffice for a falsifying model.
    bool truth = oracle::all_models(4, {"p"}, {"q"}, vars, o.constants,
                                    [&](const FiniteModel& m, const std::map<std::string, Element>& a) {
                                      return oracle::eval(f, m, a);
                                    });
    auto v = prove_valid(f);
    REQUIRE(v.kind != ClassicalVerdict::Kind::Unknown);
    CHECK(v.valid() == truth);
    ++agreed;
  }
  CHECK(agreed == 200);
}

TEST_CASE("property: evaluator agrees with the reference on depth-5 formulas") {
  oracle::Rng rng(23);
  oracle::GenOptions o;
  o.choice = false;
  o.unary_fns = {"f"};
  for (int i = 0; i < 400; ++i) {
    auto f = oracle::random_formula(rng, 5, o);
    std::size_t d = 1 + oracle::pick(rng, 3);
    auto m = oracle::random_model(rng, d, o);
    std::map<std::string, Element> a{{"a", oracle::pick(rng, d)}, {"b", oracle::pick(rng, d)}};
    INFO(f.str());
    CHECK(eval_elementary(f, m, a) == oracle::eval(f, m, a));
  }
}
