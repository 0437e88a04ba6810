#include "cl12/calculus.hpp"

#include <algorithm>

namespace cl12 {

namespace {
struct RuleNameEntry {
  Rule rule;
  const char* name;
};
constexpr RuleNameEntry kRuleNames[] = {
    {Rule::Wait, "wait"},
    {Rule::SuccChooseDisjunct, "succ-choose-disjunct"},
    {Rule::AntChooseConjunct, "ant-choose-conjunct"},
    {Rule::SuccChooseWitness, "succ-choose-witness"},
    {Rule::AntChooseInstance, "ant-choose-instance"},
    {Rule::Replicate, "replicate"},
    {Rule::Exchange, "exchange"},
    {Rule::Weakening, "weakening"},
};
}  // namespace

const char* rule_name(Rule r) {
  for (const auto& e : kRuleNames)
    if (e.rule == r) return e.name;
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  for (const auto& e : kRuleNames)
    if (name == e.name) return e.rule;
  return std::nullopt;
}

const char* overall_name(CheckReport::Overall o) {
  switch (o) {
    case CheckReport::Overall::Valid: return "Valid";
    case CheckReport::Overall::Invalid: return "Invalid";
    default: return "ValidModuloStability";
  }
}

// ---------------------------------------------------------------- building premises

namespace {

Sequent with_formula(const Sequent& s, int slot, const Formula& f) {
  Sequent out = s;
  if (slot < 0) out.succedent = f;
  else out.antecedent[static_cast<std::size_t>(slot)] = f;
  return out;
}

const Formula& formula_of(const Sequent& s, int slot) {
  return slot < 0 ? s.succedent : s.antecedent.at(static_cast<std::size_t>(slot));
}

// Replaces a choice quantifier occurrence by its body instantiated at t.
std::optional<Sequent> instantiate(const Sequent& s, const Occurrence& occ, const Term& t) {
  const Formula& f = formula_of(s, occ.slot);
  const Formula& q = subformula_at(f, occ.path);
  try {
    Sequent out = with_formula(s, occ.slot, replace_at(f, occ.path, substitute(q.body(), q.name(), t)));
    return out;
  } catch (const CaptureError&) {
    return std::nullopt;
  }
}

Sequent pick_branch(const Sequent& s, const Occurrence& occ, int i) {
  const Formula& f = formula_of(s, occ.slot);
  const Formula& c = subformula_at(f, occ.path);
  return with_formula(s, occ.slot, replace_at(f, occ.path, c.child(static_cast<std::size_t>(i))));
}

bool witness_allowed(const Term& t, const Sequent& premise) {
  if (t.is_constant()) return true;
  if (!t.is_variable()) return false;
  return !bound_vars(premise).count(t.name());
}

}  // namespace

std::vector<WaitObligation> wait_obligations(const Sequent& s) {
  std::vector<WaitObligation> out;
  std::string fresh = fresh_name(all_vars(s), "v");
  for (const auto& occ : surface_occurrences(s.succedent, Op::ChoAnd))
    for (int i = 0; i < 2; ++i)
      out.push_back({WaitObligation::Kind::SuccConjunct, {-1, occ}, i, {}, pick_branch(s, {-1, occ}, i)});
  for (std::size_t j = 0; j < s.antecedent.size(); ++j)
    for (const auto& occ : surface_occurrences(s.antecedent[j], Op::ChoOr))
      for (int i = 0; i < 2; ++i) {
        Occurrence o{static_cast<int>(j), occ};
        out.push_back({WaitObligation::Kind::AntDisjunct, o, i, {}, pick_branch(s, o, i)});
      }
  for (const auto& occ : surface_occurrences(s.succedent, Op::ChoAll))
    out.push_back({WaitObligation::Kind::SuccUniversal, {-1, occ}, -1, fresh,
                   *instantiate(s, {-1, occ}, Term::variable(fresh))});
  for (std::size_t j = 0; j < s.antecedent.size(); ++j)
    for (const auto& occ : surface_occurrences(s.antecedent[j], Op::ChoEx)) {
      Occurrence o{static_cast<int>(j), occ};
      out.push_back({WaitObligation::Kind::AntExistential, o, -1, fresh, *instantiate(s, o, Term::variable(fresh))});
    }
  return out;
}

std::vector<Term> default_witnesses(const Sequent& s) {
  std::vector<Term> out;
  for (const auto& v : free_vars(s)) out.push_back(Term::variable(v));
  for (const auto& c : constants_of(s)) out.push_back(Term::constant(c));
  if (!constants_of(s).count("0")) out.push_back(Term::constant("0"));
  return out;
}

std::vector<ChooseOption> choose_options(const Sequent& s, const std::vector<Term>& witnesses) {
  std::vector<ChooseOption> out;
  for (const auto& occ : surface_occurrences(s.succedent, Op::ChoOr))
    for (int i = 0; i < 2; ++i) {
      RuleApp app;
      app.rule = Rule::SuccChooseDisjunct;
      app.occ = occ;
      app.choice = i;
      out.push_back({app, pick_branch(s, {-1, occ}, i)});
    }
  for (std::size_t j = 0; j < s.antecedent.size(); ++j)
    for (const auto& occ : surface_occurrences(s.antecedent[j], Op::ChoAnd))
      for (int i = 0; i < 2; ++i) {
        RuleApp app;
        app.rule = Rule::AntChooseConjunct;
        app.occ = occ;
        app.slot = static_cast<int>(j);
        app.choice = i;
        out.push_back({app, pick_branch(s, {static_cast<int>(j), occ}, i)});
      }
  auto quantifier_options = [&](int slot, Op op, Rule rule) {
    for (const auto& occ : surface_occurrences(formula_of(s, slot), op))
      for (const auto& t : witnesses) {
        auto premise = instantiate(s, {slot, occ}, t);
        if (!premise || !witness_allowed(t, *premise)) continue;
        RuleApp app;
        app.rule = rule;
        app.occ = occ;
        app.slot = slot;
        app.witness = t;
        out.push_back({app, std::move(*premise)});
      }
  };
  quantifier_options(-1, Op::ChoEx, Rule::SuccChooseWitness);
  for (std::size_t j = 0; j < s.antecedent.size(); ++j)
    quantifier_options(static_cast<int>(j), Op::ChoAll, Rule::AntChooseInstance);
  return out;
}

Sequent replicate_premise(const Sequent& s, int slot) {
  Sequent out = s;
  out.antecedent.push_back(s.antecedent.at(static_cast<std::size_t>(slot)));
  return out;
}

// ---------------------------------------------------------------- checking

namespace {

StepVerdict fail(std::string why) {
  StepVerdict v;
  v.kind = StepVerdict::Kind::Fail;
  v.reason = std::move(why);
  return v;
}

bool same_except(const Sequent& a, const Sequent& b, int slot) {
  if (a.antecedent.size() != b.antecedent.size()) return false;
  for (std::size_t j = 0; j < a.antecedent.size(); ++j)
    if (static_cast<int>(j) != slot && !(a.antecedent[j] == b.antecedent[j])) return false;
  return slot < 0 || a.succedent == b.succedent;
}

// Premise equals the conclusion with the quantifier at `occ` replaced by its body at
// some variable absent from the conclusion.
bool fresh_instance(const Sequent& conclusion, const Occurrence& occ, const Sequent& premise) {
  if (!same_except(conclusion, premise, occ.slot)) return false;
  const Formula& f = formula_of(conclusion, occ.slot);
  const Formula& q = subformula_at(f, occ.path);
  const Formula& g = formula_of(premise, occ.slot);
  Formula pattern = replace_at(f, occ.path, q.body());
  auto m = match_instance(pattern, q.name(), g);
  if (!m.matched) return false;
  if (!m.var_occurs) return true;
  return m.term.is_variable() && !all_vars(conclusion).count(m.term.name());
}

StepVerdict check_wait(const Sequent& x, const std::vector<Sequent>& premises, const ClassicalBudget& budget) {
  for (const auto& ob : wait_obligations(x)) {
    bool found = false;
    for (const auto& p : premises) {
      if (ob.kind == WaitObligation::Kind::SuccConjunct || ob.kind == WaitObligation::Kind::AntDisjunct)
        found = p == ob.premise;
      else
        found = fresh_instance(x, ob.occ, p);
      if (found) break;
    }
    if (!found) return fail("missing Wait premise " + ob.premise.str());
  }
  auto v = check_stability(x, budget);
  StepVerdict out;
  out.resolved.rule = Rule::Wait;
  if (v.kind == ClassicalVerdict::Kind::Countermodel) return fail("conclusion is not stable");
  if (v.kind == ClassicalVerdict::Kind::Unknown) {
    out.kind = StepVerdict::Kind::UnverifiedStability;
    out.reason = "stability could not be decided within budget";
  }
  return out;
}

// Connective choices: try the given occurrence/branch, or all of them.
StepVerdict check_connective(const Sequent& x, const RuleApp& app, const Sequent& premise, Op op, bool succedent) {
  std::vector<int> slots;
  if (succedent) slots.push_back(-1);
  else if (app.slot >= 0) slots.push_back(app.slot);
  else
    for (std::size_t j = 0; j < x.antecedent.size(); ++j) slots.push_back(static_cast<int>(j));
  for (int slot : slots) {
    if (slot >= static_cast<int>(x.antecedent.size())) return fail("no such antecedent slot");
    const Formula& f = formula_of(x, slot);
    std::vector<Path> occs;
    if (app.occ) {
      if (!is_surface(f, *app.occ)) return fail("occurrence is not a surface occurrence");
      if (subformula_at(f, *app.occ).op() != op) return fail("occurrence has the wrong operator");
      occs.push_back(*app.occ);
    } else {
      occs = surface_occurrences(f, op);
    }
    for (const auto& occ : occs)
      for (int i = 0; i < 2; ++i) {
        if (app.choice >= 0 && app.choice != i) continue;
        if (pick_branch(x, {slot, occ}, i) == premise) {
          StepVerdict v;
          v.resolved = app;
          v.resolved.occ = occ;
          v.resolved.slot = succedent ? -1 : slot;
          v.resolved.choice = i;
          return v;
        }
      }
  }
  return fail("premise is not obtained by choosing a component");
}

StepVerdict check_quantifier(const Sequent& x, const RuleApp& app, const Sequent& premise, Op op, bool succedent) {
  std::vector<int> slots;
  if (succedent) slots.push_back(-1);
  else if (app.slot >= 0) slots.push_back(app.slot);
  else
    for (std::size_t j = 0; j < x.antecedent.size(); ++j) slots.push_back(static_cast<int>(j));
  for (int slot : slots) {
    if (slot >= static_cast<int>(x.antecedent.size())) return fail("no such antecedent slot");
    if (!same_except(x, premise, slot)) continue;
    const Formula& f = formula_of(x, slot);
    std::vector<Path> occs;
    if (app.occ) {
      if (!is_surface(f, *app.occ)) return fail("occurrence is not a surface occurrence");
      if (subformula_at(f, *app.occ).op() != op) return fail("occurrence has the wrong operator");
      occs.push_back(*app.occ);
    } else {
      occs = surface_occurrences(f, op);
    }
    for (const auto& occ : occs) {
      std::optional<Term> t = app.witness;
      if (!t) {
        const Formula& q = subformula_at(f, occ);
        auto m = match_instance(replace_at(f, occ, q.body()), q.name(), formula_of(premise, slot));
        if (!m.matched) continue;
        t = m.var_occurs ? m.term : Term::constant("0");
      }
      auto expected = instantiate(x, {slot, occ}, *t);
      if (!expected || !(*expected == premise)) continue;
      if (!witness_allowed(*t, premise))
        return fail("witness " + t->str() + " has bound occurrences in the premise");
      StepVerdict v;
      v.resolved = app;
      v.resolved.occ = occ;
      v.resolved.slot = succedent ? -1 : slot;
      v.resolved.witness = t;
      return v;
    }
  }
  return fail("premise is not an instance of a choice quantifier");
}

}  // namespace

StepVerdict check_step(const Sequent& x, const RuleApp& app, const std::vector<Sequent>& premises,
                       const ClassicalBudget& budget) {
  if (app.rule == Rule::Wait) return check_wait(x, premises, budget);
  if (premises.size() != 1) return fail(std::string(rule_name(app.rule)) + " takes exactly one premise");
  const Sequent& p = premises[0];
  switch (app.rule) {
    case Rule::SuccChooseDisjunct:
      return check_connective(x, app, p, Op::ChoOr, true);
    case Rule::AntChooseConjunct:
      return check_connective(x, app, p, Op::ChoAnd, false);
    case Rule::SuccChooseWitness:
      return check_quantifier(x, app, p, Op::ChoEx, true);
    case Rule::AntChooseInstance:
      return check_quantifier(x, app, p, Op::ChoAll, false);
    case Rule::Replicate: {
      for (std::size_t j = 0; j < x.antecedent.size(); ++j) {
        if (app.slot >= 0 && app.slot != static_cast<int>(j)) continue;
        if (replicate_premise(x, static_cast<int>(j)) == p) {
          StepVerdict v;
          v.resolved = app;
          v.resolved.slot = static_cast<int>(j);
          return v;
        }
      }
      return fail("premise does not append a copy of an antecedent formula");
    }
    case Rule::Exchange: {
      int a = app.slot, b = app.slot_b;
      int n = static_cast<int>(x.antecedent.size());
      if (a < 0 || b < 0 || a >= n || b >= n || std::abs(a - b) != 1) return fail("exchange needs two adjacent slots");
      Sequent expected = x;
      std::swap(expected.antecedent[static_cast<std::size_t>(a)], expected.antecedent[static_cast<std::size_t>(b)]);
      if (!(expected == p)) return fail("premise is not the conclusion with the two slots exchanged");
      StepVerdict v;
      v.resolved = app;
      return v;
    }
    case Rule::Weakening: {
      std::vector<int> ins = app.inserted;
      std::sort(ins.begin(), ins.end());
      Sequent expected;
      expected.succedent = x.succedent;
      for (std::size_t j = 0; j < x.antecedent.size(); ++j)
        if (!std::binary_search(ins.begin(), ins.end(), static_cast<int>(j))) expected.antecedent.push_back(x.antecedent[j]);
      if (ins.empty() || expected.antecedent.size() + ins.size() != x.antecedent.size())
        return fail("weakening needs a nonempty set of existing slots");
      if (!(expected == p)) return fail("premise is not the conclusion without the inserted slots");
      StepVerdict v;
      v.resolved = app;
      return v;
    }
    default:
      return fail("unknown rule");
  }
}

CheckReport check_proof(const Proof& proof, const ClassicalBudget& budget) {
  CheckReport report;
  bool unverified = false, invalid = proof.steps.empty();
  for (std::size_t i = 0; i < proof.steps.size(); ++i) {
    const auto& step = proof.steps[i];
    std::vector<Sequent> premises;
    StepVerdict v;
    bool ordered = true;
    for (auto k : step.premises) {
      if (k >= i) ordered = false;
      else premises.push_back(proof.steps[k].sequent);
    }
    if (!ordered) v = fail("premises must refer to earlier steps");
    else v = check_step(step.sequent, step.app, premises, budget);
    invalid = invalid || v.kind == StepVerdict::Kind::Fail;
    unverified = unverified || v.kind == StepVerdict::Kind::UnverifiedStability;
    report.steps.push_back(std::move(v));
  }
  report.overall = invalid ? CheckReport::Overall::Invalid
                   : unverified ? CheckReport::Overall::ValidModuloStability
                                : CheckReport::Overall::Valid;
  return report;
}

}  // namespace cl12
