#pragma once

// Reference implementations and generators used as independent oracles by the tests.
// They are written independently and share no code with the library's
// evaluators, provers or enumerators.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cl12/classical.hpp"
#include "cl12/games.hpp"
#include "cl12/syntax.hpp"

namespace oracle {

using namespace cl12;
using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// ---------------------------------------------------------------- evaluation

inline Element eval_term(const Term& t, const FiniteModel& m, const std::map<std::string, Element>& a) {
  if (t.kind() == Term::Kind::Variable) return a.at(t.name());
  if (t.kind() == Term::Kind::Constant) return m.name(t.name());
  std::vector<Element> args;
  for (const auto& s : t.args()) args.push_back(eval_term(s, m, a));
  return m.apply(t.name(), args);
}

// Tarskian truth by structural recursion over the domain.
inline bool eval(const Formula& f, const FiniteModel& m, std::map<std::string, Element> a) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: {
      std::vector<Element> args;
      for (const auto& t : f.terms()) args.push_back(eval_term(t, m, a));
      return m.holds(f.name(), args) != f.negated();
    }
    case Op::Equality:
      return (eval_term(f.terms()[0], m, a) == eval_term(f.terms()[1], m, a)) != f.negated();
    case Op::ParAnd: return eval(f.left(), m, a) && eval(f.right(), m, a);
    case Op::ParOr: return eval(f.left(), m, a) || eval(f.right(), m, a);
    case Op::BlindAll:
    case Op::BlindEx: {
      bool all = f.op() == Op::BlindAll;
      for (Element d = 0; d < m.domain_size; ++d) {
        a[f.name()] = d;
        bool v = eval(f.body(), m, a);
        if (all && !v) return false;
        if (!all && v) return true;
      }
      return all;
    }
    default: throw std::logic_error("reference evaluator got a choice operator");
  }
}

// ---------------------------------------------------------------- syntax

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == Term::Kind::Variable) out.insert(t.name());
  for (const auto& s : t.args()) term_vars(s, out);
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  switch (f.op()) {
    case Op::Atom:
    case Op::Equality:
      for (const auto& t : f.terms()) term_vars(t, out);
      return out;
    case Op::Top:
    case Op::Bottom: return out;
    default: break;
  }
  if (is_quantifier(f.op())) {
    out = oracle::free_vars(f.body());
    out.erase(f.name());
    return out;
  }
  out = oracle::free_vars(f.left());
  auto r = oracle::free_vars(f.right());
  out.insert(r.begin(), r.end());
  return out;
}

inline std::size_t choice_count(const Formula& f) {
  if (is_literal(f.op())) return 0;
  std::size_t n = is_choice(f.op()) ? 1 : 0;
  for (std::size_t i = 0; i < f.child_count(); ++i) n += choice_count(f.child(i));
  return n;
}

inline std::size_t total_choice_ops(const Formula& f) { return choice_count(f); }

// ---------------------------------------------------------------- generators

struct GenOptions {
  std::vector<std::string> free = {"a", "b"};
  std::vector<std::string> bound = {"x", "y", "z"};
  std::vector<std::string> constants = {"0", "1", "10"};
  std::vector<std::string> unary_preds = {"p"};
  std::vector<std::string> nullary_preds = {"q"};
  std::vector<std::string> unary_fns = {};
  bool choice = true;
  bool blind = true;
  bool equality = true;
};

inline Term random_term(Rng& rng, const GenOptions& o, const std::vector<std::string>& scope) {
  std::vector<std::string> vars = o.free;
  vars.insert(vars.end(), scope.begin(), scope.end());
  std::size_t k = pick(rng, 4);
  if (k == 0 || vars.empty()) return Term::constant(o.constants[pick(rng, o.constants.size())]);
  if (k == 1 && !o.unary_fns.empty())
    return Term::application(o.unary_fns[pick(rng, o.unary_fns.size())], {Term::variable(vars[pick(rng, vars.size())])});
  return Term::variable(vars[pick(rng, vars.size())]);
}

inline Formula random_literal(Rng& rng, const GenOptions& o, const std::vector<std::string>& scope) {
  std::size_t k = pick(rng, 10);
  bool neg = coin(rng);
  if (k == 0) return coin(rng) ? Formula::top() : Formula::bottom();
  if (k <= 3 && o.equality) return Formula::equality(random_term(rng, o, scope), random_term(rng, o, scope), neg);
  if (k <= 5 && !o.nullary_preds.empty())
    return Formula::atom(o.nullary_preds[pick(rng, o.nullary_preds.size())], {}, neg);
  if (!o.unary_preds.empty())
    return Formula::atom(o.unary_preds[pick(rng, o.unary_preds.size())], {random_term(rng, o, scope)}, neg);
  return Formula::atom(o.nullary_preds.at(0), {}, neg);
}

// Random NNF formula; bound variables are never reused along a branch and never free.
inline Formula random_formula(Rng& rng, int depth, const GenOptions& o, std::vector<std::string> scope = {}) {
  if (depth <= 0 || coin(rng, 0.25)) return random_literal(rng, o, scope);
  std::vector<Op> ops = {Op::ParAnd, Op::ParOr};
  if (o.choice) ops.insert(ops.end(), {Op::ChoAnd, Op::ChoOr});
  std::vector<std::string> unused;
  for (const auto& v : o.bound)
    if (std::find(scope.begin(), scope.end(), v) == scope.end()) unused.push_back(v);
  if (!unused.empty()) {
    if (o.blind) ops.insert(ops.end(), {Op::BlindAll, Op::BlindEx});
    if (o.choice) ops.insert(ops.end(), {Op::ChoAll, Op::ChoEx});
  }
  Op op = ops[pick(rng, ops.size())];
  if (is_quantifier(op)) {
    std::string v = unused[pick(rng, unused.size())];
    auto inner = scope;
    inner.push_back(v);
    return Formula::quantifier(op, v, random_formula(rng, depth - 1, o, inner));
  }
  return Formula::binary(op, random_formula(rng, depth - 1, o, scope), random_formula(rng, depth - 1, o, scope));
}

// Random total model over 1..max_domain elements for the letters of the options.
inline FiniteModel random_model(Rng& rng, std::size_t domain, const GenOptions& o) {
  FiniteModel m;
  m.domain_size = domain;
  for (const auto& p : o.unary_preds) {
    std::vector<bool> vals(domain);
    for (auto&& v : vals) v = coin(rng);
    m.set_predicate(p, 1, [vals](std::span<const Element> a) { return bool(vals[a[0]]); });
  }
  for (const auto& p : o.nullary_preds) {
    bool v = coin(rng);
    m.set_predicate(p, 0, [v](std::span<const Element>) { return v; });
  }
  for (const auto& f : o.unary_fns) {
    std::vector<Element> vals(domain);
    for (auto& v : vals) v = pick(rng, domain);
    m.set_function(f, 1, [vals](std::span<const Element> a) { return vals[a[0]]; });
  }
  return m;
}

// Every model over domains 1..max_domain for a set of unary and nullary predicates, with
// every assignment to `vars` and every naming of `constants`. Calls `visit` until it
// returns false; returns whether all visits returned true.
inline bool all_models(std::size_t max_domain, const std::vector<std::string>& unary,
                       const std::vector<std::string>& nullary, const std::vector<std::string>& vars,
                       const std::vector<std::string>& constants,
                       const std::function<bool(const FiniteModel&, const std::map<std::string, Element>&)>& visit) {
  for (std::size_t d = 1; d <= max_domain; ++d) {
    std::size_t bits = unary.size() * d + nullary.size();
    std::size_t slots = vars.size() + constants.size();
    std::size_t assignments = 1;
    for (std::size_t i = 0; i < slots; ++i) assignments *= d;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << bits); ++mask) {
      FiniteModel m;
      m.domain_size = d;
      std::size_t bit = 0;
      for (const auto& p : unary) {
        std::vector<bool> vals(d);
        for (std::size_t e = 0; e < d; ++e) vals[e] = (mask >> bit++) & 1;
        m.set_predicate(p, 1, [vals](std::span<const Element> a) { return bool(vals[a[0]]); });
      }
      for (const auto& p : nullary) {
        bool v = (mask >> bit++) & 1;
        m.set_predicate(p, 0, [v](std::span<const Element>) { return v; });
      }
      for (std::size_t code = 0; code < assignments; ++code) {
        std::map<std::string, Element> a;
        std::size_t c = code;
        for (const auto& v : vars) {
          a[v] = c % d;
          c /= d;
        }
        FiniteModel named = m;
        for (const auto& k : constants) {
          named.naming[k] = c % d;
          c /= d;
        }
        if (!visit(named, a)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------- games

// Longest legal run of a formula game, by exhaustive play with a two-constant pool.
inline std::size_t longest_run(const Formula& f, Role role) {
  std::size_t best = 0;
  for (Player who : {Player::Top, Player::Bot}) {
    for (const auto& s : formula_move_schemas(f, role, who)) {
      std::vector<std::string> moves;
      if (s.kind == MoveSchema::Kind::ChooseConstant) moves = {s.encode("0"), s.encode("1")};
      else moves = {s.encode()};
      for (const auto& m : moves) {
        auto r = apply_formula_move(f, role, who, m);
        if (auto* st = std::get_if<FormulaStep>(&r)) best = std::max(best, 1 + longest_run(st->next, role));
      }
    }
  }
  return best;
}

// The delay relation written out from its two conditions.
inline bool is_delay(const Run& u, const Run& g, Player p) {
  if (u.size() != g.size()) return false;
  for (Player q : {Player::Top, Player::Bot}) {
    std::vector<std::string> a, b;
    for (const auto& m : u)
      if (m.player == q) a.push_back(m.move);
    for (const auto& m : g)
      if (m.player == q) b.push_back(m.move);
    if (a != b) return false;
  }
  // position of the n-th move of player q in run r
  auto where = [](const Run& r, Player q) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].player == q) pos.push_back(i);
    return pos;
  };
  auto gp = where(g, p), go = where(g, opponent(p));
  auto up = where(u, p), uo = where(u, opponent(p));
  for (std::size_t n = 0; n < gp.size(); ++n)
    for (std::size_t k = 0; k < go.size(); ++k)
      if (gp[n] > go[k] && !(up[n] > uo[k])) return false;
  return true;
}

// A random p-delay of g: repeatedly move a p-move one step right past an opponent move.
inline Run random_delay(Rng& rng, Run g, Player p, std::size_t swaps) {
  for (std::size_t s = 0; s < swaps && g.size() >= 2; ++s) {
    std::size_t i = pick(rng, g.size() - 1);
    if (g[i].player == p && g[i + 1].player != p) std::swap(g[i], g[i + 1]);
  }
  return g;
}

}  // namespace oracle
