#include "cl12/classical.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace cl12 {

// ---------------------------------------------------------------- numerals and models

Element numeral_mod(const std::string& numeral, Element m) {
  Element v = 0;
  for (char c : numeral) v = (2 * v + static_cast<Element>(c - '0')) % m;
  return v;
}

std::optional<Element> numeral_value(const std::string& numeral) {
  if (numeral.size() > 64) return std::nullopt;
  Element v = 0;
  for (char c : numeral) v = 2 * v + static_cast<Element>(c - '0');
  return v;
}

std::string to_numeral(Element v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + (v & 1)));
    v >>= 1;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

namespace {
std::size_t table_index(std::span<const Element> args, std::size_t n) {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * n + static_cast<std::size_t>(a);
  return idx;
}

std::size_t table_size(std::size_t n, std::size_t arity) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < arity; ++i) s *= n;
  return s;
}

void tabulate(Table& t, std::size_t n, std::size_t arity,
              const std::function<Element(std::span<const Element>)>& fn) {
  t.arity = arity;
  t.values.assign(table_size(n, arity), 0);
  std::vector<Element> args(arity, 0);
  for (std::size_t idx = 0; idx < t.values.size(); ++idx) {
    std::size_t rest = idx;
    for (std::size_t k = arity; k-- > 0;) {
      args[k] = rest % n;
      rest /= n;
    }
    t.values[idx] = fn(args);
  }
}
}  // namespace

Element FiniteModel::name(const std::string& numeral) const {
  auto it = naming.find(numeral);
  if (it != naming.end()) return it->second;
  return numeral_mod(numeral, domain_size);
}

Element FiniteModel::apply(const std::string& letter, std::span<const Element> args) const {
  auto it = functions.find(letter);
  if (it == functions.end()) throw UninterpretedLetter("no interpretation for function " + letter);
  if (it->second.arity != args.size()) throw UninterpretedLetter("arity mismatch for function " + letter);
  return it->second.values.at(table_index(args, domain_size));
}

bool FiniteModel::holds(const std::string& letter, std::span<const Element> args) const {
  auto it = predicates.find(letter);
  if (it == predicates.end()) throw UninterpretedLetter("no interpretation for predicate " + letter);
  if (it->second.arity != args.size()) throw UninterpretedLetter("arity mismatch for predicate " + letter);
  return it->second.values.at(table_index(args, domain_size)) != 0;
}

void FiniteModel::set_function(const std::string& letter, std::size_t arity,
                               const std::function<Element(std::span<const Element>)>& fn) {
  Table& t = functions[letter];
  tabulate(t, domain_size, arity, [&](std::span<const Element> a) { return fn(a) % domain_size; });
}

void FiniteModel::set_predicate(const std::string& letter, std::size_t arity,
                                const std::function<bool(std::span<const Element>)>& fn) {
  Table& t = predicates[letter];
  tabulate(t, domain_size, arity, [&](std::span<const Element> a) { return fn(a) ? 1 : 0; });
}

// ---------------------------------------------------------------- evaluation

namespace {

Element eval_term(const Term& t, const FiniteModel& m, const Assignment& env) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw std::invalid_argument("unassigned variable " + t.name());
      return it->second;
    }
    case Term::Kind::Constant:
      return m.name(t.name());
    case Term::Kind::Application: {
      std::vector<Element> args;
      for (const auto& a : t.args()) args.push_back(eval_term(a, m, env));
      return m.apply(t.name(), args);
    }
  }
  return 0;
}

bool eval_finite(const Formula& f, const FiniteModel& m, Assignment& env) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: {
      std::vector<Element> args;
      for (const auto& a : f.terms()) args.push_back(eval_term(a, m, env));
      return m.holds(f.name(), args) != f.negated();
    }
    case Op::Equality:
      return (eval_term(f.terms()[0], m, env) == eval_term(f.terms()[1], m, env)) != f.negated();
    case Op::ParAnd: return eval_finite(f.left(), m, env) && eval_finite(f.right(), m, env);
    case Op::ParOr: return eval_finite(f.left(), m, env) || eval_finite(f.right(), m, env);
    case Op::BlindAll:
    case Op::BlindEx: {
      bool all = f.op() == Op::BlindAll;
      auto saved = env.find(f.name()) == env.end() ? std::nullopt : std::optional(env[f.name()]);
      bool result = all;
      for (Element d = 0; d < m.domain_size; ++d) {
        env[f.name()] = d;
        bool v = eval_finite(f.body(), m, env);
        if (v != all) {
          result = v;
          break;
        }
      }
      if (saved) env[f.name()] = *saved;
      else env.erase(f.name());
      return result;
    }
    default:
      throw std::invalid_argument("evaluation of a non-elementary formula: " + f.str());
  }
}

std::optional<Element> eval_ideal_term(const Term& t, const Interpretation& in, const Assignment& env) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = env.find(t.name());
      if (it == env.end()) throw std::invalid_argument("unassigned variable " + t.name());
      return it->second;
    }
    case Term::Kind::Constant:
      return numeral_value(t.name());
    case Term::Kind::Application: {
      auto it = in.functions.find(t.name());
      if (it == in.functions.end()) throw UninterpretedLetter("no interpretation for function " + t.name());
      std::vector<Element> args;
      for (const auto& a : t.args()) {
        auto v = eval_ideal_term(a, in, env);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      return it->second(args);
    }
  }
  return std::nullopt;
}

std::optional<bool> eval_ideal(const Formula& f, const Interpretation& in, const Assignment& env) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: {
      auto it = in.predicates.find(f.name());
      if (it == in.predicates.end()) throw UninterpretedLetter("no interpretation for predicate " + f.name());
      std::vector<Element> args;
      for (const auto& a : f.terms()) {
        auto v = eval_ideal_term(a, in, env);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      return it->second(args) != f.negated();
    }
    case Op::Equality: {
      auto a = eval_ideal_term(f.terms()[0], in, env);
      auto b = eval_ideal_term(f.terms()[1], in, env);
      if (!a || !b) return std::nullopt;
      return (*a == *b) != f.negated();
    }
    case Op::ParAnd:
    case Op::ParOr: {
      bool is_and = f.op() == Op::ParAnd;
      auto l = eval_ideal(f.left(), in, env);
      if (l && *l != is_and) return *l;
      auto r = eval_ideal(f.right(), in, env);
      if (r && *r != is_and) return *r;
      if (l && r) return is_and;
      return std::nullopt;
    }
    case Op::BlindAll:
    case Op::BlindEx: {
      if (!in.truth_oracle) return std::nullopt;
      std::map<std::string, Term> b;
      for (const auto& [v, e] : env) b.emplace(v, Term::constant(to_numeral(e)));
      return in.truth_oracle(substitute(f, b));
    }
    default:
      throw std::invalid_argument("evaluation of a non-elementary formula: " + f.str());
  }
}

}  // namespace

bool eval_elementary(const Formula& f, const FiniteModel& m, const Assignment& assignment) {
  Assignment env = assignment;
  return eval_finite(f, m, env);
}

bool eval_elementary(const Formula& f, const FiniteModel& m, const VcMapping& e) {
  Assignment env;
  for (const auto& [v, c] : e) env[v] = m.name(c);
  return eval_finite(f, m, env);
}

std::optional<bool> eval_elementary(const Formula& f, const Interpretation& i, const Assignment& assignment) {
  if (i.finite) return eval_elementary(f, *i.finite, assignment);
  return eval_ideal(f, i, assignment);
}

// ---------------------------------------------------------------- congruence closure

namespace {

class Congruence {
 public:
  std::size_t add(const Term& t) {
    std::string key = t.str();
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    std::vector<std::size_t> args;
    for (const auto& a : t.args()) args.push_back(add(a));
    std::size_t id = parent_.size();
    parent_.push_back(id);
    nodes_.push_back({t.kind() == Term::Kind::Application ? t.name() : std::string(), std::move(args), t});
    ids_.emplace(std::move(key), id);
    return id;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void merge(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

  void close() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<std::string, std::vector<std::size_t>>, std::size_t> sig;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].fn.empty()) continue;
        std::vector<std::size_t> key;
        for (auto a : nodes_[i].args) key.push_back(find(a));
        auto [it, inserted] = sig.emplace(std::make_pair(nodes_[i].fn, key), i);
        if (!inserted && find(it->second) != find(i)) {
          merge(it->second, i);
          changed = true;
        }
      }
    }
  }

  std::size_t size() const { return nodes_.size(); }
  const Term& term(std::size_t i) const { return nodes_[i].term; }
  const std::vector<std::size_t>& args(std::size_t i) const { return nodes_[i].args; }
  const std::string& fn(std::size_t i) const { return nodes_[i].fn; }

 private:
  struct N {
    std::string fn;
    std::vector<std::size_t> args;
    Term term;
  };
  std::vector<std::size_t> parent_;
  std::vector<N> nodes_;
  std::unordered_map<std::string, std::size_t> ids_;
};

struct LiteralSet {
  std::vector<Formula> lits;
  std::unordered_set<std::string> keys;
};

// Closed iff the literals are inconsistent modulo ground equality.
bool inconsistent(const std::vector<Formula>& lits, Congruence& cc) {
  std::vector<std::pair<std::size_t, std::size_t>> diseq;
  struct PredLit {
    std::string letter;
    std::vector<std::size_t> args;
    bool negated;
  };
  std::vector<PredLit> preds;
  for (const auto& l : lits) {
    if (l.op() == Op::Equality) {
      std::size_t a = cc.add(l.terms()[0]), b = cc.add(l.terms()[1]);
      if (l.negated()) diseq.emplace_back(a, b);
      else cc.merge(a, b);
    } else {
      PredLit p{l.name(), {}, l.negated()};
      for (const auto& t : l.terms()) p.args.push_back(cc.add(t));
      preds.push_back(std::move(p));
    }
  }
  cc.close();
  for (auto [a, b] : diseq)
    if (cc.find(a) == cc.find(b)) return true;
  std::map<std::pair<std::string, std::vector<std::size_t>>, int> seen;
  for (const auto& p : preds) {
    std::vector<std::size_t> key;
    for (auto a : p.args) key.push_back(cc.find(a));
    int bit = p.negated ? 2 : 1;
    int& slot = seen[{p.letter, key}];
    slot |= bit;
    if (slot == 3) return true;
  }
  return false;
}

// ---------------------------------------------------------------- tableau

enum class BranchResult { Closed, Saturated, Cut };

struct Tableau {
  const ClassicalBudget& budget;
  std::size_t steps = 0;
  std::size_t params = 0;
  std::optional<Countermodel> model;
  const Formula& original;

  struct Branch {
    std::vector<Formula> todo;
    std::vector<Formula> betas;
    std::vector<Formula> lits;
    std::unordered_set<std::string> lit_keys;
    std::vector<Formula> gammas;
    std::set<std::pair<std::size_t, std::string>> used;
    std::vector<Term> params;
    std::size_t rounds = 0;
  };

  std::string fresh_param() { return "_d" + std::to_string(++params); }

  // Returns true when the branch is closed syntactically during expansion.
  bool expand(Branch& b) {
    while (!b.todo.empty()) {
      Formula f = std::move(b.todo.back());
      b.todo.pop_back();
      ++steps;
      switch (f.op()) {
        case Op::Top: break;
        case Op::Bottom: return true;
        case Op::Atom:
        case Op::Equality: {
          if (f.op() == Op::Equality && f.negated() && f.terms()[0] == f.terms()[1]) return true;
          if (b.lit_keys.count(negate(f).str())) return true;
          if (b.lit_keys.insert(f.str()).second) b.lits.push_back(f);
          break;
        }
        case Op::ParAnd:
          b.todo.push_back(f.right());
          b.todo.push_back(f.left());
          break;
        case Op::ParOr:
          b.betas.push_back(f);
          break;
        case Op::BlindEx: {
          Term c = Term::variable(fresh_param());
          b.params.push_back(c);
          b.todo.push_back(substitute(f.body(), f.name(), c));
          break;
        }
        case Op::BlindAll:
          b.gammas.push_back(f);
          break;
        default:
          throw std::invalid_argument("prove_valid expects an elementary formula");
      }
    }
    return false;
  }

  std::vector<Term> branch_terms(const Branch& b) {
    std::vector<Term> out;
    std::set<std::string> seen;
    std::function<void(const Term&)> add = [&](const Term& t) {
      for (const auto& a : t.args()) add(a);
      if (seen.insert(t.str()).second) out.push_back(t);
    };
    for (const auto& p : b.params) add(p);
    for (const auto& l : b.lits)
      for (const auto& t : l.terms()) add(t);
    if (out.empty()) out.push_back(Term::variable("_d0"));
    return out;
  }

  BranchResult run(Branch b) {
    for (;;) {
      if (steps > budget.max_steps) return BranchResult::Cut;
      if (expand(b)) return BranchResult::Closed;
      {
        Congruence cc;
        if (inconsistent(b.lits, cc)) return BranchResult::Closed;
      }
      if (!b.betas.empty()) {
        Formula f = b.betas.back();
        b.betas.pop_back();
        Branch right = b;
        b.todo.push_back(f.left());
        right.todo.push_back(f.right());
        BranchResult l = run(std::move(b));
        if (l == BranchResult::Saturated) return l;
        BranchResult r = run(std::move(right));
        if (r != BranchResult::Closed) return r;
        return l;
      }
      // Universal instantiation round over the ground terms of the branch.
      std::vector<Term> terms = branch_terms(b);
      bool grew = false;
      if (b.rounds >= budget.max_rounds) {
        for (std::size_t g = 0; g < b.gammas.size() && !grew; ++g)
          for (const auto& t : terms)
            if (!b.used.count({g, t.str()})) {
              grew = true;
              break;
            }
        if (grew) return BranchResult::Cut;
      } else {
        for (std::size_t g = 0; g < b.gammas.size(); ++g) {
          for (const auto& t : terms) {
            if (!b.used.insert({g, t.str()}).second) continue;
            b.todo.push_back(substitute(b.gammas[g].body(), b.gammas[g].name(), t));
            grew = true;
          }
        }
        ++b.rounds;
      }
      if (!grew) {
        if (build_model(b)) return BranchResult::Saturated;
        return BranchResult::Cut;
      }
    }
  }

  // Reads a model off an open saturated branch; kept only if it really falsifies.
  bool build_model(const Branch& b) {
    Congruence cc;
    for (const auto& t : branch_terms(b)) cc.add(t);
    auto fv = free_vars(original);
    for (const auto& v : fv) cc.add(Term::variable(v));
    for (const auto& c : constants_of(original)) cc.add(Term::constant(c));
    inconsistent(b.lits, cc);
    std::map<std::size_t, Element> cls;
    for (std::size_t i = 0; i < cc.size(); ++i) {
      std::size_t r = cc.find(i);
      if (!cls.count(r)) cls.emplace(r, static_cast<Element>(cls.size()));
    }
    FiniteModel m;
    m.domain_size = std::max<std::size_t>(1, cls.size());
    auto value = [&](std::size_t id) { return cls.at(cc.find(id)); };
    Countermodel out;
    for (std::size_t i = 0; i < cc.size(); ++i) {
      const Term& t = cc.term(i);
      if (t.is_constant()) m.naming[t.name()] = value(i);
      if (t.is_variable() && fv.count(t.name())) out.assignment[t.name()] = value(i);
    }
    for (const auto& [letter, arity] : function_letters(original)) {
      Table& tab = m.functions[letter];
      tab.arity = arity;
      tab.values.assign(table_size(m.domain_size, arity), 0);
    }
    for (const auto& [letter, arity] : predicate_letters(original)) {
      Table& tab = m.predicates[letter];
      tab.arity = arity;
      tab.values.assign(table_size(m.domain_size, arity), 0);
    }
    for (std::size_t i = 0; i < cc.size(); ++i) {
      if (cc.fn(i).empty()) continue;
      std::vector<Element> args;
      for (auto a : cc.args(i)) args.push_back(value(a));
      auto it = m.functions.find(cc.fn(i));
      if (it != m.functions.end()) it->second.values[table_index(args, m.domain_size)] = value(i);
    }
    for (const auto& l : b.lits) {
      if (l.op() != Op::Atom || l.negated()) continue;
      std::vector<Element> args;
      for (const auto& t : l.terms()) args.push_back(value(cc.add(t)));
      m.predicates[l.name()].values[table_index(args, m.domain_size)] = 1;
    }
    out.model = std::move(m);
    try {
      if (eval_elementary(original, out.model, out.assignment)) return false;
    } catch (const std::exception&) {
      return false;
    }
    model = std::move(out);
    return true;
  }
};

}  // namespace

ClassicalVerdict prove_valid(const Formula& f, const ClassicalBudget& budget) {
  ClassicalVerdict v;
  Tableau tab{budget, 0, 0, std::nullopt, f};
  Tableau::Branch root;
  root.todo.push_back(negate(f));
  for (const auto& x : free_vars(f)) root.params.push_back(Term::variable(x));
  BranchResult r = tab.run(std::move(root));
  v.steps = tab.steps;
  if (r == BranchResult::Closed) {
    v.kind = ClassicalVerdict::Kind::Valid;
    return v;
  }
  if (r == BranchResult::Saturated && tab.model) {
    v.kind = ClassicalVerdict::Kind::Countermodel;
    v.countermodel = std::move(tab.model);
    return v;
  }
  if (auto cm = find_countermodel(f, budget.model_domain, budget.model_nodes)) {
    v.kind = ClassicalVerdict::Kind::Countermodel;
    v.countermodel = std::move(cm);
    return v;
  }
  v.kind = ClassicalVerdict::Kind::Unknown;
  return v;
}

ClassicalVerdict check_stability(const Sequent& s, const ClassicalBudget& budget) {
  return prove_valid(elementarize(s), budget);
}

}  // namespace cl12
