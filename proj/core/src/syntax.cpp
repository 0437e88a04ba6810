#include "cl12/syntax.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace cl12 {

// ---------------------------------------------------------------- terms

bool is_numeral(std::string_view s) {
  if (s.empty()) return false;
  if (s == "0") return true;
  if (s[0] != '1') return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

Term Term::variable(std::string name) {
  Term t;
  t.kind_ = Kind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::constant(std::string numeral) {
  if (!is_numeral(numeral)) throw std::invalid_argument("not a binary numeral: " + numeral);
  Term t;
  t.kind_ = Kind::Constant;
  t.name_ = std::move(numeral);
  return t;
}

Term Term::application(std::string letter, std::vector<Term> args) {
  Term t;
  t.kind_ = Kind::Application;
  t.name_ = std::move(letter);
  t.args_ = std::move(args);
  return t;
}

std::string Term::str() const {
  if (kind_ != Kind::Application) return name_;
  std::string out = name_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i].str();
  }
  return out + ")";
}

// ---------------------------------------------------------------- ops

bool is_parallel(Op op) { return op == Op::ParAnd || op == Op::ParOr; }
bool is_choice_connective(Op op) { return op == Op::ChoAnd || op == Op::ChoOr; }
bool is_choice_quantifier(Op op) { return op == Op::ChoAll || op == Op::ChoEx; }
bool is_blind(Op op) { return op == Op::BlindAll || op == Op::BlindEx; }
bool is_quantifier(Op op) { return is_blind(op) || is_choice_quantifier(op); }
bool is_binary(Op op) { return is_parallel(op) || is_choice_connective(op); }
bool is_literal(Op op) {
  return op == Op::Atom || op == Op::Equality || op == Op::Top || op == Op::Bottom;
}

// ---------------------------------------------------------------- formulas

struct Formula::Node {
  Op op = Op::Top;
  bool negated = false;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  std::string text;
};

namespace {

int level(Op op) {
  switch (op) {
    case Op::ParOr:
    case Op::ChoOr:
      return 1;
    case Op::ParAnd:
    case Op::ChoAnd:
      return 2;
    default:
      return 3;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::ParAnd: return " /\\ ";
    case Op::ParOr: return " \\/ ";
    case Op::ChoAnd: return " & ";
    case Op::ChoOr: return " | ";
    case Op::BlindAll: return "A";
    case Op::BlindEx: return "E";
    case Op::ChoAll: return "!";
    case Op::ChoEx: return "?";
    default: return "";
  }
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string render(const Formula::Node& n, const std::vector<Formula>& kids) {
  switch (n.op) {
    case Op::Top: return "T";
    case Op::Bottom: return "F";
    case Op::Atom: {
      std::string s = n.negated ? "~" : "";
      s += n.name;
      if (!n.terms.empty()) {
        s += "(";
        for (std::size_t i = 0; i < n.terms.size(); ++i) {
          if (i) s += ",";
          s += n.terms[i].str();
        }
        s += ")";
      }
      return s;
    }
    case Op::Equality:
      return n.terms[0].str() + (n.negated ? " != " : " = ") + n.terms[1].str();
    case Op::BlindAll:
    case Op::BlindEx:
    case Op::ChoAll:
    case Op::ChoEx: {
      const Formula& b = kids[0];
      std::string body = b.str();
      if (is_binary(b.op())) body = paren(body);
      return std::string(symbol(n.op)) + n.name + ": " + body;
    }
    default: {
      // Same-operator chains nest to the right, so only a right child with the same
      // operator can drop its parentheses.
      const Formula& l = kids[0];
      const Formula& r = kids[1];
      std::string ls = l.str(), rs = r.str();
      if (level(l.op()) <= level(n.op)) ls = paren(ls);
      if (level(r.op()) < level(n.op) || (level(r.op()) == level(n.op) && r.op() != n.op))
        rs = paren(rs);
      return ls + symbol(n.op) + rs;
    }
  }
}

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula Formula::atom(std::string letter, std::vector<Term> args, bool negated) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->negated = negated;
  n->name = std::move(letter);
  n->terms = std::move(args);
  n->text = render(*n, n->kids);
  return Formula(std::move(n));
}

Formula Formula::equality(Term lhs, Term rhs, bool negated) {
  auto n = std::make_shared<Node>();
  n->op = Op::Equality;
  n->negated = negated;
  n->terms = {std::move(lhs), std::move(rhs)};
  n->text = render(*n, n->kids);
  return Formula(std::move(n));
}

Formula Formula::top() {
  static const Formula t = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Top;
    n->text = "T";
    return Formula(std::move(n));
  }();
  return t;
}

Formula Formula::bottom() {
  static const Formula b = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Bottom;
    n->text = "F";
    return Formula(std::move(n));
  }();
  return b;
}

Formula Formula::binary(Op op, Formula left, Formula right) {
  if (!is_binary(op)) throw std::invalid_argument("binary: not a binary operator");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = {std::move(left), std::move(right)};
  n->text = render(*n, n->kids);
  return Formula(std::move(n));
}

Formula Formula::quantifier(Op op, std::string var, Formula body) {
  if (!is_quantifier(op)) throw std::invalid_argument("quantifier: not a quantifier");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(var);
  n->kids = {std::move(body)};
  n->text = render(*n, n->kids);
  return Formula(std::move(n));
}

Op Formula::op() const { return node_->op; }
bool Formula::negated() const { return node_->negated; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const Formula& Formula::left() const { return node_->kids.at(0); }
const Formula& Formula::right() const { return node_->kids.at(1); }
const Formula& Formula::body() const { return node_->kids.at(0); }
std::size_t Formula::child_count() const { return node_->kids.size(); }
const Formula& Formula::child(std::size_t i) const { return node_->kids.at(i); }
std::string Formula::str() const { return node_->text; }

bool operator==(const Formula& a, const Formula& b) {
  return a.node_ == b.node_ || a.node_->text == b.node_->text;
}

Formula negate(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return Formula::bottom();
    case Op::Bottom: return Formula::top();
    case Op::Atom: return Formula::atom(f.name(), f.terms(), !f.negated());
    case Op::Equality: return Formula::equality(f.terms()[0], f.terms()[1], !f.negated());
    case Op::ParAnd: return Formula::binary(Op::ParOr, negate(f.left()), negate(f.right()));
    case Op::ParOr: return Formula::binary(Op::ParAnd, negate(f.left()), negate(f.right()));
    case Op::ChoAnd: return Formula::binary(Op::ChoOr, negate(f.left()), negate(f.right()));
    case Op::ChoOr: return Formula::binary(Op::ChoAnd, negate(f.left()), negate(f.right()));
    case Op::BlindAll: return Formula::quantifier(Op::BlindEx, f.name(), negate(f.body()));
    case Op::BlindEx: return Formula::quantifier(Op::BlindAll, f.name(), negate(f.body()));
    case Op::ChoAll: return Formula::quantifier(Op::ChoEx, f.name(), negate(f.body()));
    case Op::ChoEx: return Formula::quantifier(Op::ChoAll, f.name(), negate(f.body()));
  }
  return f;
}

namespace {
Formula fold_right(Op op, const std::vector<Formula>& fs, const Formula& unit) {
  if (fs.empty()) return unit;
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = Formula::binary(op, fs[i], acc);
  return acc;
}
}  // namespace

Formula par_and(const std::vector<Formula>& fs) { return fold_right(Op::ParAnd, fs, Formula::top()); }
Formula par_or(const std::vector<Formula>& fs) { return fold_right(Op::ParOr, fs, Formula::bottom()); }

std::string Sequent::str() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += ", ";
    out += antecedent[i].str();
  }
  if (!antecedent.empty()) out += " ";
  return out + "||- " + succedent.str();
}

// ---------------------------------------------------------------- substitution

Term substitute(const Term& t, const std::map<std::string, Term>& bindings) {
  switch (t.kind()) {
    case Term::Kind::Variable: {
      auto it = bindings.find(t.name());
      return it == bindings.end() ? t : it->second;
    }
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Application: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, bindings));
      return Term::application(t.name(), std::move(args));
    }
  }
  return t;
}

Formula substitute(const Formula& f, const std::map<std::string, Term>& bindings) {
  if (bindings.empty()) return f;
  switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
      return f;
    case Op::Atom:
    case Op::Equality: {
      std::vector<Term> ts;
      bool changed = false;
      for (const auto& t : f.terms()) {
        ts.push_back(substitute(t, bindings));
        changed = changed || !(ts.back() == t);
      }
      if (!changed) return f;
      if (f.op() == Op::Atom) return Formula::atom(f.name(), std::move(ts), f.negated());
      return Formula::equality(ts[0], ts[1], f.negated());
    }
    case Op::ParAnd:
    case Op::ParOr:
    case Op::ChoAnd:
    case Op::ChoOr: {
      Formula l = substitute(f.left(), bindings);
      Formula r = substitute(f.right(), bindings);
      if (l.same_node(f.left()) && r.same_node(f.right())) return f;
      return Formula::binary(f.op(), std::move(l), std::move(r));
    }
    default: {
      const std::string& x = f.name();
      std::map<std::string, Term> inner;
      auto body_free = free_vars(f.body());
      for (const auto& [v, t] : bindings) {
        if (v == x || !body_free.count(v)) continue;
        if (free_vars(t).count(x))
          throw CaptureError("substituting " + t.str() + " for " + v + " is captured by " + x);
        inner.emplace(v, t);
      }
      if (inner.empty()) return f;
      return Formula::quantifier(f.op(), x, substitute(f.body(), inner));
    }
  }
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  return substitute(f, std::map<std::string, Term>{{var, t}});
}

Formula apply_valuation(const Formula& f, const VcMapping& e) {
  std::map<std::string, Term> b;
  for (const auto& [v, c] : e) b.emplace(v, Term::constant(c));
  return substitute(f, b);
}

Sequent apply_valuation(const Sequent& s, const VcMapping& e) {
  Sequent out;
  for (const auto& g : s.antecedent) out.antecedent.push_back(apply_valuation(g, e));
  out.succedent = apply_valuation(s.succedent, e);
  return out;
}

// ---------------------------------------------------------------- variables and letters

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name());
  for (const auto& a : t.args()) term_vars(a, out);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  if (f.op() == Op::Atom || f.op() == Op::Equality) {
    std::set<std::string> vs;
    for (const auto& t : f.terms()) term_vars(t, vs);
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (is_quantifier(f.op())) {
    bool fresh = bound.insert(f.name()).second;
    collect_free(f.body(), bound, out);
    if (fresh) bound.erase(f.name());
    return;
  }
  for (std::size_t i = 0; i < f.child_count(); ++i) collect_free(f.child(i), bound, out);
}

template <class Fn>
void visit(const Formula& f, Fn&& fn) {
  fn(f);
  for (std::size_t i = 0; i < f.child_count(); ++i) visit(f.child(i), fn);
}

void term_constants(const Term& t, std::set<std::string>& out) {
  if (t.is_constant()) out.insert(t.name());
  for (const auto& a : t.args()) term_constants(a, out);
}

void term_functions(const Term& t, std::map<std::string, std::size_t>& out) {
  if (t.kind() == Term::Kind::Application) out.emplace(t.name(), t.args().size());
  for (const auto& a : t.args()) term_functions(a, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  term_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> free_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& g : s.antecedent) out.merge(free_vars(g));
  out.merge(free_vars(s.succedent));
  return out;
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (is_quantifier(g.op())) out.insert(g.name());
    for (const auto& t : g.terms()) term_vars(t, out);
  });
  return out;
}

std::set<std::string> all_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& g : s.antecedent) out.merge(all_vars(g));
  out.merge(all_vars(s.succedent));
  return out;
}

std::set<std::string> bound_vars(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    if (is_quantifier(g.op())) out.insert(g.name());
  });
  return out;
}

std::set<std::string> bound_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& g : s.antecedent) out.merge(bound_vars(g));
  out.merge(bound_vars(s.succedent));
  return out;
}

std::set<std::string> constants_of(const Formula& f) {
  std::set<std::string> out;
  visit(f, [&](const Formula& g) {
    for (const auto& t : g.terms()) term_constants(t, out);
  });
  return out;
}

std::set<std::string> constants_of(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& g : s.antecedent) out.merge(constants_of(g));
  out.merge(constants_of(s.succedent));
  return out;
}

std::map<std::string, std::size_t> function_letters(const Formula& f) {
  std::map<std::string, std::size_t> out;
  visit(f, [&](const Formula& g) {
    for (const auto& t : g.terms()) term_functions(t, out);
  });
  return out;
}

std::map<std::string, std::size_t> predicate_letters(const Formula& f) {
  std::map<std::string, std::size_t> out;
  visit(f, [&](const Formula& g) {
    if (g.op() == Op::Atom) out.emplace(g.name(), g.terms().size());
  });
  return out;
}

std::string fresh_name(const std::set<std::string>& taken, const std::string& stem) {
  for (std::size_t k = 1;; ++k) {
    std::string candidate = stem + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------- elementarization

Formula elementarize(const Formula& f) {
  switch (f.op()) {
    case Op::ChoOr:
    case Op::ChoEx:
      return Formula::bottom();
    case Op::ChoAnd:
    case Op::ChoAll:
      return Formula::top();
    case Op::ParAnd:
    case Op::ParOr:
      return Formula::binary(f.op(), elementarize(f.left()), elementarize(f.right()));
    case Op::BlindAll:
    case Op::BlindEx:
      return Formula::quantifier(f.op(), f.name(), elementarize(f.body()));
    default:
      return f;
  }
}

Formula elementarize(const Sequent& s) {
  if (s.antecedent.empty()) return elementarize(s.succedent);
  std::vector<Formula> parts;
  for (const auto& g : s.antecedent) parts.push_back(elementarize(g));
  return Formula::binary(Op::ParOr, negate(par_and(parts)), elementarize(s.succedent));
}

bool is_elementary(const Formula& f) {
  if (is_choice(f.op())) return false;
  for (std::size_t i = 0; i < f.child_count(); ++i)
    if (!is_elementary(f.child(i))) return false;
  return true;
}

bool is_elementary(const Sequent& s) {
  return std::all_of(s.antecedent.begin(), s.antecedent.end(),
                     [](const Formula& g) { return is_elementary(g); }) &&
         is_elementary(s.succedent);
}

// ---------------------------------------------------------------- occurrences

namespace {
void surface_walk(const Formula& f, Op op, Path& path, std::vector<Path>& out) {
  if (f.op() == op) out.push_back(path);
  if (is_choice(f.op())) return;
  for (std::size_t i = 0; i < f.child_count(); ++i) {
    path.push_back(i);
    surface_walk(f.child(i), op, path, out);
    path.pop_back();
  }
}
}  // namespace

std::vector<Path> surface_occurrences(const Formula& f, Op op) {
  std::vector<Path> out;
  Path p;
  surface_walk(f, op, p, out);
  return out;
}

std::vector<Occurrence> surface_occurrences(const Sequent& s, Op op) {
  std::vector<Occurrence> out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i)
    for (auto& p : surface_occurrences(s.antecedent[i], op))
      out.push_back({static_cast<int>(i), std::move(p)});
  for (auto& p : surface_occurrences(s.succedent, op)) out.push_back({-1, std::move(p)});
  return out;
}

bool is_surface(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (std::size_t i : path) {
    if (is_choice(cur->op()) || i >= cur->child_count()) return false;
    cur = &cur->child(i);
  }
  return true;
}

const Formula& subformula_at(const Formula& f, const Path& path) {
  const Formula* cur = &f;
  for (std::size_t i : path) {
    if (i >= cur->child_count()) throw std::out_of_range("occurrence path leaves the formula");
    cur = &cur->child(i);
  }
  return *cur;
}

namespace {
Formula replace_rec(const Formula& f, const Path& path, std::size_t depth, const Formula& g) {
  if (depth == path.size()) return g;
  std::size_t i = path[depth];
  if (i >= f.child_count()) throw std::out_of_range("occurrence path leaves the formula");
  Formula kid = replace_rec(f.child(i), path, depth + 1, g);
  if (is_quantifier(f.op())) return Formula::quantifier(f.op(), f.name(), kid);
  return i == 0 ? Formula::binary(f.op(), kid, f.right()) : Formula::binary(f.op(), f.left(), kid);
}
}  // namespace

Formula replace_at(const Formula& f, const Path& path, const Formula& replacement) {
  return replace_rec(f, path, 0, replacement);
}

std::size_t max_run_length(const Formula& f) {
  switch (f.op()) {
    case Op::ParAnd:
    case Op::ParOr:
      return max_run_length(f.left()) + max_run_length(f.right());
    case Op::ChoAnd:
    case Op::ChoOr:
      return 1 + std::max(max_run_length(f.left()), max_run_length(f.right()));
    case Op::ChoAll:
    case Op::ChoEx:
      return 1 + max_run_length(f.body());
    case Op::BlindAll:
    case Op::BlindEx:
      return max_run_length(f.body());
    default:
      return 0;
  }
}

std::size_t max_run_length(const Sequent& s) {
  std::size_t total = max_run_length(s.succedent);
  for (const auto& g : s.antecedent) total += max_run_length(g);
  return total;
}

// ---------------------------------------------------------------- matching

namespace {

struct Matcher {
  const std::string& var;
  InstanceMatch result;
  std::vector<std::string> binders;

  bool bound_here(const std::string& v) const {
    return std::find(binders.begin(), binders.end(), v) != binders.end();
  }

  bool term(const Term& p, const Term& t, bool shadowed) {
    if (!shadowed && p.is_variable() && p.name() == var) {
      for (const auto& v : free_vars(t))
        if (bound_here(v)) return false;
      if (!result.var_occurs) {
        result.var_occurs = true;
        result.term = t;
        return true;
      }
      return result.term == t;
    }
    if (p.kind() != t.kind() || p.name() != t.name() || p.args().size() != t.args().size())
      return false;
    for (std::size_t i = 0; i < p.args().size(); ++i)
      if (!term(p.args()[i], t.args()[i], shadowed)) return false;
    return true;
  }

  bool formula(const Formula& p, const Formula& g, bool shadowed) {
    if (p.op() != g.op() || p.negated() != g.negated() || p.name() != g.name() ||
        p.terms().size() != g.terms().size() || p.child_count() != g.child_count())
      return false;
    for (std::size_t i = 0; i < p.terms().size(); ++i)
      if (!term(p.terms()[i], g.terms()[i], shadowed)) return false;
    bool inner = shadowed || (is_quantifier(p.op()) && p.name() == var);
    if (is_quantifier(p.op())) binders.push_back(p.name());
    bool ok = true;
    for (std::size_t i = 0; ok && i < p.child_count(); ++i) ok = formula(p.child(i), g.child(i), inner);
    if (is_quantifier(p.op())) binders.pop_back();
    return ok;
  }
};

}  // namespace

InstanceMatch match_instance(const Formula& pattern, const std::string& var, const Formula& instance) {
  Matcher m{var, {}, {}};
  m.result.matched = m.formula(pattern, instance, false);
  if (!m.result.matched) m.result.var_occurs = false;
  return m.result;
}

std::string canonical_key(const Sequent& s) {
  std::vector<std::string> order;
  std::set<std::string> seen;
  auto fv = free_vars(s);
  auto note = [&](const Formula& f) {
    visit(f, [&](const Formula& g) {
      for (const auto& t : g.terms()) {
        std::function<void(const Term&)> walk = [&](const Term& x) {
          if (x.is_variable() && fv.count(x.name()) && seen.insert(x.name()).second)
            order.push_back(x.name());
          for (const auto& a : x.args()) walk(a);
        };
        walk(t);
      }
    });
  };
  for (const auto& g : s.antecedent) note(g);
  note(s.succedent);
  std::map<std::string, Term> ren;
  for (std::size_t i = 0; i < order.size(); ++i)
    ren.emplace(order[i], Term::variable("_" + std::to_string(i)));
  Sequent r;
  for (const auto& g : s.antecedent) r.antecedent.push_back(substitute(g, ren));
  r.succedent = substitute(s.succedent, ren);
  return r.str();
}

}  // namespace cl12
