// Finite countermodel search. Table cells, constant names and free-variable values are
// assigned lazily: evaluation stops at the first undecided cell and the search branches
// on it.

#include <unordered_map>

#include "cl12/classical.hpp"

namespace cl12 {

namespace {

struct NeedCell {
  std::string key;
};

struct Budget {};

class LazyModel {
 public:
  LazyModel(std::size_t n, std::size_t max_nodes) : n_(n), max_nodes_(max_nodes) {}

  std::size_t n() const { return n_; }

  Element cell(const std::string& key) const {
    auto it = cells_.find(key);
    if (it == cells_.end()) throw NeedCell{key};
    return it->second;
  }

  Element term(const Term& t, std::map<std::string, Element>& env) const {
    switch (t.kind()) {
      case Term::Kind::Variable: {
        auto it = env.find(t.name());
        if (it != env.end()) return it->second;
        return cell("v:" + t.name());
      }
      case Term::Kind::Constant:
        return cell("n:" + t.name());
      case Term::Kind::Application: {
        std::string key = "f:" + t.name() + ":";
        for (const auto& a : t.args()) key += std::to_string(term(a, env)) + ",";
        return cell(key);
      }
    }
    return 0;
  }

  bool eval(const Formula& f, std::map<std::string, Element>& env) const {
    switch (f.op()) {
      case Op::Top: return true;
      case Op::Bottom: return false;
      case Op::Atom: {
        std::string key = "p:" + f.name() + ":";
        for (const auto& a : f.terms()) key += std::to_string(term(a, env)) + ",";
        return (cell(key) != 0) != f.negated();
      }
      case Op::Equality:
        return (term(f.terms()[0], env) == term(f.terms()[1], env)) != f.negated();
      case Op::ParAnd: return eval(f.left(), env) && eval(f.right(), env);
      case Op::ParOr: return eval(f.left(), env) || eval(f.right(), env);
      case Op::BlindAll:
      case Op::BlindEx: {
        bool all = f.op() == Op::BlindAll;
        auto it = env.find(f.name());
        std::optional<Element> saved;
        if (it != env.end()) saved = it->second;
        bool result = all;
        for (Element d = 0; d < n_; ++d) {
          env[f.name()] = d;
          bool v;
          try {
            v = eval(f.body(), env);
          } catch (...) {
            if (saved) env[f.name()] = *saved;
            else env.erase(f.name());
            throw;
          }
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
        throw std::invalid_argument("model search expects an elementary formula");
    }
  }

  // Candidate values for a cell; constants prefer their default name first.
  std::vector<Element> candidates(const std::string& key) const {
    std::size_t range = key[0] == 'p' ? 2 : n_;
    std::vector<Element> out;
    if (key[0] == 'n') {
      Element d = numeral_mod(key.substr(2), n_);
      out.push_back(d);
      for (Element v = 0; v < range; ++v)
        if (v != d) out.push_back(v);
      return out;
    }
    for (Element v = 0; v < range; ++v) out.push_back(v);
    return out;
  }

  bool search(const Formula& f) {
    if (++nodes_ > max_nodes_) throw Budget{};
    std::string need;
    try {
      std::map<std::string, Element> env;
      return !eval(f, env);
    } catch (const NeedCell& c) {
      need = c.key;
    }
    for (Element v : candidates(need)) {
      cells_[need] = v;
      if (search(f)) return true;
    }
    cells_.erase(need);
    return false;
  }

  const std::unordered_map<std::string, Element>& cells() const { return cells_; }

 private:
  std::size_t n_;
  std::size_t max_nodes_;
  std::size_t nodes_ = 0;
  std::unordered_map<std::string, Element> cells_;
};

std::vector<Element> parse_args(const std::string& s) {
  std::vector<Element> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t comma = s.find(',', start);
    out.push_back(std::stoull(s.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

Countermodel assemble(const Formula& f, const LazyModel& lm) {
  Countermodel cm;
  FiniteModel& m = cm.model;
  m.domain_size = lm.n();
  for (const auto& [letter, arity] : function_letters(f)) {
    m.set_function(letter, arity, [](std::span<const Element>) { return Element{0}; });
  }
  for (const auto& [letter, arity] : predicate_letters(f)) {
    m.set_predicate(letter, arity, [](std::span<const Element>) { return false; });
  }
  for (const auto& v : free_vars(f)) cm.assignment[v] = 0;
  for (const auto& [key, value] : lm.cells()) {
    char kind = key[0];
    std::string rest = key.substr(2);
    if (kind == 'v') {
      cm.assignment[rest] = value;
    } else if (kind == 'n') {
      m.naming[rest] = value;
    } else {
      std::size_t colon = rest.find(':');
      std::string letter = rest.substr(0, colon);
      auto args = parse_args(rest.substr(colon + 1));
      std::size_t idx = 0;
      for (Element a : args) idx = idx * m.domain_size + a;
      auto& table = kind == 'f' ? m.functions[letter] : m.predicates[letter];
      table.values.at(idx) = value;
    }
  }
  return cm;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_domain, std::size_t max_nodes) {
  for (std::size_t n = 1; n <= max_domain; ++n) {
    LazyModel lm(n, max_nodes);
    try {
      if (lm.search(f)) {
        Countermodel cm = assemble(f, lm);
        if (!eval_elementary(f, cm.model, cm.assignment)) return cm;
      }
    } catch (const Budget&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace cl12
