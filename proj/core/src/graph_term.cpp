#include "cl12/graph_term.hpp"

#include <cctype>
#include <set>
#include <stdexcept>

namespace cl12 {

GraphTerm::Id GraphTerm::intern(Node n) {
  auto key = std::make_tuple(static_cast<int>(n.kind), n.name, n.a, n.b);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  nodes_.push_back(std::move(n));
  Id id = nodes_.size() - 1;
  index_.emplace(std::move(key), id);
  root_ = id;
  return id;
}

GraphTerm::Id GraphTerm::zero() { return intern({Kind::Zero, {}, 0, 0}); }
GraphTerm::Id GraphTerm::var(const std::string& name) { return intern({Kind::Var, name, 0, 0}); }
GraphTerm::Id GraphTerm::succ(Id x) { return intern({Kind::Succ, {}, x, 0}); }
GraphTerm::Id GraphTerm::plus(Id x, Id y) { return intern({Kind::Plus, {}, x, y}); }
GraphTerm::Id GraphTerm::times(Id x, Id y) { return intern({Kind::Times, {}, x, y}); }
GraphTerm::Id GraphTerm::apply(const std::string& fn, Id x) { return intern({Kind::FnApp, fn, x, 0}); }

GraphTerm::Id GraphTerm::number(std::size_t n) {
  if (n == 0) return zero();
  Id half = number(n / 2);
  Id twice = n / 2 == 0 ? zero() : plus(half, half);
  return n % 2 ? succ(twice) : twice;
}

GraphTerm::Id GraphTerm::splice(const GraphTerm& other, Id root, const std::map<std::string, Id>& leaves) {
  std::map<Id, Id> copied;
  auto copy = [&](auto&& self, Id i) -> Id {
    if (auto it = copied.find(i); it != copied.end()) return it->second;
    const Node& n = other.node(i);
    Id out = 0;
    switch (n.kind) {
      case Kind::Zero: out = zero(); break;
      case Kind::Var: {
        auto it = leaves.find(n.name);
        out = it == leaves.end() ? var(n.name) : it->second;
        break;
      }
      case Kind::Succ: out = succ(self(self, n.a)); break;
      case Kind::Plus: {
        Id a = self(self, n.a);
        out = plus(a, self(self, n.b));
        break;
      }
      case Kind::Times: {
        Id a = self(self, n.a);
        out = times(a, self(self, n.b));
        break;
      }
      case Kind::FnApp: out = apply(n.name, self(self, n.a)); break;
    }
    copied.emplace(i, out);
    return out;
  };
  return copy(copy, root);
}

namespace {
template <class Fn>
void reachable(const GraphTerm& g, GraphTerm::Id root, Fn&& fn) {
  std::set<GraphTerm::Id> seen;
  std::vector<GraphTerm::Id> stack{root};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    if (!seen.insert(i).second) continue;
    const auto& n = g.node(i);
    fn(i, n);
    switch (n.kind) {
      case GraphTerm::Kind::Succ:
      case GraphTerm::Kind::FnApp: stack.push_back(n.a); break;
      case GraphTerm::Kind::Plus:
      case GraphTerm::Kind::Times:
        stack.push_back(n.a);
        stack.push_back(n.b);
        break;
      default: break;
    }
  }
}
}  // namespace

std::size_t GraphTerm::size() const {
  if (nodes_.empty()) return 0;
  std::size_t count = 0;
  reachable(*this, root_, [&](Id, const Node&) { ++count; });
  return count;
}

std::vector<std::string> GraphTerm::variables() const {
  std::set<std::string> out;
  if (!nodes_.empty())
    reachable(*this, root_, [&](Id, const Node& n) {
      if (n.kind == Kind::Var) out.insert(n.name);
    });
  return {out.begin(), out.end()};
}

std::vector<std::string> GraphTerm::placeholders() const {
  std::set<std::string> out;
  if (!nodes_.empty())
    reachable(*this, root_, [&](Id, const Node& n) {
      if (n.kind == Kind::FnApp) out.insert(n.name);
    });
  return {out.begin(), out.end()};
}

Natural GraphTerm::eval(const std::map<std::string, Natural>& env, const std::map<std::string, Fn>& fns) const {
  return eval(root_, env, fns);
}

Natural GraphTerm::eval(Id at, const std::map<std::string, Natural>& env, const std::map<std::string, Fn>& fns) const {
  std::map<Id, Natural> memo;
  auto go = [&](auto&& self, Id i) -> Natural {
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    const Node& n = node(i);
    Natural v;
    switch (n.kind) {
      case Kind::Zero: v = 0; break;
      case Kind::Var: {
        auto it = env.find(n.name);
        if (it == env.end()) throw std::invalid_argument("unbound graph-term variable " + n.name);
        v = it->second;
        break;
      }
      case Kind::Succ: v = self(self, n.a) + 1; break;
      case Kind::Plus: v = self(self, n.a) + self(self, n.b); break;
      case Kind::Times: v = self(self, n.a) * self(self, n.b); break;
      case Kind::FnApp: {
        auto it = fns.find(n.name);
        if (it == fns.end()) throw std::invalid_argument("unbound placeholder " + n.name);
        v = it->second(self(self, n.a));
        break;
      }
    }
    memo.emplace(i, v);
    return v;
  };
  return go(go, at);
}

std::string GraphTerm::tree_string() const {
  auto go = [&](auto&& self, Id i) -> std::string {
    const Node& n = node(i);
    switch (n.kind) {
      case Kind::Zero: return "0";
      case Kind::Var: return n.name;
      case Kind::Succ: return self(self, n.a) + "'";
      case Kind::Plus: return "(" + self(self, n.a) + "+" + self(self, n.b) + ")";
      case Kind::Times: return "(" + self(self, n.a) + "*" + self(self, n.b) + ")";
      case Kind::FnApp: return n.name + "(" + self(self, n.a) + ")";
    }
    return "";
  };
  return nodes_.empty() ? "0" : go(go, root_);
}

std::string GraphTerm::dag_string() const {
  std::string out;
  std::set<Id> ids;
  if (!nodes_.empty()) reachable(*this, root_, [&](Id i, const Node&) { ids.insert(i); });
  for (Id i : ids) {
    const Node& n = node(i);
    out += "n" + std::to_string(i) + " = ";
    switch (n.kind) {
      case Kind::Zero: out += "0"; break;
      case Kind::Var: out += n.name; break;
      case Kind::Succ: out += "n" + std::to_string(n.a) + "'"; break;
      case Kind::Plus: out += "n" + std::to_string(n.a) + " + n" + std::to_string(n.b); break;
      case Kind::Times: out += "n" + std::to_string(n.a) + " * n" + std::to_string(n.b); break;
      case Kind::FnApp: out += n.name + "(n" + std::to_string(n.a) + ")"; break;
    }
    out += i == root_ ? "  <- root\n" : "\n";
  }
  return out;
}

GraphTerm make_unary(const std::string& var, const std::function<GraphTerm::Id(GraphTerm&, GraphTerm::Id)>& build) {
  GraphTerm g;
  GraphTerm::Id x = g.var(var);
  g.set_root(build(g, x));
  return g;
}

GraphTerm instantiate_placeholders(const GraphTerm& functional, const std::map<std::string, GraphTerm>& bindings) {
  GraphTerm out;
  std::map<GraphTerm::Id, GraphTerm::Id> copied;
  auto copy = [&](auto&& self, GraphTerm::Id i) -> GraphTerm::Id {
    if (auto it = copied.find(i); it != copied.end()) return it->second;
    const auto& n = functional.node(i);
    GraphTerm::Id r = 0;
    switch (n.kind) {
      case GraphTerm::Kind::Zero: r = out.zero(); break;
      case GraphTerm::Kind::Var: r = out.var(n.name); break;
      case GraphTerm::Kind::Succ: r = out.succ(self(self, n.a)); break;
      case GraphTerm::Kind::Plus: {
        auto a = self(self, n.a);
        r = out.plus(a, self(self, n.b));
        break;
      }
      case GraphTerm::Kind::Times: {
        auto a = self(self, n.a);
        r = out.times(a, self(self, n.b));
        break;
      }
      case GraphTerm::Kind::FnApp: {
        auto arg = self(self, n.a);
        auto it = bindings.find(n.name);
        if (it == bindings.end()) {
          r = out.apply(n.name, arg);
          break;
        }
        auto vars = it->second.variables();
        std::map<std::string, GraphTerm::Id> leaves;
        for (const auto& v : vars) leaves.emplace(v, arg);
        r = out.splice(it->second, it->second.root(), leaves);
        break;
      }
    }
    copied.emplace(i, r);
    return r;
  };
  out.set_root(copy(copy, functional.root()));
  return out;
}

namespace {

class BoundParser {
 public:
  BoundParser(const std::string& s, const std::string& var) : s_(s), var_(var) {}

  GraphTerm run() {
    auto root = expr();
    skip();
    if (pos_ != s_.size()) throw std::invalid_argument("unexpected input in bound at offset " + std::to_string(pos_));
    g_.set_root(root);
    return std::move(g_);
  }

 private:
  const std::string& s_;
  std::string var_;
  std::size_t pos_ = 0;
  GraphTerm g_;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::size_t integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw std::invalid_argument("expected a number in bound at offset " + std::to_string(pos_));
    return std::stoull(s_.substr(start, pos_ - start));
  }

  GraphTerm::Id expr() {
    auto acc = product();
    while (eat('+')) acc = g_.plus(acc, product());
    return acc;
  }
  GraphTerm::Id product() {
    auto acc = power();
    while (eat('*')) acc = g_.times(acc, power());
    return acc;
  }
  GraphTerm::Id power() {
    auto base = atom();
    if (!eat('^')) return base;
    std::size_t k = integer();
    if (k == 0) return g_.succ(g_.zero());
    auto acc = base;
    for (std::size_t i = 1; i < k; ++i) acc = g_.times(acc, base);
    return acc;
  }
  GraphTerm::Id atom() {
    skip();
    if (eat('(')) {
      auto e = expr();
      if (!eat(')')) throw std::invalid_argument("expected ')' in bound");
      return e;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return g_.number(integer());
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) throw std::invalid_argument("expected a term in bound at offset " + std::to_string(pos_));
    if (name != var_) throw std::invalid_argument("unknown variable '" + name + "' in bound");
    return g_.var(name);
  }
};

}  // namespace

GraphTerm parse_unary_bound(const std::string& text, const std::string& var) { return BoundParser(text, var).run(); }

}  // namespace cl12
