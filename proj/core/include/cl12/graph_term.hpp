#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace cl12 {

using Natural = boost::multiprecision::cpp_int;

// Arithmetic term stored as a DAG, so shared subterms are represented once. Function
// placeholders make it a functional: they are bound to unary functions at evaluation.
class GraphTerm {
 public:
  enum class Kind { Zero, Var, Succ, Plus, Times, FnApp };
  using Id = std::size_t;

  struct Node {
    Kind kind = Kind::Zero;
    std::string name;  // variable or placeholder
    Id a = 0, b = 0;
    friend bool operator==(const Node&, const Node&) = default;
  };

  // Builders hash-cons: an identical node is returned instead of duplicated.
  Id zero();
  Id var(const std::string& name);
  Id succ(Id x);
  Id plus(Id x, Id y);
  Id times(Id x, Id y);
  Id apply(const std::string& fn, Id x);
  Id number(std::size_t n);  // built by doubling, O(log n) nodes

  // Copies the subgraph of `other` rooted at `root` into this term, replacing its
  // variable leaves by the given nodes; returns the new root.
  Id splice(const GraphTerm& other, Id root, const std::map<std::string, Id>& leaves);

  void set_root(Id r) { root_ = r; }
  Id root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(Id i) const { return nodes_.at(i); }

  // Nodes reachable from the root.
  std::size_t size() const;
  std::vector<std::string> variables() const;
  std::vector<std::string> placeholders() const;

  using Fn = std::function<Natural(const Natural&)>;
  Natural eval(const std::map<std::string, Natural>& env, const std::map<std::string, Fn>& fns = {}) const;
  Natural eval(Id at, const std::map<std::string, Natural>& env, const std::map<std::string, Fn>& fns) const;

  // Fully expanded tree-term text; exponentially long for heavily shared graphs.
  std::string tree_string() const;
  // DAG listing, one node per line.
  std::string dag_string() const;

 private:
  Id intern(Node n);
  std::vector<Node> nodes_;
  std::map<std::tuple<int, std::string, Id, Id>, Id> index_;
  Id root_ = 0;
};

// Single-variable polynomial term over `var`, e.g. from a callable description.
GraphTerm make_unary(const std::string& var, const std::function<GraphTerm::Id(GraphTerm&, GraphTerm::Id)>& build);

// Replace each placeholder call f(u) by the unary term bound to f, evaluated at u.
GraphTerm instantiate_placeholders(const GraphTerm& functional, const std::map<std::string, GraphTerm>& bindings);

// Tiny expression syntax for unary bounds: numbers, the variable, + , *, ^k, parentheses.
GraphTerm parse_unary_bound(const std::string& text, const std::string& var = "l");

}  // namespace cl12
