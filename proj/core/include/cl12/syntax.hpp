#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cl12 {

// A term: variable, binary numeral constant, or function application.
class Term {
 public:
  enum class Kind { Variable, Constant, Application };

  Term() = default;
  static Term variable(std::string name);
  static Term constant(std::string numeral);
  static Term application(std::string letter, std::vector<Term> args);

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_constant() const { return kind_ == Kind::Constant; }
  // Variable name, numeral, or function letter depending on kind.
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  std::string str() const;
  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term& a, const Term& b) { return a.str() <=> b.str(); }

 private:
  Kind kind_ = Kind::Variable;
  std::string name_;
  std::vector<Term> args_;
};

bool is_numeral(std::string_view s);

enum class Op {
  Atom,
  Equality,
  Top,
  Bottom,
  ParAnd,
  ParOr,
  ChoAnd,
  ChoOr,
  BlindAll,
  BlindEx,
  ChoAll,
  ChoEx,
};

bool is_parallel(Op op);
bool is_choice_connective(Op op);
bool is_choice_quantifier(Op op);
inline bool is_choice(Op op) { return is_choice_connective(op) || is_choice_quantifier(op); }
bool is_blind(Op op);
bool is_quantifier(Op op);
bool is_binary(Op op);
bool is_literal(Op op);  // Atom, Equality, Top, Bottom

// Immutable formula tree in negation normal form. Copies share structure.
class Formula {
 public:
  Formula();  // Top
  static Formula atom(std::string letter, std::vector<Term> args, bool negated = false);
  static Formula equality(Term lhs, Term rhs, bool negated = false);
  static Formula top();
  static Formula bottom();
  static Formula binary(Op op, Formula left, Formula right);
  static Formula quantifier(Op op, std::string var, Formula body);

  Op op() const;
  bool negated() const;
  // Predicate letter (Atom) or bound variable (quantifiers).
  const std::string& name() const;
  // Atom arguments, or {lhs, rhs} for Equality.
  const std::vector<Term>& terms() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const;
  std::size_t child_count() const;
  const Formula& child(std::size_t i) const;

  std::string str() const;
  bool same_node(const Formula& other) const { return node_ == other.node_; }
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b) { return a.str() < b.str(); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Dual in NNF: De Morgan through every connective and quantifier.
Formula negate(const Formula& f);
// Right-nested parallel conjunction/disjunction of a list; empty gives Top/Bottom.
Formula par_and(const std::vector<Formula>& fs);
Formula par_or(const std::vector<Formula>& fs);

struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;

  std::string str() const;
  friend bool operator==(const Sequent&, const Sequent&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class CaptureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Formula parse_formula(std::string_view text);
Sequent parse_sequent(std::string_view text);
// Accepts either a sequent (contains "||-") or a bare formula F, read as "||- F".
Sequent parse_sequent_or_formula(std::string_view text);

using VcMapping = std::map<std::string, std::string>;  // variable -> numeral

// Simultaneous capture-avoiding substitution; throws CaptureError on capture.
Formula substitute(const Formula& f, const std::map<std::string, Term>& bindings);
Formula substitute(const Formula& f, const std::string& var, const Term& t);
Term substitute(const Term& t, const std::map<std::string, Term>& bindings);
Formula apply_valuation(const Formula& f, const VcMapping& e);
Sequent apply_valuation(const Sequent& s, const VcMapping& e);

std::set<std::string> free_vars(const Term& t);
std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Sequent& s);
// Every variable name that occurs, free or bound.
std::set<std::string> all_vars(const Formula& f);
std::set<std::string> all_vars(const Sequent& s);
std::set<std::string> bound_vars(const Formula& f);
std::set<std::string> bound_vars(const Sequent& s);
std::set<std::string> constants_of(const Formula& f);
std::set<std::string> constants_of(const Sequent& s);
// Function letters with their arities.
std::map<std::string, std::size_t> function_letters(const Formula& f);
std::map<std::string, std::size_t> predicate_letters(const Formula& f);

// First name of the form <stem><k>, k = 1, 2, ..., not in `taken`.
std::string fresh_name(const std::set<std::string>& taken, const std::string& stem = "v");

// Choice operators become Bottom (sor-type) or Top (sand-type).
Formula elementarize(const Formula& f);
// ||G1|| /\ ... /\ ||Gn|| -> ||F||, or just ||F|| for an empty antecedent.
Formula elementarize(const Sequent& s);
bool is_elementary(const Formula& f);
bool is_elementary(const Sequent& s);

using Path = std::vector<std::size_t>;

// Slot -1 denotes the succedent.
struct Occurrence {
  int slot = -1;
  Path path;
  friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

// Occurrences of operators of kind `op` that are not inside any choice operator, in
// left-to-right order.
std::vector<Path> surface_occurrences(const Formula& f, Op op);
std::vector<Occurrence> surface_occurrences(const Sequent& s, Op op);
bool is_surface(const Formula& f, const Path& path);

const Formula& subformula_at(const Formula& f, const Path& path);
Formula replace_at(const Formula& f, const Path& path, const Formula& replacement);

std::size_t max_run_length(const Formula& f);
std::size_t max_run_length(const Sequent& s);

// Does `instance` equal `pattern` with every free occurrence of `var` replaced by one
// term t? On a match with `var_occurs`, `term` holds t; when `var` does not occur in
// `pattern`, any t works.
struct InstanceMatch {
  bool matched = false;
  bool var_occurs = false;
  Term term;
};
InstanceMatch match_instance(const Formula& pattern, const std::string& var, const Formula& instance);

// Free variables renamed by order of first occurrence; used as a memo key.
std::string canonical_key(const Sequent& s);

}  // namespace cl12
