#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cl12/syntax.hpp"

namespace cl12 {

using Element = std::uint64_t;

// Value table of an n-ary letter over {0..domain_size-1}, row-major in the arguments.
struct Table {
  std::size_t arity = 0;
  std::vector<Element> values;
};

struct FiniteModel {
  std::size_t domain_size = 1;
  // Explicit names; every other numeral c denotes c mod domain_size.
  std::map<std::string, Element> naming;
  std::map<std::string, Table> functions;
  std::map<std::string, Table> predicates;  // values are 0 or 1

  Element name(const std::string& numeral) const;
  Element apply(const std::string& letter, std::span<const Element> args) const;
  bool holds(const std::string& letter, std::span<const Element> args) const;

  // Tabulate a total function/predicate given as a callable.
  void set_function(const std::string& letter, std::size_t arity,
                    const std::function<Element(std::span<const Element>)>& fn);
  void set_predicate(const std::string& letter, std::size_t arity,
                     const std::function<bool(std::span<const Element>)>& fn);
};

// Numeral value modulo m, for numerals of any length.
Element numeral_mod(const std::string& numeral, Element m);
// Numeral value when it fits in 64 bits.
std::optional<Element> numeral_value(const std::string& numeral);
std::string to_numeral(Element v);

class UninterpretedLetter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Either a finite structure or the ideal universe of numerals with executable letters.
struct Interpretation {
  std::optional<FiniteModel> finite;
  std::map<std::string, std::function<Element(std::span<const Element>)>> functions;
  std::map<std::string, std::function<bool(std::span<const Element>)>> predicates;
  // Decides closed ideal-universe formulas that contain blind quantifiers.
  std::function<std::optional<bool>(const Formula&)> truth_oracle;

  static Interpretation ideal() { return {}; }
  static Interpretation of(FiniteModel m) {
    Interpretation i;
    i.finite = std::move(m);
    return i;
  }
};

using Assignment = std::map<std::string, Element>;

// Truth of an elementary formula in a finite model. Free variables are read from
// `assignment`; missing ones are an error.
bool eval_elementary(const Formula& f, const FiniteModel& m, const Assignment& assignment = {});
bool eval_elementary(const Formula& f, const FiniteModel& m, const VcMapping& e);
// Truth under a general interpretation; nullopt when it cannot be decided.
std::optional<bool> eval_elementary(const Formula& f, const Interpretation& i, const Assignment& assignment = {});

struct Countermodel {
  FiniteModel model;
  Assignment assignment;  // values for the free variables of the formula
};

struct ClassicalVerdict {
  enum class Kind { Valid, Countermodel, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Countermodel> countermodel;
  std::size_t steps = 0;

  bool valid() const { return kind == Kind::Valid; }
  bool invalid() const { return kind == Kind::Countermodel; }
};

struct ClassicalBudget {
  std::size_t max_steps = 20000;    // tableau expansion steps
  std::size_t max_rounds = 4;       // universal instantiation rounds
  std::size_t model_domain = 3;     // finite model search fallback
  std::size_t model_nodes = 200000;  // model search decision nodes
};

// Validity of an elementary formula; free variables read universally.
ClassicalVerdict prove_valid(const Formula& f, const ClassicalBudget& budget = {});
// Searches domains 1..max_domain for a falsifying model.
std::optional<Countermodel> find_countermodel(const Formula& f, std::size_t max_domain = 3,
                                              std::size_t max_nodes = 200000);
// Classical validity of the elementarization of a sequent, with a finite model search
// fallback when the prover gives up.
ClassicalVerdict check_stability(const Sequent& s, const ClassicalBudget& budget = {});

}  // namespace cl12
