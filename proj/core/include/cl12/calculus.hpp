#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cl12/classical.hpp"
#include "cl12/syntax.hpp"

namespace cl12 {

enum class Rule {
  Wait,
  SuccChooseDisjunct,   // succedent sor-disjunct
  AntChooseConjunct,    // antecedent sand-conjunct
  SuccChooseWitness,    // succedent sor-quantifier instance
  AntChooseInstance,    // antecedent sand-quantifier instance
  Replicate,
  Exchange,
  Weakening,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

// Parameters of a rule application. An empty `occ` on a Choose rule asks the checker
// to find the occurrence; an empty `witness` asks it to read the witness off the premise.
struct RuleApp {
  Rule rule = Rule::Wait;
  std::optional<Path> occ;
  int slot = -1;
  int choice = -1;  // 0 or 1 for connective choices
  std::optional<Term> witness;
  int slot_b = -1;  // Exchange
  std::vector<int> inserted;  // Weakening: conclusion slots absent from the premise
};

struct ProofStep {
  Sequent sequent;
  RuleApp app;
  std::vector<std::size_t> premises;
};

struct Proof {
  std::vector<ProofStep> steps;
  const Sequent& conclusion() const { return steps.back().sequent; }
};

// What Wait needs among its premises for each surface choice the environment owns,
// in the order: succedent sand-conjunctions, antecedent sor-disjunctions, succedent
// sand-quantifiers, antecedent sor-quantifiers. Fresh variables are v1, v2, ... not
// occurring in the sequent.
struct WaitObligation {
  enum class Kind { SuccConjunct, AntDisjunct, SuccUniversal, AntExistential };
  Kind kind;
  Occurrence occ;
  int branch = -1;          // for connectives
  std::string fresh;        // for quantifiers
  Sequent premise;
};
std::vector<WaitObligation> wait_obligations(const Sequent& s);

// Every premise a Choose rule could derive the sequent from, with witnesses drawn
// from `witnesses`.
struct ChooseOption {
  RuleApp app;
  Sequent premise;
};
std::vector<ChooseOption> choose_options(const Sequent& s, const std::vector<Term>& witnesses);
// {0}, the constants, and the free variables of the sequent.
std::vector<Term> default_witnesses(const Sequent& s);

Sequent replicate_premise(const Sequent& s, int slot);

struct StepVerdict {
  enum class Kind { Ok, Fail, UnverifiedStability };
  Kind kind = Kind::Ok;
  std::string reason;
  RuleApp resolved;  // the application with inferred occurrence and witness filled in
};

struct CheckReport {
  enum class Overall { Valid, Invalid, ValidModuloStability };
  Overall overall = Overall::Valid;
  std::vector<StepVerdict> steps;
};
const char* overall_name(CheckReport::Overall o);

StepVerdict check_step(const Sequent& conclusion, const RuleApp& app, const std::vector<Sequent>& premises,
                       const ClassicalBudget& budget = {});
CheckReport check_proof(const Proof& p, const ClassicalBudget& budget = {});

struct SearchBudget {
  int max_steps = 12;          // depth bound on rule applications along a branch
  int max_replications = 1;    // Replicate applications per branch
  ClassicalBudget stability;
  std::size_t max_nodes = 200000;
};

struct SearchResult {
  std::optional<Proof> proof;
  // The search space below the bounds was exhausted with every stability question
  // answered, so the sequent has no proof within the bounds.
  bool exhaustive = false;
  std::size_t nodes = 0;
  std::size_t frontier = 0;  // branches cut by the depth bound
};

SearchResult search_proof(const Sequent& s, const SearchBudget& budget = {});

}  // namespace cl12
