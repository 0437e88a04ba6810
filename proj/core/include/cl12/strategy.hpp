#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cl12/calculus.hpp"
#include "cl12/games.hpp"
#include "cl12/graph_term.hpp"

namespace cl12 {

// A deterministic player. Each tick it is handed the opponent's moves applied since its
// previous turn and answers with its own moves for this tick.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::vector<std::string> respond(const std::vector<std::string>& delivered) = 0;
  virtual std::unique_ptr<Agent> clone() const = 0;
  // Serialization of the private state; equal digests mean equal future behavior.
  virtual std::string state_digest() const = 0;
  virtual std::size_t state_size() const { return state_digest().size(); }
  // Set when the agent refused to continue, e.g. it would have made an illegal move.
  virtual std::optional<std::string> internal_error() const { return std::nullopt; }
  // The agent will not move again unless new moves are delivered.
  virtual bool finished() const { return true; }
};

// An antecedent formula of the sequent an agent currently reasons about, located in
// the real play: a slot of the root sequent and a leaf address in its tree.
struct SlotRef {
  int real = 0;
  std::string address;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

// Move text that resolves the choice at `path` of `f` with `chosen` ("0"/"1" or a
// constant): component prefixes for parallel operators, nothing for blind quantifiers.
std::string formula_move_text(const Formula& f, const Path& path, const std::string& chosen);
std::string antecedent_move_text(const SlotRef& slot, const std::string& formula_move);
std::string replication_move_text(const SlotRef& slot);

class AgentStuck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProof : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The strategy a proof encodes, read bottom-up: Choose steps and Replicate emit moves,
// Wait steps consume the environment's moves and pass to the matching premise.
// Throws InvalidProof when the proof does not check.
std::unique_ptr<Agent> extract_strategy(const Proof& p, const ClassicalBudget& budget = {});

struct WellBehavednessReport {
  std::size_t replicative_count = 0;  // maximum over the runs
  std::size_t bound_d = 0;            // Replicate steps in the proof
  std::vector<std::string> unfocused_violations;
  std::vector<std::string> constant_provenance_violations;

  bool compliant() const {
    return replicative_count <= bound_d && unfocused_violations.empty() && constant_provenance_violations.empty();
  }
};

// Checks the machine's moves in each run: at most d replications, focused antecedent
// moves, and constants drawn from {0}, the constants of the root sequent, and the
// constants already named by the environment.
WellBehavednessReport monitor_well_behavedness(const std::vector<Run>& runs, const Proof& proof);

// Unary bound on the size of the moves the extracted strategy makes, in terms of the
// largest environment move so far (variable "l").
GraphTerm bound_from_proof(const Proof& p);
// Additive constant per rule application used by bound_from_proof.
std::size_t bound_step_constant(const Proof& p);

// Size of a move as counted by the bounds: its length.
inline std::size_t move_size(const std::string& m) { return m.size(); }

}  // namespace cl12
