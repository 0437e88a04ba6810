#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cl12/calculus.hpp"
#include "cl12/games.hpp"
#include "cl12/graph_term.hpp"
#include "cl12/strategy.hpp"

namespace cl12 {

// ---------------------------------------------------------------- plays

struct PlayLimits {
  std::size_t max_ticks = 64;
  std::size_t max_moves = 64;
};

struct TraceEntry {
  std::size_t tick = 0;
  Player who = Player::Top;
  std::vector<std::string> delivered;
  std::vector<std::string> emitted;
  std::string state_digest;
};

struct PlayResult {
  Run run;
  SequentPosition final_position;
  Outcome outcome = Outcome::Unknown;  // after illegal moves: the other player wins
  std::optional<Player> illegal_by;
  std::string illegal_reason;
  std::size_t ticks = 0;
  std::optional<std::string> machine_error;
  std::optional<std::string> env_error;
  std::vector<TraceEntry> trace;

  // "Top", "Bot", "Unknown", or "IllegalBy(Top)" / "IllegalBy(Bot)".
  std::string verdict() const;
};

// Tick loop: the environment answers the machine's previous moves, its moves are
// applied, then the machine answers them. Ends when the environment has finished and a
// tick passes in silence, on an illegal move, or at a limit; then adjudicates under `i`.
PlayResult play(Agent& machine, Agent& env, const Sequent& x, const Interpretation& i, const PlayLimits& limits = {});

// Elementary formula whose truth decides the position: the conjunction of every
// antecedent leaf implies the succedent, all elementarized.
Formula residue(const SequentPosition& p);

// ---------------------------------------------------------------- environments

// Replays fixed move batches, one per tick.
class ScriptedEnv : public Agent {
 public:
  explicit ScriptedEnv(std::vector<std::vector<std::string>> batches) : batches_(std::move(batches)) {}
  std::vector<std::string> respond(const std::vector<std::string>& delivered) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<ScriptedEnv>(*this); }
  std::string state_digest() const override { return "batch=" + std::to_string(next_); }
  bool finished() const override { return next_ >= batches_.size(); }

 private:
  std::vector<std::vector<std::string>> batches_;
  std::size_t next_ = 0;
};

// Hands over whatever was queued since its last turn; used for interactive play.
class QueueEnv : public Agent {
 public:
  void push(std::vector<std::string> moves);
  std::vector<std::string> respond(const std::vector<std::string>& delivered) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<QueueEnv>(*this); }
  std::string state_digest() const override { return "queued=" + std::to_string(queue_.size()); }
  bool finished() const override { return queue_.empty(); }

 private:
  std::vector<std::string> queue_;
};

struct RandomEnvOptions {
  std::vector<std::string> pool = {"0", "1", "10", "11", "100", "101", "110", "111"};
  double move_probability = 0.7;
  double stop_probability = 0.1;  // per tick, once the closure is done
  double long_constant_probability = 0.05;  // draw a fresh random numeral instead
  std::size_t max_moves = 12;
};

// Seeded random legal environment play.
class RandomEnv : public Agent {
 public:
  RandomEnv(const Sequent& x, std::uint64_t seed, RandomEnvOptions options = {});
  std::vector<std::string> respond(const std::vector<std::string>& delivered) override;
  std::unique_ptr<Agent> clone() const override { return std::make_unique<RandomEnv>(*this); }
  std::string state_digest() const override;
  bool finished() const override { return done_; }

 private:
  SequentPosition pos_;
  std::mt19937_64 rng_;
  RandomEnvOptions opt_;
  std::size_t made_ = 0;
  bool done_ = false;
};

// Every legal move extending a position, constants drawn from `pool`.
std::vector<std::string> enumerate_moves(const SequentPosition& p, Player who, const std::vector<std::string>& pool);

struct ExhaustiveReport {
  std::size_t runs = 0;
  std::size_t top_wins = 0;
  bool truncated = false;  // stopped at max_runs
  std::optional<Run> first_loss;
  std::vector<Run> explored;  // every counted run, in visiting order
};

// Plays the machine against every environment behavior that makes at most one move per
// tick with constants from `pool`, up to `max_moves` moves in a run.
ExhaustiveReport explore_all(const Agent& machine, const Sequent& x, const Interpretation& i,
                             const std::vector<std::string>& pool, std::size_t max_moves,
                             std::size_t max_runs = 10000);

// ---------------------------------------------------------------- reference machines

enum class MachineKind { Silent, FirstLegal, EchoEnvConstant, LatestConstant, PseudoRandom };
const char* machine_kind_name(MachineKind k);

// Simple deterministic players that know nothing about proofs; at most one move per
// tick and `max_moves` in total.
std::unique_ptr<Agent> make_reference_machine(MachineKind kind, const Sequent& x, std::uint64_t seed = 0,
                                              std::size_t max_moves = 6);

// ---------------------------------------------------------------- counterstrategy

class ProvableSequent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The environment strategy that defeats every machine on an unprovable sequent. It is
// conditional on the bounded prover: candidates it finds no proof for count as
// unprovable. Throws ProvableSequent when a proof of the sequent itself is found.
std::unique_ptr<Agent> counterstrategy(const Sequent& x, const SearchBudget& prover_budget = {},
                                       std::size_t domain_bound = 3);

// ---------------------------------------------------------------- composition

// Plays `||- E` for an antecedent formula E: answers surface choices it owns with the
// first candidate constant (domain elements of the finite interpretation) or branch
// whose elementarization is true. `sabotage` shifts every chosen constant by one.
std::unique_ptr<Agent> make_greedy_solution(const Formula& e, std::shared_ptr<const Interpretation> i,
                                            bool sabotage = false);
std::unique_ptr<Agent> make_silent_agent();

class SimulationDesync : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Strategy for `||- F` from a proof of E1,...,En ||- F and strategies for each `||- Ei`:
// the proof's agent plays against the real environment in the succedent and against
// simulated copies of the solutions in the antecedent; replications fork a copy.
std::unique_ptr<Agent> compose(const Proof& p, std::vector<std::unique_ptr<Agent>> solutions,
                               const ClassicalBudget& budget = {});

struct ComposeBound {
  std::size_t b = 0;    // run-length parameter
  GraphTerm phi;        // f1(l)+...+fn(l)+xi(l), placeholders f1..fn
  GraphTerm space;      // b * phi^(b+1)(l)
  GraphTerm time;       // b * phi(phi^b(l))
};

// Bounds of the composed strategy as functionals in placeholders f1..fn standing for
// the bounds of the solutions; bind them with instantiate_placeholders.
ComposeBound compose_bound(const GraphTerm& xi, std::size_t n, const Sequent& x);
// With the given unary bounds g1..gn substituted for the placeholders.
ComposeBound compose_bound(const GraphTerm& xi, const std::vector<GraphTerm>& g, const Sequent& x);

}  // namespace cl12
