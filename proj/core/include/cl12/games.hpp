#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cl12/classical.hpp"
#include "cl12/syntax.hpp"

namespace cl12 {

enum class Player { Top, Bot };
inline Player opponent(Player p) { return p == Player::Top ? Player::Bot : Player::Top; }
const char* player_symbol(Player p);  // "T" or "B"

// Positive: the game is played as written. Negative: it sits under a negation, so
// every choice (and replication) changes hands.
enum class Role { Positive, Negative };
inline Role flip(Role r) { return r == Role::Positive ? Role::Negative : Role::Positive; }
Player owner(Op choice_op, Role role);
Player replication_owner(Role role);

struct LabMove {
  Player player;
  std::string move;
  friend bool operator==(const LabMove&, const LabMove&) = default;
};
using Run = std::vector<LabMove>;

struct Illegal {
  std::string reason;
};

// Which choice a move resolved: the operator, its path in the formula, and the chosen
// branch ("0"/"1") or constant.
struct ChoiceEffect {
  Op op = Op::ChoAnd;
  Path path;
  std::string chosen;
};

struct FormulaStep {
  Formula next;
  ChoiceEffect effect;
};
std::variant<FormulaStep, Illegal> apply_formula_move(const Formula& f, Role role, Player who,
                                                      std::string_view move);

// Position of a branching-recurrence game: leaves hold formulas, address bit 0 is the
// left child, 1 the right.
class GameTree {
 public:
  GameTree();
  static GameTree leaf(Formula f);
  static GameTree node(GameTree left, GameTree right);

  bool is_leaf() const;
  const Formula& formula() const;
  const GameTree& left() const;
  const GameTree& right() const;

  std::vector<std::string> leaf_addresses() const;
  std::optional<Formula> leaf_at(std::string_view address) const;
  // Replace the subtree at `address` (which must exist).
  GameTree replace(std::string_view address, const GameTree& sub) const;

  std::string str() const;
  friend bool operator==(const GameTree& a, const GameTree& b);

 private:
  struct Node;
  explicit GameTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TreeStep {
  GameTree next;
  bool replicative = false;
  std::string address;  // replicated leaf, or the prefix a non-replicative move targets
  bool focused = true;  // non-replicative move addressed to a single leaf
  std::vector<std::pair<std::string, ChoiceEffect>> effects;  // per affected leaf
};
std::variant<TreeStep, Illegal> apply_tree_move(const GameTree& t, Role role, Player who,
                                                std::string_view move);

struct SequentPosition {
  std::vector<std::string> closure_pending;  // free variables still to be named, in order
  VcMapping valuation;
  std::vector<GameTree> antecedent;
  Formula succedent;

  static SequentPosition initial(const Sequent& s);
  std::string str() const;
  friend bool operator==(const SequentPosition&, const SequentPosition&) = default;
};

struct MoveEffect {
  enum class Kind { Closure, Succedent, Antecedent, Replication };
  Kind kind = Kind::Succedent;
  Player player = Player::Top;
  int slot = -1;
  std::string address;
  bool focused = true;
  std::string closure_var;
  std::vector<ChoiceEffect> choices;  // one per affected leaf, or the succedent choice
};

struct PositionStep {
  SequentPosition next;
  MoveEffect effect;
};
std::variant<PositionStep, Illegal> apply_move(const SequentPosition& p, const LabMove& m);

struct MoveSchema {
  enum class Kind { ChooseLeft, ChooseRight, ChooseConstant, Replicate };
  Kind kind = Kind::ChooseLeft;
  Player owner = Player::Top;
  std::string prefix;   // full move text up to, and for Left/Right/Replicate including, the choice
  int slot = -1;        // antecedent slot, -1 for the succedent or closure
  std::string address;  // tree address for antecedent schemas
  bool focused = true;

  // The concrete move; `constant` is only used by ChooseConstant.
  std::string encode(const std::string& constant = {}) const;
};

std::vector<MoveSchema> formula_move_schemas(const Formula& f, Role role, Player who);
std::vector<MoveSchema> tree_move_schemas(const GameTree& t, Role role, Player who);
std::vector<MoveSchema> legal_move_schemas(const SequentPosition& p, Player who);

enum class Outcome { TopWins, BotWins, Unknown };
const char* outcome_name(Outcome o);

Outcome adjudicate_formula(const Formula& position, Role role, const Interpretation& i);
Outcome adjudicate_tree(const GameTree& position, Role role, const Interpretation& i);
Outcome adjudicate(const SequentPosition& p, const Interpretation& i);

// Plays a complete run from a start position; the first illegal move loses for its author.
struct RunVerdict {
  Outcome outcome = Outcome::Unknown;
  std::optional<Player> illegal_by;
  std::optional<std::size_t> illegal_index;
};
RunVerdict run_outcome(const SequentPosition& start, const Run& run, const Interpretation& i);
RunVerdict run_outcome(const Formula& start, Role role, const Run& run, const Interpretation& i);
RunVerdict run_outcome(const GameTree& start, Role role, const Run& run, const Interpretation& i);

// Upsilon is a p-delay of Gamma.
bool is_delay(const Run& upsilon, const Run& gamma, Player p);
// Moves of the form "i.alpha", with the prefix stripped.
Run project_component(const Run& r, std::size_t index);
// Moves "u.alpha" with u a prefix of `branch`, reduced to alpha; replications dropped.
Run project_branch(const Run& r, std::string_view branch);

std::string run_to_string(const Run& r);

}  // namespace cl12
