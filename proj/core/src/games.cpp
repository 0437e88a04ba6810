#include "cl12/games.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace cl12 {

const char* player_symbol(Player p) { return p == Player::Top ? "T" : "B"; }

Player owner(Op op, Role role) {
  bool sor = op == Op::ChoOr || op == Op::ChoEx;
  bool top = sor == (role == Role::Positive);
  return top ? Player::Top : Player::Bot;
}

Player replication_owner(Role role) { return role == Role::Positive ? Player::Bot : Player::Top; }

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::TopWins: return "Top";
    case Outcome::BotWins: return "Bot";
    default: return "Unknown";
  }
}

// ---------------------------------------------------------------- formula moves

namespace {

std::variant<FormulaStep, Illegal> formula_move(const Formula& f, Role role, Player who, std::string_view m,
                                                Path& path) {
  switch (f.op()) {
    case Op::ParAnd:
    case Op::ParOr: {
      if (m.size() < 2 || (m[0] != '0' && m[0] != '1') || m[1] != '.')
        return Illegal{"expected a component prefix 0. or 1."};
      std::size_t i = static_cast<std::size_t>(m[0] - '0');
      path.push_back(i);
      auto r = formula_move(f.child(i), role, who, m.substr(2), path);
      path.pop_back();
      if (auto* s = std::get_if<FormulaStep>(&r)) {
        s->effect.path.insert(s->effect.path.begin(), i);
        s->next = i == 0 ? Formula::binary(f.op(), s->next, f.right()) : Formula::binary(f.op(), f.left(), s->next);
      }
      return r;
    }
    case Op::BlindAll:
    case Op::BlindEx: {
      auto r = formula_move(f.body(), role, who, m, path);
      if (auto* s = std::get_if<FormulaStep>(&r)) {
        s->effect.path.insert(s->effect.path.begin(), 0);
        s->next = Formula::quantifier(f.op(), f.name(), s->next);
      }
      return r;
    }
    case Op::ChoAnd:
    case Op::ChoOr: {
      if (owner(f.op(), role) != who) return Illegal{"choice belongs to the other player"};
      if (m != "0" && m != "1") return Illegal{"expected 0 or 1"};
      std::size_t i = static_cast<std::size_t>(m[0] - '0');
      return FormulaStep{f.child(i), {f.op(), {}, std::string(m)}};
    }
    case Op::ChoAll:
    case Op::ChoEx: {
      if (owner(f.op(), role) != who) return Illegal{"choice belongs to the other player"};
      if (!is_numeral(m)) return Illegal{"expected a constant"};
      std::string c(m);
      return FormulaStep{substitute(f.body(), f.name(), Term::constant(c)), {f.op(), {}, c}};
    }
    default:
      return Illegal{"no moves are available in an elementary component"};
  }
}

}  // namespace

std::variant<FormulaStep, Illegal> apply_formula_move(const Formula& f, Role role, Player who, std::string_view move) {
  Path path;
  return formula_move(f, role, who, move, path);
}

// ---------------------------------------------------------------- trees

struct GameTree::Node {
  std::optional<Formula> leaf;
  std::optional<GameTree> l, r;
};

GameTree::GameTree() : GameTree(leaf(Formula::top())) {}

GameTree GameTree::leaf(Formula f) {
  auto n = std::make_shared<Node>();
  n->leaf = std::move(f);
  return GameTree(std::move(n));
}

GameTree GameTree::node(GameTree left, GameTree right) {
  auto n = std::make_shared<Node>();
  n->l = std::move(left);
  n->r = std::move(right);
  return GameTree(std::move(n));
}

bool GameTree::is_leaf() const { return node_->leaf.has_value(); }
const Formula& GameTree::formula() const { return *node_->leaf; }
const GameTree& GameTree::left() const { return *node_->l; }
const GameTree& GameTree::right() const { return *node_->r; }

std::vector<std::string> GameTree::leaf_addresses() const {
  std::vector<std::string> out;
  std::string prefix;
  auto walk = [&](auto&& self, const GameTree& t) -> void {
    if (t.is_leaf()) {
      out.push_back(prefix);
      return;
    }
    prefix.push_back('0');
    self(self, t.left());
    prefix.back() = '1';
    self(self, t.right());
    prefix.pop_back();
  };
  walk(walk, *this);
  return out;
}

std::optional<Formula> GameTree::leaf_at(std::string_view address) const {
  const GameTree* t = this;
  for (char c : address) {
    if (t->is_leaf()) return std::nullopt;
    t = c == '0' ? &t->left() : &t->right();
  }
  if (!t->is_leaf()) return std::nullopt;
  return t->formula();
}

GameTree GameTree::replace(std::string_view address, const GameTree& sub) const {
  if (address.empty()) return sub;
  if (is_leaf()) throw std::out_of_range("tree address beyond a leaf");
  if (address[0] == '0') return node(left().replace(address.substr(1), sub), right());
  return node(left(), right().replace(address.substr(1), sub));
}

std::string GameTree::str() const {
  if (is_leaf()) return formula().str();
  auto part = [](const GameTree& t) {
    if (t.is_leaf() && !is_literal(t.formula().op()) && !is_quantifier(t.formula().op()))
      return "(" + t.str() + ")";
    return t.str();
  };
  return "(" + part(left()) + " o " + part(right()) + ")";
}

bool operator==(const GameTree& a, const GameTree& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.formula() == b.formula();
  return a.left() == b.left() && a.right() == b.right();
}

namespace {
bool is_bits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}
}  // namespace

std::variant<TreeStep, Illegal> apply_tree_move(const GameTree& t, Role role, Player who, std::string_view move) {
  std::size_t k = move.find_first_of(".:");
  if (k == std::string_view::npos) return Illegal{"expected an address followed by '.' or ':'"};
  std::string_view u = move.substr(0, k);
  if (!is_bits(u)) return Illegal{"tree addresses are bit strings"};
  TreeStep step;
  step.address = std::string(u);
  if (move[k] == ':') {
    if (k + 1 != move.size()) return Illegal{"nothing may follow a replication"};
    if (who != replication_owner(role)) return Illegal{"replication belongs to the other player"};
    auto leaf = t.leaf_at(u);
    if (!leaf) return Illegal{"replication must target a leaf"};
    step.replicative = true;
    step.next = t.replace(u, GameTree::node(GameTree::leaf(*leaf), GameTree::leaf(*leaf)));
    return step;
  }
  std::string_view beta = move.substr(k + 1);
  GameTree next = t;
  std::size_t hits = 0;
  for (const auto& w : t.leaf_addresses()) {
    if (w.compare(0, u.size(), u) != 0 || w.size() < u.size()) continue;
    ++hits;
    auto r = apply_formula_move(*t.leaf_at(w), role, who, beta);
    if (auto* bad = std::get_if<Illegal>(&r)) return Illegal{"leaf " + w + ": " + bad->reason};
    auto& s = std::get<FormulaStep>(r);
    next = next.replace(w, GameTree::leaf(s.next));
    step.effects.emplace_back(w, s.effect);
    step.focused = w.size() == u.size();
  }
  if (hits == 0) return Illegal{"no leaf extends the address"};
  step.focused = hits == 1 && step.effects[0].first.size() == u.size();
  step.next = std::move(next);
  return step;
}

// ---------------------------------------------------------------- sequent positions

SequentPosition SequentPosition::initial(const Sequent& s) {
  SequentPosition p;
  auto fv = free_vars(s);
  p.closure_pending.assign(fv.begin(), fv.end());
  for (const auto& g : s.antecedent) p.antecedent.push_back(GameTree::leaf(g));
  p.succedent = s.succedent;
  return p;
}

std::string SequentPosition::str() const {
  std::string out;
  if (!closure_pending.empty()) {
    for (const auto& v : closure_pending) out += "!" + v + " ";
    out += "| ";
  }
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += ", ";
    out += antecedent[i].str();
  }
  if (!antecedent.empty()) out += " ";
  return out + "||- " + succedent.str();
}

namespace {

GameTree map_leaves(const GameTree& t, const std::string& var, const Term& c) {
  if (t.is_leaf()) return GameTree::leaf(substitute(t.formula(), var, c));
  return GameTree::node(map_leaves(t.left(), var, c), map_leaves(t.right(), var, c));
}

}  // namespace

std::variant<PositionStep, Illegal> apply_move(const SequentPosition& p, const LabMove& m) {
  PositionStep out{p, {}};
  out.effect.player = m.player;
  const std::string& mv = m.move;
  if (!p.closure_pending.empty()) {
    if (m.player != Player::Bot) return Illegal{"only the environment moves before the closure is complete"};
    if (!is_numeral(mv)) return Illegal{"closure moves are constants"};
    const std::string var = p.closure_pending.front();
    Term c = Term::constant(mv);
    auto& n = out.next;
    n.closure_pending.erase(n.closure_pending.begin());
    n.valuation[var] = mv;
    for (auto& t : n.antecedent) t = map_leaves(t, var, c);
    n.succedent = substitute(n.succedent, var, c);
    out.effect.kind = MoveEffect::Kind::Closure;
    out.effect.closure_var = var;
    out.effect.choices.push_back({Op::ChoAll, {}, mv});
    return out;
  }
  if (mv.rfind("1.", 0) == 0) {
    auto r = apply_formula_move(p.succedent, Role::Positive, m.player, std::string_view(mv).substr(2));
    if (auto* bad = std::get_if<Illegal>(&r)) return *bad;
    auto& s = std::get<FormulaStep>(r);
    out.next.succedent = s.next;
    out.effect.kind = MoveEffect::Kind::Succedent;
    out.effect.choices.push_back(s.effect);
    return out;
  }
  if (mv.rfind("0.", 0) == 0) {
    std::size_t dot = mv.find('.', 2);
    if (dot == std::string::npos || dot == 2) return Illegal{"expected 0.<slot>.<move>"};
    std::size_t slot = 0;
    auto [ptr, ec] = std::from_chars(mv.data() + 2, mv.data() + dot, slot);
    if (ec != std::errc() || ptr != mv.data() + dot || (dot > 3 && mv[2] == '0'))
      return Illegal{"bad antecedent slot"};
    if (slot >= p.antecedent.size()) return Illegal{"no such antecedent slot"};
    auto r = apply_tree_move(p.antecedent[slot], Role::Negative, m.player, std::string_view(mv).substr(dot + 1));
    if (auto* bad = std::get_if<Illegal>(&r)) return *bad;
    auto& s = std::get<TreeStep>(r);
    out.next.antecedent[slot] = s.next;
    out.effect.kind = s.replicative ? MoveEffect::Kind::Replication : MoveEffect::Kind::Antecedent;
    out.effect.slot = static_cast<int>(slot);
    out.effect.address = s.address;
    out.effect.focused = s.focused;
    for (auto& [w, e] : s.effects) out.effect.choices.push_back(e);
    return out;
  }
  return Illegal{"moves start with 0. or 1."};
}

// ---------------------------------------------------------------- schemas

std::string MoveSchema::encode(const std::string& constant) const {
  return kind == Kind::ChooseConstant ? prefix + constant : prefix;
}

namespace {

void formula_schemas(const Formula& f, Role role, Player who, const std::string& prefix, std::vector<MoveSchema>& out) {
  switch (f.op()) {
    case Op::ParAnd:
    case Op::ParOr:
      formula_schemas(f.left(), role, who, prefix + "0.", out);
      formula_schemas(f.right(), role, who, prefix + "1.", out);
      return;
    case Op::BlindAll:
    case Op::BlindEx:
      formula_schemas(f.body(), role, who, prefix, out);
      return;
    case Op::ChoAnd:
    case Op::ChoOr:
      if (owner(f.op(), role) != who) return;
      out.push_back({MoveSchema::Kind::ChooseLeft, who, prefix + "0", -1, {}, true});
      out.push_back({MoveSchema::Kind::ChooseRight, who, prefix + "1", -1, {}, true});
      return;
    case Op::ChoAll:
    case Op::ChoEx:
      if (owner(f.op(), role) != who) return;
      out.push_back({MoveSchema::Kind::ChooseConstant, who, prefix, -1, {}, true});
      return;
    default:
      return;
  }
}

bool matches_constant_prefix(const std::string& move, const std::string& prefix) {
  return move.size() > prefix.size() && move.compare(0, prefix.size(), prefix) == 0 &&
         is_numeral(std::string_view(move).substr(prefix.size()));
}

}  // namespace

std::vector<MoveSchema> formula_move_schemas(const Formula& f, Role role, Player who) {
  std::vector<MoveSchema> out;
  formula_schemas(f, role, who, "", out);
  return out;
}

std::vector<MoveSchema> tree_move_schemas(const GameTree& t, Role role, Player who) {
  std::vector<MoveSchema> out;
  auto leaves = t.leaf_addresses();
  std::map<std::string, std::vector<MoveSchema>> per_leaf;
  for (const auto& w : leaves) per_leaf[w] = formula_move_schemas(*t.leaf_at(w), role, who);

  // Every prefix of a leaf address, shortest first; a leaf address itself is focused.
  std::set<std::string> prefixes;
  for (const auto& w : leaves)
    for (std::size_t k = 0; k <= w.size(); ++k) prefixes.insert(w.substr(0, k));

  for (const auto& u : prefixes) {
    std::vector<std::string> under;
    for (const auto& w : leaves)
      if (w.compare(0, u.size(), u) == 0) under.push_back(w);
    bool focused = under.size() == 1 && under[0] == u;
    // Intersect the leaves' move sets: concrete moves for connectives, prefixes for constants.
    std::set<std::string> concrete, constant;
    std::map<std::string, MoveSchema::Kind> kinds;
    bool first = true;
    for (const auto& w : under) {
      std::set<std::string> c2, k2;
      for (const auto& s : per_leaf[w]) {
        if (s.kind == MoveSchema::Kind::ChooseConstant) k2.insert(s.prefix);
        else {
          c2.insert(s.prefix);
          kinds.emplace(s.prefix, s.kind);
        }
      }
      if (first) {
        concrete = std::move(c2);
        constant = std::move(k2);
        first = false;
        continue;
      }
      std::set<std::string> nc, nk;
      for (const auto& m : concrete) {
        bool ok = c2.count(m) > 0;
        for (const auto& p : k2) ok = ok || matches_constant_prefix(m, p);
        if (ok) nc.insert(m);
      }
      for (const auto& m : c2) {
        for (const auto& p : constant)
          if (matches_constant_prefix(m, p)) nc.insert(m);
      }
      for (const auto& p : constant)
        if (k2.count(p)) nk.insert(p);
      concrete = std::move(nc);
      constant = std::move(nk);
    }
    for (const auto& m : concrete) {
      MoveSchema s;
      s.kind = kinds.count(m) ? kinds[m] : (m.back() == '0' ? MoveSchema::Kind::ChooseLeft : MoveSchema::Kind::ChooseRight);
      s.owner = who;
      s.prefix = u + "." + m;
      s.address = u;
      s.focused = focused;
      out.push_back(s);
    }
    for (const auto& p : constant) {
      MoveSchema s;
      s.kind = MoveSchema::Kind::ChooseConstant;
      s.owner = who;
      s.prefix = u + "." + p;
      s.address = u;
      s.focused = focused;
      out.push_back(s);
    }
  }
  if (who == replication_owner(role)) {
    for (const auto& w : leaves) {
      MoveSchema s;
      s.kind = MoveSchema::Kind::Replicate;
      s.owner = who;
      s.prefix = w + ":";
      s.address = w;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<MoveSchema> legal_move_schemas(const SequentPosition& p, Player who) {
  std::vector<MoveSchema> out;
  if (!p.closure_pending.empty()) {
    if (who == Player::Bot) out.push_back({MoveSchema::Kind::ChooseConstant, who, "", -1, {}, true});
    return out;
  }
  for (std::size_t i = 0; i < p.antecedent.size(); ++i) {
    for (auto s : tree_move_schemas(p.antecedent[i], Role::Negative, who)) {
      s.prefix = "0." + std::to_string(i) + "." + s.prefix;
      s.slot = static_cast<int>(i);
      out.push_back(std::move(s));
    }
  }
  for (auto s : formula_move_schemas(p.succedent, Role::Positive, who)) {
    s.prefix = "1." + s.prefix;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- adjudication

namespace {

std::optional<bool> truth(const Formula& f, const Interpretation& in) {
  return eval_elementary(elementarize(f), in);
}

Outcome from_truth(std::optional<bool> top_wins) {
  if (!top_wins) return Outcome::Unknown;
  return *top_wins ? Outcome::TopWins : Outcome::BotWins;
}

}  // namespace

Outcome adjudicate_formula(const Formula& position, Role role, const Interpretation& i) {
  auto v = truth(position, i);
  if (v && role == Role::Negative) v = !*v;
  return from_truth(v);
}

Outcome adjudicate_tree(const GameTree& position, Role role, const Interpretation& i) {
  // Positive: Top must win every leaf. Negative: losing one leaf of the negated tree suffices.
  bool any_unknown = false;
  for (const auto& w : position.leaf_addresses()) {
    auto v = truth(*position.leaf_at(w), i);
    if (!v) {
      any_unknown = true;
      continue;
    }
    if (!*v) return role == Role::Positive ? Outcome::BotWins : Outcome::TopWins;
  }
  if (any_unknown) return Outcome::Unknown;
  return role == Role::Positive ? Outcome::TopWins : Outcome::BotWins;
}

Outcome adjudicate(const SequentPosition& p, const Interpretation& i) {
  if (!p.closure_pending.empty()) return Outcome::TopWins;
  bool unknown = false;
  for (const auto& t : p.antecedent) {
    Outcome o = adjudicate_tree(t, Role::Negative, i);
    if (o == Outcome::TopWins) return Outcome::TopWins;
    if (o == Outcome::Unknown) unknown = true;
  }
  auto succ = truth(p.succedent, i);
  if (succ && *succ) return Outcome::TopWins;
  if (unknown || !succ) return Outcome::Unknown;
  return Outcome::BotWins;
}

RunVerdict run_outcome(const SequentPosition& start, const Run& run, const Interpretation& in) {
  SequentPosition p = start;
  for (std::size_t k = 0; k < run.size(); ++k) {
    auto r = apply_move(p, run[k]);
    if (std::holds_alternative<Illegal>(r)) {
      Outcome o = run[k].player == Player::Top ? Outcome::BotWins : Outcome::TopWins;
      return {o, run[k].player, k};
    }
    p = std::get<PositionStep>(std::move(r)).next;
  }
  return {adjudicate(p, in), std::nullopt, std::nullopt};
}

RunVerdict run_outcome(const Formula& start, Role role, const Run& run, const Interpretation& in) {
  Formula f = start;
  for (std::size_t k = 0; k < run.size(); ++k) {
    auto r = apply_formula_move(f, role, run[k].player, run[k].move);
    if (std::holds_alternative<Illegal>(r)) {
      Outcome o = run[k].player == Player::Top ? Outcome::BotWins : Outcome::TopWins;
      return {o, run[k].player, k};
    }
    f = std::get<FormulaStep>(std::move(r)).next;
  }
  return {adjudicate_formula(f, role, in), std::nullopt, std::nullopt};
}

RunVerdict run_outcome(const GameTree& start, Role role, const Run& run, const Interpretation& in) {
  GameTree t = start;
  for (std::size_t k = 0; k < run.size(); ++k) {
    auto r = apply_tree_move(t, role, run[k].player, run[k].move);
    if (std::holds_alternative<Illegal>(r)) {
      Outcome o = run[k].player == Player::Top ? Outcome::BotWins : Outcome::TopWins;
      return {o, run[k].player, k};
    }
    t = std::get<TreeStep>(std::move(r)).next;
  }
  return {adjudicate_tree(t, role, in), std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------- runs

bool is_delay(const Run& upsilon, const Run& gamma, Player p) {
  if (upsilon.size() != gamma.size()) return false;
  auto split = [](const Run& r, Player who) {
    std::vector<std::string> mine;
    std::vector<std::size_t> others_before;  // opponent moves preceding each of who's moves
    std::size_t others = 0;
    std::vector<std::string> theirs;
    for (const auto& m : r) {
      if (m.player == who) {
        mine.push_back(m.move);
        others_before.push_back(others);
      } else {
        theirs.push_back(m.move);
        ++others;
      }
    }
    return std::make_tuple(mine, theirs, others_before);
  };
  auto [um, ut, ub] = split(upsilon, p);
  auto [gm, gt, gb] = split(gamma, p);
  if (um != gm || ut != gt) return false;
  for (std::size_t n = 0; n < ub.size(); ++n)
    if (ub[n] < gb[n]) return false;
  return true;
}

Run project_component(const Run& r, std::size_t index) {
  std::string prefix = std::to_string(index) + ".";
  Run out;
  for (const auto& m : r)
    if (m.move.rfind(prefix, 0) == 0) out.push_back({m.player, m.move.substr(prefix.size())});
  return out;
}

Run project_branch(const Run& r, std::string_view branch) {
  Run out;
  for (const auto& m : r) {
    std::size_t k = m.move.find_first_of(".:");
    if (k == std::string::npos || m.move[k] != '.') continue;
    std::string_view u = std::string_view(m.move).substr(0, k);
    if (!is_bits(u) || u.size() > branch.size() || branch.substr(0, u.size()) != u) continue;
    out.push_back({m.player, m.move.substr(k + 1)});
  }
  return out;
}

std::string run_to_string(const Run& r) {
  std::string out = "<";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ", ";
    out += std::string(player_symbol(r[i].player)) + r[i].move;
  }
  return out + ">";
}

}  // namespace cl12
