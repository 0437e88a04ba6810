#include "cl12/arena.hpp"

#include <sstream>

namespace cl12 {

std::string PlayResult::verdict() const {
  if (illegal_by) return std::string("IllegalBy(") + (*illegal_by == Player::Top ? "Top" : "Bot") + ")";
  return outcome_name(outcome);
}

Formula residue(const SequentPosition& p) {
  std::vector<Formula> parts;
  for (const auto& t : p.antecedent)
    for (const auto& w : t.leaf_addresses()) parts.push_back(negate(elementarize(*t.leaf_at(w))));
  parts.push_back(elementarize(p.succedent));
  return par_or(parts);
}

namespace {

// Applies a batch for one player; returns false and records the verdict on an illegal move.
bool apply_batch(PlayResult& res, const std::vector<std::string>& moves, Player who, std::size_t max_moves,
                 std::vector<std::string>& applied) {
  for (const auto& m : moves) {
    if (res.run.size() >= max_moves) return true;
    auto r = apply_move(res.final_position, {who, m});
    if (auto* bad = std::get_if<Illegal>(&r)) {
      res.run.push_back({who, m});
      res.illegal_by = who;
      res.illegal_reason = bad->reason;
      res.outcome = who == Player::Top ? Outcome::BotWins : Outcome::TopWins;
      return false;
    }
    res.final_position = std::get<PositionStep>(r).next;
    res.run.push_back({who, m});
    applied.push_back(m);
  }
  return true;
}

}  // namespace

PlayResult play(Agent& machine, Agent& env, const Sequent& x, const Interpretation& i, const PlayLimits& limits) {
  PlayResult res;
  res.final_position = SequentPosition::initial(x);
  std::vector<std::string> to_env;
  for (std::size_t tick = 0; tick < limits.max_ticks; ++tick) {
    res.ticks = tick + 1;
    auto env_moves = env.respond(to_env);
    res.trace.push_back({tick, Player::Bot, to_env, env_moves, env.state_digest()});
    if (env.internal_error() && !res.env_error) res.env_error = env.internal_error();
    std::vector<std::string> applied_env;
    if (!apply_batch(res, env_moves, Player::Bot, limits.max_moves, applied_env)) return res;
    auto machine_moves = machine.respond(applied_env);
    res.trace.push_back({tick, Player::Top, applied_env, machine_moves, machine.state_digest()});
    if (machine.internal_error() && !res.machine_error) res.machine_error = machine.internal_error();
    std::vector<std::string> applied_machine;
    if (!apply_batch(res, machine_moves, Player::Top, limits.max_moves, applied_machine)) return res;
    to_env = std::move(applied_machine);
    if (res.run.size() >= limits.max_moves) break;
    if (env_moves.empty() && machine_moves.empty() && env.finished()) break;
  }
  res.outcome = adjudicate(res.final_position, i);
  return res;
}

// ---------------------------------------------------------------- environments

std::vector<std::string> ScriptedEnv::respond(const std::vector<std::string>&) {
  if (next_ >= batches_.size()) return {};
  return batches_[next_++];
}

void QueueEnv::push(std::vector<std::string> moves) {
  queue_.insert(queue_.end(), moves.begin(), moves.end());
}

std::vector<std::string> QueueEnv::respond(const std::vector<std::string>&) {
  std::vector<std::string> out;
  out.swap(queue_);
  return out;
}

RandomEnv::RandomEnv(const Sequent& x, std::uint64_t seed, RandomEnvOptions options)
    : pos_(SequentPosition::initial(x)), rng_(seed), opt_(std::move(options)) {}

std::string RandomEnv::state_digest() const {
  std::ostringstream os;
  os << "made=" << made_ << ";done=" << done_ << ";pos=" << pos_.str();
  return os.str();
}

namespace {

std::string random_numeral(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 16), bit(0, 1);
  int n = len(rng);
  std::string s = "1";
  for (int k = 1; k < n; ++k) s += static_cast<char>('0' + bit(rng));
  return s;
}

bool advance(SequentPosition& pos, Player who, const std::string& m) {
  auto r = apply_move(pos, {who, m});
  if (std::holds_alternative<Illegal>(r)) return false;
  pos = std::get<PositionStep>(r).next;
  return true;
}

}  // namespace

std::vector<std::string> RandomEnv::respond(const std::vector<std::string>& delivered) {
  for (const auto& m : delivered) advance(pos_, Player::Top, m);
  std::vector<std::string> out;
  if (done_) return out;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick_constant = [&]() {
    if (coin(rng_) < opt_.long_constant_probability) return random_numeral(rng_);
    std::uniform_int_distribution<std::size_t> d(0, opt_.pool.size() - 1);
    return opt_.pool[d(rng_)];
  };
  if (!pos_.closure_pending.empty()) {
    while (!pos_.closure_pending.empty()) {
      out.push_back(pick_constant());
      advance(pos_, Player::Bot, out.back());
    }
    return out;
  }
  if (made_ >= opt_.max_moves || coin(rng_) < opt_.stop_probability) {
    done_ = true;
    return out;
  }
  if (coin(rng_) >= opt_.move_probability) return out;
  auto schemas = legal_move_schemas(pos_, Player::Bot);
  if (schemas.empty()) {
    done_ = true;
    return out;
  }
  std::uniform_int_distribution<std::size_t> d(0, schemas.size() - 1);
  const auto& s = schemas[d(rng_)];
  std::string m = s.kind == MoveSchema::Kind::ChooseConstant ? s.encode(pick_constant()) : s.encode();
  if (advance(pos_, Player::Bot, m)) {
    ++made_;
    out.push_back(m);
  }
  return out;
}

std::vector<std::string> enumerate_moves(const SequentPosition& p, Player who, const std::vector<std::string>& pool) {
  std::vector<std::string> out;
  for (const auto& s : legal_move_schemas(p, who)) {
    if (s.kind == MoveSchema::Kind::ChooseConstant)
      for (const auto& c : pool) out.push_back(s.encode(c));
    else
      out.push_back(s.encode());
  }
  return out;
}

namespace {

struct ExploreNode {
  SequentPosition pos;
  std::unique_ptr<Agent> machine;
  Run run;
};

class Explorer {
 public:
  Explorer(const Interpretation& i, const std::vector<std::string>& pool, std::size_t max_moves, std::size_t max_runs)
      : interp_(i), pool_(pool), max_moves_(max_moves), max_runs_(max_runs) {}

  // Feeds the machine's answers into the node; false when the machine moved illegally.
  bool take(ExploreNode& n, const std::vector<std::string>& moves) {
    for (const auto& m : moves) {
      n.run.push_back({Player::Top, m});
      if (!advance(n.pos, Player::Top, m)) return false;
    }
    return true;
  }

  bool settle(ExploreNode& n) {
    for (int k = 0; k < 16; ++k) {
      auto out = n.machine->respond({});
      if (out.empty()) return true;
      if (!take(n, out)) return false;
    }
    return true;
  }

  void leaf(const Run& run, Outcome o) {
    ++report.runs;
    report.explored.push_back(run);
    if (o == Outcome::TopWins) ++report.top_wins;
    else if (!report.first_loss) report.first_loss = run;
  }

  void visit(ExploreNode& n) {
    if (report.runs >= max_runs_) {
      report.truncated = true;
      return;
    }
    leaf(n.run, adjudicate(n.pos, interp_));
    if (n.run.size() >= max_moves_) return;
    for (const auto& m : enumerate_moves(n.pos, Player::Bot, pool_)) {
      ExploreNode child{n.pos, n.machine->clone(), n.run};
      child.run.push_back({Player::Bot, m});
      advance(child.pos, Player::Bot, m);
      if (!take(child, child.machine->respond({m})) || !settle(child)) {
        leaf(child.run, Outcome::BotWins);
        continue;
      }
      visit(child);
      if (report.truncated) return;
    }
  }

  ExhaustiveReport report;

 private:
  const Interpretation& interp_;
  const std::vector<std::string>& pool_;
  std::size_t max_moves_, max_runs_;
};

}  // namespace

ExhaustiveReport explore_all(const Agent& machine, const Sequent& x, const Interpretation& i,
                             const std::vector<std::string>& pool, std::size_t max_moves, std::size_t max_runs) {
  Explorer ex(i, pool, max_moves, max_runs);
  ExploreNode root{SequentPosition::initial(x), machine.clone(), {}};
  if (!ex.take(root, root.machine->respond({})) || !ex.settle(root)) {
    ex.leaf(root.run, Outcome::BotWins);
    return ex.report;
  }
  ex.visit(root);
  return ex.report;
}

// ---------------------------------------------------------------- reference machines

const char* machine_kind_name(MachineKind k) {
  switch (k) {
    case MachineKind::Silent: return "silent";
    case MachineKind::FirstLegal: return "first-legal";
    case MachineKind::EchoEnvConstant: return "echo-env-constant";
    case MachineKind::LatestConstant: return "latest-constant";
    case MachineKind::PseudoRandom: return "pseudo-random";
  }
  return "?";
}

namespace {

class ReferenceMachine : public Agent {
 public:
  ReferenceMachine(MachineKind kind, const Sequent& x, std::uint64_t seed, std::size_t max_moves)
      : kind_(kind), pos_(SequentPosition::initial(x)), state_(seed * 6364136223846793005ULL + 1442695040888963407ULL),
        max_(max_moves) {}

  std::vector<std::string> respond(const std::vector<std::string>& delivered) override {
    for (const auto& m : delivered) {
      auto r = apply_move(pos_, {Player::Bot, m});
      if (std::holds_alternative<Illegal>(r)) continue;
      auto& st = std::get<PositionStep>(r);
      for (const auto& c : st.effect.choices)
        if (is_choice_quantifier(c.op)) seen_.push_back(c.chosen);
      pos_ = st.next;
    }
    if (kind_ == MachineKind::Silent || made_ >= max_ || !pos_.closure_pending.empty()) return {};
    auto schemas = legal_move_schemas(pos_, Player::Top);
    if (schemas.empty()) return {};
    const MoveSchema* s = &schemas.front();
    std::string c = "0";
    switch (kind_) {
      case MachineKind::FirstLegal: break;
      case MachineKind::EchoEnvConstant:
        s = &schemas.back();
        if (!seen_.empty()) c = seen_.front();
        break;
      case MachineKind::LatestConstant:
        for (const auto& t : schemas)
          if (t.kind != MoveSchema::Kind::Replicate) {
            s = &t;
            break;
          }
        if (!seen_.empty()) c = seen_.back();
        break;
      case MachineKind::PseudoRandom: {
        s = &schemas[next() % schemas.size()];
        std::vector<std::string> pool = seen_;
        pool.push_back("0");
        pool.push_back("1");
        c = pool[next() % pool.size()];
        break;
      }
      default: break;
    }
    std::string m = s->encode(c);
    if (!advance(pos_, Player::Top, m)) return {};
    ++made_;
    return {m};
  }

  std::unique_ptr<Agent> clone() const override { return std::make_unique<ReferenceMachine>(*this); }
  std::string state_digest() const override {
    return std::string(machine_kind_name(kind_)) + ";made=" + std::to_string(made_) + ";rng=" +
           std::to_string(state_) + ";pos=" + pos_.str();
  }

 private:
  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_ >> 33;
  }

  MachineKind kind_;
  SequentPosition pos_;
  std::uint64_t state_;
  std::size_t max_;
  std::size_t made_ = 0;
  std::vector<std::string> seen_;
};

}  // namespace

std::unique_ptr<Agent> make_reference_machine(MachineKind kind, const Sequent& x, std::uint64_t seed,
                                              std::size_t max_moves) {
  return std::make_unique<ReferenceMachine>(kind, x, seed, max_moves);
}

}  // namespace cl12
