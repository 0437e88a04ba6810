#include <map>

#include "cl12/arena.hpp"

namespace cl12 {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.compare(0, prefix.size(), prefix) == 0; }

class SilentAgent : public Agent {
 public:
  std::vector<std::string> respond(const std::vector<std::string>&) override { return {}; }
  std::unique_ptr<Agent> clone() const override { return std::make_unique<SilentAgent>(); }
  std::string state_digest() const override { return "silent"; }
};

class GreedySolution : public Agent {
 public:
  GreedySolution(const Formula& e, std::shared_ptr<const Interpretation> i, bool sabotage)
      : interp_(std::move(i)), sabotage_(sabotage), pos_(SequentPosition::initial(Sequent{{}, e})) {}

  std::vector<std::string> respond(const std::vector<std::string>& delivered) override {
    for (const auto& m : delivered) step(Player::Bot, m);
    std::vector<std::string> out;
    if (!pos_.closure_pending.empty()) return out;
    for (int guard = 0; guard < 64; ++guard) {
      auto schemas = legal_move_schemas(pos_, Player::Top);
      if (schemas.empty()) break;
      std::string m = choose(schemas.front());
      if (!step(Player::Top, m)) break;
      out.push_back(m);
    }
    return out;
  }

  std::unique_ptr<Agent> clone() const override { return std::make_unique<GreedySolution>(*this); }
  std::string state_digest() const override { return "greedy;pos=" + pos_.str(); }

 private:
  bool step(Player who, const std::string& m) {
    auto r = apply_move(pos_, {who, m});
    if (std::holds_alternative<Illegal>(r)) return false;
    pos_ = std::get<PositionStep>(r).next;
    return true;
  }

  bool true_after(const std::string& m) const {
    auto r = apply_move(pos_, {Player::Top, m});
    if (std::holds_alternative<Illegal>(r)) return false;
    auto v = eval_elementary(elementarize(std::get<PositionStep>(r).next.succedent), *interp_);
    return v && *v;
  }

  std::vector<std::string> candidates() const {
    std::vector<std::string> out;
    Element n = interp_->finite ? interp_->finite->domain_size : 16;
    for (Element k = 0; k < n; ++k) out.push_back(to_numeral(k));
    if (interp_->finite)
      for (const auto& [name, v] : interp_->finite->naming) out.push_back(name);
    return out;
  }

  std::string choose(const MoveSchema& s) const {
    if (s.kind != MoveSchema::Kind::ChooseConstant) {
      if (s.kind == MoveSchema::Kind::ChooseLeft) {
        std::string right = s.prefix.substr(0, s.prefix.size() - 1) + "1";
        if (!true_after(s.encode()) && true_after(right)) return right;
      }
      return s.encode();
    }
    std::string pick = "0";
    for (const auto& c : candidates())
      if (true_after(s.encode(c))) {
        pick = c;
        break;
      }
    if (sabotage_) pick = to_numeral(numeral_value(pick).value_or(0) + 1);
    return s.encode(pick);
  }

  std::shared_ptr<const Interpretation> interp_;
  bool sabotage_;
  SequentPosition pos_;
};

struct Simulation {
  std::unique_ptr<Agent> agent;
  SequentPosition pos;
  std::vector<std::string> inbox;

  Simulation clone() const { return {agent->clone(), pos, inbox}; }
};

struct Shared {
  Sequent x;
  Sequent real;  // ||- F
  std::vector<std::shared_ptr<const Agent>> solutions;
};

class ComposedAgent : public Agent {
 public:
  ComposedAgent(std::shared_ptr<const Shared> s, std::unique_ptr<Agent> k)
      : s_(std::move(s)), k_(std::move(k)), real_(SequentPosition::initial(s_->real)) {}

  ComposedAgent(const ComposedAgent& o)
      : s_(o.s_), k_(o.k_->clone()), real_(o.real_), started_(o.started_), k_inbox_(o.k_inbox_), error_(o.error_) {
    for (const auto& [key, sim] : o.sims_) sims_.emplace(key, sim.clone());
  }

  std::vector<std::string> respond(const std::vector<std::string>& delivered) override {
    std::vector<std::string> out;
    if (error_) return out;
    try {
      for (const auto& m : delivered) {
        bool closure = !real_.closure_pending.empty();
        advance(real_, Player::Bot, m, "environment");
        if (!closure) k_inbox_.push_back(m);
      }
      if (!started_ && real_.closure_pending.empty()) start();
      if (started_) run(out);
    } catch (const std::exception& ex) {
      error_ = ex.what();
    }
    return out;
  }

  std::unique_ptr<Agent> clone() const override { return std::make_unique<ComposedAgent>(*this); }

  std::string state_digest() const override {
    std::string d = "K{" + k_->state_digest() + "}";
    for (const auto& [key, sim] : sims_)
      d += ";sim" + std::to_string(key.first) + "/" + key.second + "{" + sim.agent->state_digest() + "}";
    if (error_) d += ";error";
    return d;
  }

  std::optional<std::string> internal_error() const override {
    if (error_) return error_;
    return k_->internal_error();
  }

 private:
  static void advance(SequentPosition& p, Player who, const std::string& m, const char* what) {
    auto r = apply_move(p, {who, m});
    if (auto* bad = std::get_if<Illegal>(&r))
      throw SimulationDesync(std::string(what) + " move " + m + " is illegal: " + bad->reason);
    p = std::get<PositionStep>(r).next;
  }

  void start() {
    started_ = true;
    VcMapping e = real_.valuation;
    for (const auto& v : free_vars(s_->x)) {
      if (!e.count(v)) e[v] = "0";
      k_inbox_.insert(k_inbox_.begin() + static_cast<long>(closure_fed_++), e[v]);
    }
    for (std::size_t i = 0; i < s_->x.antecedent.size(); ++i) {
      Sequent game{{}, s_->x.antecedent[i]};
      Simulation sim{s_->solutions[i]->clone(), SequentPosition::initial(game), {}};
      for (const auto& v : free_vars(game)) sim.inbox.push_back(e[v]);
      sims_.emplace(std::make_pair(static_cast<int>(i), std::string()), std::move(sim));
    }
  }

  void route(const std::string& mv) {
    std::size_t dot = mv.find('.', 2);
    int slot = std::stoi(mv.substr(2, dot - 2));
    std::size_t sep = mv.find_first_of(".:", dot + 1);
    std::string u = mv.substr(dot + 1, sep - dot - 1);
    if (mv[sep] == ':') {
      auto it = sims_.find({slot, u});
      if (it == sims_.end()) throw SimulationDesync("replication of an unknown copy " + mv);
      Simulation left = std::move(it->second);
      sims_.erase(it);
      Simulation right = left.clone();
      sims_.emplace(std::make_pair(slot, u + "0"), std::move(left));
      sims_.emplace(std::make_pair(slot, u + "1"), std::move(right));
      return;
    }
    std::string beta = mv.substr(sep + 1);
    for (auto& [key, sim] : sims_)
      if (key.first == slot && starts_with(key.second, u)) sim.inbox.push_back("1." + beta);
  }

  void run(std::vector<std::string>& out) {
    for (int round = 0; round < 256; ++round) {
      auto from_k = k_->respond(k_inbox_);
      k_inbox_.clear();
      for (const auto& mv : from_k) {
        if (mv.rfind("1.", 0) == 0) {
          advance(real_, Player::Top, mv, "composed");
          out.push_back(mv);
        } else {
          route(mv);
        }
      }
      for (auto& [key, sim] : sims_) {
        for (const auto& m : sim.inbox) advance(sim.pos, Player::Bot, m, "simulated environment");
        auto moves = sim.agent->respond(sim.inbox);
        sim.inbox.clear();
        for (const auto& m : moves) {
          advance(sim.pos, Player::Top, m, "simulated solution");
          k_inbox_.push_back("0." + std::to_string(key.first) + "." + key.second + "." + m.substr(2));
        }
      }
      if (from_k.empty() && k_inbox_.empty()) return;
    }
    throw SimulationDesync("composition did not settle");
  }

  std::shared_ptr<const Shared> s_;
  std::unique_ptr<Agent> k_;
  SequentPosition real_;
  bool started_ = false;
  std::size_t closure_fed_ = 0;
  std::vector<std::string> k_inbox_;
  std::map<std::pair<int, std::string>, Simulation> sims_;
  std::optional<std::string> error_;
};

}  // namespace

std::unique_ptr<Agent> make_greedy_solution(const Formula& e, std::shared_ptr<const Interpretation> i, bool sabotage) {
  return std::make_unique<GreedySolution>(e, std::move(i), sabotage);
}

std::unique_ptr<Agent> make_silent_agent() { return std::make_unique<SilentAgent>(); }

std::unique_ptr<Agent> compose(const Proof& p, std::vector<std::unique_ptr<Agent>> solutions,
                               const ClassicalBudget& budget) {
  auto k = extract_strategy(p, budget);
  auto s = std::make_shared<Shared>();
  s->x = p.conclusion();
  if (solutions.size() != s->x.antecedent.size())
    throw std::invalid_argument("need one solution per antecedent formula");
  s->real = Sequent{{}, s->x.succedent};
  for (auto& a : solutions) s->solutions.push_back(std::shared_ptr<const Agent>(std::move(a)));
  return std::make_unique<ComposedAgent>(std::move(s), std::move(k));
}

ComposeBound compose_bound(const GraphTerm& xi, std::size_t n, const Sequent& x) {
  ComposeBound out;
  out.b = std::max<std::size_t>(2 * max_run_length(x), n + 1);
  GraphTerm& phi = out.phi;
  auto l = phi.var("l");
  std::optional<GraphTerm::Id> acc;
  for (std::size_t i = 1; i <= n; ++i) {
    auto f = phi.apply("f" + std::to_string(i), l);
    acc = acc ? phi.plus(*acc, f) : f;
  }
  auto xr = phi.splice(xi, xi.root(), {{"l", l}});
  phi.set_root(acc ? phi.plus(*acc, xr) : xr);

  auto iterate = [&](GraphTerm& g, GraphTerm::Id start, std::size_t times) {
    for (std::size_t k = 0; k < times; ++k) start = g.splice(phi, phi.root(), {{"l", start}});
    return start;
  };
  {
    auto& g = out.space;
    auto top = iterate(g, g.var("l"), out.b + 1);
    g.set_root(g.times(g.number(out.b), top));
  }
  {
    auto& g = out.time;
    auto r = iterate(g, g.var("l"), out.b);
    auto top = iterate(g, r, 1);
    g.set_root(g.times(g.number(out.b), top));
  }
  return out;
}

ComposeBound compose_bound(const GraphTerm& xi, const std::vector<GraphTerm>& g, const Sequent& x) {
  ComposeBound out = compose_bound(xi, g.size(), x);
  std::map<std::string, GraphTerm> bind;
  for (std::size_t i = 0; i < g.size(); ++i) bind.emplace("f" + std::to_string(i + 1), g[i]);
  out.phi = instantiate_placeholders(out.phi, bind);
  out.space = instantiate_placeholders(out.space, bind);
  out.time = instantiate_placeholders(out.time, bind);
  return out;
}

}  // namespace cl12
