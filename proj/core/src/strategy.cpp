#include "cl12/strategy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace cl12 {

std::string formula_move_text(const Formula& f, const Path& path, const std::string& chosen) {
  std::string out;
  const Formula* n = &f;
  for (std::size_t i : path) {
    if (is_parallel(n->op())) {
      out += std::to_string(i) + ".";
      n = &n->child(i);
    } else if (is_blind(n->op())) {
      n = &n->body();
    } else {
      throw AgentStuck("path runs through a choice operator");
    }
  }
  if (!is_choice(n->op())) throw AgentStuck("path does not end at a choice operator");
  return out + chosen;
}

std::string antecedent_move_text(const SlotRef& slot, const std::string& formula_move) {
  return "0." + std::to_string(slot.real) + "." + slot.address + "." + formula_move;
}

std::string replication_move_text(const SlotRef& slot) {
  return "0." + std::to_string(slot.real) + "." + slot.address + ":";
}

namespace {

struct Compiled {
  Proof proof;
  std::vector<RuleApp> apps;  // occurrences and witnesses filled in by the checker
};

// An environment move not yet accounted for by a Wait step. Antecedent moves may
// reach several leaves; `consumed` lists the leaf addresses that already took it.
struct PendingMove {
  bool succedent = true;
  int real = 0;
  std::string prefix;
  std::string beta;
  std::vector<std::string> consumed;
};

bool starts_with(const std::string& s, const std::string& prefix) { return s.compare(0, prefix.size(), prefix) == 0; }

class ProofAgent : public Agent {
 public:
  explicit ProofAgent(std::shared_ptr<const Compiled> c)
      : c_(std::move(c)), cur_(c_->proof.steps.size() - 1), real_(SequentPosition::initial(c_->proof.conclusion())) {
    const Sequent& x = c_->proof.conclusion();
    auto fv = free_vars(x);
    closure_.assign(fv.begin(), fv.end());
    for (std::size_t j = 0; j < x.antecedent.size(); ++j) slots_.push_back({static_cast<int>(j), ""});
  }

  std::vector<std::string> respond(const std::vector<std::string>& delivered) override {
    std::vector<std::string> out;
    if (error_) return out;
    for (const auto& m : delivered) {
      auto r = apply_move(real_, {Player::Bot, m});
      if (auto* bad = std::get_if<Illegal>(&r)) {
        error_ = "delivered move " + m + " is illegal: " + bad->reason;
        return out;
      }
      real_ = std::get<PositionStep>(r).next;
      if (!closure_.empty()) {
        e_[closure_.front()] = m;
        closure_.erase(closure_.begin());
        continue;
      }
      queue(m);
    }
    if (!closure_.empty()) return out;
    try {
      advance(out);
    } catch (const AgentStuck& ex) {
      error_ = ex.what();
    }
    return out;
  }

  std::unique_ptr<Agent> clone() const override { return std::make_unique<ProofAgent>(*this); }

  std::string state_digest() const override {
    std::string d = "step=" + std::to_string(cur_) + ";e=";
    for (const auto& [v, c] : e_) d += v + ":" + c + ",";
    d += ";slots=";
    for (const auto& s : slots_) d += std::to_string(s.real) + "/" + s.address + ",";
    d += ";closure=" + std::to_string(closure_.size()) + ";pending=";
    for (const auto& p : pending_) {
      d += p.succedent ? "1." + p.beta : std::to_string(p.real) + "/" + p.prefix + "." + p.beta;
      for (const auto& w : p.consumed) d += "^" + w;
      d += ",";
    }
    if (error_) d += ";error";
    return d;
  }

  std::optional<std::string> internal_error() const override { return error_; }

 private:
  const ProofStep& step() const { return c_->proof.steps[cur_]; }

  void queue(const std::string& m) {
    PendingMove p;
    if (m.rfind("1.", 0) == 0) {
      p.beta = m.substr(2);
      pending_.push_back(std::move(p));
      return;
    }
    std::size_t dot = m.find('.', 2);
    std::size_t sep = m.find_first_of(".:", dot + 1);
    if (dot == std::string::npos || sep == std::string::npos || m[sep] == ':') return;
    p.succedent = false;
    p.real = std::stoi(m.substr(2, dot - 2));
    p.prefix = m.substr(dot + 1, sep - dot - 1);
    p.beta = m.substr(sep + 1);
    pending_.push_back(std::move(p));
  }

  void emit(const std::string& m, std::vector<std::string>& out) {
    auto r = apply_move(real_, {Player::Top, m});
    if (auto* bad = std::get_if<Illegal>(&r)) throw AgentStuck("move " + m + " would be illegal: " + bad->reason);
    real_ = std::get<PositionStep>(r).next;
    out.push_back(m);
  }

  std::string resolve(const Term& t) {
    if (t.is_constant()) return t.name();
    if (!t.is_variable()) throw AgentStuck("witness is not a variable or constant");
    auto it = e_.find(t.name());
    if (it != e_.end()) return it->second;
    e_[t.name()] = "0";
    return "0";
  }

  void advance(std::vector<std::string>& out) {
    while (true) {
      const ProofStep& st = step();
      const RuleApp& a = c_->apps[cur_];
      const Sequent& y = st.sequent;
      switch (a.rule) {
        case Rule::SuccChooseDisjunct:
          emit("1." + formula_move_text(y.succedent, *a.occ, std::to_string(a.choice)), out);
          break;
        case Rule::SuccChooseWitness:
          emit("1." + formula_move_text(y.succedent, *a.occ, resolve(*a.witness)), out);
          break;
        case Rule::AntChooseConjunct: {
          auto s = static_cast<std::size_t>(a.slot);
          emit(antecedent_move_text(slots_[s], formula_move_text(y.antecedent[s], *a.occ, std::to_string(a.choice))),
               out);
          break;
        }
        case Rule::AntChooseInstance: {
          auto s = static_cast<std::size_t>(a.slot);
          emit(antecedent_move_text(slots_[s], formula_move_text(y.antecedent[s], *a.occ, resolve(*a.witness))), out);
          break;
        }
        case Rule::Replicate: {
          auto s = static_cast<std::size_t>(a.slot);
          emit(replication_move_text(slots_[s]), out);
          SlotRef copy{slots_[s].real, slots_[s].address + "1"};
          slots_[s].address += "0";
          slots_.push_back(copy);
          break;
        }
        case Rule::Exchange:
          std::swap(slots_[static_cast<std::size_t>(a.slot)], slots_[static_cast<std::size_t>(a.slot_b)]);
          break;
        case Rule::Weakening: {
          auto ins = a.inserted;
          std::sort(ins.rbegin(), ins.rend());
          for (int j : ins) slots_.erase(slots_.begin() + j);
          break;
        }
        case Rule::Wait:
          if (!consume_one()) return;
          continue;
      }
      cur_ = st.premises.at(0);
    }
  }

  bool covered(const PendingMove& p, const std::string& address) const {
    return std::any_of(p.consumed.begin(), p.consumed.end(), [&](const std::string& c) { return starts_with(address, c); });
  }

  // Moves the agent to the premise that the oldest applicable environment move selects.
  bool consume_one() {
    for (auto it = pending_.begin(); it != pending_.end();) {
      int target = -1;
      if (!it->succedent) {
        target = -2;
        for (std::size_t j = 0; j < slots_.size(); ++j)
          if (slots_[j].real == it->real && starts_with(slots_[j].address, it->prefix) &&
              !covered(*it, slots_[j].address)) {
            target = static_cast<int>(j);
            break;
          }
        if (target == -2) {
          it = pending_.erase(it);
          continue;
        }
      }
      cur_ = classify(target, it->beta);
      if (it->succedent) pending_.erase(it);
      else it->consumed.push_back(slots_[static_cast<std::size_t>(target)].address);
      return true;
    }
    return false;
  }

  std::size_t classify(int target, const std::string& beta) {
    const ProofStep& st = step();
    const Sequent& y = st.sequent;
    const Formula& f = target < 0 ? y.succedent : y.antecedent[static_cast<std::size_t>(target)];
    auto r = apply_formula_move(f, target < 0 ? Role::Positive : Role::Negative, Player::Bot, beta);
    if (auto* bad = std::get_if<Illegal>(&r)) throw AgentStuck("environment move " + beta + " does not fit: " + bad->reason);
    const ChoiceEffect& eff = std::get<FormulaStep>(r).effect;
    auto at = [&](const Sequent& s) -> const Formula& {
      return target < 0 ? s.succedent : s.antecedent[static_cast<std::size_t>(target)];
    };
    auto fv = free_vars(y);
    for (const auto& ob : wait_obligations(y)) {
      if (ob.occ.slot != target || ob.occ.path != eff.path) continue;
      bool connective = ob.kind == WaitObligation::Kind::SuccConjunct || ob.kind == WaitObligation::Kind::AntDisjunct;
      if (connective && std::to_string(ob.branch) != eff.chosen) continue;
      for (std::size_t p : st.premises) {
        const Sequent& z = c_->proof.steps[p].sequent;
        if (connective) {
          if (z == ob.premise) return p;
          continue;
        }
        if (z.antecedent.size() != ob.premise.antecedent.size()) continue;
        bool others = true;
        for (std::size_t j = 0; j < z.antecedent.size() && others; ++j)
          if (static_cast<int>(j) != target && !(z.antecedent[j] == ob.premise.antecedent[j])) others = false;
        if (target >= 0 && !(z.succedent == ob.premise.succedent)) others = false;
        if (!others) continue;
        auto m = match_instance(at(ob.premise), ob.fresh, at(z));
        if (!m.matched) continue;
        if (m.var_occurs) {
          if (!m.term.is_variable() || fv.count(m.term.name())) continue;
          e_[m.term.name()] = eff.chosen;
        }
        return p;
      }
    }
    throw AgentStuck("no premise of the Wait step matches environment move " + beta);
  }

  std::shared_ptr<const Compiled> c_;
  std::size_t cur_;
  VcMapping e_;
  std::vector<SlotRef> slots_;
  std::vector<std::string> closure_;
  std::deque<PendingMove> pending_;
  SequentPosition real_;
  std::optional<std::string> error_;
};

}  // namespace

std::unique_ptr<Agent> extract_strategy(const Proof& p, const ClassicalBudget& budget) {
  if (p.steps.empty()) throw InvalidProof("empty proof");
  auto report = check_proof(p, budget);
  if (report.overall == CheckReport::Overall::Invalid) {
    for (std::size_t i = 0; i < report.steps.size(); ++i)
      if (report.steps[i].kind == StepVerdict::Kind::Fail)
        throw InvalidProof("step " + std::to_string(i) + ": " + report.steps[i].reason);
    throw InvalidProof("proof does not check");
  }
  auto c = std::make_shared<Compiled>();
  c->proof = p;
  for (const auto& v : report.steps) c->apps.push_back(v.resolved);
  return std::make_unique<ProofAgent>(std::move(c));
}

WellBehavednessReport monitor_well_behavedness(const std::vector<Run>& runs, const Proof& proof) {
  WellBehavednessReport rep;
  const Sequent& x = proof.conclusion();
  for (const auto& s : proof.steps)
    if (s.app.rule == Rule::Replicate) ++rep.bound_d;
  auto own = constants_of(x);
  for (std::size_t k = 0; k < runs.size(); ++k) {
    auto pos = SequentPosition::initial(x);
    std::set<std::string> named;
    std::size_t reps = 0;
    for (std::size_t i = 0; i < runs[k].size(); ++i) {
      const LabMove& m = runs[k][i];
      auto r = apply_move(pos, m);
      if (std::holds_alternative<Illegal>(r)) break;
      auto& st = std::get<PositionStep>(r);
      pos = st.next;
      const MoveEffect& eff = st.effect;
      std::string where = "run " + std::to_string(k) + " move " + std::to_string(i) + " (" + m.move + ")";
      if (m.player == Player::Bot) {
        for (const auto& c : eff.choices)
          if (is_choice_quantifier(c.op)) named.insert(c.chosen);
        continue;
      }
      if (eff.kind == MoveEffect::Kind::Replication) ++reps;
      if (eff.kind == MoveEffect::Kind::Antecedent && !eff.focused)
        rep.unfocused_violations.push_back(where + ": unfocused antecedent move");
      for (const auto& c : eff.choices) {
        if (!is_choice_quantifier(c.op)) continue;
        if (c.chosen != "0" && !own.count(c.chosen) && !named.count(c.chosen))
          rep.constant_provenance_violations.push_back(where + ": constant " + c.chosen + " has no provenance");
      }
    }
    rep.replicative_count = std::max(rep.replicative_count, reps);
  }
  return rep;
}

std::size_t bound_step_constant(const Proof& p) {
  return 3 * p.conclusion().str().size() + p.steps.size() + 4;
}

GraphTerm bound_from_proof(const Proof& p) {
  GraphTerm g;
  auto l = g.var("l");
  auto k = g.zero();
  for (std::size_t i = 0, n = bound_step_constant(p); i < n; ++i) k = g.succ(k);
  std::map<std::size_t, GraphTerm::Id> memo;
  auto tau = [&](auto&& self, std::size_t i) -> GraphTerm::Id {
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    const auto& st = p.steps[i];
    GraphTerm::Id out;
    if (st.premises.empty()) {
      out = g.succ(l);
    } else {
      out = self(self, st.premises[0]);
      for (std::size_t j = 1; j < st.premises.size(); ++j) out = g.plus(out, self(self, st.premises[j]));
      out = g.plus(out, k);
    }
    memo.emplace(i, out);
    return out;
  };
  g.set_root(tau(tau, p.steps.size() - 1));
  return g;
}

}  // namespace cl12
