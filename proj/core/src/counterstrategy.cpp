// Environment strategy against unprovable sequents. It keeps a sequent Y, an abstract
// view of the current position, and an injective valuation e with e[Y] the real game.
// While Y is stable it moves to an unprovable Wait premise; otherwise it waits and
// follows the machine's moves.

#include <map>

#include "cl12/arena.hpp"

namespace cl12 {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.compare(0, prefix.size(), prefix) == 0; }

struct Oracle {
  SearchBudget budget;
  std::size_t domain_bound = 3;
  std::map<std::string, bool> provable;
  std::map<std::string, ClassicalVerdict::Kind> stable;

  bool is_provable(const Sequent& z) {
    std::string key = canonical_key(z);
    if (auto it = provable.find(key); it != provable.end()) return it->second;
    bool p = search_proof(z, budget).proof.has_value();
    provable.emplace(key, p);
    return p;
  }

  ClassicalVerdict::Kind stability(const Sequent& y) {
    std::string key = elementarize(y).str();
    if (auto it = stable.find(key); it != stable.end()) return it->second;
    auto v = check_stability(y, budget.stability).kind;
    if (v == ClassicalVerdict::Kind::Unknown && find_countermodel(elementarize(y), domain_bound))
      v = ClassicalVerdict::Kind::Countermodel;
    stable.emplace(key, v);
    return v;
  }
};

class Counterstrategy : public Agent {
 public:
  Counterstrategy(const Sequent& x, std::shared_ptr<Oracle> oracle)
      : oracle_(std::move(oracle)), y_(x), real_(SequentPosition::initial(x)) {
    for (std::size_t j = 0; j < x.antecedent.size(); ++j) slots_.push_back({static_cast<int>(j), ""});
  }

  std::vector<std::string> respond(const std::vector<std::string>& delivered) override {
    std::vector<std::string> out;
    if (error_) return out;
    try {
      if (!started_) {
        started_ = true;
        for (const auto& v : free_vars(y_)) {
          std::string c = fresh_constant();
          e_[v] = c;
          emit(c, out);
        }
      }
      for (const auto& m : delivered) absorb(m);
      stabilize(out);
    } catch (const std::exception& ex) {
      error_ = ex.what();
    }
    return out;
  }

  std::unique_ptr<Agent> clone() const override { return std::make_unique<Counterstrategy>(*this); }

  std::string state_digest() const override {
    std::string d = "Y=" + y_.str() + ";e=";
    for (const auto& [v, c] : e_) d += v + ":" + c + ",";
    d += ";slots=";
    for (const auto& s : slots_) d += std::to_string(s.real) + "/" + s.address + ",";
    if (waiting_) d += ";waiting";
    if (error_) d += ";error";
    return d;
  }

  std::optional<std::string> internal_error() const override { return error_; }
  bool finished() const override { return waiting_ || error_.has_value(); }

 private:
  void emit(const std::string& m, std::vector<std::string>& out) {
    auto r = apply_move(real_, {Player::Bot, m});
    if (auto* bad = std::get_if<Illegal>(&r)) throw AgentStuck("move " + m + " would be illegal: " + bad->reason);
    real_ = std::get<PositionStep>(r).next;
    out.push_back(m);
  }

  // Smallest constant absent from e[Y] and from the range of e.
  std::string fresh_constant() const {
    auto used = constants_of(y_);
    for (const auto& [v, c] : e_) used.insert(c);
    for (Element k = 0;; ++k) {
      std::string c = to_numeral(k);
      if (!used.count(c)) return c;
    }
  }

  // The machine resolved a choice in `f` at `path` with `chosen`; the sequent keeps the
  // variable e names by `chosen` where there is one.
  Formula follow(const Formula& f, const FormulaStep& step) {
    const ChoiceEffect& eff = step.effect;
    if (!is_choice_quantifier(eff.op)) return step.next;
    const Formula& sub = subformula_at(f, eff.path);
    auto fv = free_vars(y_);
    for (const auto& [v, c] : e_) {
      if (c != eff.chosen || !fv.count(v)) continue;
      try {
        return replace_at(f, eff.path, substitute(sub.body(), sub.name(), Term::variable(v)));
      } catch (const CaptureError&) {
        break;
      }
    }
    return replace_at(f, eff.path, substitute(sub.body(), sub.name(), Term::constant(eff.chosen)));
  }

  void absorb(const std::string& m) {
    auto r = apply_move(real_, {Player::Top, m});
    if (std::holds_alternative<Illegal>(r)) throw AgentStuck("delivered move " + m + " is illegal");
    real_ = std::get<PositionStep>(r).next;
    waiting_ = false;
    if (m.rfind("1.", 0) == 0) {
      auto s = apply_formula_move(y_.succedent, Role::Positive, Player::Top, std::string_view(m).substr(2));
      if (std::holds_alternative<Illegal>(s)) throw AgentStuck("machine move " + m + " does not fit the sequent");
      y_.succedent = follow(y_.succedent, std::get<FormulaStep>(s));
      return;
    }
    std::size_t dot = m.find('.', 2);
    int real = std::stoi(m.substr(2, dot - 2));
    std::size_t sep = m.find_first_of(".:", dot + 1);
    std::string u = m.substr(dot + 1, sep - dot - 1);
    if (m[sep] == ':') {
      for (std::size_t j = 0; j < slots_.size(); ++j)
        if (slots_[j].real == real && slots_[j].address == u) {
          y_ = replicate_premise(y_, static_cast<int>(j));
          SlotRef copy{real, u + "1"};
          slots_[j].address += "0";
          slots_.push_back(copy);
          return;
        }
      throw AgentStuck("replication of an unknown leaf");
    }
    std::string beta = m.substr(sep + 1);
    for (std::size_t j = 0; j < slots_.size(); ++j) {
      if (slots_[j].real != real || !starts_with(slots_[j].address, u)) continue;
      auto s = apply_formula_move(y_.antecedent[j], Role::Negative, Player::Top, beta);
      if (std::holds_alternative<Illegal>(s)) throw AgentStuck("machine move " + m + " does not fit the sequent");
      y_.antecedent[j] = follow(y_.antecedent[j], std::get<FormulaStep>(s));
    }
  }

  void stabilize(std::vector<std::string>& out) {
    for (int guard = 0; guard < 256; ++guard) {
      auto stab = oracle_->stability(y_);
      if (stab == ClassicalVerdict::Kind::Unknown) throw AgentStuck("stability of " + y_.str() + " is undecided");
      if (stab == ClassicalVerdict::Kind::Countermodel) {
        waiting_ = true;
        return;
      }
      const WaitObligation* best = nullptr;
      auto obs = wait_obligations(y_);
      for (const auto& ob : obs) {
        if (best && !(ob.premise.str() < best->premise.str())) continue;
        if (!oracle_->is_provable(ob.premise)) best = &ob;
      }
      if (!best) throw AgentStuck("every Wait premise of " + y_.str() + " was found provable");
      const WaitObligation& ob = *best;
      bool quantifier = ob.kind == WaitObligation::Kind::SuccUniversal || ob.kind == WaitObligation::Kind::AntExistential;
      std::string chosen = quantifier ? fresh_constant() : std::to_string(ob.branch);
      if (ob.occ.slot < 0) {
        emit("1." + formula_move_text(y_.succedent, ob.occ.path, chosen), out);
      } else {
        auto j = static_cast<std::size_t>(ob.occ.slot);
        emit(antecedent_move_text(slots_[j], formula_move_text(y_.antecedent[j], ob.occ.path, chosen)), out);
      }
      if (quantifier) e_[ob.fresh] = chosen;
      y_ = ob.premise;
    }
    throw AgentStuck("counterstrategy did not settle");
  }

  std::shared_ptr<Oracle> oracle_;
  Sequent y_;
  VcMapping e_;
  std::vector<SlotRef> slots_;
  SequentPosition real_;
  bool started_ = false;
  bool waiting_ = false;
  std::optional<std::string> error_;
};

}  // namespace

std::unique_ptr<Agent> counterstrategy(const Sequent& x, const SearchBudget& prover_budget, std::size_t domain_bound) {
  auto oracle = std::make_shared<Oracle>();
  oracle->budget = prover_budget;
  oracle->domain_bound = domain_bound;
  if (oracle->is_provable(x)) throw ProvableSequent("a proof of " + x.str() + " exists");
  return std::make_unique<Counterstrategy>(x, std::move(oracle));
}

}  // namespace cl12
