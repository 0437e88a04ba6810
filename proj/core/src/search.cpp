// Bottom-up proof search: iterative deepening over the depth of rule applications,
// Wait tried first, then the Choose rules, then Replicate.

#include <unordered_map>
#include <unordered_set>

#include "cl12/calculus.hpp"

namespace cl12 {

namespace {

class Searcher {
 public:
  explicit Searcher(const SearchBudget& b) : budget_(b) {}

  struct Result {
    int node = -1;
    bool cut = false;
  };

  Result prove(const Sequent& x, int depth, int reps) {
    std::string exact = x.str();
    if (auto it = solved_.find(exact); it != solved_.end()) return {it->second, false};
    std::string key = canonical_key(x) + "#" + std::to_string(reps);
    if (exhausted_.count(key)) return {-1, false};
    if (auto it = failed_at_.find(key); it != failed_at_.end() && it->second >= depth) return {-1, true};
    if (depth <= 0) {
      ++frontier_;
      return {-1, true};
    }
    if (++expanded_ > budget_.max_nodes) return {-1, true};

    bool cut = false;
    auto stab = stability(x);
    if (stab == ClassicalVerdict::Kind::Unknown) cut = true;
    if (stab == ClassicalVerdict::Kind::Valid) {
      std::vector<int> kids;
      bool ok = true;
      for (const auto& ob : wait_obligations(x)) {
        Result r = prove(ob.premise, depth - 1, reps);
        cut = cut || r.cut;
        if (r.node < 0) {
          ok = false;
          break;
        }
        kids.push_back(r.node);
      }
      if (ok) {
        RuleApp app;
        app.rule = Rule::Wait;
        return {add(x, app, std::move(kids)), false};
      }
    }
    for (auto& opt : choose_options(x, default_witnesses(x))) {
      Result r = prove(opt.premise, depth - 1, reps);
      cut = cut || r.cut;
      if (r.node >= 0) return {add(x, opt.app, {r.node}), false};
    }
    for (std::size_t j = 0; j < x.antecedent.size(); ++j) {
      if (is_elementary(x.antecedent[j]) || reps <= 0) continue;
      Result r = prove(replicate_premise(x, static_cast<int>(j)), depth - 1, reps - 1);
      cut = cut || r.cut;
      if (r.node >= 0) {
        RuleApp app;
        app.rule = Rule::Replicate;
        app.slot = static_cast<int>(j);
        return {add(x, app, {r.node}), false};
      }
    }
    if (cut) failed_at_[key] = std::max(failed_at_[key], depth);
    else exhausted_.insert(key);
    return {-1, cut};
  }

  Proof linearize(int root) const {
    Proof p;
    std::unordered_map<int, std::size_t> index;
    auto emit = [&](auto&& self, int id) -> std::size_t {
      if (auto it = index.find(id); it != index.end()) return it->second;
      std::vector<std::size_t> prem;
      for (int k : nodes_[static_cast<std::size_t>(id)].kids) prem.push_back(self(self, k));
      const auto& n = nodes_[static_cast<std::size_t>(id)];
      p.steps.push_back({n.sequent, n.app, std::move(prem)});
      index.emplace(id, p.steps.size() - 1);
      return p.steps.size() - 1;
    };
    emit(emit, root);
    return p;
  }

  std::size_t expanded() const { return expanded_; }
  std::size_t frontier() const { return frontier_; }

 private:
  struct Node {
    Sequent sequent;
    RuleApp app;
    std::vector<int> kids;
  };

  int add(const Sequent& x, RuleApp app, std::vector<int> kids) {
    nodes_.push_back({x, std::move(app), std::move(kids)});
    int id = static_cast<int>(nodes_.size() - 1);
    solved_.emplace(x.str(), id);
    return id;
  }

  ClassicalVerdict::Kind stability(const Sequent& x) {
    std::string key = elementarize(x).str();
    if (auto it = stab_.find(key); it != stab_.end()) return it->second;
    auto v = check_stability(x, budget_.stability).kind;
    stab_.emplace(std::move(key), v);
    return v;
  }

  const SearchBudget& budget_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> solved_;
  std::unordered_set<std::string> exhausted_;
  std::unordered_map<std::string, int> failed_at_;
  std::unordered_map<std::string, ClassicalVerdict::Kind> stab_;
  std::size_t expanded_ = 0;
  std::size_t frontier_ = 0;
};

}  // namespace

SearchResult search_proof(const Sequent& s, const SearchBudget& budget) {
  Searcher searcher(budget);
  SearchResult out;
  for (int depth = 1; depth <= budget.max_steps; ++depth) {
    auto r = searcher.prove(s, depth, budget.max_replications);
    if (r.node >= 0) {
      out.proof = searcher.linearize(r.node);
      break;
    }
    if (!r.cut) {
      out.exhaustive = true;
      break;
    }
    if (searcher.expanded() > budget.max_nodes) break;
  }
  out.nodes = searcher.expanded();
  out.frontier = searcher.frontier();
  return out;
}

}  // namespace cl12
