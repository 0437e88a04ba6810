#pragma once

#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>

#include "cl12/arena.hpp"
#include "cl12/calculus.hpp"
#include "cl12/classical.hpp"
#include "cl12/games.hpp"
#include "cl12/graph_term.hpp"
#include "cl12/strategy.hpp"

namespace cl12 {

using Json = nlohmann::json;

class JsonFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json term_to_json(const Term& t);
Json formula_to_json(const Formula& f);
Json sequent_to_json(const Sequent& s);

// Proof files: {"steps": [{"sequent": text, "rule": name, "premises": [indices], ...}]}
// with optional "slot", "choice", "witness", "occ", "slotB", "inserted" per step.
Json proof_to_json(const Proof& p);
Proof proof_from_json(const Json& j);

Json check_report_to_json(const CheckReport& r, const Proof& p);

SearchBudget search_budget_from_json(const Json& j);
ClassicalBudget classical_budget_from_json(const Json& j);

// {"domainSize": n, "naming": {numeral: element}, "functions": {f: [[args..., value], ...]},
//  "predicates": {p: [[args..., 0|1], ...]}}; absent rows are 0. Or {"universe": "ideal"}.
Json model_to_json(const FiniteModel& m);
FiniteModel model_from_json(const Json& j);
Interpretation interpretation_from_json(const Json& j);

Json labmove_to_json(const LabMove& m);
Json run_to_json(const Run& r);
Run run_from_json(const Json& j);

Json schema_to_json(const MoveSchema& s);
Json position_to_json(const SequentPosition& p);
Json play_result_to_json(const PlayResult& r);
Json trace_entry_to_json(const TraceEntry& t);

Json graph_term_to_json(const GraphTerm& g);
GraphTerm graph_term_from_json(const Json& j);

// Solution agent for `||- e`: {"kind": "silent"}, {"kind": "greedy", "sabotage": bool},
// or {"kind": "proof", "proof": {...}} / {"kind": "proof", "file": path} (relative to `base`).
std::unique_ptr<Agent> solution_from_json(const Json& j, const Formula& e, std::shared_ptr<const Interpretation> i,
                                          const std::filesystem::path& base = {});

Json read_json_file(const std::filesystem::path& p);
std::string read_text_file(const std::filesystem::path& p);

}  // namespace cl12
