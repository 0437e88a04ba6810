#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cl12/arena.hpp"
#include "cl12/json_io.hpp"
#include "cl12/service.hpp"

using namespace cl12;
namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 negative answer (invalid, not found, lost), 2 usage or input error.
constexpr int kError = 2;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

// A sequent given inline or as the name of a file holding it.
Sequent load_sequent(const std::string& arg) {
  std::error_code ec;
  if (fs::is_regular_file(arg, ec)) return parse_sequent_or_formula(trim(read_text_file(arg)));
  return parse_sequent_or_formula(arg);
}

std::shared_ptr<const Interpretation> load_interp(const std::string& path) {
  if (path.empty()) return std::make_shared<Interpretation>(Interpretation::ideal());
  return std::make_shared<Interpretation>(interpretation_from_json(read_json_file(path)));
}

SearchBudget budget_of(int steps, int reps, std::size_t nodes) {
  SearchBudget b;
  b.max_steps = steps;
  b.max_replications = reps;
  b.max_nodes = nodes;
  return b;
}

// The proof from a file, or a searched one for the sequent.
Proof load_or_search(const std::string& proof_path, const Sequent& x, const SearchBudget& b) {
  if (!proof_path.empty()) return proof_from_json(read_json_file(proof_path));
  auto r = search_proof(x, b);
  if (!r.proof) throw CliError("no proof found for " + x.str());
  return *r.proof;
}

std::unique_ptr<Agent> make_env(const std::string& spec, const Sequent& x, const SearchBudget& b) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "random") return std::make_unique<RandomEnv>(x, arg.empty() ? 0 : std::stoull(arg));
  if (kind == "script") {
    auto j = read_json_file(arg);
    return std::make_unique<ScriptedEnv>(j.get<std::vector<std::vector<std::string>>>());
  }
  if (kind == "counter") return counterstrategy(x, b);
  if (kind == "silent") return make_silent_agent();
  throw CliError("unknown environment '" + spec + "' (random:SEED, script:FILE, counter, silent)");
}

std::unique_ptr<Agent> make_machine(const std::string& kind, const Proof* proof, const Sequent& x) {
  if (kind == "proof") return extract_strategy(*proof);
  for (auto k : {MachineKind::Silent, MachineKind::FirstLegal, MachineKind::EchoEnvConstant,
                 MachineKind::LatestConstant, MachineKind::PseudoRandom})
    if (kind == machine_kind_name(k)) return make_reference_machine(k, x);
  throw CliError("unknown machine '" + kind + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::unique_ptr<Agent>> load_solutions(const std::vector<std::string>& files, const Proof& p,
                                                   std::shared_ptr<const Interpretation> interp) {
  const auto& ant = p.conclusion().antecedent;
  if (files.size() != ant.size())
    throw CliError("expected " + std::to_string(ant.size()) + " solutions, got " + std::to_string(files.size()));
  std::vector<std::unique_ptr<Agent>> out;
  for (std::size_t i = 0; i < files.size(); ++i)
    out.push_back(solution_from_json(read_json_file(files[i]), ant[i], interp, fs::path(files[i]).parent_path()));
  return out;
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof checking, strategy extraction and game play for the CL12 sequent calculus"};
  app.require_subcommand(1);

  std::string text, proof_path, interp_path, env_spec = "random:0", machine_kind = "proof", solutions_arg,
                                                 compose_arg, xi_text = "l+1", host = "127.0.0.1", persist_dir;
  int max_steps = 12, max_reps = 1, port = 8080;
  std::size_t max_nodes = 200000, max_moves = 64, seeds = 100;
  bool trace = false;

  auto* parse = app.add_subcommand("parse", "Parse a formula or sequent and print its syntax tree");
  parse->add_option("text", text, "formula or sequent text, or a file holding it")->required();

  auto* check = app.add_subcommand("check", "Check a proof file; exit 0 iff Valid");
  check->add_option("proof", proof_path, "proof JSON file")->required()->check(CLI::ExistingFile);

  auto* prove = app.add_subcommand("prove", "Search for a proof; exit 1 when none is found");
  prove->add_option("sequent", text, "sequent text or file")->required();
  prove->add_option("--max-steps", max_steps, "depth bound")->capture_default_str();
  prove->add_option("--max-reps", max_reps, "replications per branch")->capture_default_str();
  prove->add_option("--max-nodes", max_nodes, "search node budget")->capture_default_str();

  auto add_play_options = [&](CLI::App* c) {
    c->add_option("--proof", proof_path, "proof JSON file (searched when absent)")->check(CLI::ExistingFile);
    c->add_option("--interp", interp_path, "interpretation JSON file")->check(CLI::ExistingFile);
    c->add_option("--max-moves", max_moves, "move cap per play")->capture_default_str();
  };

  auto* play_cmd = app.add_subcommand("play", "Play one game and print the run and verdict");
  play_cmd->add_option("sequent", text, "sequent text or file")->required();
  add_play_options(play_cmd);
  play_cmd->add_option("--env", env_spec, "random:SEED | script:FILE | counter | silent")->capture_default_str();
  play_cmd->add_option("--machine", machine_kind,
                       "proof | silent | first-legal | echo-env-constant | latest-constant | pseudo-random")
      ->capture_default_str();
  play_cmd->add_flag("--trace", trace, "include the per-tick trace");

  auto* simulate = app.add_subcommand("simulate", "Play many seeded random games; exit 0 iff all are won");
  simulate->add_option("--sequent", text, "sequent text or file")->required();
  add_play_options(simulate);
  simulate->add_option("--seeds", seeds, "number of seeded plays")->capture_default_str();

  auto* compose_cmd = app.add_subcommand("compose", "Compose a proof with antecedent solutions and play it");
  compose_cmd->add_option("--proof", proof_path, "proof JSON file")->required()->check(CLI::ExistingFile);
  compose_cmd->add_option("--solutions", solutions_arg, "comma-separated solution JSON files")->required();
  compose_cmd->add_option("--interp", interp_path, "interpretation JSON file")->check(CLI::ExistingFile);
  compose_cmd->add_option("--env", env_spec, "random:SEED | script:FILE")->capture_default_str();
  compose_cmd->add_option("--seeds", seeds, "with a random env: number of seeded plays")->capture_default_str();
  compose_cmd->add_option("--max-moves", max_moves, "move cap per play")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "Print the move-size bound of a proof's strategy");
  bound->add_option("--proof", proof_path, "proof JSON file")->required()->check(CLI::ExistingFile);
  bound->add_option("--compose", compose_arg, "comma-separated unary bounds g1,...,gn of the solutions");
  bound->add_option("--xi", xi_text, "bound of the composed proof's strategy")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--persist", persist_dir, "directory for session files");

  CLI11_PARSE(app, argc, argv);

  try {
    SearchBudget budget = budget_of(max_steps, max_reps, max_nodes);
    PlayLimits limits;
    limits.max_moves = max_moves;

    if (*parse) {
      Json out;
      std::error_code ec;
      std::string src = fs::is_regular_file(text, ec) ? trim(read_text_file(text)) : text;
      if (src.find("||-") != std::string::npos) {
        out = sequent_to_json(parse_sequent(src));
        out["kind"] = "sequent";
      } else {
        out = formula_to_json(parse_formula(src));
        out["kind"] = "formula";
      }
      print(out);
      return 0;
    }
    if (*check) {
      Proof p = proof_from_json(read_json_file(proof_path));
      auto report = check_proof(p);
      print(check_report_to_json(report, p));
      return report.overall == CheckReport::Overall::Valid ? 0 : 1;
    }
    if (*prove) {
      Sequent x = load_sequent(text);
      auto r = search_proof(x, budget);
      if (!r.proof) {
        print({{"result", "NotFound"}, {"exhaustive", r.exhaustive}, {"nodes", r.nodes}, {"frontier", r.frontier}});
        return 1;
      }
      print({{"result", "Found"}, {"nodes", r.nodes}, {"proof", proof_to_json(*r.proof)}});
      return 0;
    }
    if (*play_cmd) {
      Sequent x = load_sequent(text);
      auto interp = load_interp(interp_path);
      std::optional<Proof> p;
      if (machine_kind == "proof") p = load_or_search(proof_path, x, budget);
      auto machine = make_machine(machine_kind, p ? &*p : nullptr, x);
      auto env = make_env(env_spec, x, budget);
      auto r = play(*machine, *env, x, *interp, limits);
      Json out = play_result_to_json(r);
      if (!trace) out.erase("trace");
      print(out);
      return r.outcome == Outcome::TopWins ? 0 : 1;
    }
    if (*simulate) {
      Sequent x = load_sequent(text);
      auto interp = load_interp(interp_path);
      Proof p = load_or_search(proof_path, x, budget);
      auto prototype = extract_strategy(p);
      std::map<std::string, std::size_t> table;
      std::size_t wins = 0;
      Json losses = Json::array();
      for (std::size_t seed = 0; seed < seeds; ++seed) {
        auto machine = prototype->clone();
        RandomEnv env(x, seed);
        auto r = play(*machine, env, x, *interp, limits);
        ++table[r.verdict()];
        if (r.outcome == Outcome::TopWins) ++wins;
        else if (losses.size() < 5) losses.push_back({{"seed", seed}, {"run", run_to_string(r.run)}});
      }
      print({{"plays", seeds}, {"wins", wins}, {"verdicts", table}, {"losses", losses}});
      return wins == seeds ? 0 : 1;
    }
    if (*compose_cmd) {
      Proof p = proof_from_json(read_json_file(proof_path));
      Sequent target{{}, p.conclusion().succedent};
      auto interp = load_interp(interp_path);
      auto files = split_list(solutions_arg);
      if (env_spec.rfind("random", 0) == 0) {
        std::size_t wins = 0;
        std::map<std::string, std::size_t> table;
        Json losses = Json::array();
        for (std::size_t seed = 0; seed < seeds; ++seed) {
          auto agent = compose(p, load_solutions(files, p, interp));
          RandomEnv env(target, seed);
          auto r = play(*agent, env, target, *interp, limits);
          ++table[r.verdict()];
          if (r.outcome == Outcome::TopWins) ++wins;
          else if (losses.size() < 5) losses.push_back({{"seed", seed}, {"run", run_to_string(r.run)}});
        }
        print({{"plays", seeds}, {"wins", wins}, {"verdicts", table}, {"losses", losses}});
        return wins == seeds ? 0 : 1;
      }
      auto agent = compose(p, load_solutions(files, p, interp));
      auto env = make_env(env_spec, target, budget);
      auto r = play(*agent, *env, target, *interp, limits);
      Json out = play_result_to_json(r);
      out.erase("trace");
      print(out);
      return r.outcome == Outcome::TopWins ? 0 : 1;
    }
    if (*bound) {
      Proof p = proof_from_json(read_json_file(proof_path));
      GraphTerm tau = bound_from_proof(p);
      Json out = {{"bound", graph_term_to_json(tau)}, {"stepConstant", bound_step_constant(p)}};
      if (!compose_arg.empty() || bound->count("--xi")) {
        std::vector<GraphTerm> gs;
        for (const auto& g : split_list(compose_arg)) gs.push_back(parse_unary_bound(g));
        if (gs.size() != p.conclusion().antecedent.size())
          throw CliError("--compose needs one bound per antecedent formula");
        auto cb = compose_bound(parse_unary_bound(xi_text), gs, p.conclusion());
        out["compose"] = {{"b", cb.b},
                          {"phi", graph_term_to_json(cb.phi)},
                          {"space", graph_term_to_json(cb.space)},
                          {"time", graph_term_to_json(cb.time)}};
      }
      print(out);
      return 0;
    }
    if (*serve) {
      std::optional<fs::path> dir;
      if (!persist_dir.empty()) dir = persist_dir;
      Service service(dir);
      std::cerr << "listening on " << host << ":" << port << "\n";
      return serve_http(service, host, port);
    }
  } catch (const ParseError& e) {
    std::cerr << Json{{"error", "parse"}, {"message", e.what()}, {"offset", e.offset()}}.dump() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "failure"}, {"message", e.what()}}.dump() << "\n";
    return kError;
  }
  return kError;
}
