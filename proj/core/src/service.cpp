#include "cl12/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace cl12 {

namespace {

Json error_body(const std::string& what) { return {{"error", what}}; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

const Json& require(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) throw BadRequest(std::string("missing field \"") + key + "\"");
  return body.at(key);
}

std::string require_string(const Json& body, const char* key) {
  const Json& v = require(body, key);
  if (!v.is_string()) throw BadRequest(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

Sequent parse_request_sequent(const std::string& text) {
  try {
    return parse_sequent_or_formula(text);
  } catch (const ParseError& ex) {
    throw BadRequest(std::string(ex.what()) + " at offset " + std::to_string(ex.offset()));
  }
}

}  // namespace

// ---------------------------------------------------------------- sessions

Session::Session(std::string id, const Json& request) : id_(std::move(id)), request_(request) {
  sequent_ = parse_request_sequent(require_string(request, "sequent"));
  if (request.value("humanSide", std::string("env")) != "env") throw BadRequest("only humanSide \"env\" is supported");
  interp_ = request.contains("interpretation") ? interpretation_from_json(request.at("interpretation"))
                                               : Interpretation::ideal();
  if (request.contains("proof")) {
    proof_ = proof_from_json(request.at("proof"));
  } else {
    auto found = search_proof(sequent_);
    if (!found.proof) throw BadRequest("no proof given and none found for " + sequent_.str());
    proof_ = *found.proof;
  }
  if (!(proof_.conclusion() == sequent_)) throw BadRequest("the proof does not conclude " + sequent_.str());
  prototype_ = std::shared_ptr<const Agent>(extract_strategy(proof_));
  machine_ = prototype_->clone();
  position_ = SequentPosition::initial(sequent_);
  machine_turn({});
  settle_finished();
  checkpoint();
}

void Session::machine_turn(const std::vector<std::string>& delivered) {
  auto out = machine_->respond(delivered);
  for (int round = 0; round < 32 && !finished_; ++round) {
    for (const auto& m : out) {
      auto r = apply_move(position_, {Player::Top, m});
      run_.push_back({Player::Top, m});
      replies_.push_back(m);
      if (auto* bad = std::get_if<Illegal>(&r)) {
        finished_ = true;
        illegal_by_ = Player::Top;
        illegal_reason_ = bad->reason;
        return;
      }
      position_ = std::get<PositionStep>(r).next;
    }
    if (out.empty()) return;
    out = machine_->respond({});
  }
}

void Session::settle_finished() {
  if (!finished_ && legal_move_schemas(position_, Player::Bot).empty()) finished_ = true;
}

void Session::checkpoint() {
  checkpoints_.push_back(
      {std::shared_ptr<const Agent>(machine_->clone()), position_, run_.size(), finished_, illegal_by_, replies_});
}

void Session::submit(const std::vector<std::string>& moves) {
  batches_.push_back(moves);
  replies_.clear();
  std::vector<std::string> applied;
  for (const auto& m : moves) {
    auto r = apply_move(position_, {Player::Bot, m});
    run_.push_back({Player::Bot, m});
    if (auto* bad = std::get_if<Illegal>(&r)) {
      finished_ = true;
      illegal_by_ = Player::Bot;
      illegal_reason_ = bad->reason;
      checkpoint();
      return;
    }
    position_ = std::get<PositionStep>(r).next;
    applied.push_back(m);
  }
  machine_turn(applied);
  settle_finished();
  checkpoint();
}

void Session::undo(std::size_t tick) {
  if (tick >= checkpoints_.size()) throw BadRequest("toTick is beyond the current tick");
  const Checkpoint& cp = checkpoints_[tick];
  machine_ = cp.machine->clone();
  position_ = cp.position;
  run_.resize(cp.run_length);
  finished_ = cp.finished;
  illegal_by_ = cp.illegal_by;
  replies_ = cp.replies;
  if (!illegal_by_) illegal_reason_.clear();
  batches_.resize(tick);
  checkpoints_.resize(tick + 1);
}

Json Session::state() const {
  Json legal = Json::array();
  if (!finished_)
    for (const auto& s : legal_move_schemas(position_, Player::Bot)) legal.push_back(schema_to_json(s));
  Outcome current = illegal_by_ ? (*illegal_by_ == Player::Top ? Outcome::BotWins : Outcome::TopWins)
                                : adjudicate(position_, interp_);
  Json j{{"id", id_},
         {"tick", batches_.size()},
         {"status", finished_ ? "Finished" : "AwaitingEnv"},
         {"sequent", sequent_.str()},
         {"position", position_to_json(position_)},
         {"legalMoves", legal},
         {"machineMoves", replies_},
         {"run", run_to_json(run_)},
         {"runText", run_to_string(run_)},
         {"currentOutcome", outcome_name(current)},
         {"machineDigest", machine_->state_digest()}};
  if (finished_) j["verdict"] = outcome_name(current);
  if (illegal_by_) {
    j["illegalBy"] = player_symbol(*illegal_by_);
    j["illegalReason"] = illegal_reason_;
  }
  if (auto err = machine_->internal_error()) j["machineError"] = *err;
  return j;
}

Json Session::persisted() const { return {{"id", id_}, {"request", request_}, {"batches", batches_}}; }

Session Session::restore(const Json& p) {
  Session s(p.at("id").get<std::string>(), p.at("request"));
  for (const auto& b : p.value("batches", Json::array())) s.submit(b.get<std::vector<std::string>>());
  return s;
}

// ---------------------------------------------------------------- dispatcher

Service::Service(std::optional<std::filesystem::path> persist_dir) : dir_(std::move(persist_dir)) {
  if (!dir_) return;
  std::filesystem::create_directories(*dir_);
  for (const auto& f : std::filesystem::directory_iterator(*dir_)) {
    if (f.path().extension() != ".json") continue;
    auto s = std::make_unique<Session>(Session::restore(read_json_file(f.path())));
    auto e = std::make_shared<Entry>();
    std::string id = s->id();
    e->session = std::move(s);
    sessions_.emplace(id, std::move(e));
  }
  counter_ = sessions_.size();
}

std::string Service::next_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream os;
  os << "s" << ++counter_ << "-" << std::hex << (rng() & 0xffffffULL);
  return os.str();
}

void Service::persist(const Session& s) {
  if (!dir_) return;
  std::ofstream out(*dir_ / (s.id() + ".json"));
  out << s.persisted().dump(2);
}

ServiceResponse Service::handle(const std::string& method, const std::string& path, const std::string& body_text) {
  try {
    Json body;
    if (!body_text.empty()) {
      try {
        body = Json::parse(body_text);
      } catch (const Json::parse_error& ex) {
        return {400, error_body(std::string("malformed JSON: ") + ex.what())};
      }
    }
    auto parts = split_path(path);
    if (method == "GET" && parts == std::vector<std::string>{"schema"}) return {200, api_schema()};
    if (method == "POST" && parts == std::vector<std::string>{"parse"}) return parse(body);
    if (method == "POST" && parts == std::vector<std::string>{"proof", "check"}) return check(body);
    if (method == "POST" && parts == std::vector<std::string>{"proof", "search"}) return search(body);
    if (parts.size() == 1 && parts[0] == "sessions") {
      if (method == "POST") return create_session(body);
      return {405, error_body("method not allowed")};
    }
    if (parts.size() == 2 && parts[0] == "sessions") return session_request(parts[1], "", method, body);
    if (parts.size() == 3 && parts[0] == "sessions") return session_request(parts[1], parts[2], method, body);
    return {404, error_body("no such endpoint: " + method + " " + path)};
  } catch (const BadRequest& ex) {
    return {400, error_body(ex.what())};
  } catch (const JsonFormatError& ex) {
    return {400, error_body(ex.what())};
  } catch (const ParseError& ex) {
    return {400, {{"error", ex.what()}, {"offset", ex.offset()}}};
  } catch (const InvalidProof& ex) {
    return {400, error_body(std::string("invalid proof: ") + ex.what())};
  } catch (const Json::exception& ex) {
    return {400, error_body(ex.what())};
  } catch (const std::exception& ex) {
    return {500, error_body(ex.what())};
  }
}

ServiceResponse Service::parse(const Json& body) {
  std::string text = require_string(body, "text");
  try {
    if (text.find("||-") != std::string::npos) {
      Sequent s = parse_sequent(text);
      auto fv = free_vars(s);
      return {200, {{"kind", "sequent"}, {"ast", sequent_to_json(s)}, {"freeVars", fv}, {"text", s.str()}}};
    }
    Formula f = parse_formula(text);
    auto fv = free_vars(f);
    return {200, {{"kind", "formula"}, {"ast", formula_to_json(f)}, {"freeVars", fv}, {"text", f.str()}}};
  } catch (const ParseError& ex) {
    return {400, {{"error", ex.what()}, {"offset", ex.offset()}}};
  }
}

ServiceResponse Service::check(const Json& body) {
  Proof p = proof_from_json(require(body, "proof"));
  ClassicalBudget b = body.contains("budget") ? classical_budget_from_json(body.at("budget")) : ClassicalBudget{};
  auto report = check_proof(p, b);
  return {200, check_report_to_json(report, p)};
}

ServiceResponse Service::search(const Json& body) {
  Sequent s = parse_request_sequent(require_string(body, "sequent"));
  SearchBudget b = body.contains("budget") ? search_budget_from_json(body.at("budget")) : SearchBudget{};
  auto r = search_proof(s, b);
  Json j{{"sequent", s.str()}, {"nodes", r.nodes}, {"exhaustive", r.exhaustive}, {"notFound", !r.proof}};
  if (r.proof) j["proof"] = proof_to_json(*r.proof);
  return {200, j};
}

ServiceResponse Service::create_session(const Json& body) {
  std::string id;
  {
    std::unique_lock lock(map_lock_);
    id = next_id();
  }
  auto e = std::make_shared<Entry>();
  e->session = std::make_unique<Session>(id, body);
  Json state = e->session->state();
  persist(*e->session);
  {
    std::unique_lock lock(map_lock_);
    sessions_.emplace(id, std::move(e));
  }
  return {201, {{"id", id}, {"state", state}}};
}

ServiceResponse Service::session_request(const std::string& id, const std::string& action, const std::string& method,
                                         const Json& body) {
  std::shared_ptr<Entry> e;
  {
    std::shared_lock lock(map_lock_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return {404, error_body("no session " + id)};
    e = it->second;
  }
  std::lock_guard guard(e->lock);
  Session& s = *e->session;
  if (action.empty()) {
    if (method != "GET") return {405, error_body("method not allowed")};
    return {200, s.state()};
  }
  if (method != "POST") return {405, error_body("method not allowed")};
  if (action == "moves") {
    const Json& moves = require(body, "moves");
    if (!moves.is_array()) throw BadRequest("\"moves\" must be a list of strings");
    std::vector<std::string> batch;
    for (const auto& m : moves) {
      if (!m.is_string()) throw BadRequest("\"moves\" must be a list of strings");
      batch.push_back(m.get<std::string>());
    }
    if (s.finished()) return {409, error_body("the session is finished")};
    s.submit(batch);
    persist(s);
    return {200, s.state()};
  }
  if (action == "undo") {
    const Json& t = require(body, "toTick");
    if (!t.is_number_unsigned() && !(t.is_number_integer() && t.get<long long>() >= 0))
      throw BadRequest("\"toTick\" must be a nonnegative integer");
    s.undo(t.get<std::size_t>());
    persist(s);
    return {200, s.state()};
  }
  return {404, error_body("no such session action: " + action)};
}

Json api_schema() {
  auto obj = [](Json props, std::vector<std::string> required) {
    return Json{{"type", "object"}, {"properties", std::move(props)}, {"required", std::move(required)}};
  };
  Json str{{"type", "string"}};
  Json proof{{"type", "object"}, {"properties", {{"steps", {{"type", "array"}}}}}, {"required", {"steps"}}};
  Json budget{{"type", "object"}};
  return {
      {"POST /parse", obj({{"text", str}}, {"text"})},
      {"POST /proof/check", obj({{"proof", proof}, {"budget", budget}}, {"proof"})},
      {"POST /proof/search", obj({{"sequent", str}, {"budget", budget}}, {"sequent"})},
      {"POST /sessions",
       obj({{"sequent", str}, {"proof", proof}, {"interpretation", {{"type", "object"}}},
            {"humanSide", {{"enum", {"env"}}}}},
           {"sequent"})},
      {"GET /sessions/{id}", Json::object()},
      {"POST /sessions/{id}/moves", obj({{"moves", {{"type", "array"}, {"items", str}}}}, {"moves"})},
      {"POST /sessions/{id}/undo", obj({{"toTick", {{"type", "integer"}, {"minimum", 0}}}}, {"toTick"})},
      {"GET /schema", Json::object()},
  };
}

}  // namespace cl12
