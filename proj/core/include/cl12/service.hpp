#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cl12/json_io.hpp"

namespace cl12 {

struct ServiceResponse {
  int status = 200;
  Json body;
};

// A human environment against a proof-derived machine. The state is a function of
// the environment's move batches: replaying them from the start reproduces it.
class Session {
 public:
  Session(std::string id, const Json& request);

  const std::string& id() const { return id_; }
  // Applies one environment batch, then lets the machine answer until it is silent.
  void submit(const std::vector<std::string>& moves);
  // Rewinds to the state after `tick` batches.
  void undo(std::size_t tick);
  bool finished() const { return finished_; }
  std::size_t tick() const { return batches_.size(); }

  Json state() const;
  Json persisted() const;  // creation request plus the batches
  static Session restore(const Json& persisted);

 private:
  struct Checkpoint {
    std::shared_ptr<const Agent> machine;
    SequentPosition position;
    std::size_t run_length;
    bool finished;
    std::optional<Player> illegal_by;
    std::vector<std::string> replies;
  };

  void machine_turn(const std::vector<std::string>& delivered);
  void checkpoint();
  void settle_finished();

  std::string id_;
  Json request_;
  Sequent sequent_;
  Interpretation interp_;
  Proof proof_;
  std::shared_ptr<const Agent> prototype_;

  std::unique_ptr<Agent> machine_;
  SequentPosition position_;
  Run run_;
  bool finished_ = false;
  std::optional<Player> illegal_by_;
  std::string illegal_reason_;
  std::vector<std::string> replies_;  // machine moves since the latest batch
  std::vector<std::vector<std::string>> batches_;
  std::vector<Checkpoint> checkpoints_;
};

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request dispatcher for the JSON API; transport-independent and thread-safe.
class Service {
 public:
  explicit Service(std::optional<std::filesystem::path> persist_dir = std::nullopt);

  ServiceResponse handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  struct Entry {
    std::mutex lock;
    std::unique_ptr<Session> session;
  };

  ServiceResponse parse(const Json& body);
  ServiceResponse check(const Json& body);
  ServiceResponse search(const Json& body);
  ServiceResponse create_session(const Json& body);
  ServiceResponse session_request(const std::string& id, const std::string& action, const std::string& method,
                                  const Json& body);
  void persist(const Session& s);
  std::string next_id();

  std::optional<std::filesystem::path> dir_;
  std::shared_mutex map_lock_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t counter_ = 0;
};

// JSON schemas of the request bodies, published under GET /schema.
Json api_schema();

// Called once the socket is bound, with the port (useful when 0 asked for any free
// port) and a function that makes serve_http return.
using HttpStarted = std::function<void(int port, std::function<void()> stop)>;

// Serves `service` over HTTP until stopped.
int serve_http(Service& service, const std::string& host, int port, const HttpStarted& on_started = {});

}  // namespace cl12
