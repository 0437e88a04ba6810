#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <thread>

#include "cl12/service.hpp"
#include "support/data.hpp"

using namespace cl12;

namespace {

Json cube_request() {
  return {{"sequent", testdata::cube_sequent()},
          {"proof", read_json_file(testdata::path("cube.proof.json"))},
          {"interpretation", read_json_file(testdata::path("mod16.json"))},
          {"humanSide", "env"}};
}

ServiceResponse call(Service& s, const std::string& method, const std::string& path, const Json& body = nullptr) {
  return s.handle(method, path, body.is_null() ? std::string() : body.dump());
}

std::string create(Service& s, const Json& request) {
  auto r = call(s, "POST", "/sessions", request);
  REQUIRE(r.status == 201);
  return r.body.at("id").get<std::string>();
}

ServiceResponse submit(Service& s, const std::string& id, std::vector<std::string> moves) {
  return call(s, "POST", "/sessions/" + id + "/moves", Json{{"moves", moves}});
}

std::string cube_run_text() {
  Run r{{Player::Bot, "1.10"},       {Player::Top, "0.1.:"},      {Player::Top, "0.1.0.10"},
        {Player::Top, "0.1.0.10"},   {Player::Bot, "0.1.0.100"}, {Player::Top, "0.1.1.100"},
        {Player::Top, "0.1.1.10"},   {Player::Bot, "0.1.1.1000"}, {Player::Top, "1.1000"}};
  return run_to_string(r);
}

std::filesystem::path temp_dir(const std::string& stem) {
  std::random_device rd;
  auto p = std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(rd()));
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("service: schema and parse") {
  Service s;
  auto schema = call(s, "GET", "/schema");
  CHECK(schema.status == 200);
  CHECK(schema.body.contains("POST /sessions"));

  auto f = call(s, "POST", "/parse", Json{{"text", "p(x) /\\ !y: q(y)"}});
  REQUIRE(f.status == 200);
  CHECK(f.body["kind"] == "formula");
  CHECK(f.body["freeVars"] == Json::array({"x"}));
  CHECK(f.body["text"] == "p(x) /\\ !y: q(y)");

  auto q = call(s, "POST", "/parse", Json{{"text", "p(a) ||- ?y: p(y)"}});
  REQUIRE(q.status == 200);
  CHECK(q.body["kind"] == "sequent");
  CHECK(q.body["freeVars"] == Json::array({"a"}));

  auto bad = call(s, "POST", "/parse", Json{{"text", "p /\\ ("}});
  CHECK(bad.status == 400);
  CHECK(bad.body["offset"] == 6);
  CHECK(bad.body.contains("error"));
}

TEST_CASE("service: malformed requests and unknown routes") {
  Service s;
  CHECK(s.handle("POST", "/parse", "{not json").status == 400);
  CHECK(call(s, "POST", "/parse", Json::object()).status == 400);
  CHECK(call(s, "POST", "/parse", Json{{"text", 5}}).status == 400);
  CHECK(call(s, "GET", "/nowhere").status == 404);
  CHECK(call(s, "GET", "/sessions").status == 405);
  CHECK(call(s, "GET", "/sessions/none").status == 404);
  CHECK(call(s, "POST", "/proof/check", Json{{"proof", {{"steps", "x"}}}}).status == 400);
  CHECK(call(s, "POST", "/sessions", Json{{"sequent", "||- p"}, {"humanSide", "machine"}}).status == 400);
  // No proof exists, and none is given.
  CHECK(call(s, "POST", "/sessions", Json{{"sequent", "||- p"}}).status == 400);
}

TEST_CASE("service: proof check and search") {
  Service s;
  auto good = call(s, "POST", "/proof/check", Json{{"proof", read_json_file(testdata::path("cube.proof.json"))}});
  REQUIRE(good.status == 200);
  CHECK(good.body["overall"] == "Valid");

  auto found = call(s, "POST", "/proof/search", Json{{"sequent", "||- !x: ?y: (p(x) -> p(y))"}});
  REQUIRE(found.status == 200);
  CHECK(found.body["notFound"] == false);
  REQUIRE(found.body.contains("proof"));
  auto recheck = call(s, "POST", "/proof/check", Json{{"proof", found.body["proof"]}});
  CHECK(recheck.body["overall"] == "Valid");

  auto none = call(s, "POST", "/proof/search", Json{{"sequent", "||- ?y: !x: (p(x) -> p(y))"}});
  REQUIRE(none.status == 200);
  CHECK(none.body["notFound"] == true);
  CHECK(none.body["exhaustive"] == true);
  CHECK_FALSE(none.body.contains("proof"));
}

TEST_CASE("service: cube session reproduces the expected run") {
  Service s;
  auto created = call(s, "POST", "/sessions", cube_request());
  REQUIRE(created.status == 201);
  std::string id = created.body["id"];
  CHECK(created.body["state"]["status"] == "AwaitingEnv");
  CHECK(created.body["state"]["tick"] == 0);
  CHECK(created.body["state"]["machineMoves"].empty());
  CHECK_FALSE(created.body["state"]["legalMoves"].empty());

  auto a = submit(s, id, {"1.10"});
  REQUIRE(a.status == 200);
  CHECK(a.body["machineMoves"] == Json::array({"0.1.:", "0.1.0.10", "0.1.0.10"}));
  auto b = submit(s, id, {"0.1.0.100"});
  CHECK(b.body["machineMoves"] == Json::array({"0.1.1.100", "0.1.1.10"}));
  auto c = submit(s, id, {"0.1.1.1000"});
  REQUIRE(c.status == 200);
  CHECK(c.body["machineMoves"] == Json::array({"1.1000"}));
  CHECK(c.body["runText"] == cube_run_text());
  CHECK(c.body["currentOutcome"] == "Top");
  CHECK(c.body["tick"] == 3);

  auto got = call(s, "GET", "/sessions/" + id);
  CHECK(got.status == 200);
  CHECK(got.body == c.body);
  CHECK(call(s, "PUT", "/sessions/" + id).status == 405);
  CHECK(call(s, "GET", "/sessions/" + id + "/moves").status == 405);
  CHECK(call(s, "POST", "/sessions/" + id + "/nothing", Json::object()).status == 404);
}

TEST_CASE("service: illegal environment move finishes the session") {
  Service s;
  std::string id = create(s, cube_request());
  auto r = submit(s, id, {"1.10", "1.11"});
  REQUIRE(r.status == 200);
  CHECK(r.body["status"] == "Finished");
  CHECK(r.body["illegalBy"] == "B");
  CHECK(r.body["verdict"] == "Top");
  CHECK_FALSE(r.body["illegalReason"].get<std::string>().empty());
  CHECK(submit(s, id, {"0.1.0.100"}).status == 409);
  CHECK(call(s, "POST", "/sessions/" + id + "/moves", Json{{"moves", "1.10"}}).status == 400);
}

TEST_CASE("service: finished session without illegal moves") {
  Service s;
  Json one{{"domainSize", 1}, {"predicates", {{"p", {{0, 1}}}}}};
  std::string id = create(s, Json{{"sequent", "||- p(0) \\/ ~p(0)"}, {"interpretation", one}});
  // The classical tautology has no choices, so the session is over at once.
  auto st = call(s, "GET", "/sessions/" + id);
  CHECK(st.body["status"] == "Finished");
  CHECK(st.body["verdict"] == "Top");
  CHECK(submit(s, id, {}).status == 409);
}

TEST_CASE("service: undo restores the exact earlier state") {
  Service s;
  std::string id = create(s, cube_request());
  auto t1 = submit(s, id, {"1.10"});
  auto t2 = submit(s, id, {"0.1.0.100"});
  REQUIRE(t2.status == 200);
  auto back = call(s, "POST", "/sessions/" + id + "/undo", Json{{"toTick", 1}});
  REQUIRE(back.status == 200);
  CHECK(back.body == t1.body);
  auto again = submit(s, id, {"0.1.0.100"});
  CHECK(again.body == t2.body);
  CHECK(again.body["machineDigest"] == t2.body["machineDigest"]);

  auto zero = call(s, "POST", "/sessions/" + id + "/undo", Json{{"toTick", 0}});
  CHECK(zero.body["tick"] == 0);
  CHECK(zero.body["run"].empty());
  CHECK(call(s, "POST", "/sessions/" + id + "/undo", Json{{"toTick", 5}}).status == 400);
  CHECK(call(s, "POST", "/sessions/" + id + "/undo", Json{{"toTick", -1}}).status == 400);

  // An undo out of a finished state reopens play.
  submit(s, id, {"1.10", "1.11"});
  auto reopened = call(s, "POST", "/sessions/" + id + "/undo", Json{{"toTick", 0}});
  CHECK(reopened.body["status"] == "AwaitingEnv");
  CHECK_FALSE(reopened.body.contains("illegalBy"));
}

TEST_CASE("service: state is a function of the environment batches") {
  Session a("x", cube_request());
  a.submit({"1.10"});
  a.submit({"0.1.0.100"});
  Session b = Session::restore(a.persisted());
  CHECK(b.state() == a.state());
  CHECK(a.persisted()["batches"] == Json::array({Json::array({"1.10"}), Json::array({"0.1.0.100"})}));
}

TEST_CASE("service: sessions survive a restart through the persistence directory") {
  auto dir = temp_dir("cl12-sessions");
  std::string id;
  Json before;
  {
    Service s(dir);
    id = create(s, cube_request());
    submit(s, id, {"1.10"});
    before = call(s, "GET", "/sessions/" + id).body;
  }
  CHECK(std::filesystem::exists(dir / (id + ".json")));
  {
    Service s(dir);
    auto after = call(s, "GET", "/sessions/" + id);
    REQUIRE(after.status == 200);
    CHECK(after.body == before);
    auto next = submit(s, id, {"0.1.0.100"});
    CHECK(next.body["machineMoves"] == Json::array({"0.1.1.100", "0.1.1.10"}));
    // A new session gets a distinct id.
    CHECK(create(s, cube_request()) != id);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("service: concurrent sessions are independent") {
  Service s;
  std::vector<std::string> ids;
  for (int k = 0; k < 4; ++k) ids.push_back(create(s, cube_request()));
  std::vector<std::thread> workers;
  std::atomic<int> wins{0};
  for (const auto& id : ids) {
    workers.emplace_back([&s, &wins, id] {
      submit(s, id, {"1.10"});
      submit(s, id, {"0.1.0.100"});
      auto r = submit(s, id, {"0.1.1.1000"});
      if (r.body["currentOutcome"] == "Top") ++wins;
    });
  }
  for (auto& w : workers) w.join();
  CHECK(wins == 4);
}

TEST_CASE("service: HTTP transport") {
  Service s;
  std::function<void()> stop;
  std::atomic<int> port{0};
  std::thread server([&] {
    serve_http(s, "127.0.0.1", 0, [&](int p, std::function<void()> st) {
      stop = std::move(st);
      port = p;
    });
  });
  for (int k = 0; k < 200 && port == 0; ++k) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  auto schema = client.Get("/schema");
  REQUIRE(schema);
  CHECK(schema->status == 200);
  auto created = client.Post("/sessions", cube_request().dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  std::string id = Json::parse(created->body)["id"];
  auto moved = client.Post("/sessions/" + id + "/moves", Json{{"moves", {"1.10"}}}.dump(), "application/json");
  REQUIRE(moved);
  CHECK(Json::parse(moved->body)["machineMoves"].size() == 3);
  auto missing = client.Get("/sessions/none");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  stop();
  server.join();
}

TEST_CASE("json: proof, model, run and graph term round trips") {
  Proof p = testdata::proof("cube.proof.json");
  Json pj = proof_to_json(p);
  Proof p2 = proof_from_json(pj);
  CHECK(proof_to_json(p2) == pj);
  REQUIRE(p2.steps.size() == p.steps.size());
  for (std::size_t k = 0; k < p.steps.size(); ++k) CHECK(p2.steps[k].sequent == p.steps[k].sequent);

  FiniteModel m = testdata::modular_arithmetic(5);
  m.naming["111"] = 2;
  m.set_predicate("e", 1, [](std::span<const Element> a) { return a[0] % 2 == 0; });
  FiniteModel m2 = model_from_json(model_to_json(m));
  CHECK(model_to_json(m2) == model_to_json(m));
  auto f = parse_formula("Ax: (e(mult(x,x)) -> e(x)) /\\ cube(111) = 11");
  CHECK(eval_elementary(f, m2) == eval_elementary(f, m));

  Run r{{Player::Bot, "1.10"}, {Player::Top, "0.1.:"}, {Player::Top, "1.1000"}};
  CHECK(run_from_json(run_to_json(r)) == r);

  GraphTerm g = parse_unary_bound("(l+1)^3 + 2*l");
  GraphTerm g2 = graph_term_from_json(graph_term_to_json(g));
  for (int l = 0; l < 6; ++l) CHECK(g2.eval({{"l", l}}) == g.eval({{"l", l}}));
  CHECK(g2.size() == g.size());

  CHECK_THROWS_AS(proof_from_json(Json{{"steps", {{{"sequent", "||- p"}, {"rule", "nonsense"}}}}}), JsonFormatError);
}
