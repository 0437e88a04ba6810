#include <benchmark/benchmark.h>

#include <filesystem>

#include "cl12/arena.hpp"
#include "cl12/json_io.hpp"

using namespace cl12;

namespace {

std::filesystem::path data(const std::string& name) { return std::filesystem::path(CL12_DATA_DIR) / name; }

const char* kCube = "Ax: (cube(x) = mult(mult(x,x),x)), !x: !y: ?z: (z = mult(x,y)) ||- !x: ?y: (y = cube(x))";

void BM_SearchSmall(benchmark::State& state) {
  auto x = parse_sequent("?x: !y: p(x,y) ||- ?x: (!y: p(x,y) /\\ !y: p(x,y))");
  for (auto _ : state) benchmark::DoNotOptimize(search_proof(x));
}
BENCHMARK(BM_SearchSmall)->Unit(benchmark::kMillisecond);

void BM_SearchUnprovable(benchmark::State& state) {
  auto x = parse_sequent("||- ?y: !x: (p(x) -> p(y))");
  for (auto _ : state) benchmark::DoNotOptimize(search_proof(x));
}
BENCHMARK(BM_SearchUnprovable)->Unit(benchmark::kMillisecond);

void BM_CheckCubeProof(benchmark::State& state) {
  auto p = proof_from_json(read_json_file(data("cube.proof.json")));
  for (auto _ : state) benchmark::DoNotOptimize(check_proof(p));
}
BENCHMARK(BM_CheckCubeProof)->Unit(benchmark::kMillisecond);

void BM_PlayCube(benchmark::State& state) {
  auto p = proof_from_json(read_json_file(data("cube.proof.json")));
  auto interp = interpretation_from_json(read_json_file(data("mod16.json")));
  auto agent = extract_strategy(p);
  auto x = parse_sequent(kCube);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto m = agent->clone();
    RandomEnv env(x, seed++);
    benchmark::DoNotOptimize(play(*m, env, x, interp));
  }
}
BENCHMARK(BM_PlayCube)->Unit(benchmark::kMicrosecond);

void BM_ApplyMoves(benchmark::State& state) {
  auto x = parse_sequent(kCube);
  std::vector<LabMove> run = {{Player::Top, "0.1.:"},     {Player::Bot, "1.10"},     {Player::Top, "0.1.0.10"},
                              {Player::Top, "0.1.0.10"},  {Player::Bot, "0.1.0.100"}, {Player::Top, "0.1.1.100"},
                              {Player::Top, "0.1.1.10"},  {Player::Bot, "0.1.1.1000"}, {Player::Top, "1.1000"}};
  for (auto _ : state) {
    auto pos = SequentPosition::initial(x);
    for (const auto& m : run) pos = std::get<PositionStep>(apply_move(pos, m)).next;
    benchmark::DoNotOptimize(pos);
  }
}
BENCHMARK(BM_ApplyMoves)->Unit(benchmark::kMicrosecond);

// Repeated squaring: the graph stays linear while the value has 2^n bits.
void BM_GraphTermEval(benchmark::State& state) {
  GraphTerm g;
  auto t = g.var("y");
  for (int i = 0; i < state.range(0); ++i) t = g.times(t, t);
  g.set_root(t);
  for (auto _ : state) benchmark::DoNotOptimize(g.eval({{"y", 3}}));
}
BENCHMARK(BM_GraphTermEval)->Arg(4)->Arg(8)->Arg(12);

}  // namespace
BENCHMARK_MAIN();
