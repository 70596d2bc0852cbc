#include <benchmark/benchmark.h>

#include <random>

#include "safari/bcp.hpp"
#include "safari/circuits.hpp"
#include "safari/cnf.hpp"
#include "safari/engine.hpp"
#include "safari/oracle.hpp"
#include "safari/sat.hpp"

using namespace safari;

namespace {

// Random circuit with three outputs flipped from their nominal values.
struct Instance {
  DiagnosticSystem ds;
  Observation alpha;
};

Instance faulty_instance(std::size_t gates, std::uint64_t seed) {
  const Circuit c = random_circuit(gates, 32, seed);
  DiagnosticSystem ds = compile(c, FaultMode::Weak);
  std::mt19937_64 rng(seed);
  std::vector<bool> in;
  for (std::size_t k = 0; k < c.inputs().size(); ++k) in.push_back(rng() & 1);
  const auto out = simulate(c, in);
  std::vector<Literal> lits;
  for (std::size_t k = 0; k < in.size(); ++k) lits.push_back({ds.inputs()[k], in[k]});
  for (std::size_t k = 0; k < out.size(); ++k) lits.push_back({ds.outputs()[k], k % 50 == 0 ? !out[k] : out[k]});
  Observation alpha(ds, lits);
  return {std::move(ds), std::move(alpha)};
}

}  // namespace

static void BM_ToCnf(benchmark::State& state) {
  const auto ds = compile(random_circuit(static_cast<std::size_t>(state.range(0)), 32, 1), FaultMode::StuckAt1);
  for (auto _ : state) benchmark::DoNotOptimize(to_cnf(ds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ToCnf)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_Solve(benchmark::State& state) {
  const auto inst = faulty_instance(static_cast<std::size_t>(state.range(0)), 2);
  const CnfFormula cnf = to_cnf(inst.ds);
  Solver solver(cnf);
  const auto lits = encode(cnf, inst.alpha);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(lits));
}
BENCHMARK(BM_Solve)->RangeMultiplier(4)->Range(64, 4096);

static void BM_RandomSolution(benchmark::State& state) {
  const auto inst = faulty_instance(static_cast<std::size_t>(state.range(0)), 3);
  const CnfFormula cnf = to_cnf(inst.ds);
  Solver solver(cnf);
  const auto lits = encode(cnf, inst.alpha);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(solver.random_solution(lits, rng));
}
BENCHMARK(BM_RandomSolution)->RangeMultiplier(4)->Range(64, 4096);

// One assume/retract pair on an LTMS that already holds the observation.
static void BM_LtmsFlip(benchmark::State& state) {
  const auto inst = faulty_instance(static_cast<std::size_t>(state.range(0)), 4);
  const CnfFormula cnf = to_cnf(inst.ds);
  Ltms ltms(cnf);
  for (const int l : encode(cnf, inst.alpha)) ltms.assume(l);
  const auto base = ltms.mark();
  std::size_t i = 0;
  for (auto _ : state) {
    ltms.assume(-cnf.var_of(inst.ds.comps()[i++ % inst.ds.num_comps()]));
    ltms.retract_to(base);
  }
}
BENCHMARK(BM_LtmsFlip)->RangeMultiplier(4)->Range(64, 4096);

static void BM_Safari(benchmark::State& state) {
  const auto inst = faulty_instance(static_cast<std::size_t>(state.range(0)), 5);
  const CnfFormula cnf = to_cnf(inst.ds);
  SafariConfig cfg;
  cfg.max_retries = 8;
  cfg.tries = 4;
  cfg.record_flips = false;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(safari::safari(inst.ds, cnf, inst.alpha, cfg));
  }
}
BENCHMARK(BM_Safari)->RangeMultiplier(4)->Range(64, 1024)->Unit(benchmark::kMillisecond);

static void BM_Census(benchmark::State& state) {
  const auto ds = builtin_system("subtractor");
  const auto alpha = builtin_observation(ds, "alpha2");
  for (auto _ : state) benchmark::DoNotOptimize(census(ds, alpha));
}
BENCHMARK(BM_Census);

BENCHMARK_MAIN();
