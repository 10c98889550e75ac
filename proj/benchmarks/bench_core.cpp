#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cgambit/agents.hpp"
#include "cgambit/beliefs.hpp"
#include "cgambit/game.hpp"
#include "cgambit/inference.hpp"
#include "cgambit/model_io.hpp"

namespace {

using namespace cgambit;

CausalModel scenario() {
  return load_model(std::string(CGAMBIT_DATA_DIR) + "/test_scenario.model.json");
}

// Binary chain X0 -> X1 -> ... -> Xn-1; enumeration cost grows as 2^n.
CausalModel chain_model(int n) {
  CausalModel m;
  m.dag.node_count = n;
  for (int v = 0; v < n; ++v) {
    m.variables.push_back({"X" + std::to_string(v), {"0", "1"}});
    Cpt cpt;
    cpt.variable = v;
    if (v == 0) {
      cpt.rows = {{0.3, 0.7}};
    } else {
      m.dag.edges.emplace_back(v - 1, v);
      cpt.parents = {v - 1};
      cpt.rows = {{0.8, 0.2}, {0.25, 0.75}};
    }
    m.cpts.push_back(std::move(cpt));
  }
  return m;
}

void BM_interventional_query_scenario(benchmark::State& state) {
  const CausalModel model = scenario();
  Query query;
  query.target = 3;
  query.value = 0;
  query.intervention.set(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(interventional_query(model, query));
  }
}
BENCHMARK(BM_interventional_query_scenario);

void BM_interventional_query_chain(benchmark::State& state) {
  const CausalModel model = chain_model(static_cast<int>(state.range(0)));
  Query query;
  query.target = model.variable_count() - 1;
  query.value = 0;
  query.intervention.set(0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(interventional_query(model, query));
  }
}
BENCHMARK(BM_interventional_query_chain)->Arg(8)->Arg(12)->Arg(16);

void BM_sample_outcome(benchmark::State& state) {
  const CausalModel model = scenario();
  Intervention pill;
  pill.set(1, 0);
  RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_outcome(model, pill, rng));
  }
}
BENCHMARK(BM_sample_outcome);

void BM_map_outcome(benchmark::State& state) {
  const CausalModel model = scenario();
  Intervention pill;
  pill.set(1, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_outcome(model, pill));
  }
}
BENCHMARK(BM_map_outcome);

void BM_belief_update(benchmark::State& state) {
  const CausalModel model = scenario();
  RngStream rng(2);
  BeliefStore beliefs = init_beliefs(ModelStructure::of(model), BeliefInit::uniform(), rng, {1});
  std::vector<Outcome> outcomes;
  for (int i = 0; i < 1024; ++i) outcomes.push_back(sample_outcome(model, {}, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    update(beliefs, outcomes[i++ & 1023]);
    benchmark::DoNotOptimize(beliefs);
  }
}
BENCHMARK(BM_belief_update);

void BM_realize_model_sample(benchmark::State& state) {
  const CausalModel model = scenario();
  RngStream rng(3);
  const BeliefStore beliefs =
      init_beliefs(ModelStructure::of(model), BeliefInit::random(0.5, 2.0), rng, {1});
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_model(beliefs, RealizationMode::Sample, rng));
  }
}
BENCHMARK(BM_realize_model_sample);

void BM_learning_episode_200(benchmark::State& state) {
  const CausalModel model = scenario();
  const AgentContext ctx = AgentContext::of(model, 1, 3, 0);
  AgentSpec spec;
  spec.kind = AgentKind::CausalLearning;
  spec.belief_init = BeliefInit::random(0.5, 2.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_episode(model, spec, 200, ++seed, SimMode::Sample, ctx));
  }
}
BENCHMARK(BM_learning_episode_200);

}  // namespace

BENCHMARK_MAIN();
