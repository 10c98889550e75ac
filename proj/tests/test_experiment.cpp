#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "cgambit/experiment.hpp"
#include "test_util.hpp"

using namespace cgambit;
using testutil::default_model;

namespace {

// Minimal well-formed config; tests patch it via string replacement.
const char* kBaseConfig = R"({
  "model_path": "m.json",
  "action_variable": "Treatment",
  "target": "Lives",
  "desired_value": "lives",
  "agents": [ { "kind": "causal_learning" }, { "kind": "random" } ],
  "rounds": 10,
  "seeds": [1, 2, 3]
})";

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("a full config parses into every field") {
  const char* text = R"({
    "model_path": "models/scenario.json",
    "action_variable": "Treatment",
    "target": "Lives",
    "desired_value": "lives",
    "agents": [
      { "kind": "causal_learning", "name": "learner" },
      { "kind": "q_learning", "learning_rate": 0.25, "epsilon": 0.05 },
      { "kind": "random" }
    ],
    "rounds": 200,
    "seeds": { "count": 4, "base_seed": 10 },
    "sim_mode": "hybrid",
    "belief_init": { "strategy": "random", "low": 0.75, "high": 1.5 },
    "realization_mode": "mean",
    "utility": [1.0, -0.5],
    "outputs": { "rewards_csv": "r.csv", "summary_csv": "s.csv", "plot_svg": "p.svg" }
  })";
  const ExperimentConfig config = parse_experiment_config(text);

  CHECK(config.model_path == "models/scenario.json");
  CHECK(config.action_variable == "Treatment");
  CHECK(config.target == "Lives");
  CHECK(config.desired_value == "lives");
  CHECK(config.rounds == 200);
  CHECK(config.seeds == std::vector<std::uint64_t>{10, 11, 12, 13});
  CHECK(config.sim_mode == SimMode::Hybrid);
  CHECK(config.utility == std::vector<double>{1.0, -0.5});
  CHECK(config.outputs.rewards_csv == "r.csv");
  CHECK(config.outputs.summary_csv == "s.csv");
  CHECK(config.outputs.plot_svg == "p.svg");

  REQUIRE(config.agents.size() == 3);
  CHECK(config.agents[0].kind == AgentKind::CausalLearning);
  CHECK(config.agents[0].label() == "learner");
  CHECK(config.agents[1].kind == AgentKind::QLearning);
  CHECK(config.agents[1].learning_rate == 0.25);
  CHECK(config.agents[1].epsilon == 0.05);
  CHECK(config.agents[2].label() == "random");
  // shared knobs land on every agent
  for (const AgentSpec& spec : config.agents) {
    CHECK(spec.belief_init.strategy == BeliefInitStrategy::Random);
    CHECK(spec.belief_init.lo == 0.75);
    CHECK(spec.belief_init.hi == 1.5);
    CHECK(spec.realization == RealizationMode::Mean);
  }
}

TEST_CASE("omitted keys fall back to the documented defaults") {
  const ExperimentConfig config = parse_experiment_config(kBaseConfig);
  CHECK(config.sim_mode == SimMode::Sample);
  CHECK(config.utility.empty());
  CHECK(config.outputs.rewards_csv == "rewards.csv");
  CHECK(config.outputs.summary_csv == "summary.csv");
  CHECK(config.outputs.plot_svg == "reward_curves.svg");
  CHECK(config.seeds == std::vector<std::uint64_t>{1, 2, 3});
  for (const AgentSpec& spec : config.agents) {
    CHECK(spec.realization == RealizationMode::Sample);
    CHECK(spec.learning_rate == 0.1);
    CHECK(spec.epsilon == 0.1);
  }
}

TEST_CASE("config errors name the offending field") {
  const auto throws_with = [](const char* text, const char* fragment) {
    CHECK_THROWS_WITH_AS(parse_experiment_config(text), doctest::Contains(fragment), ParseError);
  };

  SUBCASE("syntax") { throws_with("{", "config:"); }
  SUBCASE("non-object root") { throws_with("[]", "top level"); }
  SUBCASE("unknown top-level key") {
    throws_with(R"({"model_path": "m", "epsilon": 0.1})", "unknown key 'epsilon'");
  }
  SUBCASE("missing required key") {
    throws_with(R"({"model_path": "m"})", "missing key 'action_variable'");
  }
  SUBCASE("rounds below one") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 0, "seeds": [1]})",
                "rounds: must be at least 1");
  }
  SUBCASE("fractional rounds") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 2.5, "seeds": [1]})",
                "rounds: expected an integer");
  }
  SUBCASE("empty agents") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [], "rounds": 1, "seeds": [1]})",
                "at least one agent");
  }
  SUBCASE("unknown agent key") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random", "alpha": 1}],
                    "rounds": 1, "seeds": [1]})",
                "agents[0]: unknown key 'alpha'");
  }
  SUBCASE("unknown agent kind") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "sarsa"}],
                    "rounds": 1, "seeds": [1]})",
                "agents[0].kind");
  }
  SUBCASE("learning rate out of range") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d",
                    "agents": [{"kind": "q_learning", "learning_rate": 0}],
                    "rounds": 1, "seeds": [1]})",
                "agents[0].learning_rate: must be in (0, 1]");
  }
  SUBCASE("epsilon out of range") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "q_learning", "epsilon": 2}],
                    "rounds": 1, "seeds": [1]})",
                "agents[0].epsilon: must be in [0, 1]");
  }
  SUBCASE("duplicate seed") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1, 2, 1]})",
                "seeds[2]: duplicate seed 1");
  }
  SUBCASE("negative seed") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [-4]})",
                "non-negative");
  }
  SUBCASE("empty seed list") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": []})",
                "at least one seed");
  }
  SUBCASE("seeds of the wrong shape") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": 5})",
                "expected an array of seeds or {count, base_seed}");
  }
  SUBCASE("unknown seeds key") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": {"count": 2, "start": 0}})",
                "seeds: unknown key 'start'");
  }
  SUBCASE("bad sim mode") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "sim_mode": "exact"})",
                "sim_mode");
  }
  SUBCASE("uniform init rejects bounds") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1],
                    "belief_init": {"strategy": "uniform", "low": 0.5}})",
                "'low'/'high' only apply to the random strategy");
  }
  SUBCASE("random init bounds validated") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1],
                    "belief_init": {"strategy": "random", "low": 0}})",
                "belief_init.low: must be positive");
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1],
                    "belief_init": {"strategy": "random", "low": 2, "high": 1}})",
                "belief_init.high: must be at least 'low'");
  }
  SUBCASE("unknown belief strategy") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "belief_init": {"strategy": "jeffreys"}})",
                "belief_init.strategy");
  }
  SUBCASE("bad realization mode") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "realization_mode": "map"})",
                "expected 'mean' or 'sample'");
  }
  SUBCASE("utility must be a non-empty numeric array") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "utility": []})",
                "utility");
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "utility": [1, "x"]})",
                "utility[1]");
  }
  SUBCASE("empty output path") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "outputs": {"rewards_csv": ""}})",
                "outputs.rewards_csv: must be non-empty");
  }
  SUBCASE("unknown output key") {
    throws_with(R"({"model_path": "m", "action_variable": "a", "target": "t",
                    "desired_value": "d", "agents": [{"kind": "random"}],
                    "rounds": 1, "seeds": [1], "outputs": {"plot": "p.svg"}})",
                "outputs: unknown key 'plot'");
  }
}

TEST_CASE("load_experiment_config reports the file path") {
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/experiment.json"), IoError);
}

TEST_CASE("resolve binds names to indices") {
  const ExperimentConfig config = parse_experiment_config(kBaseConfig);
  const ResolvedExperiment resolved = resolve_experiment(config, default_model());
  CHECK(resolved.ctx.action_variable == 1);
  CHECK(resolved.ctx.action_states == 2);
  CHECK(resolved.ctx.target == 3);
  CHECK(resolved.ctx.desired_value == 0);
  CHECK(resolved.plan.rounds == 10);
  CHECK(resolved.plan.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(resolved.plan.sim_mode == SimMode::Sample);
  CHECK(resolved.plan.agents.size() == 2);
}

TEST_CASE("resolve rejects unresolvable names and conflicting specs") {
  const CausalModel model = default_model();
  ExperimentConfig config = parse_experiment_config(kBaseConfig);

  SUBCASE("unknown action variable") {
    config.action_variable = "Dose";
    CHECK_THROWS_WITH_AS(resolve_experiment(config, model),
                         doctest::Contains("action_variable: unknown variable 'Dose'"), Error);
  }
  SUBCASE("unknown target") {
    config.target = "Outcome";
    CHECK_THROWS_WITH_AS(resolve_experiment(config, model),
                         doctest::Contains("target: unknown variable"), Error);
  }
  SUBCASE("unknown desired value") {
    config.desired_value = "thrives";
    CHECK_THROWS_WITH_AS(resolve_experiment(config, model),
                         doctest::Contains("desired_value: unknown state 'thrives'"), Error);
  }
  SUBCASE("duplicate labels") {
    config.agents.push_back(config.agents.back());  // second unnamed random
    CHECK_THROWS_WITH_AS(resolve_experiment(config, model),
                         doctest::Contains("duplicate agent label 'random'"), Error);
  }
  SUBCASE("utility arity") {
    config.utility = {1.0, 0.0, -1.0};
    CHECK_THROWS_WITH_AS(resolve_experiment(config, model),
                         doctest::Contains("utility: expected 2 entries"), Error);
  }
}

TEST_CASE("rewards_csv lists every trace with 1-based rounds") {
  ExperimentResult result;
  result.rounds = 3;
  result.seeds = {3, 9};
  AgentSeries series;
  series.spec.kind = AgentKind::Random;
  series.spec.name = "a1";
  series.traces = {{"a1", 3, {1.0, 0.0, 0.5}}, {"a1", 9, {0.0, 1.0, 0.25}}};
  series.mean_reward = {0.5, 0.5, 0.375};
  series.cumulative_mean = {0.5, 0.5, 0.4375};
  result.agents.push_back(series);

  CHECK(rewards_csv(result) ==
        "agent,seed,round,reward\n"
        "a1,3,1,1\n"
        "a1,3,2,0\n"
        "a1,3,3,0.5\n"
        "a1,9,1,0\n"
        "a1,9,2,1\n"
        "a1,9,3,0.25\n");
  CHECK(summary_csv(result) ==
        "agent,round,mean_reward,cumulative_mean\n"
        "a1,1,0.5,0.5\n"
        "a1,2,0.5,0.5\n"
        "a1,3,0.375,0.4375\n");
}

TEST_CASE("csv doubles use the shortest round-trip form") {
  ExperimentResult result;
  result.rounds = 1;
  result.seeds = {1};
  AgentSeries series;
  series.spec.name = "a";
  series.traces = {{"a", 1, {0.1}}};
  series.mean_reward = {1.0 / 3.0};
  series.cumulative_mean = {0.30000000000000004};
  result.agents.push_back(series);

  CHECK(rewards_csv(result) == "agent,seed,round,reward\na,1,1,0.1\n");
  CHECK(summary_csv(result) ==
        "agent,round,mean_reward,cumulative_mean\n"
        "a,1,0.3333333333333333,0.30000000000000004\n");
}

TEST_CASE("the svg has a frame, one curve per agent, and an escaped legend") {
  const CausalModel model = default_model();
  ExperimentConfig config = parse_experiment_config(kBaseConfig);
  config.agents[0].name = "learner<fast>";
  const ResolvedExperiment resolved = resolve_experiment(config, model);
  const ExperimentResult result = run_experiment(model, resolved.ctx, resolved.plan);

  const std::string svg = render_reward_svg(result);
  CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") == 0);
  CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);
  CHECK(svg.find(">round</text>") != std::string::npos);
  CHECK(svg.find("cumulative mean reward") != std::string::npos);
  CHECK(svg.find("learner&lt;fast&gt;") != std::string::npos);
  CHECK(svg.find("#1f77b4") != std::string::npos);
  CHECK(svg.find("#d62728") != std::string::npos);

  CHECK(count_occurrences(svg, "<polyline") == 2);
  CHECK(count_occurrences(svg, "</svg>") == 1);
}

TEST_CASE("csv outputs are identical across job counts") {
  const CausalModel model = default_model();
  const ExperimentConfig config = parse_experiment_config(kBaseConfig);
  const ResolvedExperiment resolved = resolve_experiment(config, model);

  ExperimentPlan serial = resolved.plan;
  serial.jobs = 1;
  ExperimentPlan parallel = resolved.plan;
  parallel.jobs = 4;

  const ExperimentResult serial_result = run_experiment(model, resolved.ctx, serial);
  const ExperimentResult parallel_result = run_experiment(model, resolved.ctx, parallel);
  CHECK(rewards_csv(serial_result) == rewards_csv(parallel_result));
  CHECK(summary_csv(serial_result) == summary_csv(parallel_result));
  CHECK(render_reward_svg(serial_result) == render_reward_svg(parallel_result));
}
