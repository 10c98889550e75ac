#include "cgambit/game.hpp"

#include <atomic>
#include <thread>

#include "cgambit/inference.hpp"

namespace cgambit {

std::string_view to_string(SimMode mode) {
  switch (mode) {
    case SimMode::Sample: return "sample";
    case SimMode::Map: return "map";
    case SimMode::Hybrid: return "hybrid";
  }
  return "unknown";
}

SimMode sim_mode_from_string(std::string_view name) {
  if (name == "sample") return SimMode::Sample;
  if (name == "map") return SimMode::Map;
  if (name == "hybrid") return SimMode::Hybrid;
  throw Error("unknown simulation mode '" + std::string(name) + "'");
}

std::vector<double> indicator_utility(int target_states, int desired_value) {
  std::vector<double> u(static_cast<std::size_t>(target_states), 0.0);
  u[static_cast<std::size_t>(desired_value)] = 1.0;
  return u;
}

Outcome realize_outcome(const CausalModel& model, const Intervention& intervention, SimMode mode,
                        RngStream& rng) {
  switch (mode) {
    case SimMode::Sample:
      return sample_outcome(model, intervention, rng);
    case SimMode::Map:
      return map_outcome(model, intervention);
    case SimMode::Hybrid: {
      // Roots of the truncated model (minus the intervened variables)
      // are sampled; everything downstream is the most probable
      // completion given those draws and the intervention.
      const CausalModel truncated = truncate(model, intervention);
      Intervention extended = intervention;
      for (int v = 0; v < model.variable_count(); ++v) {
        if (!truncated.cpts[v].parents.empty() || intervention.contains(v)) continue;
        extended.set(v, rng.categorical(truncated.cpts[v].rows[0]));
      }
      return map_outcome(model, extended);
    }
  }
  throw Error("unknown simulation mode");
}

RoundRecord play_round(const CausalModel& true_model, Agent& agent, SimMode mode,
                       const AgentContext& ctx, std::span<const double> utility, RngStream& rng,
                       int round_index) {
  const int action = agent.choose(rng);
  if (action < 0 || action >= ctx.action_states) {
    throw Error("agent chose action " + std::to_string(action) + " outside the action space");
  }
  Intervention intervention;
  intervention.set(ctx.action_variable, action);

  RoundRecord record;
  record.round_index = round_index;
  record.action = action;
  record.outcome = realize_outcome(true_model, intervention, mode, rng);
  record.reward = utility[static_cast<std::size_t>(record.outcome[ctx.target])];
  agent.observe(action, record.outcome, record.reward);
  return record;
}

EpisodeResult run_episode_detailed(const CausalModel& true_model, const AgentSpec& spec,
                                   int rounds, std::uint64_t seed, SimMode mode,
                                   const AgentContext& ctx, std::span<const double> utility) {
  if (rounds < 1) throw Error("run_episode: rounds must be at least 1");
  std::vector<double> default_utility;
  if (utility.empty()) {
    default_utility = indicator_utility(true_model.state_count(ctx.target), ctx.desired_value);
    utility = default_utility;
  }

  RngStream rng(seed);
  auto agent = make_agent(spec, true_model, ctx, rng);

  EpisodeResult result;
  result.trace.agent = spec.label();
  result.trace.seed = seed;
  result.trace.rewards.reserve(static_cast<std::size_t>(rounds));
  for (int r = 0; r < rounds; ++r) {
    result.trace.rewards.push_back(
        play_round(true_model, *agent, mode, ctx, utility, rng, r).reward);
  }
  if (const BeliefStore* b = agent->beliefs()) result.final_beliefs = *b;
  return result;
}

RewardTrace run_episode(const CausalModel& true_model, const AgentSpec& spec, int rounds,
                        std::uint64_t seed, SimMode mode, const AgentContext& ctx,
                        std::span<const double> utility) {
  return run_episode_detailed(true_model, spec, rounds, seed, mode, ctx, utility).trace;
}

ExperimentResult run_experiment(const CausalModel& true_model, const AgentContext& ctx,
                                const ExperimentPlan& plan) {
  if (plan.agents.empty()) throw Error("run_experiment: at least one agent required");
  if (plan.seeds.empty()) throw Error("run_experiment: at least one seed required");
  if (plan.rounds < 1) throw Error("run_experiment: rounds must be at least 1");

  const std::size_t n_agents = plan.agents.size();
  const std::size_t n_seeds = plan.seeds.size();

  std::vector<EpisodeResult> episodes(n_agents * n_seeds);
  auto run_one = [&](std::size_t task) {
    const std::size_t a = task / n_seeds;
    const std::size_t s = task % n_seeds;
    episodes[task] = run_episode_detailed(true_model, plan.agents[a], plan.rounds,
                                          plan.seeds[s], plan.sim_mode, ctx, plan.utility);
  };

  const std::size_t total = n_agents * n_seeds;
  if (plan.jobs <= 1) {
    for (std::size_t t = 0; t < total; ++t) run_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(plan.jobs), total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < total; t = next.fetch_add(1)) run_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.rounds = plan.rounds;
  result.seeds = plan.seeds;
  result.agents.resize(n_agents);
  for (std::size_t a = 0; a < n_agents; ++a) {
    AgentSeries& series = result.agents[a];
    series.spec = plan.agents[a];
    series.traces.reserve(n_seeds);
    for (std::size_t s = 0; s < n_seeds; ++s) {
      EpisodeResult& ep = episodes[a * n_seeds + s];
      series.traces.push_back(std::move(ep.trace));
      if (plan.collect_beliefs && ep.final_beliefs) {
        series.final_beliefs.push_back(std::move(*ep.final_beliefs));
      }
    }

    series.mean_reward.resize(static_cast<std::size_t>(plan.rounds));
    for (int r = 0; r < plan.rounds; ++r) {
      double sum = 0.0;
      for (const auto& trace : series.traces) sum += trace.rewards[r];
      series.mean_reward[r] = sum / static_cast<double>(n_seeds);
    }
    series.cumulative_mean.resize(static_cast<std::size_t>(plan.rounds));
    double running = 0.0;
    for (int r = 0; r < plan.rounds; ++r) {
      running += series.mean_reward[r];
      series.cumulative_mean[r] = running / static_cast<double>(r + 1);
    }
  }
  return result;
}

}  // namespace cgambit
