#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgambit/agents.hpp"
#include "cgambit/model.hpp"

namespace cgambit {

/// How the environment realizes a round's outcome in response to the
/// agent's intervention.
///   sample: ancestral sampling of the truncated model.
///   map:    the most probable completion (deterministic given the action).
///   hybrid: exogenous roots sampled, then the most probable completion
///           given those roots and the intervention.
enum class SimMode { Sample, Map, Hybrid };

std::string_view to_string(SimMode mode);
SimMode sim_mode_from_string(std::string_view name);

struct RoundRecord {
  int round_index = 0;  // 0-based
  int action = -1;
  Outcome outcome;
  double reward = 0.0;
};

struct RewardTrace {
  std::string agent;
  std::uint64_t seed = 0;
  std::vector<double> rewards;
};

/// Reward per target state. The default is the 0/1 indicator of the
/// desired value.
std::vector<double> indicator_utility(int target_states, int desired_value);

/// Nature's move: realize one outcome from the model under the
/// intervention, per the mode's rules.
Outcome realize_outcome(const CausalModel& model, const Intervention& intervention, SimMode mode,
                        RngStream& rng);

/// One round: the agent moves blind, the environment realizes an outcome
/// from the true model under do(action), the reward is read off the
/// target, and the agent observes everything.
RoundRecord play_round(const CausalModel& true_model, Agent& agent, SimMode mode,
                       const AgentContext& ctx, std::span<const double> utility, RngStream& rng,
                       int round_index = 0);

/// Fresh agent built from `spec`, `rounds` sequential rounds, one stream
/// seeded from `seed` shared by agent and environment. Pure function of
/// its arguments.
RewardTrace run_episode(const CausalModel& true_model, const AgentSpec& spec, int rounds,
                        std::uint64_t seed, SimMode mode, const AgentContext& ctx,
                        std::span<const double> utility = {});

struct EpisodeResult {
  RewardTrace trace;
  std::optional<BeliefStore> final_beliefs;  // present for belief-keeping agents
};

EpisodeResult run_episode_detailed(const CausalModel& true_model, const AgentSpec& spec,
                                   int rounds, std::uint64_t seed, SimMode mode,
                                   const AgentContext& ctx,
                                   std::span<const double> utility = {});

/// Everything run_experiment needs beyond the model and context.
struct ExperimentPlan {
  std::vector<AgentSpec> agents;
  int rounds = 1;
  std::vector<std::uint64_t> seeds;
  SimMode sim_mode = SimMode::Sample;
  std::vector<double> utility;  // empty = indicator of the desired value
  int jobs = 1;
  bool collect_beliefs = false;
};

struct AgentSeries {
  AgentSpec spec;
  std::vector<RewardTrace> traces;           // by seed index
  std::vector<double> mean_reward;           // per round, mean over seeds
  std::vector<double> cumulative_mean;       // running mean of mean_reward
  std::vector<BeliefStore> final_beliefs;    // by seed index; empty unless collected
};

struct ExperimentResult {
  std::vector<AgentSeries> agents;
  int rounds = 0;
  std::vector<std::uint64_t> seeds;
};

/// Runs every (agent, seed) episode and aggregates per-round means.
/// Episodes may execute in parallel (plan.jobs); aggregation is keyed by
/// seed index, so the output does not depend on scheduling.
ExperimentResult run_experiment(const CausalModel& true_model, const AgentContext& ctx,
                                const ExperimentPlan& plan);

}  // namespace cgambit
