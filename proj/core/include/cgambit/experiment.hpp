#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgambit/agents.hpp"
#include "cgambit/game.hpp"
#include "cgambit/model.hpp"

namespace cgambit {

/// Output file names; the CLI resolves them relative to the config file.
struct OutputPaths {
  std::string rewards_csv = "rewards.csv";
  std::string summary_csv = "summary.csv";
  std::string plot_svg = "reward_curves.svg";
};

/// An experiment as read from a config file. Variable and state
/// references stay as names until `resolve` binds them to a model.
struct ExperimentConfig {
  std::string model_path;
  std::string action_variable;
  std::string target;
  std::string desired_value;
  std::vector<AgentSpec> agents;
  int rounds = 1;
  std::vector<std::uint64_t> seeds;
  SimMode sim_mode = SimMode::Sample;
  std::vector<double> utility;  // empty = 0/1 indicator of desired_value
  OutputPaths outputs;
};

/// Parses config JSON. Unknown keys are errors (they are almost always
/// typos in hyperparameters); messages carry the offending field path.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

struct ResolvedExperiment {
  AgentContext ctx;
  ExperimentPlan plan;
};

/// Binds config names to the model and builds the run plan. Throws Error
/// naming the field on unknown variables or states, duplicate agent
/// labels, or a utility vector of the wrong arity.
ResolvedExperiment resolve_experiment(const ExperimentConfig& config, const CausalModel& model);

/// One row per (agent, seed, round); rounds are 1-based in the file.
/// Header: agent,seed,round,reward
std::string rewards_csv(const ExperimentResult& result);

/// One row per (agent, round): per-round mean over seeds and the running
/// cumulative mean. Header: agent,round,mean_reward,cumulative_mean
std::string summary_csv(const ExperimentResult& result);

/// Minimal SVG 1.1 line chart: one cumulative-mean polyline per agent in
/// a fixed 800x500 viewport with labeled linear axes and a legend.
std::string render_reward_svg(const ExperimentResult& result);

}  // namespace cgambit
