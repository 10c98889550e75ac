#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cgambit/beliefs.hpp"
#include "cgambit/inference.hpp"
#include "cgambit/model.hpp"
#include "cgambit/rng.hpp"

namespace cgambit {

/// The decision problem as the agent sees it: which variable it may
/// force, how many options that gives it, and which target value it
/// wants.
struct AgentContext {
  int action_variable = -1;
  int action_states = 0;
  int target = -1;
  int desired_value = -1;

  static AgentContext of(const CausalModel& model, int action_variable, int target,
                         int desired_value);
};

/// Bandit-form action values with epsilon-greedy selection. With rewards
/// in {0, 1} and q initialized to 0, every value stays in [0, 1].
struct QTable {
  std::vector<double> q;
  double learning_rate = 0.1;
  double epsilon = 0.1;
};

/// One policy behind one contract: pick an action without seeing any
/// variable, then digest the round's full outcome and reward.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual int choose(RngStream& rng) = 0;
  virtual void observe(int action, const Outcome& outcome, double reward) = 0;
  virtual std::string_view kind() const = 0;

  /// Non-null only for agents that maintain beliefs.
  virtual const BeliefStore* beliefs() const { return nullptr; }
};

/// Case of a fully known model: the optimal intervention is computed
/// once and replayed every round.
class CausalKnownAgent final : public Agent {
 public:
  CausalKnownAgent(const CausalModel& model, const AgentContext& ctx);

  int choose(RngStream&) override { return action_; }
  void observe(int, const Outcome&, double) override {}
  std::string_view kind() const override { return "causal_known"; }

 private:
  int action_;
};

/// Structure-only case: realize a concrete model from the current
/// Dirichlet beliefs, act optimally against it, then fold the observed
/// outcome back into the beliefs.
class CausalLearningAgent final : public Agent {
 public:
  CausalLearningAgent(BeliefStore beliefs, const AgentContext& ctx, RealizationMode mode);

  int choose(RngStream& rng) override;
  void observe(int action, const Outcome& outcome, double reward) override;
  std::string_view kind() const override { return "causal_learning"; }
  const BeliefStore* beliefs() const override { return &beliefs_; }

 private:
  BeliefStore beliefs_;
  AgentContext ctx_;
  RealizationMode mode_;
};

class QLearningAgent final : public Agent {
 public:
  QLearningAgent(const AgentContext& ctx, double learning_rate, double epsilon);

  int choose(RngStream& rng) override;
  void observe(int action, const Outcome& outcome, double reward) override;
  std::string_view kind() const override { return "q_learning"; }
  const QTable& table() const { return table_; }

 private:
  QTable table_;
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(const AgentContext& ctx) : action_states_(ctx.action_states) {}

  int choose(RngStream& rng) override { return rng.uniform_index(action_states_); }
  void observe(int, const Outcome&, double) override {}
  std::string_view kind() const override { return "random"; }

 private:
  int action_states_;
};

enum class AgentKind { CausalKnown, CausalLearning, QLearning, Random };

std::string_view to_string(AgentKind kind);
AgentKind agent_kind_from_string(std::string_view name);

/// Construction recipe for one agent; unused knobs are ignored by kinds
/// that do not take them.
struct AgentSpec {
  AgentKind kind = AgentKind::Random;
  std::string name;  // label in outputs; defaults to the kind string
  double learning_rate = 0.1;
  double epsilon = 0.1;
  BeliefInit belief_init{};
  RealizationMode realization = RealizationMode::Sample;

  std::string label() const { return name.empty() ? std::string(to_string(kind)) : name; }
};

/// The learning agent receives only the model's structure; the known
/// agent receives the model itself. Belief priors are drawn from `rng`.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const CausalModel& true_model,
                                  const AgentContext& ctx, RngStream& rng);

}  // namespace cgambit
