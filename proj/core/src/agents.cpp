#include "cgambit/agents.hpp"

#include <algorithm>

namespace cgambit {

AgentContext AgentContext::of(const CausalModel& model, int action_variable, int target,
                              int desired_value) {
  if (action_variable < 0 || action_variable >= model.variable_count()) {
    throw Error("agent context: action variable index out of range");
  }
  if (target < 0 || target >= model.variable_count()) {
    throw Error("agent context: target index out of range");
  }
  if (action_variable == target) throw Error("agent context: action variable equals target");
  if (desired_value < 0 || desired_value >= model.state_count(target)) {
    throw Error("agent context: desired value invalid for target");
  }
  return {action_variable, model.state_count(action_variable), target, desired_value};
}

CausalKnownAgent::CausalKnownAgent(const CausalModel& model, const AgentContext& ctx)
    : action_(best_action(model, ctx.action_variable, ctx.target, ctx.desired_value).action) {}

CausalLearningAgent::CausalLearningAgent(BeliefStore beliefs, const AgentContext& ctx,
                                         RealizationMode mode)
    : beliefs_(std::move(beliefs)), ctx_(ctx), mode_(mode) {}

int CausalLearningAgent::choose(RngStream& rng) {
  const CausalModel local = realize_model(beliefs_, mode_, rng);
  return best_action(local, ctx_.action_variable, ctx_.target, ctx_.desired_value).action;
}

void CausalLearningAgent::observe(int, const Outcome& outcome, double) {
  update(beliefs_, outcome);
}

QLearningAgent::QLearningAgent(const AgentContext& ctx, double learning_rate, double epsilon) {
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw Error("q_learning: learning rate must be in (0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error("q_learning: epsilon must be in [0, 1]");
  }
  table_.q.assign(static_cast<std::size_t>(ctx.action_states), 0.0);
  table_.learning_rate = learning_rate;
  table_.epsilon = epsilon;
}

int QLearningAgent::choose(RngStream& rng) {
  if (rng.uniform01() < table_.epsilon) {
    return rng.uniform_index(static_cast<int>(table_.q.size()));
  }
  return static_cast<int>(
      std::max_element(table_.q.begin(), table_.q.end()) - table_.q.begin());
}

void QLearningAgent::observe(int action, const Outcome&, double reward) {
  double& q = table_.q[static_cast<std::size_t>(action)];
  q += table_.learning_rate * (reward - q);
}

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::CausalKnown: return "causal_known";
    case AgentKind::CausalLearning: return "causal_learning";
    case AgentKind::QLearning: return "q_learning";
    case AgentKind::Random: return "random";
  }
  return "unknown";
}

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "causal_known") return AgentKind::CausalKnown;
  if (name == "causal_learning") return AgentKind::CausalLearning;
  if (name == "q_learning") return AgentKind::QLearning;
  if (name == "random") return AgentKind::Random;
  throw Error("unknown agent kind '" + std::string(name) + "'");
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const CausalModel& true_model,
                                  const AgentContext& ctx, RngStream& rng) {
  switch (spec.kind) {
    case AgentKind::CausalKnown:
      return std::make_unique<CausalKnownAgent>(true_model, ctx);
    case AgentKind::CausalLearning: {
      auto beliefs = init_beliefs(ModelStructure::of(true_model), spec.belief_init, rng,
                                  {ctx.action_variable});
      return std::make_unique<CausalLearningAgent>(std::move(beliefs), ctx, spec.realization);
    }
    case AgentKind::QLearning:
      return std::make_unique<QLearningAgent>(ctx, spec.learning_rate, spec.epsilon);
    case AgentKind::Random:
      return std::make_unique<RandomAgent>(ctx);
  }
  throw Error("make_agent: unknown agent kind");
}

}  // namespace cgambit
