#pragma once

#include "cgambit/model.hpp"
#include "cgambit/rng.hpp"

namespace cgambit {

/// Probability question against a model: P(target = value | evidence,
/// do(intervention)). Evidence is observational; the intervention severs
/// the intervened variables from their parents first.
struct Query {
  int target = -1;
  int value = -1;
  Intervention intervention;
  Assignment evidence;
};

/// Product of the CPT entries selected by a complete outcome.
double joint_probability(const CausalModel& model, const Outcome& outcome);

/// Severs every intervened variable from its parents and replaces its
/// CPT with a point mass on the forced value. All other CPTs are
/// untouched, so the result's joint is the interventional distribution.
CausalModel truncate(const CausalModel& model, const Intervention& intervention);

/// Exact enumeration over all completions of the truncated model. With
/// evidence, the result is normalized by the evidence probability;
/// conditioning on a zero-probability event is an error.
double interventional_query(const CausalModel& model, const Query& query);

/// Most probable complete outcome of the truncated model. Ties break to
/// the lexicographically smallest state-index vector, variables taken in
/// topological order.
Outcome map_outcome(const CausalModel& model, const Intervention& intervention);

/// Ancestral sampling in topological order from the truncated model.
/// Intervened variables take their forced values without consuming
/// draws.
Outcome sample_outcome(const CausalModel& model, const Intervention& intervention,
                       RngStream& rng);

struct BestAction {
  int action = -1;
  double probability = 0.0;
};

/// Action state maximizing P(target = desired_value | do(action_variable
/// = a)); ties break to the lowest state index.
BestAction best_action(const CausalModel& model, int action_variable, int target,
                       int desired_value);

}  // namespace cgambit
