#include "cgambit/inference.hpp"

#include <algorithm>
#include <sstream>

namespace cgambit {

namespace {

void check_variable(const CausalModel& model, int variable, const char* what) {
  if (variable < 0 || variable >= model.variable_count()) {
    throw Error(std::string(what) + ": unknown variable index " + std::to_string(variable));
  }
}

void check_assignment(const CausalModel& model, const Assignment& assignment, const char* what) {
  for (const auto& [variable, state] : assignment.entries) {
    check_variable(model, variable, what);
    if (state < 0 || state >= model.state_count(variable)) {
      throw Error(std::string(what) + ": state index " + std::to_string(state) +
                  " invalid for variable '" + model.variables[variable].name + "'");
    }
  }
}

// Cycles `slots` (variable indices) through their state spaces, last
// slot fastest, invoking f once per configuration. `outcome` holds the
// current configuration; other positions keep their preset values.
template <typename F>
void for_each_completion(const CausalModel& model, Outcome& outcome,
                         std::span<const int> slots, F&& f) {
  for (int v : slots) outcome[v] = 0;
  for (;;) {
    f(outcome);
    std::size_t i = slots.size();
    for (; i-- > 0;) {
      int v = slots[i];
      if (++outcome[v] < model.state_count(v)) break;
      outcome[v] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return;
  }
}

std::vector<int> free_variables(const CausalModel& model, const Intervention& intervention,
                                std::span<const int> order) {
  std::vector<int> free;
  free.reserve(order.size());
  for (int v : order) {
    if (!intervention.contains(v)) free.push_back(v);
  }
  return free;
}

}  // namespace

double joint_probability(const CausalModel& model, const Outcome& outcome) {
  const int n = model.variable_count();
  if (static_cast<int>(outcome.states.size()) != n ||
      std::find(outcome.states.begin(), outcome.states.end(), Outcome::kUnassigned) !=
          outcome.states.end()) {
    std::ostringstream missing;
    for (int v = 0; v < n; ++v) {
      if (v >= static_cast<int>(outcome.states.size()) || outcome[v] == Outcome::kUnassigned) {
        if (missing.tellp() > 0) missing << ", ";
        missing << model.variables[v].name;
      }
    }
    throw Error("joint_probability: incomplete outcome, missing " + missing.str());
  }
  double p = 1.0;
  for (int v = 0; v < n; ++v) {
    const int state = outcome[v];
    if (state < 0 || state >= model.state_count(v)) {
      throw Error("joint_probability: state index " + std::to_string(state) +
                  " invalid for variable '" + model.variables[v].name + "'");
    }
    p *= model.cpts[v].rows[cpt_row_for(model, v, outcome)][state];
  }
  return p;
}

CausalModel truncate(const CausalModel& model, const Intervention& intervention) {
  check_assignment(model, intervention, "truncate");
  CausalModel result = model;
  for (const auto& [variable, state] : intervention.entries) {
    Cpt& cpt = result.cpts[variable];
    cpt.parents.clear();
    std::vector<double> point(static_cast<std::size_t>(model.state_count(variable)), 0.0);
    point[static_cast<std::size_t>(state)] = 1.0;
    cpt.rows.assign(1, std::move(point));
    std::erase_if(result.dag.edges,
                  [v = variable](const std::pair<int, int>& e) { return e.second == v; });
  }
  return result;
}

double interventional_query(const CausalModel& model, const Query& query) {
  check_variable(model, query.target, "query target");
  if (query.value < 0 || query.value >= model.state_count(query.target)) {
    throw Error("query value: state index " + std::to_string(query.value) +
                " invalid for variable '" + model.variables[query.target].name + "'");
  }
  check_assignment(model, query.intervention, "intervention");
  check_assignment(model, query.evidence, "evidence");
  for (const auto& [variable, state] : query.evidence.entries) {
    if (query.intervention.contains(variable)) {
      throw Error("evidence and intervention overlap on variable '" +
                  model.variables[variable].name + "'");
    }
  }

  const CausalModel truncated = truncate(model, query.intervention);
  Outcome outcome(model.variable_count());
  for (const auto& [variable, state] : query.intervention.entries) outcome[variable] = state;
  std::vector<int> order(static_cast<std::size_t>(model.variable_count()));
  for (int v = 0; v < model.variable_count(); ++v) order[v] = v;
  const std::vector<int> free = free_variables(model, query.intervention, order);

  double matching = 0.0;
  double evidence_mass = 0.0;
  for_each_completion(truncated, outcome, free, [&](const Outcome& o) {
    for (const auto& [variable, state] : query.evidence.entries) {
      if (o[variable] != state) return;
    }
    const double w = joint_probability(truncated, o);
    evidence_mass += w;
    if (o[query.target] == query.value) matching += w;
  });

  if (query.evidence.empty()) return matching;
  if (evidence_mass <= 0.0) throw Error("conditioning on null event");
  return matching / evidence_mass;
}

Outcome map_outcome(const CausalModel& model, const Intervention& intervention) {
  const CausalModel truncated = truncate(model, intervention);
  const std::vector<int> order = topological_order(truncated.dag);
  const std::vector<int> free = free_variables(model, intervention, order);

  Outcome outcome(model.variable_count());
  for (const auto& [variable, state] : intervention.entries) outcome[variable] = state;

  // Enumeration follows topological order with the first variable most
  // significant, so the first strict maximum is the lexicographically
  // smallest maximizer.
  Outcome best;
  double best_p = -1.0;
  for_each_completion(truncated, outcome, free, [&](const Outcome& o) {
    const double p = joint_probability(truncated, o);
    if (p > best_p) {
      best_p = p;
      best = o;
    }
  });
  return best;
}

Outcome sample_outcome(const CausalModel& model, const Intervention& intervention,
                       RngStream& rng) {
  const CausalModel truncated = truncate(model, intervention);
  const std::vector<int> order = topological_order(truncated.dag);

  Outcome outcome(model.variable_count());
  for (int v : order) {
    if (auto forced = intervention.value(v)) {
      outcome[v] = *forced;
      continue;
    }
    const auto& rows = truncated.cpts[v].rows;
    outcome[v] = rng.categorical(rows[cpt_row_for(truncated, v, outcome)]);
  }
  return outcome;
}

BestAction best_action(const CausalModel& model, int action_variable, int target,
                       int desired_value) {
  check_variable(model, action_variable, "action variable");
  check_variable(model, target, "target");
  if (action_variable == target) throw Error("best_action: action variable equals target");
  if (desired_value < 0 || desired_value >= model.state_count(target)) {
    throw Error("best_action: desired value invalid for target '" +
                model.variables[target].name + "'");
  }

  BestAction best;
  for (int a = 0; a < model.state_count(action_variable); ++a) {
    Query q;
    q.target = target;
    q.value = desired_value;
    q.intervention.set(action_variable, a);
    const double p = interventional_query(model, q);
    if (p > best.probability || best.action < 0) {
      best.action = a;
      best.probability = p;
    }
  }
  return best;
}

}  // namespace cgambit
