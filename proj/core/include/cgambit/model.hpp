#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgambit/error.hpp"

namespace cgambit {

/// A categorical variable: its name and the ordered list of state names.
/// State order is significant; the position of a state is its value.
struct VariableSpec {
  std::string name;
  std::vector<std::string> states;

  bool operator==(const VariableSpec&) const = default;
};

/// Directed graph over variable indices. Validity (acyclicity, no
/// duplicate or self edges) is checked by validate_model, not enforced
/// by construction.
struct Dag {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;  // (parent, child)

  std::vector<int> parents_of(int node) const;  // ascending
  std::vector<int> children_of(int node) const;
  bool has_edge(int parent, int child) const;

  bool operator==(const Dag&) const = default;
};

/// Conditional probability table of one variable. `parents` is the
/// declared parent order and defines row indexing: rows are laid out in
/// mixed-radix order with the last parent varying fastest.
struct Cpt {
  int variable = -1;
  std::vector<int> parents;
  std::vector<std::vector<double>> rows;

  bool operator==(const Cpt&) const = default;
};

struct CausalModel {
  std::vector<VariableSpec> variables;
  Dag dag;
  std::vector<Cpt> cpts;  // cpts[v].variable == v

  int variable_count() const { return static_cast<int>(variables.size()); }
  int state_count(int variable) const {
    return static_cast<int>(variables[variable].states.size());
  }
  std::optional<int> variable_index(std::string_view name) const;
  std::optional<int> state_index(int variable, std::string_view state) const;
  std::vector<int> parent_cards(int variable) const;

  bool operator==(const CausalModel&) const = default;
};

/// Partial assignment of states to variables, kept sorted by variable
/// index. A variable appears at most once.
struct Assignment {
  std::vector<std::pair<int, int>> entries;  // (variable, state)

  void set(int variable, int state);
  bool contains(int variable) const;
  std::optional<int> value(int variable) const;
  bool empty() const { return entries.empty(); }

  bool operator==(const Assignment&) const = default;
};

/// A do()-style forcing of variables to fixed values.
using Intervention = Assignment;

/// Complete assignment: one state per model variable. kUnassigned marks
/// holes; operations requiring completeness reject them.
struct Outcome {
  static constexpr int kUnassigned = -1;

  std::vector<int> states;

  Outcome() = default;
  explicit Outcome(int variable_count)
      : states(static_cast<std::size_t>(variable_count), kUnassigned) {}
  explicit Outcome(std::vector<int> s) : states(std::move(s)) {}

  int operator[](int variable) const { return states[variable]; }
  int& operator[](int variable) { return states[variable]; }

  bool operator==(const Outcome&) const = default;
};

struct Violation {
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant of a model and reports all
/// violations with their location. Violations are data, not failures.
ValidationReport validate_model(const CausalModel& model);

/// Kahn's algorithm; among ready nodes the lowest index is emitted
/// first, so the order is deterministic. Throws Error naming one cycle
/// if the graph is not acyclic.
std::vector<int> topological_order(const Dag& dag);

/// Returns one directed cycle as a node sequence whose first and last
/// entries coincide, or nullopt if the graph is acyclic.
std::optional<std::vector<int>> find_cycle(const Dag& dag);

// Mixed-radix indexing of parent configurations (last position fastest).
std::size_t config_count(std::span<const int> cards);
std::size_t config_index(std::span<const int> config, std::span<const int> cards);
std::vector<int> config_from_index(std::size_t index, std::span<const int> cards);

/// Row index of `outcome`'s parent configuration in variable's CPT.
std::size_t cpt_row_for(const CausalModel& model, int variable, const Outcome& outcome);

/// Graph and variable layout of a model without its probabilities: what
/// a structure-only agent is allowed to see.
struct ModelStructure {
  std::vector<VariableSpec> variables;
  Dag dag;
  std::vector<std::vector<int>> parents;  // declared parent order per variable

  static ModelStructure of(const CausalModel& model);

  int variable_count() const { return static_cast<int>(variables.size()); }
  int state_count(int variable) const {
    return static_cast<int>(variables[variable].states.size());
  }
  std::vector<int> parent_cards(int variable) const;
  std::size_t row_count(int variable) const;
  std::size_t row_for(int variable, const Outcome& outcome) const;

  bool operator==(const ModelStructure&) const = default;
};

}  // namespace cgambit
