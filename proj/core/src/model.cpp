#include "cgambit/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace cgambit {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string join_names(const Dag& dag, const std::vector<int>& cycle,
                       const std::vector<VariableSpec>* variables) {
  std::ostringstream out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i > 0) out << " -> ";
    int node = cycle[i];
    if (variables && node >= 0 && node < static_cast<int>(variables->size())) {
      out << (*variables)[node].name;
    } else {
      out << node;
    }
  }
  (void)dag;
  return out.str();
}

}  // namespace

std::vector<int> Dag::parents_of(int node) const {
  std::vector<int> result;
  for (const auto& [p, c] : edges) {
    if (c == node) result.push_back(p);
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> Dag::children_of(int node) const {
  std::vector<int> result;
  for (const auto& [p, c] : edges) {
    if (p == node) result.push_back(c);
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool Dag::has_edge(int parent, int child) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(parent, child)) != edges.end();
}

std::optional<int> CausalModel::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> CausalModel::state_index(int variable, std::string_view state) const {
  const auto& states = variables[variable].states;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<int> CausalModel::parent_cards(int variable) const {
  std::vector<int> cards;
  cards.reserve(cpts[variable].parents.size());
  for (int p : cpts[variable].parents) cards.push_back(state_count(p));
  return cards;
}

void Assignment::set(int variable, int state) {
  auto it = std::lower_bound(entries.begin(), entries.end(), variable,
                             [](const auto& e, int v) { return e.first < v; });
  if (it != entries.end() && it->first == variable) {
    it->second = state;
  } else {
    entries.insert(it, {variable, state});
  }
}

bool Assignment::contains(int variable) const { return value(variable).has_value(); }

std::optional<int> Assignment::value(int variable) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), variable,
                             [](const auto& e, int v) { return e.first < v; });
  if (it != entries.end() && it->first == variable) return it->second;
  return std::nullopt;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::ostringstream out;
  for (const auto& v : violations) out << v.where << ": " << v.message << "\n";
  return out.str();
}

std::size_t config_count(std::span<const int> cards) {
  std::size_t count = 1;
  for (int c : cards) count *= static_cast<std::size_t>(c);
  return count;
}

std::size_t config_index(std::span<const int> config, std::span<const int> cards) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < config.size(); ++i) {
    index = index * static_cast<std::size_t>(cards[i]) + static_cast<std::size_t>(config[i]);
  }
  return index;
}

std::vector<int> config_from_index(std::size_t index, std::span<const int> cards) {
  std::vector<int> config(cards.size(), 0);
  for (std::size_t i = cards.size(); i-- > 0;) {
    config[i] = static_cast<int>(index % static_cast<std::size_t>(cards[i]));
    index /= static_cast<std::size_t>(cards[i]);
  }
  return config;
}

std::size_t cpt_row_for(const CausalModel& model, int variable, const Outcome& outcome) {
  const Cpt& cpt = model.cpts[variable];
  std::size_t index = 0;
  for (int p : cpt.parents) {
    index = index * static_cast<std::size_t>(model.state_count(p)) +
            static_cast<std::size_t>(outcome[p]);
  }
  return index;
}

std::optional<std::vector<int>> find_cycle(const Dag& dag) {
  const int n = dag.node_count;
  std::vector<std::vector<int>> children(n);
  for (const auto& [p, c] : dag.edges) children[p].push_back(c);

  // Iterative DFS with colors; a back edge closes a cycle.
  enum { White, Gray, Black };
  std::vector<int> color(n, White);
  std::vector<int> parent(n, -1);
  for (int root = 0; root < n; ++root) {
    if (color[root] != White) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = Gray;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < children[node].size()) {
        int child = children[node][next++];
        if (color[child] == Gray) {
          std::vector<int> cycle{child};
          for (int v = node; v != child; v = parent[v]) cycle.push_back(v);
          cycle.push_back(child);
          std::reverse(cycle.begin() + 1, cycle.end() - 1);
          return cycle;
        }
        if (color[child] == White) {
          color[child] = Gray;
          parent[child] = node;
          stack.push_back({child, 0});
        }
      } else {
        color[node] = Black;
        stack.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::vector<int> topological_order(const Dag& dag) {
  const int n = dag.node_count;
  std::vector<int> in_degree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (const auto& [p, c] : dag.edges) {
    ++in_degree[c];
    children[p].push_back(c);
  }

  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v) {
    if (in_degree[v] == 0) ready.push(v);
  }

  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c : children[v]) {
      if (--in_degree[c] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(order.size()) != n) {
    auto cycle = find_cycle(dag);
    throw Error("topological_order: cycle detected: " +
                join_names(dag, cycle ? *cycle : std::vector<int>{}, nullptr));
  }
  return order;
}

ValidationReport validate_model(const CausalModel& model) {
  ValidationReport report;
  auto add = [&](std::string where, std::string message) {
    report.violations.push_back({std::move(where), std::move(message)});
  };

  const int n = model.variable_count();

  std::set<std::string> seen_names;
  for (int v = 0; v < n; ++v) {
    const auto& spec = model.variables[v];
    std::string where = "variables[" + std::to_string(v) + "] '" + spec.name + "'";
    if (!seen_names.insert(spec.name).second) {
      add(where, "duplicate variable name");
    }
    if (spec.states.size() < 2) {
      add(where, "needs at least 2 states, has " + std::to_string(spec.states.size()));
    }
    std::set<std::string> seen_states;
    for (const auto& s : spec.states) {
      if (!seen_states.insert(s).second) add(where, "duplicate state name '" + s + "'");
    }
  }

  bool structure_ok = true;
  if (model.dag.node_count != n) {
    add("dag", "node_count " + std::to_string(model.dag.node_count) + " != variable count " +
                   std::to_string(n));
    structure_ok = false;
  }
  std::set<std::pair<int, int>> seen_edges;
  for (std::size_t i = 0; i < model.dag.edges.size(); ++i) {
    const auto& [p, c] = model.dag.edges[i];
    std::string where = "dag.edges[" + std::to_string(i) + "]";
    if (p < 0 || p >= n || c < 0 || c >= n) {
      add(where, "node index out of range");
      structure_ok = false;
      continue;
    }
    if (p == c) add(where, "self edge on '" + model.variables[p].name + "'");
    if (!seen_edges.insert({p, c}).second) {
      add(where, "duplicate edge " + model.variables[p].name + " -> " + model.variables[c].name);
    }
  }
  if (structure_ok) {
    if (auto cycle = find_cycle(model.dag)) {
      add("dag", "cycle: " + join_names(model.dag, *cycle, &model.variables));
      structure_ok = false;
    }
  }

  if (static_cast<int>(model.cpts.size()) != n) {
    add("cpts", "expected one CPT per variable (" + std::to_string(n) + "), found " +
                    std::to_string(model.cpts.size()));
    return report;
  }
  for (int v = 0; v < n; ++v) {
    const Cpt& cpt = model.cpts[v];
    std::string where = "cpt[" + model.variables[v].name + "]";
    if (cpt.variable != v) {
      add(where, "cpts[" + std::to_string(v) + "].variable is " + std::to_string(cpt.variable) +
                     ", expected " + std::to_string(v));
      continue;
    }
    bool parents_ok = true;
    std::set<int> seen_parents;
    for (int p : cpt.parents) {
      if (p < 0 || p >= n) {
        add(where, "parent index " + std::to_string(p) + " out of range");
        parents_ok = false;
      } else if (!seen_parents.insert(p).second) {
        add(where, "duplicate parent '" + model.variables[p].name + "'");
        parents_ok = false;
      }
    }
    if (!parents_ok) continue;
    if (structure_ok) {
      std::vector<int> declared(cpt.parents);
      std::sort(declared.begin(), declared.end());
      if (declared != model.dag.parents_of(v)) {
        add(where, "parent set differs from the DAG's in-neighbors");
        continue;
      }
    }

    const auto cards = model.parent_cards(v);
    const std::size_t expected_rows = config_count(cards);
    if (cpt.rows.size() != expected_rows) {
      add(where, "expected " + std::to_string(expected_rows) + " rows, found " +
                     std::to_string(cpt.rows.size()));
      continue;
    }
    const std::size_t arity = static_cast<std::size_t>(model.state_count(v));
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      std::string row_where = where + ".row[" + std::to_string(r) + "]";
      if (row.size() != arity) {
        add(row_where, "expected " + std::to_string(arity) + " probabilities, found " +
                           std::to_string(row.size()));
        continue;
      }
      double sum = 0.0;
      bool entries_ok = true;
      for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0)) {  // also rejects NaN
          add(row_where, "probability " + std::to_string(p) + " outside [0, 1]");
          entries_ok = false;
        }
        sum += p;
      }
      if (entries_ok && std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "row sums to " << sum << ", expected 1 within 1e-9";
        add(row_where, msg.str());
      }
    }
  }
  return report;
}

ModelStructure ModelStructure::of(const CausalModel& model) {
  ModelStructure s;
  s.variables = model.variables;
  s.dag = model.dag;
  s.parents.reserve(model.cpts.size());
  for (const auto& cpt : model.cpts) s.parents.push_back(cpt.parents);
  return s;
}

std::vector<int> ModelStructure::parent_cards(int variable) const {
  std::vector<int> cards;
  cards.reserve(parents[variable].size());
  for (int p : parents[variable]) cards.push_back(state_count(p));
  return cards;
}

std::size_t ModelStructure::row_count(int variable) const {
  const auto cards = parent_cards(variable);
  return config_count(cards);
}

std::size_t ModelStructure::row_for(int variable, const Outcome& outcome) const {
  std::size_t index = 0;
  for (int p : parents[variable]) {
    index = index * static_cast<std::size_t>(state_count(p)) +
            static_cast<std::size_t>(outcome[p]);
  }
  return index;
}

}  // namespace cgambit
