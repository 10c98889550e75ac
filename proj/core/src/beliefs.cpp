#include "cgambit/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

namespace cgambit {

namespace {

void check_complete(const ModelStructure& structure, const Outcome& outcome, const char* what) {
  const int n = structure.variable_count();
  if (static_cast<int>(outcome.states.size()) == n &&
      std::find(outcome.states.begin(), outcome.states.end(), Outcome::kUnassigned) ==
          outcome.states.end()) {
    for (int v = 0; v < n; ++v) {
      if (outcome[v] < 0 || outcome[v] >= structure.state_count(v)) {
        throw Error(std::string(what) + ": state index " + std::to_string(outcome[v]) +
                    " invalid for variable '" + structure.variables[v].name + "'");
      }
    }
    return;
  }
  std::ostringstream missing;
  for (int v = 0; v < n; ++v) {
    if (v >= static_cast<int>(outcome.states.size()) || outcome[v] == Outcome::kUnassigned) {
      if (missing.tellp() > 0) missing << ", ";
      missing << structure.variables[v].name;
    }
  }
  throw Error(std::string(what) + ": incomplete outcome, missing " + missing.str());
}

std::string fmt_alpha(double a) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", a);
  return buffer;
}

std::string json_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<double> DirichletRow::alpha_vector() const {
  std::vector<double> a(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) a[i] = alpha(i);
  return a;
}

double DirichletRow::alpha_sum() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) sum += alpha(i);
  return sum;
}

std::uint64_t DirichletRow::observations() const {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

std::vector<double> DirichletRow::mean() const {
  std::vector<double> m = alpha_vector();
  const double sum = alpha_sum();
  for (auto& v : m) v /= sum;
  return m;
}

const DirichletRow& BeliefStore::row(int variable, std::size_t row_index) const {
  if (variable < 0 || variable >= structure.variable_count()) {
    throw Error("beliefs: unknown variable index " + std::to_string(variable));
  }
  if (row_index >= rows[variable].size()) {
    throw Error("beliefs: row " + std::to_string(row_index) + " out of range for variable '" +
                structure.variables[variable].name + "'");
  }
  return rows[variable][row_index];
}

DirichletRow& BeliefStore::row(int variable, std::size_t row_index) {
  return const_cast<DirichletRow&>(std::as_const(*this).row(variable, row_index));
}

BeliefStore init_beliefs(const ModelStructure& structure, const BeliefInit& init, RngStream& rng,
                         const std::vector<int>& excluded_variables) {
  if (init.strategy == BeliefInitStrategy::Random) {
    if (!(init.lo > 0.0)) throw Error("init_beliefs: lower bound must be positive");
    if (!(init.hi >= init.lo)) throw Error("init_beliefs: upper bound below lower bound");
  }

  BeliefStore store;
  store.structure = structure;
  store.excluded.assign(static_cast<std::size_t>(structure.variable_count()), false);
  for (int v : excluded_variables) {
    if (v < 0 || v >= structure.variable_count()) {
      throw Error("init_beliefs: excluded variable index " + std::to_string(v) + " out of range");
    }
    store.excluded[v] = true;
  }

  store.rows.resize(static_cast<std::size_t>(structure.variable_count()));
  for (int v = 0; v < structure.variable_count(); ++v) {
    const std::size_t row_count = structure.row_count(v);
    const std::size_t arity = static_cast<std::size_t>(structure.state_count(v));
    store.rows[v].resize(row_count);
    for (auto& row : store.rows[v]) {
      row.prior.resize(arity);
      row.counts.assign(arity, 0);
      for (auto& a : row.prior) {
        a = init.strategy == BeliefInitStrategy::Uniform ? 1.0 : rng.uniform(init.lo, init.hi);
      }
    }
  }
  return store;
}

void update(BeliefStore& beliefs, const Outcome& outcome) {
  check_complete(beliefs.structure, outcome, "update");
  for (int v = 0; v < beliefs.structure.variable_count(); ++v) {
    if (beliefs.excluded[v]) continue;
    const std::size_t row = beliefs.structure.row_for(v, outcome);
    ++beliefs.rows[v][row].counts[static_cast<std::size_t>(outcome[v])];
  }
}

CausalModel realize_model(const BeliefStore& beliefs, RealizationMode mode, RngStream& rng) {
  const ModelStructure& s = beliefs.structure;
  CausalModel model;
  model.variables = s.variables;
  model.dag = s.dag;
  model.cpts.resize(static_cast<std::size_t>(s.variable_count()));
  for (int v = 0; v < s.variable_count(); ++v) {
    Cpt& cpt = model.cpts[v];
    cpt.variable = v;
    cpt.parents = s.parents[v];
    cpt.rows.reserve(beliefs.rows[v].size());
    for (const auto& row : beliefs.rows[v]) {
      if (beliefs.excluded[v]) {
        cpt.rows.emplace_back(row.prior.size(), 1.0 / static_cast<double>(row.prior.size()));
      } else if (mode == RealizationMode::Mean) {
        cpt.rows.push_back(row.mean());
      } else {
        cpt.rows.push_back(rng.dirichlet(row.alpha_vector()));
      }
    }
  }
  return model;
}

std::vector<double> posterior_mean(const BeliefStore& beliefs, int variable,
                                   std::size_t row_index) {
  return beliefs.row(variable, row_index).mean();
}

std::vector<double> posterior_mean(const BeliefStore& beliefs, int variable,
                                   std::span<const int> parent_config) {
  if (variable < 0 || variable >= beliefs.structure.variable_count()) {
    throw Error("posterior_mean: unknown variable index " + std::to_string(variable));
  }
  const auto cards = beliefs.structure.parent_cards(variable);
  if (parent_config.size() != cards.size()) {
    throw Error("posterior_mean: expected " + std::to_string(cards.size()) +
                " parent states, got " + std::to_string(parent_config.size()));
  }
  for (std::size_t i = 0; i < cards.size(); ++i) {
    if (parent_config[i] < 0 || parent_config[i] >= cards[i]) {
      throw Error("posterior_mean: parent state out of range");
    }
  }
  return posterior_mean(beliefs, variable, config_index(parent_config, cards));
}

TvReport tv_distance(const BeliefStore& beliefs, const CausalModel& truth,
                     std::uint64_t min_count) {
  const ModelStructure& s = beliefs.structure;
  if (ModelStructure::of(truth) != s) {
    throw Error("tv_distance: belief structure does not match the model");
  }

  TvReport report;
  double total = 0.0;
  for (int v = 0; v < s.variable_count(); ++v) {
    if (beliefs.excluded[v]) continue;
    for (std::size_t r = 0; r < beliefs.rows[v].size(); ++r) {
      const auto& row = beliefs.rows[v][r];
      const std::uint64_t obs = row.observations();
      if (obs < min_count) continue;
      const auto mean = row.mean();
      const auto& target = truth.cpts[v].rows[r];
      double tv = 0.0;
      for (std::size_t i = 0; i < mean.size(); ++i) tv += std::abs(mean[i] - target[i]);
      tv *= 0.5;
      report.rows.push_back({v, r, obs, tv});
      total += tv;
    }
  }
  report.mean = report.rows.empty() ? 0.0 : total / static_cast<double>(report.rows.size());
  return report;
}

std::string serialize_beliefs(const BeliefStore& beliefs) {
  const ModelStructure& s = beliefs.structure;
  std::ostringstream out;
  out << "{\n  \"variables\": [\n";
  for (std::size_t v = 0; v < s.variables.size(); ++v) {
    const auto& spec = s.variables[v];
    out << "    { \"name\": " << json_quote(spec.name) << ", \"states\": [";
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
      if (i > 0) out << ", ";
      out << json_quote(spec.states[i]);
    }
    out << "] }" << (v + 1 < s.variables.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"edges\": [";
  for (std::size_t i = 0; i < s.dag.edges.size(); ++i) {
    const auto& [p, c] = s.dag.edges[i];
    out << (i > 0 ? ",\n    " : "\n    ") << "[" << json_quote(s.variables[p].name) << ", "
        << json_quote(s.variables[c].name) << "]";
  }
  out << (s.dag.edges.empty() ? "],\n" : "\n  ],\n");
  out << "  \"excluded\": [";
  bool first = true;
  for (int v = 0; v < s.variable_count(); ++v) {
    if (!beliefs.excluded[v]) continue;
    if (!first) out << ", ";
    out << json_quote(s.variables[v].name);
    first = false;
  }
  out << "],\n  \"cpts\": [\n";
  for (int v = 0; v < s.variable_count(); ++v) {
    const auto cards = s.parent_cards(v);
    out << "    {\n      \"variable\": " << json_quote(s.variables[v].name) << ",\n";
    out << "      \"parents\": [";
    for (std::size_t p = 0; p < s.parents[v].size(); ++p) {
      if (p > 0) out << ", ";
      out << json_quote(s.variables[s.parents[v][p]].name);
    }
    out << "],\n      \"rows\": [\n";
    for (std::size_t r = 0; r < beliefs.rows[v].size(); ++r) {
      const auto config = config_from_index(r, cards);
      out << "        { \"given\": [";
      for (std::size_t g = 0; g < config.size(); ++g) {
        if (g > 0) out << ", ";
        out << json_quote(s.variables[s.parents[v][g]].states[config[g]]);
      }
      out << "], \"alpha\": [";
      const auto alpha = beliefs.rows[v][r].alpha_vector();
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i > 0) out << ", ";
        out << fmt_alpha(alpha[i]);
      }
      out << "] }" << (r + 1 < beliefs.rows[v].size() ? "," : "") << "\n";
    }
    out << "      ]\n    }" << (v + 1 < s.variable_count() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

}  // namespace cgambit
