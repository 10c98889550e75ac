#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cgambit/error.hpp"
#include "cgambit/experiment.hpp"
#include "cgambit/game.hpp"
#include "cgambit/inference.hpp"
#include "cgambit/model_io.hpp"

namespace {

using namespace cgambit;

std::pair<std::string, std::string> split_binding(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error("expected VAR=STATE, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::pair<int, int> resolve_binding(const CausalModel& model, const std::string& text) {
  const auto [var, state] = split_binding(text);
  const auto v = model.variable_index(var);
  if (!v) throw Error("unknown variable '" + var + "'");
  const auto s = model.state_index(*v, state);
  if (!s) throw Error("unknown state '" + state + "' of variable '" + var + "'");
  return {*v, *s};
}

Assignment resolve_bindings(const CausalModel& model, const std::vector<std::string>& texts,
                            const char* what) {
  Assignment assignment;
  for (const auto& text : texts) {
    const auto [v, s] = resolve_binding(model, text);
    if (assignment.contains(v)) {
      throw Error(std::string(what) + " lists variable '" + model.variables[v].name +
                  "' more than once");
    }
    assignment.set(v, s);
  }
  return assignment;
}

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

int cmd_validate(const std::string& model_path) {
  CausalModel model;
  try {
    model = parse_model_unchecked(read_file(model_path));
  } catch (const ParseError& e) {
    throw ParseError(model_path + ": " + e.what());
  }
  const ValidationReport report = validate_model(model);
  if (report.ok()) {
    std::cout << "valid\n";
    return 0;
  }
  std::cout << report.to_string();
  return 1;
}

int cmd_query(const std::string& model_path, const std::vector<std::string>& dos,
              const std::vector<std::string>& givens, const std::string& target) {
  const CausalModel model = load_model(model_path);
  Query query;
  const auto [tv, ts] = resolve_binding(model, target);
  query.target = tv;
  query.value = ts;
  query.intervention = resolve_bindings(model, dos, "--do");
  query.evidence = resolve_bindings(model, givens, "--given");
  std::printf("%.6f\n", interventional_query(model, query));
  return 0;
}

int cmd_simulate(const std::string& model_path, const std::vector<std::string>& dos, int n,
                 std::uint64_t seed, const std::string& mode_name) {
  const CausalModel model = load_model(model_path);
  const Intervention intervention = resolve_bindings(model, dos, "--do");
  const SimMode mode = sim_mode_from_string(mode_name);

  RngStream rng(seed);
  std::string line;
  for (int i = 0; i < n; ++i) {
    const Outcome outcome = realize_outcome(model, intervention, mode, rng);
    line.clear();
    for (int v = 0; v < model.variable_count(); ++v) {
      if (v > 0) line += ',';
      line += model.variables[v].states[outcome[v]];
    }
    std::cout << line << '\n';
  }
  return 0;
}

std::string beliefs_dump(const ExperimentResult& result) {
  std::ostringstream out;
  out << "[";
  bool first = true;
  for (const AgentSeries& series : result.agents) {
    for (std::size_t i = 0; i < series.final_beliefs.size(); ++i) {
      out << (first ? "\n" : ",\n");
      first = false;
      std::string beliefs = serialize_beliefs(series.final_beliefs[i]);
      while (!beliefs.empty() && beliefs.back() == '\n') beliefs.pop_back();
      out << "  { \"agent\": \"" << json_escape(series.spec.label())
          << "\", \"seed\": " << result.seeds[i] << ", \"beliefs\": " << beliefs << " }";
    }
  }
  out << (first ? "]" : "\n]") << "\n";
  return out.str();
}

void write_output(const std::string& path, std::string_view content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
  }
  write_file(path, content);
}

int cmd_experiment(const std::string& config_path, bool plot, int jobs,
                   const std::string& dump_beliefs_path) {
  const ExperimentConfig config = load_experiment_config(config_path);

  // Paths inside the config resolve relative to the config file;
  // command-line paths resolve relative to the working directory.
  const std::filesystem::path base = std::filesystem::path(config_path).parent_path();
  const auto beside_config = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };

  const CausalModel model = load_model(beside_config(config.model_path));
  ResolvedExperiment resolved = resolve_experiment(config, model);
  resolved.plan.jobs = jobs;
  resolved.plan.collect_beliefs = !dump_beliefs_path.empty();

  const ExperimentResult result = run_experiment(model, resolved.ctx, resolved.plan);

  const std::string rewards_path = beside_config(config.outputs.rewards_csv);
  write_output(rewards_path, rewards_csv(result));
  std::cout << "wrote " << rewards_path << '\n';

  const std::string summary_path = beside_config(config.outputs.summary_csv);
  write_output(summary_path, summary_csv(result));
  std::cout << "wrote " << summary_path << '\n';

  if (plot) {
    const std::string svg_path = beside_config(config.outputs.plot_svg);
    write_output(svg_path, render_reward_svg(result));
    std::cout << "wrote " << svg_path << '\n';
  }
  if (!dump_beliefs_path.empty()) {
    write_output(dump_beliefs_path, beliefs_dump(result));
    std::cout << "wrote " << dump_beliefs_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete causal models: validation, interventional queries, simulation, and "
               "repeated-game experiments"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a model file and print a report");
  std::string v_model;
  validate->add_option("model", v_model, "model JSON file")->required();

  auto* query =
      app.add_subcommand("query", "Print P(target | do(...), evidence) with 6 decimals");
  std::string q_model, q_target;
  std::vector<std::string> q_do, q_given;
  query->add_option("model", q_model, "model JSON file")->required();
  query->add_option("--do", q_do, "intervention VAR=STATE (repeatable)")->type_size(1);
  query->add_option("--given", q_given, "evidence VAR=STATE (repeatable)")->type_size(1);
  query->add_option("--target", q_target, "target VAR=STATE")->required();

  auto* simulate = app.add_subcommand("simulate", "Print outcomes drawn from the model");
  std::string s_model, s_mode = "sample";
  std::vector<std::string> s_do;
  int s_n = 1;
  std::uint64_t s_seed = 0;
  simulate->add_option("model", s_model, "model JSON file")->required();
  simulate->add_option("--do", s_do, "intervention VAR=STATE (repeatable)")->type_size(1);
  simulate->add_option("-n,--n", s_n, "number of outcomes")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()).description("POSITIVE"));
  simulate->add_option("--seed", s_seed, "RNG seed");
  simulate->add_option("--mode", s_mode, "sample | map | hybrid");

  auto* experiment =
      app.add_subcommand("experiment", "Run a configured experiment and write CSV outputs");
  std::string e_config, e_dump;
  bool e_plot = false;
  int e_jobs = 1;
  experiment->add_option("config", e_config, "experiment config JSON file")->required();
  experiment->add_flag("--plot", e_plot, "also write the SVG reward curves");
  experiment->add_option("--jobs", e_jobs, "episodes to run in parallel")
      ->envname("CAUSAL_GAMBIT_JOBS")
      ->check(CLI::Range(1, std::numeric_limits<int>::max()).description("POSITIVE"));
  experiment->add_option("--dump-beliefs", e_dump,
                         "write final learner beliefs to this JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(v_model);
    if (query->parsed()) return cmd_query(q_model, q_do, q_given, q_target);
    if (simulate->parsed()) return cmd_simulate(s_model, s_do, s_n, s_seed, s_mode);
    if (experiment->parsed()) return cmd_experiment(e_config, e_plot, e_jobs, e_dump);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
