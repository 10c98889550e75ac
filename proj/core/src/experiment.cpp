#include "cgambit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "cgambit/error.hpp"
#include "cgambit/model_io.hpp"

namespace cgambit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(path + ": " + message);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

std::string str_at(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

double num_at(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  return value.get<double>();
}

int int_at(const json& value, const std::string& path, int min_value) {
  if (!value.is_number_integer()) fail(path, "expected an integer");
  const auto v = value.get<std::int64_t>();
  if (v < min_value) fail(path, "must be at least " + std::to_string(min_value));
  if (v > std::numeric_limits<int>::max()) fail(path, "value too large");
  return static_cast<int>(v);
}

std::uint64_t seed_at(const json& value, const std::string& path) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v < 0) fail(path, "seeds must be non-negative integers");
    return static_cast<std::uint64_t>(v);
  }
  fail(path, "expected an integer seed");
}

BeliefInit parse_belief_init(const json& value, const std::string& path) {
  if (!value.is_object()) fail(path, "expected an object");
  reject_unknown_keys(value, {"strategy", "low", "high"}, path);
  const std::string strategy = str_at(member(value, "strategy", path), path + ".strategy");
  if (strategy == "uniform") {
    if (value.contains("low") || value.contains("high")) {
      fail(path, "'low'/'high' only apply to the random strategy");
    }
    return BeliefInit::uniform();
  }
  if (strategy != "random") {
    fail(path + ".strategy", "expected 'uniform' or 'random', got '" + strategy + "'");
  }
  BeliefInit init = BeliefInit::random(0.5, 2.0);
  if (value.contains("low")) init.lo = num_at(value["low"], path + ".low");
  if (value.contains("high")) init.hi = num_at(value["high"], path + ".high");
  if (!(init.lo > 0.0)) fail(path + ".low", "must be positive");
  if (!(init.hi >= init.lo)) fail(path + ".high", "must be at least 'low'");
  return init;
}

RealizationMode parse_realization(const json& value, const std::string& path) {
  const std::string mode = str_at(value, path);
  if (mode == "mean") return RealizationMode::Mean;
  if (mode == "sample") return RealizationMode::Sample;
  fail(path, "expected 'mean' or 'sample', got '" + mode + "'");
}

/// Shortest decimal round-trip form; integers come out bare ("0", "1").
std::string fmt_double(double v) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

std::string fmt_coord(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Tick positions with a 1/2/5 step chosen for about five intervals.
std::vector<double> linear_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag * 10.0;
  for (double m : {1.0, 2.0, 5.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // snap near-zero artifacts of the accumulation
    ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("top level: expected an object");
  reject_unknown_keys(root,
                      {"model_path", "action_variable", "target", "desired_value", "agents",
                       "rounds", "seeds", "sim_mode", "belief_init", "realization_mode",
                       "utility", "outputs"},
                      "top level");

  ExperimentConfig config;
  config.model_path = str_at(member(root, "model_path", "top level"), "model_path");
  config.action_variable =
      str_at(member(root, "action_variable", "top level"), "action_variable");
  config.target = str_at(member(root, "target", "top level"), "target");
  config.desired_value = str_at(member(root, "desired_value", "top level"), "desired_value");
  config.rounds = int_at(member(root, "rounds", "top level"), "rounds", 1);

  // Shared learner knobs; the per-agent entries carry only kind, label,
  // and Q-learning hyperparameters.
  BeliefInit belief_init;
  RealizationMode realization = RealizationMode::Sample;
  if (root.contains("belief_init")) {
    belief_init = parse_belief_init(root["belief_init"], "belief_init");
  }
  if (root.contains("realization_mode")) {
    realization = parse_realization(root["realization_mode"], "realization_mode");
  }

  const json& agents = member(root, "agents", "top level");
  if (!agents.is_array()) fail("agents", "expected an array");
  if (agents.empty()) fail("agents", "at least one agent required");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& a = agents[i];
    if (!a.is_object()) fail(path, "expected an object");
    reject_unknown_keys(a, {"kind", "name", "learning_rate", "epsilon"}, path);

    AgentSpec spec;
    const std::string kind = str_at(member(a, "kind", path), path + ".kind");
    try {
      spec.kind = agent_kind_from_string(kind);
    } catch (const Error& e) {
      fail(path + ".kind", e.what());
    }
    if (a.contains("name")) spec.name = str_at(a["name"], path + ".name");
    if (a.contains("learning_rate")) {
      spec.learning_rate = num_at(a["learning_rate"], path + ".learning_rate");
      if (!(spec.learning_rate > 0.0 && spec.learning_rate <= 1.0)) {
        fail(path + ".learning_rate", "must be in (0, 1]");
      }
    }
    if (a.contains("epsilon")) {
      spec.epsilon = num_at(a["epsilon"], path + ".epsilon");
      if (!(spec.epsilon >= 0.0 && spec.epsilon <= 1.0)) {
        fail(path + ".epsilon", "must be in [0, 1]");
      }
    }
    spec.belief_init = belief_init;
    spec.realization = realization;
    config.agents.push_back(std::move(spec));
  }

  const json& seeds = member(root, "seeds", "top level");
  if (seeds.is_array()) {
    if (seeds.empty()) fail("seeds", "at least one seed required");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const std::string path = "seeds[" + std::to_string(i) + "]";
      const std::uint64_t seed = seed_at(seeds[i], path);
      if (!seen.insert(seed).second) fail(path, "duplicate seed " + std::to_string(seed));
      config.seeds.push_back(seed);
    }
  } else if (seeds.is_object()) {
    reject_unknown_keys(seeds, {"count", "base_seed"}, "seeds");
    const int count = int_at(member(seeds, "count", "seeds"), "seeds.count", 1);
    const std::uint64_t base = seed_at(member(seeds, "base_seed", "seeds"), "seeds.base_seed");
    for (int i = 0; i < count; ++i) config.seeds.push_back(base + static_cast<std::uint64_t>(i));
  } else {
    fail("seeds", "expected an array of seeds or {count, base_seed}");
  }

  if (root.contains("sim_mode")) {
    const std::string mode = str_at(root["sim_mode"], "sim_mode");
    try {
      config.sim_mode = sim_mode_from_string(mode);
    } catch (const Error& e) {
      fail("sim_mode", e.what());
    }
  }

  if (root.contains("utility")) {
    const json& utility = root["utility"];
    if (!utility.is_array() || utility.empty()) {
      fail("utility", "expected a non-empty array of rewards per target state");
    }
    for (std::size_t i = 0; i < utility.size(); ++i) {
      const std::string path = "utility[" + std::to_string(i) + "]";
      const double u = num_at(utility[i], path);
      if (!std::isfinite(u)) fail(path, "must be finite");
      config.utility.push_back(u);
    }
  }

  if (root.contains("outputs")) {
    const json& outputs = root["outputs"];
    if (!outputs.is_object()) fail("outputs", "expected an object");
    reject_unknown_keys(outputs, {"rewards_csv", "summary_csv", "plot_svg"}, "outputs");
    if (outputs.contains("rewards_csv")) {
      config.outputs.rewards_csv = str_at(outputs["rewards_csv"], "outputs.rewards_csv");
    }
    if (outputs.contains("summary_csv")) {
      config.outputs.summary_csv = str_at(outputs["summary_csv"], "outputs.summary_csv");
    }
    if (outputs.contains("plot_svg")) {
      config.outputs.plot_svg = str_at(outputs["plot_svg"], "outputs.plot_svg");
    }
    for (const auto& [key, value] :
         {std::pair{"rewards_csv", &config.outputs.rewards_csv},
          std::pair{"summary_csv", &config.outputs.summary_csv},
          std::pair{"plot_svg", &config.outputs.plot_svg}}) {
      if (value->empty()) fail(std::string("outputs.") + key, "must be non-empty");
    }
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  try {
    return parse_experiment_config(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ResolvedExperiment resolve_experiment(const ExperimentConfig& config, const CausalModel& model) {
  const auto action = model.variable_index(config.action_variable);
  if (!action) throw Error("action_variable: unknown variable '" + config.action_variable + "'");
  const auto target = model.variable_index(config.target);
  if (!target) throw Error("target: unknown variable '" + config.target + "'");
  const auto desired = model.state_index(*target, config.desired_value);
  if (!desired) {
    throw Error("desired_value: unknown state '" + config.desired_value + "' of variable '" +
                config.target + "'");
  }

  ResolvedExperiment resolved;
  resolved.ctx = AgentContext::of(model, *action, *target, *desired);

  std::set<std::string> labels;
  for (std::size_t i = 0; i < config.agents.size(); ++i) {
    const std::string label = config.agents[i].label();
    if (!labels.insert(label).second) {
      throw Error("agents[" + std::to_string(i) + "]: duplicate agent label '" + label +
                  "'; set distinct names");
    }
  }

  if (!config.utility.empty() &&
      config.utility.size() != static_cast<std::size_t>(model.state_count(*target))) {
    throw Error("utility: expected " + std::to_string(model.state_count(*target)) +
                " entries (one per state of '" + config.target + "'), found " +
                std::to_string(config.utility.size()));
  }

  resolved.plan.agents = config.agents;
  resolved.plan.rounds = config.rounds;
  resolved.plan.seeds = config.seeds;
  resolved.plan.sim_mode = config.sim_mode;
  resolved.plan.utility = config.utility;
  return resolved;
}

std::string rewards_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "agent,seed,round,reward\n";
  for (const AgentSeries& series : result.agents) {
    const std::string label = series.spec.label();
    for (const RewardTrace& trace : series.traces) {
      for (std::size_t r = 0; r < trace.rewards.size(); ++r) {
        out << label << ',' << trace.seed << ',' << (r + 1) << ','
            << fmt_double(trace.rewards[r]) << '\n';
      }
    }
  }
  return out.str();
}

std::string summary_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "agent,round,mean_reward,cumulative_mean\n";
  for (const AgentSeries& series : result.agents) {
    const std::string label = series.spec.label();
    for (int r = 0; r < result.rounds; ++r) {
      out << label << ',' << (r + 1) << ',' << fmt_double(series.mean_reward[r]) << ','
          << fmt_double(series.cumulative_mean[r]) << '\n';
    }
  }
  return out.str();
}

std::string render_reward_svg(const ExperimentResult& result) {
  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                             "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr double kWidth = 800, kHeight = 500;
  constexpr double kLeft = 60, kRight = kWidth - 20, kTop = 20, kBottom = kHeight - 45;

  const double x_lo = 0.0;
  const double x_hi = static_cast<double>(std::max(result.rounds, 1));
  double y_lo = 0.0, y_hi = 1.0;
  for (const AgentSeries& series : result.agents) {
    for (double v : series.cumulative_mean) {
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;

  const auto px = [&](double t) { return kLeft + (t - x_lo) / (x_hi - x_lo) * (kRight - kLeft); };
  const auto py = [&](double v) {
    return kBottom - (v - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"500\" viewBox=\"0 0 800 500\">\n";
  out << "  <rect width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";
  out << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";

  // axes
  out << "    <line x1=\"" << fmt_coord(kLeft) << "\" y1=\"" << fmt_coord(kTop) << "\" x2=\""
      << fmt_coord(kLeft) << "\" y2=\"" << fmt_coord(kBottom)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "    <line x1=\"" << fmt_coord(kLeft) << "\" y1=\"" << fmt_coord(kBottom) << "\" x2=\""
      << fmt_coord(kRight) << "\" y2=\"" << fmt_coord(kBottom)
      << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  for (double t : linear_ticks(x_lo, x_hi)) {
    const std::string x = fmt_coord(px(t));
    out << "    <line x1=\"" << x << "\" y1=\"" << fmt_coord(kBottom) << "\" x2=\"" << x
        << "\" y2=\"" << fmt_coord(kBottom + 5) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "    <text x=\"" << x << "\" y=\"" << fmt_coord(kBottom + 18)
        << "\" text-anchor=\"middle\">" << fmt_double(t) << "</text>\n";
  }
  for (double v : linear_ticks(y_lo, y_hi)) {
    const std::string y = fmt_coord(py(v));
    out << "    <line x1=\"" << fmt_coord(kLeft - 5) << "\" y1=\"" << y << "\" x2=\""
        << fmt_coord(kLeft) << "\" y2=\"" << y << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "    <text x=\"" << fmt_coord(kLeft - 8) << "\" y=\"" << y
        << "\" text-anchor=\"end\" dominant-baseline=\"middle\">" << fmt_double(v)
        << "</text>\n";
  }
  out << "    <text x=\"" << fmt_coord((kLeft + kRight) / 2) << "\" y=\""
      << fmt_coord(kHeight - 8) << "\" text-anchor=\"middle\">round</text>\n";
  out << "    <text x=\"16\" y=\"" << fmt_coord((kTop + kBottom) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt_coord((kTop + kBottom) / 2) << ")\">cumulative mean reward</text>\n";

  // one curve per agent
  for (std::size_t a = 0; a < result.agents.size(); ++a) {
    const AgentSeries& series = result.agents[a];
    const char* color = kPalette[a % std::size(kPalette)];
    out << "    <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (int r = 0; r < result.rounds; ++r) {
      if (r > 0) out << ' ';
      out << fmt_coord(px(r + 1)) << ',' << fmt_coord(py(series.cumulative_mean[r]));
    }
    out << "\"/>\n";
  }

  // legend, top-right corner of the plot area
  for (std::size_t a = 0; a < result.agents.size(); ++a) {
    const char* color = kPalette[a % std::size(kPalette)];
    const double y = kTop + 14 + 18 * static_cast<double>(a);
    out << "    <line x1=\"" << fmt_coord(kRight - 170) << "\" y1=\"" << fmt_coord(y)
        << "\" x2=\"" << fmt_coord(kRight - 146) << "\" y2=\"" << fmt_coord(y) << "\" stroke=\""
        << color << "\" stroke-width=\"2\"/>\n";
    out << "    <text x=\"" << fmt_coord(kRight - 140) << "\" y=\"" << fmt_coord(y + 4) << "\">"
        << xml_escape(result.agents[a].spec.label()) << "</text>\n";
  }

  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace cgambit
