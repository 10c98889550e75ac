#include "cgambit/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace cgambit {

using nlohmann::json;

namespace {

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

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

std::string fmt_probability(double p) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", p);
  return buffer;
}

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buffer[8];
          std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
          out += buffer;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

CausalModel parse_model_unchecked(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_byte(text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("top level: expected an object");
  reject_unknown_keys(root, {"variables", "edges", "cpts"}, "top level");

  CausalModel model;

  const json& vars = member(root, "variables", "top level");
  if (!vars.is_array()) fail("variables", "expected an array");
  std::map<std::string, int> var_index;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string path = "variables[" + std::to_string(i) + "]";
    const json& v = vars[i];
    if (!v.is_object()) fail(path, "expected an object");
    reject_unknown_keys(v, {"name", "states"}, path);
    VariableSpec spec;
    spec.name = str_at(member(v, "name", path), path + ".name");
    const json& states = member(v, "states", path);
    if (!states.is_array()) fail(path + ".states", "expected an array");
    std::map<std::string, int> state_index;
    for (std::size_t s = 0; s < states.size(); ++s) {
      std::string state = str_at(states[s], path + ".states[" + std::to_string(s) + "]");
      if (!state_index.emplace(state, static_cast<int>(s)).second) {
        fail(path + ".states", "duplicate state name '" + state + "'");
      }
      spec.states.push_back(std::move(state));
    }
    if (!var_index.emplace(spec.name, static_cast<int>(i)).second) {
      fail(path, "duplicate variable name '" + spec.name + "'");
    }
    model.variables.push_back(std::move(spec));
  }

  auto lookup_var = [&](const std::string& name, const std::string& path) -> int {
    auto it = var_index.find(name);
    if (it == var_index.end()) fail(path, "unknown variable '" + name + "'");
    return it->second;
  };
  auto lookup_state = [&](int variable, const std::string& name, const std::string& path) -> int {
    const auto& states = model.variables[variable].states;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == name) return static_cast<int>(i);
    }
    fail(path, "unknown state '" + name + "' of variable '" + model.variables[variable].name + "'");
  };

  model.dag.node_count = static_cast<int>(model.variables.size());
  const json& edges = member(root, "edges", "top level");
  if (!edges.is_array()) fail("edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2) fail(path, "expected a [parent, child] pair");
    int parent = lookup_var(str_at(e[0], path + "[0]"), path + "[0]");
    int child = lookup_var(str_at(e[1], path + "[1]"), path + "[1]");
    model.dag.edges.emplace_back(parent, child);
  }

  const json& cpts = member(root, "cpts", "top level");
  if (!cpts.is_array()) fail("cpts", "expected an array");
  std::vector<Cpt> parsed(model.variables.size());
  std::vector<bool> have_cpt(model.variables.size(), false);
  for (std::size_t i = 0; i < cpts.size(); ++i) {
    const std::string path = "cpts[" + std::to_string(i) + "]";
    const json& c = cpts[i];
    if (!c.is_object()) fail(path, "expected an object");
    reject_unknown_keys(c, {"variable", "parents", "rows"}, path);

    Cpt cpt;
    cpt.variable = lookup_var(str_at(member(c, "variable", path), path + ".variable"),
                              path + ".variable");
    if (have_cpt[cpt.variable]) {
      fail(path, "duplicate CPT for variable '" + model.variables[cpt.variable].name + "'");
    }

    const json& parents = member(c, "parents", path);
    if (!parents.is_array()) fail(path + ".parents", "expected an array");
    const auto in_neighbors = model.dag.parents_of(cpt.variable);
    for (std::size_t p = 0; p < parents.size(); ++p) {
      const std::string ppath = path + ".parents[" + std::to_string(p) + "]";
      int parent = lookup_var(str_at(parents[p], ppath), ppath);
      if (std::find(in_neighbors.begin(), in_neighbors.end(), parent) == in_neighbors.end()) {
        fail(ppath, "parent '" + model.variables[parent].name +
                        "' is not an edge into '" + model.variables[cpt.variable].name + "'");
      }
      if (std::find(cpt.parents.begin(), cpt.parents.end(), parent) != cpt.parents.end()) {
        fail(ppath, "duplicate parent '" + model.variables[parent].name + "'");
      }
      cpt.parents.push_back(parent);
    }
    if (cpt.parents.size() != in_neighbors.size()) {
      fail(path + ".parents", "expected " + std::to_string(in_neighbors.size()) +
                                  " parents per the edge list, found " +
                                  std::to_string(cpt.parents.size()));
    }

    std::vector<int> cards;
    for (int p : cpt.parents) cards.push_back(model.state_count(p));
    const std::size_t expected_rows = config_count(cards);
    const std::size_t arity = model.variables[cpt.variable].states.size();
    cpt.rows.assign(expected_rows, {});
    std::vector<bool> have_row(expected_rows, false);

    const json& rows = member(c, "rows", path);
    if (!rows.is_array()) fail(path + ".rows", "expected an array");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rpath = path + ".rows[" + std::to_string(r) + "]";
      const json& row = rows[r];
      if (!row.is_object()) fail(rpath, "expected an object");
      reject_unknown_keys(row, {"given", "p"}, rpath);

      const json& given = member(row, "given", rpath);
      if (!given.is_array() || given.size() != cpt.parents.size()) {
        fail(rpath + ".given", "expected " + std::to_string(cpt.parents.size()) +
                                   " parent states, found " + std::to_string(given.size()));
      }
      std::vector<int> config(cpt.parents.size());
      for (std::size_t g = 0; g < given.size(); ++g) {
        const std::string gpath = rpath + ".given[" + std::to_string(g) + "]";
        config[g] = lookup_state(cpt.parents[g], str_at(given[g], gpath), gpath);
      }
      const std::size_t index = config_index(config, cards);
      if (have_row[index]) fail(rpath, "duplicate row for this parent configuration");
      have_row[index] = true;

      const json& p = member(row, "p", rpath);
      if (!p.is_array() || p.size() != arity) {
        fail(rpath + ".p", "expected " + std::to_string(arity) + " probabilities, found " +
                               std::to_string(p.size()));
      }
      std::vector<double> probs(arity);
      for (std::size_t k = 0; k < arity; ++k) {
        probs[k] = num_at(p[k], rpath + ".p[" + std::to_string(k) + "]");
      }
      cpt.rows[index] = std::move(probs);
    }
    for (std::size_t r = 0; r < expected_rows; ++r) {
      if (!have_row[r]) {
        const auto config = config_from_index(r, cards);
        std::string desc;
        for (std::size_t g = 0; g < config.size(); ++g) {
          if (g > 0) desc += ", ";
          desc += model.variables[cpt.parents[g]].states[config[g]];
        }
        fail(path + ".rows", "missing row for parent configuration (" + desc + ")");
      }
    }

    have_cpt[cpt.variable] = true;
    const auto slot = static_cast<std::size_t>(cpt.variable);
    parsed[slot] = std::move(cpt);
  }
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    if (!have_cpt[v]) fail("cpts", "missing CPT for variable '" + model.variables[v].name + "'");
  }
  model.cpts = std::move(parsed);
  return model;
}

CausalModel parse_model(std::string_view text) {
  CausalModel model = parse_model_unchecked(text);
  ValidationReport report = validate_model(model);
  if (!report.ok()) throw ValidationError(std::move(report));
  return model;
}

std::string serialize_model(const CausalModel& model) {
  std::ostringstream out;
  out << "{\n  \"variables\": [\n";
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& spec = model.variables[v];
    out << "    { \"name\": \"" << json_escape(spec.name) << "\", \"states\": [";
    for (std::size_t s = 0; s < spec.states.size(); ++s) {
      if (s > 0) out << ", ";
      out << '"' << json_escape(spec.states[s]) << '"';
    }
    out << "] }" << (v + 1 < model.variables.size() ? "," : "") << "\n";
  }
  out << "  ],\n  \"edges\": [";
  for (std::size_t i = 0; i < model.dag.edges.size(); ++i) {
    const auto& [p, c] = model.dag.edges[i];
    out << (i > 0 ? ",\n    " : "\n    ") << "[\"" << json_escape(model.variables[p].name)
        << "\", \"" << json_escape(model.variables[c].name) << "\"]";
  }
  out << (model.dag.edges.empty() ? "],\n" : "\n  ],\n");
  out << "  \"cpts\": [\n";
  for (std::size_t v = 0; v < model.cpts.size(); ++v) {
    const Cpt& cpt = model.cpts[v];
    const auto cards = model.parent_cards(static_cast<int>(v));
    out << "    {\n      \"variable\": \"" << json_escape(model.variables[v].name) << "\",\n";
    out << "      \"parents\": [";
    for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
      if (p > 0) out << ", ";
      out << '"' << json_escape(model.variables[cpt.parents[p]].name) << '"';
    }
    out << "],\n      \"rows\": [\n";
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto config = config_from_index(r, cards);
      out << "        { \"given\": [";
      for (std::size_t g = 0; g < config.size(); ++g) {
        if (g > 0) out << ", ";
        out << '"' << json_escape(model.variables[cpt.parents[g]].states[config[g]]) << '"';
      }
      out << "], \"p\": [";
      for (std::size_t k = 0; k < cpt.rows[r].size(); ++k) {
        if (k > 0) out << ", ";
        out << fmt_probability(cpt.rows[r][k]);
      }
      out << "] }" << (r + 1 < cpt.rows.size() ? "," : "") << "\n";
    }
    out << "      ]\n    }" << (v + 1 < model.cpts.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

CausalModel load_model(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_model(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace cgambit
