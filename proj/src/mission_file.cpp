#include "stlplan/mission_file.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace stlplan {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw MissionFileError(path + ": " + message);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const ojson* find(const ojson& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &it.value();
}

const ojson& require(const ojson& obj, const char* key, const std::string& path) {
  const ojson* v = find(obj, key);
  if (!v) fail(join(path, key), "required field is missing");
  return *v;
}

void check_keys(const ojson& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(join(path, it.key()), "unknown field");
  }
}

const ojson& as_object(const ojson& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

const ojson& as_array(const ojson& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

double as_number(const ojson& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t as_seed(const ojson& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected a nonnegative integer");
  if (!j.is_number_unsigned() && j.get<std::int64_t>() < 0) {
    fail(path, "expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

std::string as_string(const ojson& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Eigen::Vector3d as_vec3(const ojson& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an array of three numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = as_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Box as_box(const ojson& j, const std::string& path) {
  as_object(j, path);
  check_keys(j, path, {"min", "max"});
  Box b;
  b.lo = as_vec3(require(j, "min", path), join(path, "min"));
  b.hi = as_vec3(require(j, "max", path), join(path, "max"));
  if (!b.valid()) fail(path, "box needs min strictly below max on every axis");
  return b;
}

std::vector<AgentSpec> load_agents(const ojson& doc) {
  const ojson& arr = as_array(require(doc, "agents", ""), "agents");
  if (arr.empty()) fail("agents", "at least one agent is required");
  std::vector<AgentSpec> agents;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const ojson& a = as_object(arr[i], path);
    check_keys(a, path, {"name", "x0"});
    AgentSpec spec;
    spec.name = as_string(require(a, "name", path), join(path, "name"));
    const ojson& x0 = as_object(require(a, "x0", path), join(path, "x0"));
    check_keys(x0, join(path, "x0"), {"p", "v", "a"});
    spec.start.p = as_vec3(require(x0, "p", join(path, "x0")), join(path, "x0.p"));
    if (const ojson* v = find(x0, "v")) spec.start.v = as_vec3(*v, join(path, "x0.v"));
    if (const ojson* w = find(x0, "a")) spec.start.a = as_vec3(*w, join(path, "x0.a"));
    agents.push_back(std::move(spec));
  }
  return agents;
}

std::vector<std::pair<std::string, Box>> load_named_boxes(const ojson& j,
                                                          const std::string& path) {
  as_object(j, path);
  std::vector<std::pair<std::string, Box>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace_back(it.key(), as_box(it.value(), join(path, it.key())));
  }
  return out;
}

Environment load_environment(const ojson& doc) {
  const ojson& env = as_object(require(doc, "environment", ""), "environment");
  check_keys(env, "environment", {"workspace", "goals", "obstacles", "poles", "delta_min"});
  Environment out;
  out.workspace = as_box(require(env, "workspace", "environment"), "environment.workspace");
  if (const ojson* goals = find(env, "goals")) {
    out.goals = load_named_boxes(*goals, "environment.goals");
  }
  if (const ojson* obstacles = find(env, "obstacles")) {
    out.obstacles = load_named_boxes(*obstacles, "environment.obstacles");
  }
  if (const ojson* poles = find(env, "poles")) {
    const ojson& arr = as_array(*poles, "environment.poles");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.poles.push_back(as_box(arr[i], "environment.poles[" + std::to_string(i) + "]"));
    }
  }
  if (const ojson* d = find(env, "delta_min")) {
    out.min_separation = as_number(*d, "environment.delta_min");
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> goal_assignments(
    const ojson* assignments, const std::vector<AgentSpec>& agents, const Environment& env) {
  std::set<std::string> goal_names;
  for (const auto& [name, box] : env.goals) goal_names.insert(name);

  std::vector<std::pair<std::string, std::string>> out;
  if (assignments) {
    const ojson& obj = as_object(*assignments, "mission.assignments");
    std::set<std::string> agent_names;
    for (const auto& a : agents) agent_names.insert(a.name);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const std::string path = join("mission.assignments", it.key());
      if (!agent_names.count(it.key())) fail(path, "unknown agent '" + it.key() + "'");
      const std::string goal = as_string(it.value(), path);
      if (!goal_names.count(goal)) fail(path, "unknown goal '" + goal + "'");
      out.emplace_back(it.key(), goal);
    }
    for (const auto& a : agents) {
      bool found = false;
      for (const auto& [agent, goal] : out) found = found || agent == a.name;
      if (!found) fail("mission.assignments", "agent '" + a.name + "' has no goal");
    }
    return out;
  }

  // No explicit assignments: a single goal serves every agent; otherwise the
  // goal list must match the agent list one-to-one, in order.
  if (env.goals.size() == 1) {
    for (const auto& a : agents) out.emplace_back(a.name, env.goals.front().first);
  } else if (env.goals.size() == agents.size()) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      out.emplace_back(agents[i].name, env.goals[i].first);
    }
  } else {
    fail("mission.assignments",
         "required: " + std::to_string(env.goals.size()) + " goals cannot be matched to " +
             std::to_string(agents.size()) + " agents");
  }
  return out;
}

FormulaPtr load_formula(const ojson& doc, const std::vector<AgentSpec>& agents,
                        const Environment& env, double T) {
  const ojson& mission = as_object(require(doc, "mission", ""), "mission");
  check_keys(mission, "mission", {"builtin", "formula", "assignments", "phase_time"});
  const ojson* builtin = find(mission, "builtin");
  const ojson* formula = find(mission, "formula");
  if (!!builtin == !!formula) {
    fail("mission", "exactly one of 'builtin' and 'formula' is required");
  }

  if (formula) {
    if (find(mission, "assignments")) fail("mission.assignments", "only valid with a builtin");
    if (find(mission, "phase_time")) fail("mission.phase_time", "only valid with a builtin");
    const std::string text = as_string(*formula, "mission.formula");
    FormulaPtr f;
    try {
      f = parse_formula(text);
    } catch (const ParseError& e) {
      fail("mission.formula", e.what());
    }
    return resolve_regions(f, env.region_map());
  }

  const std::string kind = as_string(*builtin, "mission.builtin");
  if (kind == "reach_avoid") {
    if (find(mission, "phase_time")) fail("mission.phase_time", "only valid with powerline");
    if (env.goals.empty()) fail("environment.goals", "reach_avoid needs at least one goal");
    return reach_avoid(env, goal_assignments(find(mission, "assignments"), agents, env), T);
  }
  if (kind == "powerline") {
    if (find(mission, "assignments")) fail("mission.assignments", "only valid with reach_avoid");
    double phase = T * (2.0 / 3.0);
    if (const ojson* p = find(mission, "phase_time")) {
      phase = as_number(*p, "mission.phase_time");
      if (!(phase > 0.0)) fail("mission.phase_time", "must be positive");
    }
    std::vector<std::string> names;
    for (const auto& a : agents) names.push_back(a.name);
    return powerline_inspection(env, names, phase);
  }
  fail("mission.builtin", "unknown builtin '" + kind + "' (expected reach_avoid or powerline)");
}

MissionFile load_document(const ojson& doc) {
  as_object(doc, "document");
  check_keys(doc, "", {"agents", "environment", "mission", "timing", "bounds", "solver"});

  MissionFile out;
  out.spec.agents = load_agents(doc);
  out.spec.environment = load_environment(doc);

  if (const ojson* timing = find(doc, "timing")) {
    as_object(*timing, "timing");
    check_keys(*timing, "timing", {"T", "Ts", "knots"});
    if (const ojson* t = find(*timing, "T")) out.spec.T = as_number(*t, "timing.T");
    if (const ojson* ts = find(*timing, "Ts")) out.spec.Ts = as_number(*ts, "timing.Ts");
    if (const ojson* m = find(*timing, "knots")) out.spec.knots = as_int(*m, "timing.knots");
  }
  if (const ojson* bounds = find(doc, "bounds")) {
    as_object(*bounds, "bounds");
    check_keys(*bounds, "bounds", {"vmax", "amax"});
    if (const ojson* v = find(*bounds, "vmax")) {
      out.spec.bounds.vmax = as_number(*v, "bounds.vmax");
    }
    if (const ojson* a = find(*bounds, "amax")) {
      out.spec.bounds.amax = as_number(*a, "bounds.amax");
    }
  }
  if (const ojson* solver = find(doc, "solver")) {
    as_object(*solver, "solver");
    check_keys(*solver, "solver",
               {"epsilon", "restarts", "max_iters", "seed", "temperature", "lambda",
                "time_budget_s"});
    if (const ojson* e = find(*solver, "epsilon")) {
      out.spec.epsilon = as_number(*e, "solver.epsilon");
    }
    if (const ojson* r = find(*solver, "restarts")) {
      out.config.restarts = as_int(*r, "solver.restarts");
    }
    if (const ojson* m = find(*solver, "max_iters")) {
      out.config.max_iterations = as_int(*m, "solver.max_iters");
    }
    if (const ojson* s = find(*solver, "seed")) {
      out.config.seed = as_seed(*s, "solver.seed");
    }
    if (const ojson* k = find(*solver, "temperature")) {
      const double temp = as_number(*k, "solver.temperature");
      if (!(temp > 0.0)) fail("solver.temperature", "must be positive");
      out.config.schedule = {{1.0, temp}};
      out.config.report_temperature = temp;
    }
    if (const ojson* l = find(*solver, "lambda")) {
      out.config.penalty_weight = as_number(*l, "solver.lambda");
    }
    if (const ojson* b = find(*solver, "time_budget_s")) {
      out.config.time_budget_s = as_number(*b, "solver.time_budget_s");
    }
  }

  out.spec.formula = load_formula(doc, out.spec.agents, out.spec.environment, out.spec.T);
  out.spec.validate();
  return out;
}

}  // namespace

MissionFile parse_mission(const std::string& json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const ojson::parse_error& e) {
    throw MissionFileError(std::string("not valid JSON: ") + e.what());
  }
  return load_document(doc);
}

MissionFile load_mission(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissionFileError("cannot open mission file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mission(buffer.str());
}

}  // namespace stlplan
