#include "stlplan/missions.hpp"

#include <cmath>
#include <set>

namespace stlplan {

namespace {

bool boxes_intersect(const Box& a, const Box& b) {
  return (a.lo.array() < b.hi.array()).all() && (b.lo.array() < a.hi.array()).all();
}

void check_window_length(double T) {
  if (!std::isfinite(T) || T <= 0.0) {
    throw InvalidSpecError("mission window length must be positive");
  }
}

void unique_agents(const std::vector<std::string>& agents) {
  std::set<std::string> seen;
  for (const auto& name : agents) {
    if (name.empty()) throw InvalidSpecError("agent names must be nonempty");
    if (!seen.insert(name).second) throw InvalidSpecError("duplicate agent '" + name + "'");
  }
}

}  // namespace

RegionMap Environment::region_map() const {
  RegionMap map;
  auto put = [&map](const std::string& name, const Box& box) {
    if (!map.emplace(name, box).second) {
      throw InvalidSpecError("duplicate region name '" + name + "'");
    }
  };
  map.emplace("ws", workspace);
  map.emplace("workspace", workspace);
  for (const auto& [name, box] : goals) put(name, box);
  for (const auto& [name, box] : obstacles) put(name, box);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    put("pole" + std::to_string(i + 1), poles[i]);
  }
  return map;
}

void Environment::validate() const {
  validate_box(workspace, "workspace");
  for (const auto& [name, box] : goals) {
    validate_box(box, "goal '" + name + "'");
    if (!boxes_intersect(box, workspace)) {
      throw InvalidSpecError("goal '" + name + "' does not intersect the workspace");
    }
  }
  for (const auto& [name, box] : obstacles) {
    validate_box(box, "obstacle '" + name + "'");
  }
  if (!poles.empty() && poles.size() != 4) {
    throw InvalidSpecError("scene needs exactly 4 poles, got " + std::to_string(poles.size()));
  }
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const std::string name = "pole" + std::to_string(i + 1);
    validate_box(poles[i], name);
    if (!boxes_intersect(poles[i], workspace)) {
      throw InvalidSpecError(name + " does not intersect the workspace");
    }
  }
  if (!std::isfinite(min_separation) || min_separation <= 0.0) {
    throw InvalidSpecError("minimum separation must be positive");
  }
  region_map();
}

FormulaPtr pairwise_safety(const std::vector<std::string>& agents, double min_separation,
                           double T) {
  check_window_length(T);
  if (agents.empty()) throw InvalidSpecError("pairwise safety needs at least one agent");
  unique_agents(agents);
  if (!std::isfinite(min_separation) || min_separation <= 0.0) {
    throw InvalidSpecError("minimum separation must be positive");
  }
  std::vector<FormulaPtr> terms;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      terms.push_back(f_always(Interval(0.0, T),
                               f_pred(Separation{agents[i], agents[j], min_separation})));
    }
  }
  if (terms.empty()) return f_true();
  return f_and(std::move(terms));
}

FormulaPtr reach_avoid(const Environment& env,
                       const std::vector<std::pair<std::string, std::string>>& goal_assignments,
                       double T) {
  check_window_length(T);
  env.validate();
  if (goal_assignments.empty()) {
    throw InvalidSpecError("reach-avoid needs at least one agent");
  }
  std::vector<std::string> agents;
  agents.reserve(goal_assignments.size());
  for (const auto& [agent, goal] : goal_assignments) {
    agents.push_back(agent);
    (void)goal;
  }
  unique_agents(agents);

  const Interval window(0.0, T);
  std::vector<FormulaPtr> blocks;
  for (const auto& [agent, goal] : goal_assignments) {
    std::vector<FormulaPtr> terms;
    terms.push_back(f_eventually(window, f_pred(InsideBox{agent, goal, std::nullopt})));
    terms.push_back(f_always(window, f_pred(InsideBox{agent, "ws", std::nullopt})));
    for (const auto& [obs_name, obs_box] : env.obstacles) {
      (void)obs_box;
      terms.push_back(f_always(window, f_pred(OutsideBox{agent, obs_name, std::nullopt})));
    }
    blocks.push_back(f_and(std::move(terms)));
  }
  if (agents.size() > 1) {
    blocks.push_back(pairwise_safety(agents, env.min_separation, T));
  }
  return resolve_regions(f_and(std::move(blocks)), env.region_map());
}

FormulaPtr powerline_inspection(const Environment& env, const std::vector<std::string>& agents,
                                double phase_time) {
  check_window_length(phase_time);
  env.validate();
  if (env.poles.size() != 4) {
    throw InvalidSpecError("power-line inspection needs 4 poles, got " +
                           std::to_string(env.poles.size()));
  }
  if (agents.size() < 2 || agents.size() % 2 != 0) {
    throw InvalidSpecError("power-line inspection needs an even number of agents (>= 2), got " +
                           std::to_string(agents.size()));
  }
  unique_agents(agents);

  const double T = phase_time;
  const Interval phase(0.0, T);
  const Interval half(0.0, T / 2.0);
  const std::size_t group = agents.size() / 2;

  auto in_region = [](const std::string& agent, const std::string& region) {
    return f_pred(InsideBox{agent, region, std::nullopt});
  };

  std::vector<FormulaPtr> blocks;
  // Every agent keeps its separation pairs (deduplicated: each pair appears
  // once, at its lower-indexed agent) and stays in the workspace.
  for (std::size_t i = 0; i < agents.size(); ++i) {
    std::vector<FormulaPtr> terms;
    for (std::size_t j = i + 1; j < agents.size(); ++j) {
      terms.push_back(f_pred(Separation{agents[i], agents[j], env.min_separation}));
    }
    terms.push_back(in_region(agents[i], "ws"));
    blocks.push_back(f_always(phase, f_and(std::move(terms))));
  }

  std::vector<FormulaPtr> visit_terms;
  for (std::size_t i = 0; i < group; ++i) {
    visit_terms.push_back(f_eventually(half, in_region(agents[i], "pole1")));
    visit_terms.push_back(f_eventually(half, in_region(agents[i], "pole4")));
  }
  std::vector<FormulaPtr> hold_terms;
  std::vector<FormulaPtr> then_terms;
  for (std::size_t i = group; i < agents.size(); ++i) {
    hold_terms.push_back(in_region(agents[i], "pole2"));
    then_terms.push_back(in_region(agents[i], "pole3"));
  }
  const FormulaPtr mission =
      f_and({f_and(std::move(visit_terms)),
             f_until(half, f_and(std::move(hold_terms)), f_and(std::move(then_terms)))});
  blocks.push_back(f_eventually(phase, mission));

  return resolve_regions(f_and(std::move(blocks)), env.region_map());
}

double powerline_required_duration(double phase_time) {
  check_window_length(phase_time);
  return phase_time + phase_time / 2.0;
}

}  // namespace stlplan
