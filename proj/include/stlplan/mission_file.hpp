#pragma once

#include <string>

#include "stlplan/planner.hpp"

namespace stlplan {

// A mission document: the planning problem plus solver settings. Sections:
// agents, environment, mission (builtin or formula), timing, bounds, solver.
struct MissionFile {
  MissionSpec spec;
  PlannerConfig config;
};

// Parses and validates a JSON mission document. Errors name the offending
// field by path ("solver.epsilon: ...").
MissionFile load_mission(const std::string& path);
MissionFile parse_mission(const std::string& json_text);

}  // namespace stlplan
