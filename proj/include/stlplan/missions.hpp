#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stlplan/stl_core.hpp"

namespace stlplan {

// Named regions of one planning scene. Poles are the ordered inspection
// volumes pole1..pole4 (empty when the scene has none).
struct Environment {
  Box workspace;
  std::vector<std::pair<std::string, Box>> goals;
  std::vector<std::pair<std::string, Box>> obstacles;
  std::vector<Box> poles;
  double min_separation = 0.5;  // m

  // Lookup table for resolve_regions: every goal/obstacle by name, the poles
  // as pole1..pole4, and the workspace as both "ws" and "workspace".
  RegionMap region_map() const;

  // Valid boxes, unique region names, goals and poles intersecting the
  // workspace, positive separation, pole count 0 or 4.
  void validate() const;
};

// Conjunction over unordered agent pairs of Always([0, T], sep >= min_sep);
// True for a single agent.
FormulaPtr pairwise_safety(const std::vector<std::string>& agents, double min_separation,
                           double T);

// Reach-and-avoid: per agent, eventually reach its assigned goal while always
// staying in the workspace and outside every obstacle; plus pairwise safety.
// Regions are resolved against env, so unknown names throw here.
FormulaPtr reach_avoid(const Environment& env,
                       const std::vector<std::pair<std::string, std::string>>& goal_assignments,
                       double T);

// Power-line inspection over one mission phase of length phase_time: all
// agents keep separation and stay in the workspace; the first half of the
// fleet visits pole1 and pole4, the second half holds pole2 until moving to
// pole3. The built formula looks beyond phase_time — see
// powerline_required_duration.
FormulaPtr powerline_inspection(const Environment& env, const std::vector<std::string>& agents,
                                double phase_time);

// Minimum trace duration (the formula horizon) for powerline_inspection.
double powerline_required_duration(double phase_time);

}  // namespace stlplan
