#pragma once

#include <string>

#include "stlplan/missions.hpp"
#include "stlplan/planner.hpp"

namespace stlplan {

enum class ExportFormat { Csv, Svg };

// Columns: t,agent,px,py,pz,vx,vy,vz,ax,ay,az — agent-major, time-minor,
// full-precision floats so a re-read reproduces the values bitwise.
void write_csv(const Trace& trace, const std::string& path);
Trace read_csv(const std::string& path);

// Top-down XY view: region rectangles plus one path per agent, viewBox fixed
// by the workspace.
void write_svg(const Trace& trace, const Environment& environment, const std::string& path);

void write_report(const PlanResult& result, const ValidationReport& validation,
                  const std::string& path);

// SVG export needs the environment for the rectangles and the viewBox.
void export_trajectories(const PlanResult& r, ExportFormat format, const std::string& path,
                         const Environment* environment = nullptr);

}  // namespace stlplan
