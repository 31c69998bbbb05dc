#include "stlplan/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <ostream>
#include <set>

namespace stlplan {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int validate_trajectory(const MissionFile& mission, const std::string& csv_path,
                        std::ostream& out) {
  const MissionSpec& spec = mission.spec;
  const Trace trace = read_csv(csv_path);
  std::set<std::string> have(trace.agent_names.begin(), trace.agent_names.end());
  for (const auto& a : spec.agents) {
    if (!have.count(a.name)) throw Error("trajectory has no agent '" + a.name + "'");
  }
  if (trace.agents.size() != spec.agents.size()) {
    throw Error("trajectory has agents the mission does not");
  }
  if (trace.sample_count() != spec.sample_count() ||
      std::abs(trace.sampling_period - spec.Ts) > 1e-9) {
    throw Error("trajectory sampling grid does not match the mission");
  }

  const double rho = robustness(spec.formula, trace, 0);
  const bool satisfied = boolean_satisfaction(spec.formula, trace, 0);
  double min_pairwise = std::numeric_limits<double>::infinity();
  double max_speed = 0.0;
  double max_accel = 0.0;
  for (std::size_t a = 0; a < trace.agents.size(); ++a) {
    for (std::size_t i = 0; i < trace.agents[a].size(); ++i) {
      max_speed = std::max(max_speed, trace.agents[a][i].v.cwiseAbs().maxCoeff());
      max_accel = std::max(max_accel, trace.agents[a][i].a.cwiseAbs().maxCoeff());
      for (std::size_t b = a + 1; b < trace.agents.size(); ++b) {
        min_pairwise =
            std::min(min_pairwise, (trace.agents[a][i].p - trace.agents[b][i].p).norm());
      }
    }
  }

  out << "trajectory: " << csv_path << "\n";
  out << "exact robustness: " << num(rho) << " m (epsilon " << num(spec.epsilon) << ")\n";
  out << "boolean satisfaction: " << (satisfied ? "yes" : "no") << "\n";
  if (trace.agents.size() > 1) {
    out << "min pairwise distance: " << num(min_pairwise) << " m\n";
  }
  out << "max sampled |v|: " << num(max_speed) << " m/s (bound " << num(spec.bounds.vmax)
      << "), max sampled |a|: " << num(max_accel) << " m/s^2 (bound " << num(spec.bounds.amax)
      << ")\n";
  return rho >= spec.epsilon ? 0 : 2;
}

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  MissionFile mission;
  try {
    mission = load_mission(options.mission_path);
    if (options.seed) mission.config.seed = *options.seed;
    if (options.restarts) mission.config.restarts = *options.restarts;
    if (options.max_iterations) mission.config.max_iterations = *options.max_iterations;
    if (options.temperature) {
      if (!(*options.temperature > 0.0)) throw Error("--temperature must be positive");
      mission.config.schedule = {{1.0, *options.temperature}};
      mission.config.report_temperature = *options.temperature;
    }
    if (options.epsilon) {
      if (!(*options.epsilon > 0.0)) throw Error("--epsilon must be positive");
      mission.spec.epsilon = *options.epsilon;
    }

    if (options.validate_csv) {
      return validate_trajectory(mission, *options.validate_csv, out);
    }

    const PlanResult result = plan(mission.spec, mission.config);
    const ValidationReport validation = validate_plan(result, mission.spec);

    namespace fs = std::filesystem;
    const fs::path dir(options.out_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / "trajectory.csv";
    const fs::path report = dir / "report.json";
    write_csv(result.trace, csv.string());
    write_report(result, validation, report.string());
    if (options.plot) {
      write_svg(result.trace, mission.spec.environment, (dir / "trajectory.svg").string());
    }

    out << "status: " << to_string(result.status) << "\n";
    out << "exact robustness: " << num(result.exact_robustness) << " m\n";
    out << "smooth robustness: " << num(result.smooth_robustness) << " m (k "
        << num(mission.config.report_temperature) << ")\n";
    out << "wall time: " << num(result.wall_time_s) << " s, restarts used: "
        << result.restarts_used << ", accepted steps: " << result.iterations << "\n";
    out << "wrote " << csv.string() << ", " << report.string();
    if (options.plot) out << ", " << (dir / "trajectory.svg").string();
    out << "\n";
    return result.status == PlanStatus::Success ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace stlplan
