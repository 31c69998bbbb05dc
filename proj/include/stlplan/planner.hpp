#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stlplan/missions.hpp"
#include "stlplan/motion_primitives.hpp"
#include "stlplan/robustness.hpp"
#include "stlplan/stl_core.hpp"

namespace stlplan {

struct AgentSpec {
  std::string name;
  KnotState start;
};

// One planning problem: the scene, the formula over it (region-resolved), and
// the spline/sampling grid.
struct MissionSpec {
  std::vector<AgentSpec> agents;
  Environment environment;
  FormulaPtr formula;
  double T = 10.0;   // s, trajectory duration
  double Ts = 0.1;   // s, sampling period
  int knots = 5;     // segments per agent
  KinematicBounds bounds{3.0, 5.0};
  double epsilon = 0.01;  // m, minimum robustness for Success

  std::size_t sample_count() const;  // N + 1 with N = T/Ts
  double segment_duration() const { return T / knots; }

  // T/Ts integral, horizon(formula) <= T, unique agents, every formula agent
  // known and every region predicate resolved, valid bounds and environment.
  void validate() const;
};

// Free spline parameters: knot states 1..M per agent (knot 0 is pinned to the
// agent's start state). knots[agent][j] is knot j+1.
struct DecisionVector {
  std::vector<std::vector<KnotState>> knots;

  std::size_t scalar_count() const;
  std::vector<double> flatten() const;
  static DecisionVector unflatten(const std::vector<double>& x, std::size_t agent_count,
                                  std::size_t knots_per_agent);
};

// Piece of the solver's temperature schedule: use temperature k until the
// iteration counter passes the given fraction of max_iterations.
struct TemperaturePhase {
  double until_fraction = 1.0;
  double k = 25.0;
};

struct PlannerConfig {
  int restarts = 8;
  int max_iterations = 300;  // per restart
  std::vector<TemperaturePhase> schedule{{0.5, 10.0}, {1.0, 50.0}};
  double report_temperature = 25.0;  // k used for the reported smooth robustness
  double penalty_weight = 100.0;
  std::uint64_t seed = 0;
  double time_budget_s = 60.0;
};

enum class PlanStatus { Success, RobustnessBelowEpsilon, Infeasible, BudgetExhausted };

const char* to_string(PlanStatus s);

// One accepted ascent step: the temperature it was taken at and the objective
// after the step. Within one temperature the accepted objectives never
// decrease; a temperature switch revalues the same point and may step down.
struct AcceptedStep {
  double temperature = 0.0;
  double objective = 0.0;
};

struct RestartLog {
  int iterations = 0;
  std::vector<AcceptedStep> accepted;  // initial point first
};

struct PlanResult {
  PlanStatus status = PlanStatus::Infeasible;
  Trace trace;
  DecisionVector decision;
  double exact_robustness = 0.0;
  double smooth_robustness = 0.0;  // at the report temperature
  std::vector<std::vector<FeasibilityReport>> segment_feasibility;  // [agent][segment]
  int restarts_used = 0;
  int iterations = 0;  // accepted steps across all restarts
  std::vector<RestartLog> restart_logs;
  double wall_time_s = 0.0;
};

// Multi-agent trace sampled from the splines through the decision knots:
// per agent, minimum-jerk segments of equal duration T/M chained C2 through
// the knots, sampled at Ts over [0, T].
Trace assemble_trajectory(const DecisionVector& q, const MissionSpec& spec);

struct ObjectiveResult {
  double value = 0.0;
  DecisionVector gradient;
};

// J = smooth robustness of the assembled trace minus penalty_weight times the
// squared kinematic-margin violations of every segment. The robustness part
// of the gradient is exact (chain rule through the linear sampling map); the
// penalty part uses central differences with h = 1e-6.
ObjectiveResult objective(const DecisionVector& q, const MissionSpec& spec, Temperature k,
                          double penalty_weight);
double objective_value(const DecisionVector& q, const MissionSpec& spec, Temperature k,
                       double penalty_weight);

// Multi-start Armijo backtracking ascent on the objective. Restart 0 starts
// from straight-line knots toward each agent's first target region; later
// restarts jitter that guess with seeded Gaussian noise on knot positions.
// The best candidate over every accepted iterate is returned: feasible ones
// ranked by exact robustness, infeasible ones by penalty then robustness.
PlanResult plan(const MissionSpec& spec, const PlannerConfig& cfg);

struct ValidationReport {
  double exact_robustness = 0.0;
  bool boolean_satisfied = false;
  std::vector<std::vector<FeasibilityReport>> segment_feasibility;
  bool feasible = false;
  double min_pairwise_distance = 0.0;  // over all samples; +inf for one agent
  bool consistent = false;             // stored status matches the recomputation
};

// Recomputes everything about a result with exact, non-smooth semantics.
ValidationReport validate_plan(const PlanResult& r, const MissionSpec& spec);

}  // namespace stlplan
