#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "stlplan/planner.hpp"
#include "support/oracles.hpp"

using namespace stlplan;

namespace {

Box box(double x0, double x1, double y0, double y1, double z0, double z1) {
  Box b;
  b.lo = {x0, y0, z0};
  b.hi = {x1, y1, z1};
  return b;
}

KnotState at_rest(const Eigen::Vector3d& p) {
  KnotState s;
  s.p = p;
  return s;
}

// One drone crossing an empty room toward a corner goal.
MissionSpec reach_spec() {
  MissionSpec spec;
  spec.agents = {{"d1", at_rest({-4, -4, 1})}};
  spec.environment.workspace = box(-5, 5, -5, 5, 0, 3);
  spec.environment.goals = {{"goal1", box(3, 4.5, 3, 4.5, 0.5, 2)}};
  spec.formula = reach_avoid(spec.environment, {{"d1", "goal1"}}, spec.T);
  return spec;
}

// Hover in the middle of a cube; staying put is already optimal.
MissionSpec hover_spec() {
  MissionSpec spec;
  spec.agents = {{"d1", at_rest({0, 0, 0})}};
  spec.environment.workspace = box(-5, 5, -5, 5, -5, 5);
  spec.formula = f_always(Interval(0, spec.T),
                          f_pred(InsideBox{"d1", "ws", spec.environment.region_map().at("ws")}));
  return spec;
}

// The goal lies outside the workspace, so the conjunction can never be met.
MissionSpec unsat_spec() {
  MissionSpec spec = reach_spec();
  spec.environment.obstacles = {{"far", box(20, 21, 20, 21, 0, 1)}};
  const auto map = spec.environment.region_map();
  spec.formula =
      f_and({f_eventually(Interval(0, spec.T), f_pred(InsideBox{"d1", "far", map.at("far")})),
             f_always(Interval(0, spec.T), f_pred(InsideBox{"d1", "ws", map.at("ws")}))});
  return spec;
}

DecisionVector hover_decision(const MissionSpec& spec) {
  DecisionVector q;
  q.knots.resize(spec.agents.size());
  for (std::size_t a = 0; a < spec.agents.size(); ++a) {
    q.knots[a].assign(static_cast<std::size_t>(spec.knots), spec.agents[a].start);
  }
  return q;
}

DecisionVector random_decision(const MissionSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(-4.0, 4.0);
  std::uniform_real_distribution<double> va(-1.0, 1.0);
  DecisionVector q;
  q.knots.resize(spec.agents.size());
  for (auto& agent : q.knots) {
    agent.resize(static_cast<std::size_t>(spec.knots));
    for (auto& s : agent) {
      s.p = {p(rng), p(rng), p(rng) * 0.3 + 1.5};
      s.v = {va(rng), va(rng), va(rng)};
      s.a = {va(rng), va(rng), va(rng)};
    }
  }
  return q;
}

bool all_nonnegative(const std::vector<std::vector<FeasibilityReport>>& reports) {
  for (const auto& agent : reports) {
    for (const auto& r : agent) {
      if (!r.feasible) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("mission validation") {
  CHECK_NOTHROW(reach_spec().validate());

  MissionSpec long_horizon = reach_spec();
  long_horizon.formula = f_always(Interval(0, 12), f_pred(InsideBox{
                                                       "d1", "ws",
                                                       long_horizon.environment.region_map().at("ws")}));
  CHECK_THROWS_WITH_AS(long_horizon.validate(),
                       doctest::Contains("exceeds the trajectory duration"), InvalidSpecError);

  MissionSpec stranger = reach_spec();
  stranger.formula = reach_avoid(stranger.environment, {{"d1", "goal1"}}, stranger.T);
  stranger.agents[0].name = "d9";
  CHECK_THROWS_AS(stranger.validate(), InvalidSpecError);

  MissionSpec unresolved = reach_spec();
  unresolved.formula = f_eventually(Interval(0, 10), f_pred(InsideBox{"d1", "goal1", {}}));
  CHECK_THROWS_WITH_AS(unresolved.validate(), doctest::Contains("unresolved"), InvalidSpecError);

  MissionSpec ragged = reach_spec();
  ragged.Ts = 0.3;  // 10 / 0.3 is not an integer
  CHECK_THROWS_AS(ragged.validate(), InvalidSpecError);

  MissionSpec no_eps = reach_spec();
  no_eps.epsilon = 0.0;
  CHECK_THROWS_AS(no_eps.validate(), InvalidSpecError);

  MissionSpec no_knots = reach_spec();
  no_knots.knots = 0;
  CHECK_THROWS_AS(no_knots.validate(), InvalidSpecError);

  CHECK(reach_spec().sample_count() == 101);
  CHECK(reach_spec().segment_duration() == 2.0);
}

TEST_CASE("decision vector flattening round-trips") {
  const MissionSpec spec = reach_spec();
  std::mt19937_64 rng(5);
  const DecisionVector q = random_decision(spec, rng);
  CHECK(q.scalar_count() == 9 * 1 * 5);

  const auto x = q.flatten();
  REQUIRE(x.size() == q.scalar_count());
  const DecisionVector back = DecisionVector::unflatten(x, 1, 5);
  for (std::size_t j = 0; j < q.knots[0].size(); ++j) {
    CHECK(back.knots[0][j].p == q.knots[0][j].p);
    CHECK(back.knots[0][j].v == q.knots[0][j].v);
    CHECK(back.knots[0][j].a == q.knots[0][j].a);
  }
  CHECK_THROWS_AS(DecisionVector::unflatten(std::vector<double>(10), 1, 5), Error);
}

TEST_CASE("hover decision assembles to a constant trace") {
  const MissionSpec spec = hover_spec();
  const Trace tr = assemble_trajectory(hover_decision(spec), spec);
  REQUIRE(tr.sample_count() == 101);
  CHECK(tr.sampling_period == spec.Ts);
  for (const auto& s : tr.agents[0]) {
    CHECK(s.p == spec.agents[0].start.p);
    CHECK(s.v.isZero(0.0));
    CHECK(s.a.isZero(0.0));
  }
}

TEST_CASE("the assembled trace passes through the knots") {
  const MissionSpec spec = reach_spec();
  std::mt19937_64 rng(9);
  const DecisionVector q = random_decision(spec, rng);
  const Trace tr = assemble_trajectory(q, spec);

  // knot 0 is the pinned start state, bitwise
  CHECK(tr.agents[0][0].p == spec.agents[0].start.p);
  CHECK(tr.agents[0][0].v == spec.agents[0].start.v);
  CHECK(tr.agents[0][0].a == spec.agents[0].start.a);

  // interior knot j sits at sample j * tau / Ts and starts its own segment
  const std::size_t stride = 20;  // tau = 2 s, Ts = 0.1 s
  for (int j = 1; j < spec.knots; ++j) {
    const KnotState& knot = q.knots[0][static_cast<std::size_t>(j - 1)];
    const KnotState& s = tr.agents[0][stride * static_cast<std::size_t>(j)];
    CHECK(s.p == knot.p);
    CHECK(s.v == knot.v);
    CHECK(s.a == knot.a);
  }

  // the final sample meets the last knot up to the solver residual
  const KnotState& last = q.knots[0].back();
  const KnotState& end = tr.agents[0].back();
  CHECK((end.p - last.p).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK((end.v - last.v).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK((end.a - last.a).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("hover objective equals the workspace margin minus the softmin gap") {
  const MissionSpec spec = hover_spec();
  const double J = objective_value(hover_decision(spec), spec, 25.0, 100.0);
  CHECK(J <= 5.0);
  CHECK(J >= 5.0 - std::log(101.0) / 25.0 - 1e-12);
}

TEST_CASE("zero penalty weight reduces the objective to the smooth robustness") {
  const MissionSpec spec = reach_spec();
  std::mt19937_64 rng(11);
  const DecisionVector q = random_decision(spec, rng);
  const double J = objective_value(q, spec, 25.0, 0.0);
  CHECK(J == smooth_robustness(spec.formula, assemble_trajectory(q, spec), 0, 25.0));
}

TEST_CASE("objective gradient matches finite differences") {
  MissionSpec spec = reach_spec();
  spec.bounds = {0.8, 2.0};  // tight enough that random knots violate them
  std::mt19937_64 rng(13);

  for (int trial = 0; trial < 3; ++trial) {
    const DecisionVector q = random_decision(spec, rng);
    const auto res = objective(q, spec, 25.0, 50.0);

    const auto x = q.flatten();
    const auto g = res.gradient.flatten();
    const double h = 1e-5;
    double err2 = 0.0;
    double ref2 = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      auto hi = x;
      auto lo = x;
      hi[c] += h;
      lo[c] -= h;
      const double fd = (objective_value(DecisionVector::unflatten(hi, 1, 5), spec, 25.0, 50.0) -
                         objective_value(DecisionVector::unflatten(lo, 1, 5), spec, 25.0, 50.0)) /
                        (2.0 * h);
      err2 += (g[c] - fd) * (g[c] - fd);
      ref2 += fd * fd;
    }
    CHECK(std::sqrt(err2) / std::max(std::sqrt(ref2), 1e-12) <= 1e-3);
  }
}

TEST_CASE("planning the corner reach succeeds and validates") {
  const MissionSpec spec = reach_spec();
  PlannerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 120;

  const PlanResult r = plan(spec, cfg);
  CHECK(r.status == PlanStatus::Success);
  CHECK(r.exact_robustness >= spec.epsilon);
  CHECK(all_nonnegative(r.segment_feasibility));
  CHECK(r.restarts_used == 2);
  CHECK(r.wall_time_s > 0.0);

  const ValidationReport v = validate_plan(r, spec);
  CHECK(v.consistent);
  CHECK(v.feasible);
  CHECK(v.boolean_satisfied);
  CHECK(v.exact_robustness == doctest::Approx(r.exact_robustness).epsilon(1e-12));
  CHECK(std::isinf(v.min_pairwise_distance));

  // smoothing gap: the reported smooth value brackets the exact one
  const double bound =
      testing::smoothing_error_bound(*spec.formula, spec.Ts, cfg.report_temperature);
  CHECK(std::abs(r.smooth_robustness - r.exact_robustness) <= bound + 1e-9);
}

TEST_CASE("a mission satisfied by hovering converges immediately") {
  const MissionSpec spec = hover_spec();
  PlannerConfig cfg;
  cfg.restarts = 1;
  cfg.max_iterations = 5;
  const PlanResult r = plan(spec, cfg);
  CHECK(r.status == PlanStatus::Success);
  CHECK(r.exact_robustness == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("an unsatisfiable conjunction reports low robustness, not success") {
  const MissionSpec spec = unsat_spec();
  PlannerConfig cfg;
  cfg.restarts = 1;
  cfg.max_iterations = 10;
  const PlanResult r = plan(spec, cfg);
  CHECK(r.status != PlanStatus::Success);
  CHECK(r.exact_robustness < spec.epsilon);
  const ValidationReport v = validate_plan(r, spec);
  CHECK(v.consistent);
  CHECK_FALSE(v.boolean_satisfied);
}

TEST_CASE("accepted objectives never decrease within a temperature phase") {
  const MissionSpec spec = reach_spec();
  PlannerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 60;
  const PlanResult r = plan(spec, cfg);

  REQUIRE(!r.restart_logs.empty());
  int accepted = 0;
  for (const auto& log : r.restart_logs) {
    for (std::size_t s = 1; s < log.accepted.size(); ++s) {
      const auto& prev = log.accepted[s - 1];
      const auto& cur = log.accepted[s];
      if (prev.temperature == cur.temperature) {
        CHECK(cur.objective >= prev.objective - 1e-12);
      }
      ++accepted;
    }
  }
  CHECK(r.iterations == accepted);
}

TEST_CASE("planning is deterministic for a fixed seed") {
  const MissionSpec spec = reach_spec();
  PlannerConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 40;
  cfg.seed = 17;

  const PlanResult a = plan(spec, cfg);
  const PlanResult b = plan(spec, cfg);
  CHECK(a.status == b.status);
  CHECK(a.exact_robustness == b.exact_robustness);
  CHECK(a.smooth_robustness == b.smooth_robustness);
  REQUIRE(a.trace.sample_count() == b.trace.sample_count());
  for (std::size_t t = 0; t < a.trace.sample_count(); ++t) {
    CHECK(a.trace.agents[0][t].p == b.trace.agents[0][t].p);
  }
}

TEST_CASE("a tiny time budget is reported as exhausted") {
  const MissionSpec spec = unsat_spec();
  PlannerConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 100;
  cfg.time_budget_s = 1e-9;
  const PlanResult r = plan(spec, cfg);
  CHECK(r.status == PlanStatus::BudgetExhausted);
  CHECK(r.restarts_used >= 1);  // the first restart always produces a candidate
}

TEST_CASE("validate_plan flags a violating trace") {
  MissionSpec spec;
  spec.agents = {{"d1", at_rest({0, 0, 1})}, {"d2", at_rest({0, 0, 1})}};
  spec.environment.workspace = box(-5, 5, -5, 5, 0, 3);
  spec.formula = pairwise_safety({"d1", "d2"}, 0.5, spec.T);

  PlanResult r;
  r.status = PlanStatus::RobustnessBelowEpsilon;
  r.decision = hover_decision(spec);
  r.trace = assemble_trajectory(r.decision, spec);
  r.exact_robustness = -0.5;

  const ValidationReport v = validate_plan(r, spec);
  CHECK(v.exact_robustness == -0.5);
  CHECK_FALSE(v.boolean_satisfied);
  CHECK(v.feasible);
  CHECK(v.min_pairwise_distance == 0.0);
  CHECK(v.consistent);  // the stored non-success status matches the recomputation

  r.status = PlanStatus::Success;
  CHECK_FALSE(validate_plan(r, spec).consistent);

  r.status = PlanStatus::RobustnessBelowEpsilon;
  r.trace.agents[1][3].p.x() += 1.0;  // trace no longer matches the stored robustness? still -0.5
  const ValidationReport moved = validate_plan(r, spec);
  CHECK(moved.exact_robustness == -0.5);  // the minimum is still the co-located tail

  Trace wrong = r.trace;
  wrong.agent_names = {"d1", "dX"};
  PlanResult bad = r;
  bad.trace = wrong;
  CHECK_THROWS_AS(validate_plan(bad, spec), Error);
}

TEST_CASE("config validation") {
  const MissionSpec spec = hover_spec();
  PlannerConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(plan(spec, cfg), InvalidSpecError);

  cfg = {};
  cfg.schedule = {{0.5, 10.0}, {0.4, 50.0}};  // fractions must not decrease
  CHECK_THROWS_AS(plan(spec, cfg), InvalidSpecError);

  cfg = {};
  cfg.schedule.clear();
  CHECK_THROWS_AS(plan(spec, cfg), InvalidSpecError);

  cfg = {};
  cfg.penalty_weight = -1.0;
  CHECK_THROWS_AS(plan(spec, cfg), InvalidSpecError);

  cfg = {};
  cfg.time_budget_s = 0.0;
  CHECK_THROWS_AS(plan(spec, cfg), InvalidSpecError);
}