#include "stlplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace stlplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long long integer_sample_steps(double T, double Ts) {
  const double ratio = T / Ts;
  const long long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-6) return -1;
  return n;
}

void bump(KnotState& s, int component, double h) {
  const int axis = component % 3;
  switch (component / 3) {
    case 0: s.p[axis] += h; break;
    case 1: s.v[axis] += h; break;
    default: s.a[axis] += h; break;
  }
}

}  // namespace

std::size_t MissionSpec::sample_count() const {
  const long long n = integer_sample_steps(T, Ts);
  return n < 0 ? 0 : static_cast<std::size_t>(n) + 1;
}

void MissionSpec::validate() const {
  if (agents.empty()) throw InvalidSpecError("mission needs at least one agent");
  std::set<std::string> names;
  for (const auto& a : agents) {
    if (a.name.empty()) throw InvalidSpecError("agent names must be nonempty");
    if (!names.insert(a.name).second) throw InvalidSpecError("duplicate agent '" + a.name + "'");
    if (!a.start.p.allFinite() || !a.start.v.allFinite() || !a.start.a.allFinite()) {
      throw InvalidSpecError("agent '" + a.name + "' has a nonfinite start state");
    }
  }
  environment.validate();
  if (!formula) throw InvalidSpecError("mission needs a formula");
  if (!std::isfinite(T) || T <= 0.0) throw InvalidSpecError("trajectory duration must be positive");
  if (!std::isfinite(Ts) || Ts <= 0.0) throw InvalidSpecError("sampling period must be positive");
  if (knots < 1) throw InvalidSpecError("knot count must be at least 1");
  if (integer_sample_steps(T, Ts) < 0) {
    throw InvalidSpecError("trajectory duration must be an integer multiple of the sampling period");
  }
  validate_bounds(bounds);
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw InvalidSpecError("minimum robustness must be positive");
  }
  const double h = horizon(formula);
  if (h > T + 1e-9) {
    std::ostringstream os;
    os << "formula horizon " << h << " s exceeds the trajectory duration " << T << " s";
    throw InvalidSpecError(os.str());
  }
  for (const auto& agent : agents_of(*formula)) {
    if (!names.count(agent)) {
      throw InvalidSpecError("formula references unknown agent '" + agent + "'");
    }
  }
  // Region predicates must already carry their boxes.
  struct Walker {
    static void walk(const Formula& f) {
      std::visit(
          [](const auto& n) {
            using V = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<V, PredNode>) {
              if (const auto* in = std::get_if<InsideBox>(&n.pred)) {
                if (!in->box) throw InvalidSpecError("region '" + in->region + "' is unresolved");
              }
              if (const auto* out = std::get_if<OutsideBox>(&n.pred)) {
                if (!out->box) throw InvalidSpecError("region '" + out->region + "' is unresolved");
              }
            } else if constexpr (std::is_same_v<V, NotNode>) {
              walk(*n.child);
            } else if constexpr (std::is_same_v<V, AndNode> || std::is_same_v<V, OrNode>) {
              for (const auto& c : n.children) walk(*c);
            } else if constexpr (std::is_same_v<V, ImpliesNode>) {
              walk(*n.lhs);
              walk(*n.rhs);
            } else if constexpr (std::is_same_v<V, AlwaysNode> ||
                                 std::is_same_v<V, EventuallyNode>) {
              walk(*n.child);
            } else if constexpr (std::is_same_v<V, UntilNode>) {
              walk(*n.lhs);
              walk(*n.rhs);
            }
          },
          f.node);
    }
  };
  Walker::walk(*formula);
}

std::size_t DecisionVector::scalar_count() const {
  std::size_t n = 0;
  for (const auto& agent : knots) n += 9 * agent.size();
  return n;
}

std::vector<double> DecisionVector::flatten() const {
  std::vector<double> x;
  x.reserve(scalar_count());
  for (const auto& agent : knots) {
    for (const auto& s : agent) {
      for (int i = 0; i < 3; ++i) x.push_back(s.p[i]);
      for (int i = 0; i < 3; ++i) x.push_back(s.v[i]);
      for (int i = 0; i < 3; ++i) x.push_back(s.a[i]);
    }
  }
  return x;
}

DecisionVector DecisionVector::unflatten(const std::vector<double>& x, std::size_t agent_count,
                                         std::size_t knots_per_agent) {
  if (x.size() != 9 * agent_count * knots_per_agent) {
    throw InvalidSpecError("decision vector has " + std::to_string(x.size()) +
                           " scalars, expected " +
                           std::to_string(9 * agent_count * knots_per_agent));
  }
  DecisionVector q;
  q.knots.assign(agent_count, std::vector<KnotState>(knots_per_agent));
  std::size_t i = 0;
  for (auto& agent : q.knots) {
    for (auto& s : agent) {
      for (int c = 0; c < 3; ++c) s.p[c] = x[i++];
      for (int c = 0; c < 3; ++c) s.v[c] = x[i++];
      for (int c = 0; c < 3; ++c) s.a[c] = x[i++];
    }
  }
  return q;
}

const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::Success: return "Success";
    case PlanStatus::RobustnessBelowEpsilon: return "RobustnessBelowEpsilon";
    case PlanStatus::Infeasible: return "Infeasible";
    case PlanStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "unknown";
}

namespace {

// Sampling layout shared by assembly and the objective gradient: for every
// sample, its segment, local time, and the six scalar basis responses of the
// segment position to the (p, v, a) boundary values at both ends.
struct Grid {
  double tau = 0.0;
  int segments = 0;
  std::size_t samples = 0;
  struct Point {
    int segment = 0;
    double local = 0.0;
    std::array<double, 6> basis{};
  };
  std::vector<Point> points;
};

Grid make_grid(const MissionSpec& spec) {
  Grid g;
  g.tau = spec.segment_duration();
  g.segments = spec.knots;
  g.samples = spec.sample_count();
  std::array<QuinticSegment, 6> unit;
  for (int b = 0; b < 6; ++b) {
    KnotState start;
    KnotState end;
    KnotState& side = b < 3 ? start : end;
    switch (b % 3) {
      case 0: side.p[0] = 1.0; break;
      case 1: side.v[0] = 1.0; break;
      default: side.a[0] = 1.0; break;
    }
    unit[b] = solve_segment(start, end, g.tau);
  }
  g.points.resize(g.samples);
  for (std::size_t i = 0; i < g.samples; ++i) {
    const double t = static_cast<double>(i) * spec.Ts;
    const long long s = std::min<long long>(
        g.segments - 1, static_cast<long long>(std::floor(t / g.tau + 1e-9)));
    Grid::Point& pt = g.points[i];
    pt.segment = static_cast<int>(s);
    pt.local = std::clamp(t - static_cast<double>(s) * g.tau, 0.0, g.tau);
    for (int b = 0; b < 6; ++b) pt.basis[b] = unit[b].state_at(pt.local).p[0];
  }
  return g;
}

void check_shape(const DecisionVector& q, const MissionSpec& spec) {
  if (q.knots.size() != spec.agents.size()) {
    throw InvalidSpecError("decision vector covers " + std::to_string(q.knots.size()) +
                           " agents, mission has " + std::to_string(spec.agents.size()));
  }
  for (std::size_t a = 0; a < q.knots.size(); ++a) {
    if (q.knots[a].size() != static_cast<std::size_t>(spec.knots)) {
      throw InvalidSpecError("agent '" + spec.agents[a].name + "' has " +
                             std::to_string(q.knots[a].size()) + " knots, expected " +
                             std::to_string(spec.knots));
    }
    for (const auto& s : q.knots[a]) {
      if (!s.p.allFinite() || !s.v.allFinite() || !s.a.allFinite()) {
        throw InvalidSpecError("decision vector has a nonfinite knot");
      }
    }
  }
}

using SegmentTable = std::vector<std::vector<QuinticSegment>>;

SegmentTable build_segments(const DecisionVector& q, const MissionSpec& spec, double tau) {
  SegmentTable table(spec.agents.size());
  for (std::size_t a = 0; a < spec.agents.size(); ++a) {
    table[a].reserve(spec.knots);
    const KnotState* prev = &spec.agents[a].start;
    for (int s = 0; s < spec.knots; ++s) {
      table[a].push_back(solve_segment(*prev, q.knots[a][s], tau));
      prev = &q.knots[a][s];
    }
  }
  return table;
}

Trace sample_trace(const SegmentTable& segments, const MissionSpec& spec, const Grid& grid) {
  Trace tr;
  tr.sampling_period = spec.Ts;
  tr.agent_names.reserve(spec.agents.size());
  for (const auto& a : spec.agents) tr.agent_names.push_back(a.name);
  tr.agents.assign(spec.agents.size(), std::vector<KnotState>(grid.samples));
  for (std::size_t a = 0; a < segments.size(); ++a) {
    for (std::size_t i = 0; i < grid.samples; ++i) {
      const Grid::Point& pt = grid.points[i];
      tr.agents[a][i] = segments[a][pt.segment].state_at(pt.local);
    }
  }
  return tr;
}

std::vector<std::vector<FeasibilityReport>> margins_of(const SegmentTable& segments,
                                                       const KinematicBounds& bounds) {
  std::vector<std::vector<FeasibilityReport>> out(segments.size());
  for (std::size_t a = 0; a < segments.size(); ++a) {
    out[a].reserve(segments[a].size());
    for (const auto& seg : segments[a]) out[a].push_back(check_feasibility(seg, bounds));
  }
  return out;
}

bool all_feasible(const std::vector<std::vector<FeasibilityReport>>& margins) {
  for (const auto& agent : margins) {
    for (const auto& rep : agent) {
      if (!rep.feasible) return false;
    }
  }
  return true;
}

double violation_square(const FeasibilityReport& rep) {
  double p = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const double v = std::min(0.0, rep.velocity_margin[axis]);
    const double w = std::min(0.0, rep.acceleration_margin[axis]);
    p += v * v + w * w;
  }
  return p;
}

double penalty_of(const std::vector<std::vector<FeasibilityReport>>& margins) {
  double p = 0.0;
  for (const auto& agent : margins) {
    for (const auto& rep : agent) p += violation_square(rep);
  }
  return p;
}

double segment_penalty(const KnotState& start, const KnotState& end, double tau,
                       const KinematicBounds& bounds) {
  return violation_square(check_feasibility(solve_segment(start, end, tau), bounds));
}

DecisionVector zeros_like(const DecisionVector& q) {
  DecisionVector z;
  z.knots.assign(q.knots.size(), {});
  for (std::size_t a = 0; a < q.knots.size(); ++a) {
    z.knots[a].assign(q.knots[a].size(), KnotState{});
  }
  return z;
}

double dot(const DecisionVector& a, const DecisionVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.knots.size(); ++i) {
    for (std::size_t j = 0; j < a.knots[i].size(); ++j) {
      s += a.knots[i][j].p.dot(b.knots[i][j].p);
      s += a.knots[i][j].v.dot(b.knots[i][j].v);
      s += a.knots[i][j].a.dot(b.knots[i][j].a);
    }
  }
  return s;
}

DecisionVector stepped(const DecisionVector& q, double alpha, const DecisionVector& dir) {
  DecisionVector out = q;
  for (std::size_t i = 0; i < out.knots.size(); ++i) {
    for (std::size_t j = 0; j < out.knots[i].size(); ++j) {
      out.knots[i][j].p += alpha * dir.knots[i][j].p;
      out.knots[i][j].v += alpha * dir.knots[i][j].v;
      out.knots[i][j].a += alpha * dir.knots[i][j].a;
    }
  }
  return out;
}

// Gradient of the penalty term by central differences; only the one or two
// segments touching the perturbed knot are re-solved.
void add_penalty_gradient(const DecisionVector& q, const MissionSpec& spec, double tau,
                          double weight, DecisionVector& grad) {
  if (weight == 0.0) return;
  const double h = 1e-6;
  const int m = spec.knots;
  for (std::size_t a = 0; a < q.knots.size(); ++a) {
    for (int j = 1; j <= m; ++j) {
      for (int c = 0; c < 9; ++c) {
        auto local_penalty = [&](double delta) {
          KnotState knot = q.knots[a][j - 1];
          bump(knot, c, delta);
          const KnotState& prev = j == 1 ? spec.agents[a].start : q.knots[a][j - 2];
          double p = segment_penalty(prev, knot, tau, spec.bounds);
          if (j < m) p += segment_penalty(knot, q.knots[a][j], tau, spec.bounds);
          return p;
        };
        const double d = (local_penalty(h) - local_penalty(-h)) / (2.0 * h);
        if (d != 0.0) bump(grad.knots[a][j - 1], c, -weight * d);
      }
    }
  }
}

// Pulls a per-sample position gradient back onto the knots through the basis
// responses of each sample's segment.
void chain_to_knots(const PositionGradient& g, const Grid& grid, DecisionVector& grad) {
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t i = 0; i < grid.samples; ++i) {
      const Eigen::Vector3d& gi = g[a][i];
      if (gi.isZero(0.0)) continue;
      const Grid::Point& pt = grid.points[i];
      const int start_knot = pt.segment;    // 0 = pinned start state
      const int end_knot = pt.segment + 1;  // 1-based free knots
      if (start_knot >= 1) {
        KnotState& ks = grad.knots[a][start_knot - 1];
        ks.p += gi * pt.basis[0];
        ks.v += gi * pt.basis[1];
        ks.a += gi * pt.basis[2];
      }
      KnotState& ke = grad.knots[a][end_knot - 1];
      ke.p += gi * pt.basis[3];
      ke.v += gi * pt.basis[4];
      ke.a += gi * pt.basis[5];
    }
  }
}

double value_impl(const DecisionVector& q, const MissionSpec& spec, const Grid& grid, double k,
                  double weight) {
  const SegmentTable segments = build_segments(q, spec, grid.tau);
  const Trace tr = sample_trace(segments, spec, grid);
  const double smooth = smooth_robustness(spec.formula, tr, 0, k);
  return smooth - weight * penalty_of(margins_of(segments, spec.bounds));
}

ObjectiveResult gradient_impl(const DecisionVector& q, const MissionSpec& spec, const Grid& grid,
                              double k, double weight) {
  const SegmentTable segments = build_segments(q, spec, grid.tau);
  const Trace tr = sample_trace(segments, spec, grid);
  const SmoothGradientResult sg = smooth_robustness_gradient(spec.formula, tr, 0, k);
  ObjectiveResult out;
  out.gradient = zeros_like(q);
  chain_to_knots(sg.gradient, grid, out.gradient);
  const double penalty = penalty_of(margins_of(segments, spec.bounds));
  add_penalty_gradient(q, spec, grid.tau, weight, out.gradient);
  out.value = sg.value - weight * penalty;
  return out;
}

// Target point per agent: the centroid of the first non-workspace region the
// formula asks the agent to be inside of, in syntactic order.
std::map<std::string, Eigen::Vector3d> agent_targets(const Formula& f) {
  std::map<std::string, Eigen::Vector3d> targets;
  struct Walker {
    std::map<std::string, Eigen::Vector3d>& out;
    void walk(const Formula& node) {
      std::visit(
          [this](const auto& n) {
            using V = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<V, PredNode>) {
              if (const auto* in = std::get_if<InsideBox>(&n.pred)) {
                if (in->box && in->region != "ws" && in->region != "workspace" &&
                    !out.count(in->agent)) {
                  out.emplace(in->agent, in->box->center());
                }
              }
            } else if constexpr (std::is_same_v<V, NotNode>) {
              walk(*n.child);
            } else if constexpr (std::is_same_v<V, AndNode> || std::is_same_v<V, OrNode>) {
              for (const auto& c : n.children) walk(*c);
            } else if constexpr (std::is_same_v<V, ImpliesNode>) {
              walk(*n.lhs);
              walk(*n.rhs);
            } else if constexpr (std::is_same_v<V, AlwaysNode> ||
                                 std::is_same_v<V, EventuallyNode>) {
              walk(*n.child);
            } else if constexpr (std::is_same_v<V, UntilNode>) {
              walk(*n.lhs);
              walk(*n.rhs);
            }
          },
          node.node);
    }
  };
  Walker{targets}.walk(f);
  return targets;
}

DecisionVector initial_guess(const MissionSpec& spec) {
  const auto targets = agent_targets(*spec.formula);
  DecisionVector q;
  q.knots.assign(spec.agents.size(), std::vector<KnotState>(spec.knots));
  for (std::size_t a = 0; a < spec.agents.size(); ++a) {
    const Eigen::Vector3d from = spec.agents[a].start.p;
    const auto it = targets.find(spec.agents[a].name);
    const Eigen::Vector3d to = it == targets.end() ? from : it->second;
    for (int j = 1; j <= spec.knots; ++j) {
      KnotState s;
      s.p = from + (to - from) * (static_cast<double>(j) / spec.knots);
      q.knots[a][j - 1] = s;
    }
  }
  return q;
}

DecisionVector jittered(const DecisionVector& base, std::uint64_t seed, int restart) {
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart + 1)));
  std::normal_distribution<double> noise(0.0, 0.5);
  DecisionVector q = base;
  for (auto& agent : q.knots) {
    for (auto& s : agent) {
      for (int axis = 0; axis < 3; ++axis) s.p[axis] += noise(rng);
    }
  }
  return q;
}

struct EvalPoint {
  DecisionVector q;
  Trace trace;
  std::vector<std::vector<FeasibilityReport>> margins;
  double smooth = 0.0;
  double exact = 0.0;
  double penalty = 0.0;
  double objective = 0.0;
  bool feasible = false;
};

EvalPoint full_eval(DecisionVector q, const MissionSpec& spec, const Grid& grid, double k,
                    double weight) {
  EvalPoint p;
  p.q = std::move(q);
  const SegmentTable segments = build_segments(p.q, spec, grid.tau);
  p.trace = sample_trace(segments, spec, grid);
  p.margins = margins_of(segments, spec.bounds);
  p.penalty = penalty_of(p.margins);
  p.feasible = all_feasible(p.margins);
  p.smooth = smooth_robustness(spec.formula, p.trace, 0, k);
  p.exact = robustness(spec.formula, p.trace, 0);
  p.objective = p.smooth - weight * p.penalty;
  return p;
}

// Candidate order: any feasible point beats any infeasible one; feasible
// points compare by exact robustness; infeasible ones by penalty, then exact
// robustness. Strict, so the earliest of tied candidates is kept.
bool strictly_better(const EvalPoint& a, const EvalPoint& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (a.feasible) return a.exact > b.exact;
  if (a.penalty != b.penalty) return a.penalty < b.penalty;
  return a.exact > b.exact;
}

void validate_config(const PlannerConfig& cfg) {
  if (cfg.restarts < 1) throw InvalidSpecError("planner needs at least one restart");
  if (cfg.max_iterations < 0) throw InvalidSpecError("iteration limit must be nonnegative");
  if (cfg.schedule.empty()) throw InvalidSpecError("temperature schedule must be nonempty");
  double prev = 0.0;
  for (const auto& phase : cfg.schedule) {
    if (!std::isfinite(phase.k) || phase.k <= 0.0) {
      throw InvalidSpecError("schedule temperatures must be positive");
    }
    if (phase.until_fraction <= prev || phase.until_fraction > 1.0 + 1e-12) {
      throw InvalidSpecError("schedule fractions must increase towards 1");
    }
    prev = phase.until_fraction;
  }
  if (!std::isfinite(cfg.report_temperature) || cfg.report_temperature <= 0.0) {
    throw InvalidSpecError("report temperature must be positive");
  }
  if (!std::isfinite(cfg.penalty_weight) || cfg.penalty_weight < 0.0) {
    throw InvalidSpecError("penalty weight must be nonnegative");
  }
  if (!std::isfinite(cfg.time_budget_s) || cfg.time_budget_s <= 0.0) {
    throw InvalidSpecError("time budget must be positive");
  }
}

double phase_temperature(const PlannerConfig& cfg, int iteration) {
  const double fraction =
      static_cast<double>(iteration) / std::max(1, cfg.max_iterations);
  for (const auto& phase : cfg.schedule) {
    if (fraction < phase.until_fraction) return phase.k;
  }
  return cfg.schedule.back().k;
}

}  // namespace

Trace assemble_trajectory(const DecisionVector& q, const MissionSpec& spec) {
  spec.validate();
  check_shape(q, spec);
  const Grid grid = make_grid(spec);
  return sample_trace(build_segments(q, spec, grid.tau), spec, grid);
}

ObjectiveResult objective(const DecisionVector& q, const MissionSpec& spec, Temperature k,
                          double penalty_weight) {
  spec.validate();
  check_shape(q, spec);
  return gradient_impl(q, spec, make_grid(spec), k.k, penalty_weight);
}

double objective_value(const DecisionVector& q, const MissionSpec& spec, Temperature k,
                       double penalty_weight) {
  spec.validate();
  check_shape(q, spec);
  return value_impl(q, spec, make_grid(spec), k.k, penalty_weight);
}

PlanResult plan(const MissionSpec& spec, const PlannerConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto start_time = Clock::now();
  spec.validate();
  validate_config(cfg);
  const Grid grid = make_grid(spec);
  const double weight = cfg.penalty_weight;
  const auto deadline =
      start_time + std::chrono::duration_cast<Clock::duration>(
                       std::chrono::duration<double>(cfg.time_budget_s));
  auto expired = [&]() { return Clock::now() >= deadline; };

  const DecisionVector base = initial_guess(spec);
  EvalPoint best;
  bool have_best = false;
  bool budget_hit = false;
  std::vector<RestartLog> logs;
  int total_accepted = 0;

  auto consider = [&](const EvalPoint& p) {
    if (!have_best || strictly_better(p, best)) {
      best = p;
      have_best = true;
    }
  };

  for (int r = 0; r < cfg.restarts; ++r) {
    if (r > 0 && expired()) {
      budget_hit = true;
      break;
    }
    DecisionVector q = r == 0 ? base : jittered(base, cfg.seed, r);
    double k = phase_temperature(cfg, 0);
    EvalPoint current = full_eval(std::move(q), spec, grid, k, weight);
    consider(current);
    RestartLog log;
    log.accepted.push_back({k, current.objective});

    double last_alpha = 0.0;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      if (expired()) {
        budget_hit = true;
        break;
      }
      k = phase_temperature(cfg, it);
      const ObjectiveResult og = gradient_impl(current.q, spec, grid, k, weight);
      const double gn2 = dot(og.gradient, og.gradient);
      if (gn2 < 1e-18) break;

      double alpha = last_alpha > 0.0 ? std::min(last_alpha * 2.0, 1e3)
                                      : 1.0 / (1.0 + std::sqrt(gn2));
      bool accepted = false;
      for (int halve = 0; halve < 40 && !accepted; ++halve) {
        const DecisionVector trial = stepped(current.q, alpha, og.gradient);
        const double trial_value = value_impl(trial, spec, grid, k, weight);
        if (trial_value >= og.value + 1e-4 * alpha * gn2) {
          current = full_eval(trial, spec, grid, k, weight);
          accepted = true;
        } else {
          alpha *= 0.5;
        }
      }
      if (!accepted) break;
      last_alpha = alpha;
      consider(current);
      log.accepted.push_back({k, current.objective});
      ++log.iterations;
      ++total_accepted;
    }
    logs.push_back(std::move(log));
  }

  PlanResult result;
  result.decision = best.q;
  result.trace = best.trace;
  result.exact_robustness = best.exact;
  result.smooth_robustness =
      smooth_robustness(spec.formula, best.trace, 0, cfg.report_temperature);
  result.segment_feasibility = best.margins;
  result.restarts_used = static_cast<int>(logs.size());
  result.iterations = total_accepted;
  result.restart_logs = std::move(logs);
  const bool success = best.feasible && best.exact >= spec.epsilon;
  if (success) {
    result.status = PlanStatus::Success;
  } else if (budget_hit) {
    result.status = PlanStatus::BudgetExhausted;
  } else if (!best.feasible) {
    result.status = PlanStatus::Infeasible;
  } else {
    result.status = PlanStatus::RobustnessBelowEpsilon;
  }
  result.wall_time_s =
      std::chrono::duration<double>(Clock::now() - start_time).count();
  return result;
}

ValidationReport validate_plan(const PlanResult& r, const MissionSpec& spec) {
  spec.validate();
  r.trace.validate();
  if (r.trace.agents.size() != spec.agents.size() ||
      r.trace.sample_count() != spec.sample_count() ||
      std::abs(r.trace.sampling_period - spec.Ts) > 1e-12) {
    throw Error("result trace does not match the mission grid");
  }
  for (std::size_t a = 0; a < spec.agents.size(); ++a) {
    if (r.trace.agent_names[a] != spec.agents[a].name) {
      throw Error("result trace agents do not match the mission");
    }
  }
  check_shape(r.decision, spec);

  ValidationReport rep;
  rep.exact_robustness = robustness(spec.formula, r.trace, 0);
  rep.boolean_satisfied = boolean_satisfaction(spec.formula, r.trace, 0);
  const SegmentTable segments = build_segments(r.decision, spec, spec.segment_duration());
  rep.segment_feasibility = margins_of(segments, spec.bounds);
  rep.feasible = all_feasible(rep.segment_feasibility);

  rep.min_pairwise_distance = kInf;
  const std::size_t samples = r.trace.sample_count();
  for (std::size_t a = 0; a < r.trace.agents.size(); ++a) {
    for (std::size_t b = a + 1; b < r.trace.agents.size(); ++b) {
      for (std::size_t i = 0; i < samples; ++i) {
        rep.min_pairwise_distance =
            std::min(rep.min_pairwise_distance,
                     (r.trace.agents[a][i].p - r.trace.agents[b][i].p).norm());
      }
    }
  }

  const bool would_succeed = rep.feasible && rep.exact_robustness >= spec.epsilon;
  rep.consistent = ((r.status == PlanStatus::Success) == would_succeed) &&
                   std::abs(r.exact_robustness - rep.exact_robustness) <= 1e-9;
  return rep;
}

}  // namespace stlplan
