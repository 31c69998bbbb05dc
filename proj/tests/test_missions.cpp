#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <functional>

#include "doctest.h"
#include "stlplan/missions.hpp"

using namespace stlplan;

namespace {

Box box(double x0, double x1, double y0, double y1, double z0, double z1) {
  Box b;
  b.lo = {x0, y0, z0};
  b.hi = {x1, y1, z1};
  return b;
}

Environment crossing_scene() {
  Environment env;
  env.workspace = box(-5, 5, -5, 5, 0, 3);
  env.goals = {{"goal1", box(3, 4.5, 3, 4.5, 0.5, 2)},
               {"goal2", box(-4.5, -3, 3, 4.5, 0.5, 2)}};
  env.obstacles = {{"pillar", box(-1, 1, -1.5, 1.5, 0, 3)}};
  env.min_separation = 0.5;
  return env;
}

Environment pole_scene() {
  Environment env;
  env.workspace = box(-1, 11, -3, 3, 0, 4);
  env.poles = {box(0, 1.5, -1, 1, 1, 3), box(3, 5, -1, 1, 1, 3),
               box(4.5, 6.5, -1, 1, 1, 3), box(8, 9.5, -1, 1, 1, 3)};
  return env;
}

// Counts nodes matching `pred` over the whole tree.
int count_nodes(const Formula& f, const std::function<bool(const Formula&)>& pred) {
  int n = pred(f) ? 1 : 0;
  const auto visit = [&](const FormulaPtr& c) { n += count_nodes(*c, pred); };
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NotNode> || std::is_same_v<T, AlwaysNode> ||
                      std::is_same_v<T, EventuallyNode>) {
          visit(node.child);
        } else if constexpr (std::is_same_v<T, AndNode> || std::is_same_v<T, OrNode>) {
          for (const auto& c : node.children) visit(c);
        } else if constexpr (std::is_same_v<T, ImpliesNode> || std::is_same_v<T, UntilNode>) {
          visit(node.lhs);
          visit(node.rhs);
        }
      },
      f.node);
  return n;
}

bool is_always(const Formula& f) { return std::holds_alternative<AlwaysNode>(f.node); }
bool is_eventually(const Formula& f) { return std::holds_alternative<EventuallyNode>(f.node); }
bool is_until(const Formula& f) { return std::holds_alternative<UntilNode>(f.node); }

}  // namespace

TEST_CASE("pairwise safety enumerates unordered pairs") {
  CHECK(structurally_equal(pairwise_safety({"d1"}, 0.5, 10.0), f_true()));

  const auto two = pairwise_safety({"d1", "d2"}, 0.5, 10.0);
  CHECK(structurally_equal(
      two, f_always(Interval(0, 10), f_pred(Separation{"d1", "d2", 0.5}))));

  const auto three = pairwise_safety({"d1", "d2", "d3"}, 0.5, 10.0);
  REQUIRE(std::holds_alternative<AndNode>(three->node));
  CHECK(std::get<AndNode>(three->node).children.size() == 3);
  CHECK(count_nodes(*three, is_always) == 3);

  CHECK_THROWS_AS(pairwise_safety({"d1", "d1"}, 0.5, 10.0), Error);
  CHECK_THROWS_AS(pairwise_safety({"d1", "d2"}, -0.5, 10.0), Error);
}

TEST_CASE("reach-avoid for a single agent without obstacles") {
  Environment env;
  env.workspace = box(-5, 5, -5, 5, 0, 3);
  env.goals = {{"goal1", box(3, 4.5, 3, 4.5, 0.5, 2)}};

  const auto f = reach_avoid(env, {{"d1", "goal1"}}, 10.0);
  FormulaPtr expect = f_and({f_eventually(Interval(0, 10), f_pred(InsideBox{"d1", "goal1", {}})),
                             f_always(Interval(0, 10), f_pred(InsideBox{"d1", "ws", {}}))});
  CHECK(structurally_equal(f, expect));
  CHECK(horizon(f) == 10.0);
}

TEST_CASE("reach-avoid expands per agent and appends safety") {
  const Environment env = crossing_scene();
  const auto f = reach_avoid(env, {{"d1", "goal1"}, {"d2", "goal2"}}, 10.0);

  CHECK(count_nodes(*f, is_eventually) == 2);
  // per agent: one workspace term and one per obstacle, plus one safety term
  CHECK(count_nodes(*f, is_always) == 5);

  const auto safety = pairwise_safety({"d1", "d2"}, env.min_separation, 10.0);
  const auto& children = std::get<AndNode>(f->node).children;
  bool found = false;
  for (const auto& c : children) found = found || structurally_equal(c, safety);
  CHECK(found);

  // regions come back resolved, ready for evaluation
  int unresolved = 0;
  count_nodes(*f, [&](const Formula& node) {
    if (const auto* in = std::get_if<PredNode>(&node.node)) {
      if (const auto* ib = std::get_if<InsideBox>(&in->pred)) unresolved += !ib->box;
      if (const auto* ob = std::get_if<OutsideBox>(&in->pred)) unresolved += !ob->box;
    }
    return false;
  });
  CHECK(unresolved == 0);

  CHECK_THROWS_AS(reach_avoid(env, {{"d1", "nowhere"}, {"d2", "goal2"}}, 10.0), Error);
}

TEST_CASE("powerline splits the fleet and sequences the middle poles") {
  const Environment env = pole_scene();

  const auto two = powerline_inspection(env, {"d1", "d2"}, 12.0);
  CHECK(count_nodes(*two, is_until) == 1);

  const auto four = powerline_inspection(env, {"d1", "d2", "d3", "d4"}, 12.0);
  CHECK(count_nodes(*four, is_until) == 1);
  // visit terms: two agents x (pole1, pole4)
  CHECK(count_nodes(*four, [](const Formula& n) {
          if (!is_eventually(n)) return false;
          const auto& child = *std::get<EventuallyNode>(n.node).child;
          return std::holds_alternative<PredNode>(child.node);
        }) == 4);

  CHECK(horizon(four) == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(horizon(four) == doctest::Approx(powerline_required_duration(12.0)).epsilon(1e-12));

  // Until left/right operands are the pole2 / pole3 holds
  count_nodes(*four, [&](const Formula& n) {
    if (!is_until(n)) return false;
    const auto& u = std::get<UntilNode>(n.node);
    CHECK(regions_of(*u.lhs) == std::set<std::string>{"pole2"});
    CHECK(regions_of(*u.rhs) == std::set<std::string>{"pole3"});
    CHECK(u.window.lo == 0.0);
    CHECK(u.window.hi == doctest::Approx(6.0).epsilon(1e-12));
    return true;
  });

  CHECK_THROWS_AS(powerline_inspection(env, {"d1", "d2", "d3"}, 12.0), Error);
  CHECK_THROWS_AS(powerline_inspection(env, {"d1", "d2"}, 0.0), Error);
  Environment bare = pole_scene();
  bare.poles.clear();
  CHECK_THROWS_AS(powerline_inspection(bare, {"d1", "d2"}, 12.0), Error);
}

TEST_CASE("environment validation") {
  Environment env = crossing_scene();
  CHECK_NOTHROW(env.validate());

  Environment far = crossing_scene();
  far.goals[0].second = box(20, 21, 20, 21, 0, 1);
  CHECK_THROWS_AS(far.validate(), Error);

  Environment dup = crossing_scene();
  dup.obstacles.push_back({"goal1", box(0, 1, 0, 1, 0, 1)});
  CHECK_THROWS_AS(dup.validate(), Error);

  Environment neg = crossing_scene();
  neg.min_separation = 0.0;
  CHECK_THROWS_AS(neg.validate(), Error);

  Environment three_poles = pole_scene();
  three_poles.poles.pop_back();
  CHECK_THROWS_AS(three_poles.validate(), Error);

  Environment inverted = crossing_scene();
  inverted.workspace = box(5, -5, -5, 5, 0, 3);
  CHECK_THROWS_AS(inverted.validate(), Error);
}

TEST_CASE("region map exposes aliases and poles") {
  const Environment env = pole_scene();
  const auto map = env.region_map();
  CHECK(map.contains("ws"));
  CHECK(map.contains("workspace"));
  CHECK(map.contains("pole1"));
  CHECK(map.contains("pole4"));
  CHECK(map.at("pole2").lo.x() == 3.0);

  const auto crossing = crossing_scene().region_map();
  CHECK(crossing.contains("goal1"));
  CHECK(crossing.contains("pillar"));
  CHECK_FALSE(crossing.contains("pole1"));
}

TEST_CASE("builders are deterministic and print-parse stable") {
  const Environment env = crossing_scene();
  const auto a = reach_avoid(env, {{"d1", "goal1"}, {"d2", "goal2"}}, 10.0);
  const auto b = reach_avoid(env, {{"d1", "goal1"}, {"d2", "goal2"}}, 10.0);
  CHECK(structurally_equal(a, b));
  CHECK(print_formula(a) == print_formula(b));
  CHECK(structurally_equal(parse_formula(print_formula(a)), a));

  const auto p = powerline_inspection(pole_scene(), {"d1", "d2"}, 12.0);
  CHECK(structurally_equal(parse_formula(print_formula(p)), p));
}