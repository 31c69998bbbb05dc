#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "stlplan/cli.hpp"

using namespace stlplan;
namespace fs = std::filesystem;

namespace {

const char* kMinimalMission = R"({
  "agents": [{"name": "d1", "x0": {"p": [-4, -4, 1]}}],
  "environment": {
    "workspace": {"min": [-5, -5, 0], "max": [5, 5, 3]},
    "goals": {"goal1": {"min": [3, 3, 0.5], "max": [4.5, 4.5, 2]}}
  },
  "mission": {"builtin": "reach_avoid"}
})";

const char* kQuickMission = R"({
  "agents": [{"name": "d1", "x0": {"p": [-4, -4, 1]}}],
  "environment": {
    "workspace": {"min": [-5, -5, 0], "max": [5, 5, 3]},
    "goals": {"goal1": {"min": [3, 3, 0.5], "max": [4.5, 4.5, 2]}}
  },
  "mission": {"builtin": "reach_avoid"},
  "solver": {"restarts": 2, "max_iters": 80, "seed": 1}
})";

const char* kUnsatMission = R"json({
  "agents": [{"name": "d1", "x0": {"p": [0, 0, 1]}}],
  "environment": {
    "workspace": {"min": [-5, -5, 0], "max": [5, 5, 3]},
    "obstacles": {"far": {"min": [20, 20, 0], "max": [21, 21, 1]}}
  },
  "mission": {"formula": "F[0,10] in(d1, far) && G[0,10] in(d1, ws)"},
  "solver": {"restarts": 1, "max_iters": 10}
})json";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stlplan_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += (c == '\n');
  return n;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("a minimal mission fills in every default") {
  const MissionFile m = parse_mission(kMinimalMission);
  CHECK(m.spec.T == 10.0);
  CHECK(m.spec.Ts == 0.1);
  CHECK(m.spec.knots == 5);
  CHECK(m.spec.epsilon == 0.01);
  CHECK(m.spec.bounds.vmax == 3.0);
  CHECK(m.spec.bounds.amax == 5.0);
  CHECK(m.config.restarts == 8);
  CHECK(m.config.max_iterations == 300);
  CHECK(m.config.penalty_weight == 100.0);
  CHECK(m.config.time_budget_s == 60.0);
  CHECK(m.config.report_temperature == 25.0);
  REQUIRE(m.config.schedule.size() == 2);
  CHECK(m.config.schedule[0].until_fraction == 0.5);
  CHECK(m.config.schedule[0].k == 10.0);
  CHECK(m.config.schedule[1].k == 50.0);

  // one agent, one goal: the assignment is inferred
  CHECK(structurally_equal(m.spec.formula,
                           reach_avoid(m.spec.environment, {{"d1", "goal1"}}, 10.0)));
}

TEST_CASE("a constant solver temperature overrides the schedule") {
  std::string text = kMinimalMission;
  text.insert(text.rfind('}'), R"(, "solver": {"temperature": 40})");
  const MissionFile m = parse_mission(text);
  REQUIRE(m.config.schedule.size() == 1);
  CHECK(m.config.schedule[0].k == 40.0);
  CHECK(m.config.schedule[0].until_fraction == 1.0);
  CHECK(m.config.report_temperature == 40.0);
}

TEST_CASE("mission file errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_mission("{"), doctest::Contains("not valid JSON"),
                       MissionFileError);

  std::string text = kMinimalMission;
  text.insert(text.rfind('}'), R"(, "solver": {"epsilon": "tiny"})");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("solver.epsilon"),
                       MissionFileError);

  text = kMinimalMission;
  text.insert(text.rfind('}'), R"(, "solvers": {})");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("solvers"), MissionFileError);

  CHECK_THROWS_WITH_AS(parse_mission(R"({"environment": {}, "mission": {}})"),
                       doctest::Contains("agents"), MissionFileError);

  // builtin and formula are mutually exclusive, and one is required
  text = kMinimalMission;
  text.replace(text.find(R"("builtin": "reach_avoid")"), 24,
               R"("builtin": "reach_avoid", "formula": "true")");
  CHECK_THROWS_AS(parse_mission(text), MissionFileError);
  text = kMinimalMission;
  text.replace(text.find(R"({"builtin": "reach_avoid"})"), 26, "{}");
  CHECK_THROWS_AS(parse_mission(text), MissionFileError);

  text = kMinimalMission;
  text.replace(text.find(R"("builtin": "reach_avoid")"), 24,
               R"json("formula": "F[0,10] in(d1, gate)")json");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("gate"), Error);

  text = kMinimalMission;
  text.replace(text.find(R"("builtin": "reach_avoid")"), 24,
               R"json("formula": "G[0,7] in(d1, ws)")json");
  text.insert(text.rfind('}'), R"(, "timing": {"T": 5})");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("horizon"), Error);

  text = kMinimalMission;
  text.replace(text.find(R"("builtin": "reach_avoid")"), 24,
               R"("formula": "F[0,10] in(d1, ws) &&")");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("mission.formula"),
                       MissionFileError);
}

TEST_CASE("explicit goal assignments are checked") {
  std::string text = kMinimalMission;
  text.replace(text.find(R"({"builtin": "reach_avoid"})"), 26,
               R"({"builtin": "reach_avoid", "assignments": {"d2": "goal1"}})");
  CHECK_THROWS_WITH_AS(parse_mission(text), doctest::Contains("d2"), MissionFileError);
}

TEST_CASE("run plans a mission and writes the outputs") {
  const fs::path dir = fresh_dir("happy");
  const fs::path mission = write_file(dir, "mission.json", kQuickMission);

  RunOptions opt;
  opt.mission_path = mission.string();
  opt.out_dir = (dir / "out").string();
  opt.plot = true;

  std::ostringstream out, err;
  const int code = run(opt, out, err);
  CHECK(code == 0);
  CHECK(err.str().empty());
  CHECK(out.str().find("Success") != std::string::npos);

  const std::string csv = slurp(dir / "out" / "trajectory.csv");
  CHECK(count_lines(csv) == 1 + 101);  // header + one agent's samples
  CHECK(csv.rfind("t,agent,px,py,pz,vx,vy,vz,ax,ay,az", 0) == 0);

  CHECK(fs::exists(dir / "out" / "report.json"));
  const std::string report = slurp(dir / "out" / "report.json");
  CHECK(report.find("\"status\"") != std::string::npos);

  const std::string svg = slurp(dir / "out" / "trajectory.svg");
  CHECK(count_occurrences(svg, "<path") == 1);
  CHECK(svg.find("goal1") != std::string::npos);
}

TEST_CASE("run reports a failed plan with exit code 2") {
  const fs::path dir = fresh_dir("unsat");
  const fs::path mission = write_file(dir, "mission.json", kUnsatMission);

  RunOptions opt;
  opt.mission_path = mission.string();
  opt.out_dir = (dir / "out").string();

  std::ostringstream out, err;
  CHECK(run(opt, out, err) == 2);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(out.str().find("Success") == std::string::npos);
}

TEST_CASE("run fails cleanly on a missing mission file") {
  RunOptions opt;
  opt.mission_path = "/nonexistent/mission.json";
  std::ostringstream out, err;
  CHECK(run(opt, out, err) == 1);
  CHECK(err.str().find("error:") != std::string::npos);
}

TEST_CASE("csv round-trips the trace bitwise") {
  const fs::path dir = fresh_dir("roundtrip");
  const MissionFile m = parse_mission(kQuickMission);
  const PlanResult r = plan(m.spec, m.config);

  const fs::path csv = dir / "out.csv";
  write_csv(r.trace, csv.string());
  const Trace back = read_csv(csv.string());

  CHECK(back.sampling_period == r.trace.sampling_period);
  REQUIRE(back.agent_names == r.trace.agent_names);
  REQUIRE(back.sample_count() == r.trace.sample_count());
  for (std::size_t t = 0; t < back.sample_count(); ++t) {
    CHECK(back.agents[0][t].p == r.trace.agents[0][t].p);
    CHECK(back.agents[0][t].v == r.trace.agents[0][t].v);
    CHECK(back.agents[0][t].a == r.trace.agents[0][t].a);
  }

  // a result revalidated through the file is still consistent
  PlanResult rehydrated = r;
  rehydrated.trace = back;
  const ValidationReport v = validate_plan(rehydrated, m.spec);
  CHECK(v.consistent);
  CHECK(v.exact_robustness == r.exact_robustness);
}

TEST_CASE("reruns with the same seed produce identical files") {
  const fs::path dir = fresh_dir("rerun");
  const fs::path mission = write_file(dir, "mission.json", kQuickMission);

  auto once = [&](const std::string& sub) {
    RunOptions opt;
    opt.mission_path = mission.string();
    opt.out_dir = (dir / sub).string();
    std::ostringstream out, err;
    REQUIRE(run(opt, out, err) == 0);
    return slurp(dir / sub / "trajectory.csv");
  };
  const std::string a = once("a");
  const std::string b = once("b");
  CHECK(!a.empty());
  CHECK(a == b);
}

TEST_CASE("validate-only re-checks a written trajectory") {
  const fs::path dir = fresh_dir("validate");
  const fs::path mission = write_file(dir, "mission.json", kQuickMission);

  RunOptions opt;
  opt.mission_path = mission.string();
  opt.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(run(opt, out, err) == 0);

  RunOptions check;
  check.mission_path = mission.string();
  check.validate_csv = (dir / "out" / "trajectory.csv").string();
  std::ostringstream vout, verr;
  CHECK(run(check, vout, verr) == 0);
  CHECK(vout.str().find("robustness") != std::string::npos);

  // a trace that ignores the mission fails the re-check
  const fs::path other = fresh_dir("validate_other");
  const fs::path unsat = write_file(other, "mission.json", kUnsatMission);
  RunOptions bad;
  bad.mission_path = unsat.string();
  bad.validate_csv = (dir / "out" / "trajectory.csv").string();
  std::ostringstream bout, berr;
  CHECK(run(bad, bout, berr) == 2);
}