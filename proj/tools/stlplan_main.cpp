#include <iostream>

#include "CLI11.hpp"
#include "stlplan/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent temporal-logic trajectory planner"};
  app.require_subcommand(1);

  stlplan::RunOptions options;
  CLI::App* plan = app.add_subcommand("plan", "Plan trajectories for a mission file");
  plan->add_option("mission", options.mission_path, "Mission file (JSON)")->required();
  plan->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  plan->add_option("--seed", options.seed, "Planner seed");
  plan->add_option("--restarts", options.restarts, "Number of restarts");
  plan->add_option("--max-iters", options.max_iterations, "Iteration limit per restart");
  plan->add_option("--temperature", options.temperature,
                   "Constant smoothing temperature (also used for reporting)");
  plan->add_option("--epsilon", options.epsilon, "Minimum robustness for Success");
  plan->add_flag("--plot", options.plot, "Also write a top-down SVG");
  plan->add_option("--validate-only", options.validate_csv,
                   "Re-check this trajectory CSV against the mission instead of planning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  return stlplan::run(options, std::cout, std::cerr);
}
