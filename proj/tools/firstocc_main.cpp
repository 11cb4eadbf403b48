#include "firstocc/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace firstocc;

Gridworld load_env(const std::string& env) {
  if (env == "fourrooms") return four_rooms();
  if (env == "escape") return escape_arena(true);
  if (env == "escape-open") return escape_arena(false);
  return load_grid_map(env);
}

Cell parse_cell(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("cell must be given as row,col");
  }
  return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
}

std::vector<Policy> parse_policies(const Gridworld& grid, const std::string& list) {
  std::vector<Policy> policies;
  if (list == "all") {
    for (int a = 0; a < grid.mdp.num_actions; ++a) {
      policies.push_back(one_action_policy(grid.mdp, a));
    }
    return policies;
  }
  std::istringstream in(list);
  std::string name;
  while (std::getline(in, name, ',')) {
    const auto a = action_index(grid.spec.action_set, name);
    if (!a) throw CLI::ValidationError("unknown policy name '" + name + "'");
    policies.push_back(one_action_policy(grid.mdp, *a));
  }
  if (policies.empty()) throw CLI::ValidationError("empty policy list");
  return policies;
}

int cmd_run(const std::string& experiment, std::uint64_t seed, const std::string& out_dir,
            const std::vector<std::string>& sets) {
  ExperimentConfig config;
  config.name = experiment;
  config.seed = seed;
  config.out_dir = out_dir;
  for (const std::string& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
      return 1;
    }
    config.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  const ExperimentReport report = run_experiment(config);
  std::vector<std::string> files = emit_report(report, "csv", out_dir);
  const std::vector<std::string> dat = emit_report(report, "plotdata", out_dir);
  files.insert(files.end(), dat.begin(), dat.end());
  for (const std::string& f : files) std::cout << f << "\n";
  return 0;
}

int cmd_plan(const std::string& env, const std::string& goal_text, const std::string& policy_list,
             const std::string& start_text, const std::string& out_dir) {
  const Gridworld grid = load_env(env);
  const int goal = grid.state_of(parse_cell(goal_text));
  int start;
  if (!start_text.empty()) {
    start = grid.state_of(parse_cell(start_text));
  } else if (grid.start_state) {
    start = *grid.start_state;
  } else {
    std::cerr << "error: no start state; pass --start or mark S in the map\n";
    return 1;
  }
  const std::vector<Policy> policies = parse_policies(grid, policy_list);

  std::vector<OccupancyMatrix> frs;
  for (const Policy& pi : policies) frs.push_back(fr_dp(grid.mdp, pi));
  const PlanTable pt = frp(frs, goal, grid.mdp.num_states);
  const Plan plan = construct_plan(pt, start);

  auto state_name = [&](int s) {
    const Cell c = grid.cell_of(s);
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
  };
  auto policy_name = [&](int p) {
    // Policy indices follow the order given on the command line.
    std::istringstream in(policy_list == "all" ? "" : policy_list);
    std::vector<std::string> names;
    std::string name;
    while (std::getline(in, name, ',')) names.push_back(name);
    if (names.empty()) return action_name(grid.spec.action_set, p);
    return names.at(p);
  };
  const std::string text = plan_to_text(plan, pt, state_name, policy_name);

  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / "plan.txt").string();
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  out << text;
  std::cout << text;
  std::cout << path << "\n";
  return 0;
}

int cmd_learn_fr(const std::string& env, const std::string& policy_name_arg, int steps,
                 std::uint64_t seed, double alpha, const std::string& out_path) {
  const Gridworld grid = load_env(env);
  const auto a = action_index(grid.spec.action_set, policy_name_arg);
  if (!a) {
    std::cerr << "error: unknown policy name '" << policy_name_arg << "'\n";
    return 1;
  }
  const Policy pi = one_action_policy(grid.mdp, *a);

  OccupancyMatrix rep = OccupancyMatrix::fr_initial(grid.mdp.num_states, grid.mdp.gamma);
  Rng rng(seed);
  int s = rng.next_int(grid.mdp.num_states);
  for (int t = 0; t < steps; ++t) {
    const int next = grid.sample_step(s, pi.action(s), rng).next_state;
    fr_td_update(rep, s, next, alpha);
    // Restart from a random state whenever the policy pins itself to a wall.
    s = next == s ? rng.next_int(grid.mdp.num_states) : next;
  }
  save_occupancy(rep, out_path);
  std::cout << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-occupancy representation workbench"};
  app.require_subcommand(1);

  std::string experiment, out_dir = "out";
  std::uint64_t seed = 1;
  std::vector<std::string> sets;
  CLI::App* run = app.add_subcommand("run", "run a named experiment");
  run->add_option("experiment", experiment,
                  "one of: fig1-demo, fig3-planning, fourrooms, fourrooms-noise, exploration, "
                  "mountaincar-ff, mountaincar-dims, escape")
      ->required();
  run->add_option("--seed", seed, "root seed for the experiment's stream tree");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--set", sets, "override, e.g. fourrooms.k_iters=3")->take_all();

  std::string env, goal_text, policy_list = "all", start_text;
  CLI::App* plan = app.add_subcommand("plan", "plan a route to a goal cell");
  plan->add_option("--env", env, "builtin name (fourrooms, escape, escape-open) or a map file")
      ->required();
  plan->add_option("--goal", goal_text, "goal cell as row,col")->required();
  plan->add_option("--policies", policy_list, "comma-separated action names, or 'all'");
  plan->add_option("--start", start_text, "start cell as row,col (defaults to the map's S)");
  plan->add_option("--out", out_dir, "output directory");

  std::string policy_name_arg, fr_out = "fr.occ";
  int steps = 10000;
  double alpha = 0.05;
  CLI::App* learn = app.add_subcommand("learn-fr", "learn one policy's FR by TD");
  learn->add_option("--env", env, "builtin name or a map file")->required();
  learn->add_option("--policy", policy_name_arg, "action name, e.g. up")->required();
  learn->add_option("--steps", steps, "TD steps");
  learn->add_option("--seed", seed, "stream seed");
  learn->add_option("--alpha", alpha, "learning rate");
  learn->add_option("--out", fr_out, "output artifact path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(experiment, seed, out_dir, sets);
    if (plan->parsed()) return cmd_plan(env, goal_text, policy_list, start_text, out_dir);
    if (learn->parsed()) return cmd_learn_fr(env, policy_name_arg, steps, seed, alpha, fr_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
