#pragma once

#include "firstocc/demo_rooms.hpp"
#include "firstocc/exploration_agent.hpp"
#include "firstocc/exploration_env.hpp"
#include "firstocc/gridworld.hpp"
#include "firstocc/mountain_car.hpp"
#include "firstocc/planner.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace firstocc {

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  bool series = false;  // series tables also get a gnuplot .dat emission

  void add_row(std::vector<std::string> row);
};

std::string fmt_num(double value);

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<DataTable> tables;
  // Extra text artifacts (plans, cached representations) written alongside.
  std::vector<std::pair<std::string, std::string>> artifacts;

  const DataTable& table(const std::string& name) const;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::map<std::string, std::string> overrides;  // dotted keys, e.g. fourrooms.episodes
};

// Dispatches to the named protocol; throws std::invalid_argument for unknown
// experiment names or override keys.
ExperimentReport run_experiment(const ExperimentConfig& config);

// format is "csv" or "plotdata". Returns the paths written. Tables with no
// rows are an error; no empty files are produced.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& format,
                                     const std::string& out_dir);

// ---------------------------------------------------------------------------
// Four-room task (single-goal streaks within fixed-length episodes)
// ---------------------------------------------------------------------------

struct FourRoomsParams {
  double gamma = 0.95;
  double fr_alpha = 0.05;
  double slip = 0.0;
  int pretrain_passes = 50;  // episodes per start state, per base policy
  int pretrain_steps = 75;
  int episodes = 100;
  int steps_per_episode = 75;
  std::vector<int> frp_k = {0, 1, 2, 3};
  std::vector<int> vi_k = {1, 2, 3};
  bool run_gpi = true;
  bool run_vi_converged = true;
  double vi_tol = 1e-6;
  double frp_tol = 1e-12;
  int frp_converged_sweeps = 25;  // used when an entry of frp_k is < 0
  bool capture_trajectories = false;
  bool learn_frs_by_td = true;  // false: exact DP FRs (diagnostics only)
};

struct FourRoomsArm {
  std::string name;
  std::vector<int> goals_per_episode;
  std::vector<double> return_per_episode;
  std::vector<std::vector<int>> trajectories;  // per episode, when captured
  double mean_plan_ops = 0.0;

  double mean_goals() const;
  double std_goals() const;
  double mean_return() const;
};

struct FourRoomsResult {
  Gridworld grid;
  std::vector<OccupancyMatrix> learned_frs;
  std::vector<FourRoomsArm> arms;
  DataTable fr_curves;  // TD-error norms per pretraining episode

  const FourRoomsArm& arm(const std::string& name) const;
};

FourRoomsResult run_four_rooms(const FourRoomsParams& params, std::uint64_t seed);

struct NoiseSweepParams {
  FourRoomsParams base;
  std::vector<double> slips = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

struct NoiseSweepLevel {
  double slip = 0.0;
  FourRoomsArm vi;
  FourRoomsArm frp;
};

std::vector<NoiseSweepLevel> run_noise_sweep(const NoiseSweepParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Hard-exploration suite
// ---------------------------------------------------------------------------

struct ExplorationSuiteParams {
  int trials = 100;
  int horizon = 5000;
  double alpha = 0.1;
  double epsilon = 0.1;
  double gamma = 0.95;
  double rep_alpha = 0.1;
  bool bonus_post_update = true;
  std::vector<double> betas = {0.01, 0.05, 0.1, 0.5, 1.0, 10.0};
  std::vector<std::string> tasks = {"riverswim", "sixarms"};
};

struct ExplorationCell {
  std::string task;
  std::string method;  // sarsa, sarsa+sr, sarsa+fr
  double beta = 0.0;
  std::vector<double> returns;  // one entry per trial

  double mean() const;
  double stddev() const;
};

struct ExplorationSuiteResult {
  std::vector<ExplorationCell> sweep;     // every (task, method, beta) combination
  std::vector<ExplorationCell> selected;  // best beta per (task, method), plus plain sarsa

  const ExplorationCell& selected_cell(const std::string& task, const std::string& method) const;
};

ExplorationSuiteResult run_exploration_suite(const ExplorationSuiteParams& params,
                                             std::uint64_t seed);

// ---------------------------------------------------------------------------
// Mountain-car feature occupancies
// ---------------------------------------------------------------------------

struct MountainCarParams {
  int feature_dim = 20;
  double threshold = 0.7;
  double gamma = 0.99;
  double alpha = 0.1;
  int num_policies = 9;  // powers 0.1 .. 0.9
  int pretrain_episodes = 100;
  int episode_steps = 200;
  int seeds = 20;
  int goals_per_seed = 10;
  double goal_lo = 0.05;
  double goal_hi = 0.55;
  int true_value_horizon = 200;
  double ridge = 1e-8;
  double start_lo = -0.6;
  double start_hi = -0.4;
  CarState eval_start{-0.5, 0.0};
  bool cache_representations = false;
};

struct MountainCarGoalRow {
  int seed = 0;
  double goal = 0.0;
  std::string method;  // ff or sf
  double v_est = 0.0;
  double v_true = 0.0;
  double v_star = 0.0;
  double selected_power = 0.0;
  double optimal_power = 0.0;
};

struct MountainCarResult {
  std::vector<MountainCarGoalRow> rows;
  DataTable curves;  // TD-error norms per pretraining episode
  std::vector<FeatureOccupancy> cached_ff;  // seed 0 representations, if requested
  std::vector<FeatureOccupancy> cached_sf;
};

MountainCarResult run_mountain_car_eval(const MountainCarParams& params, std::uint64_t seed);

struct DimsSweepParams {
  MountainCarParams base;
  std::vector<int> dims = {5, 10, 20, 40, 80};
  double example_goal = 0.45;
};

struct DimsRow {
  int dim = 0;
  double ff_power = 0.0;
  double sf_power = 0.0;
  double optimal_power = 0.0;
  double ff_v_est = 0.0;
  double sf_v_est = 0.0;
};

std::vector<DimsRow> run_mountain_car_dims(const DimsSweepParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Escape protocol
// ---------------------------------------------------------------------------

struct EscapeParams {
  double gamma = 0.99;
  double alpha = 0.05;
  int explore_episodes = 5;  // per exploration phase
  int explore_steps = 250;
  int trials = 2;
  int trial_max_steps = 50;
  int frp_max_sweeps = 150;
  int default_policy = 2;  // "down" in the eight-action ordering
  bool run_sr_arms = true;
  bool run_fr_open = true;
};

struct EscapeTrial {
  Trajectory trajectory;
  bool planned_at_start = false;
  std::vector<PlanStep> start_plan;  // construct_plan at the trial start, when available
  int replans = 0;
  double mean_td_norm = 0.0;  // down-policy TD errors during the trial
};

struct EscapeArm {
  std::string name;  // fr-barrier, sr-barrier, fr-open, sr-open
  bool barrier = true;
  std::vector<EscapeTrial> trials;
  std::vector<double> explore_td_curve;  // down policy, per exploration episode
};

struct EscapeResult {
  Gridworld arena_barrier;
  Gridworld arena_open;
  std::vector<EscapeArm> arms;

  const EscapeArm& arm(const std::string& name) const;
};

EscapeResult run_escape(const EscapeParams& params, std::uint64_t seed);

// Cells adjacent to the ends of the escape barrier (used to judge whether a
// plan routes around the wall's edge).
std::vector<Cell> escape_barrier_end_cells();

}  // namespace firstocc
