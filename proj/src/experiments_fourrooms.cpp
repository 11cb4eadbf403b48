#include "experiments_internal.hpp"
#include "firstocc/parallel.hpp"

#include <cmath>
#include <functional>
#include <memory>

namespace firstocc {

using detail::kEnvStream;
using detail::kGoalStream;
using detail::kPretrainStream;
using detail::mean_of;
using detail::std_of;

double FourRoomsArm::mean_goals() const { return mean_of(goals_per_episode); }
double FourRoomsArm::std_goals() const { return std_of(goals_per_episode); }
double FourRoomsArm::mean_return() const { return mean_of(return_per_episode); }

const FourRoomsArm& FourRoomsResult::arm(const std::string& name) const {
  for (const FourRoomsArm& a : arms) {
    if (a.name == name) return a;
  }
  throw std::invalid_argument("fourrooms: no arm named " + name);
}

namespace {

// TD pre-training: every base policy is run from every start state for
// pretrain_passes episodes, updating its FR row by row.
OccupancyMatrix pretrain_fr(const Gridworld& grid, const Policy& pi, double alpha,
                            const FourRoomsParams& p, std::uint64_t seed, int policy_idx,
                            std::vector<double>* curve_mean, std::vector<double>* curve_std) {
  const int n = grid.mdp.num_states;
  OccupancyMatrix rep = OccupancyMatrix::fr_initial(n, grid.mdp.gamma);
  for (int pass = 0; pass < p.pretrain_passes; ++pass) {
    std::vector<double> episode_norms;
    episode_norms.reserve(n);
    for (int s0 = 0; s0 < n; ++s0) {
      Rng rng = Rng::substream(seed, {kPretrainStream, static_cast<std::uint64_t>(policy_idx),
                                      static_cast<std::uint64_t>(pass),
                                      static_cast<std::uint64_t>(s0)});
      int s = s0;
      double norm_acc = 0.0;
      for (int t = 0; t < p.pretrain_steps; ++t) {
        const int a = pi.sample(s, rng);
        const int next = grid.sample_step(s, a, rng).next_state;
        norm_acc += fr_td_update(rep, s, next, alpha).norm();
        s = next;
      }
      episode_norms.push_back(norm_acc / p.pretrain_steps);
    }
    if (curve_mean) curve_mean->push_back(mean_of(episode_norms));
    if (curve_std) curve_std->push_back(std_of(episode_norms));
  }
  return rep;
}

struct PlanCost {
  long long ops = 0;
  int plans = 0;
};

struct ArmRunner {
  std::string name;
  std::function<void(int goal)> replan;
  std::function<int(int s)> act;  // returns an action index
  std::shared_ptr<PlanCost> cost = std::make_shared<PlanCost>();
};

int sample_goal(std::uint64_t seed, int episode, int goal_idx, int num_states, int exclude) {
  Rng rng = Rng::substream(seed, {kGoalStream, static_cast<std::uint64_t>(episode),
                                  static_cast<std::uint64_t>(goal_idx)});
  int g = rng.next_int(num_states);
  while (g == exclude) g = rng.next_int(num_states);
  return g;
}

void run_arm(const Gridworld& grid, ArmRunner& arm, const FourRoomsParams& p, std::uint64_t seed,
             FourRoomsArm& out) {
  const int start = *grid.start_state;
  const int n = grid.mdp.num_states;
  for (int e = 0; e < p.episodes; ++e) {
    Rng env_rng = Rng::substream(seed, {kEnvStream, static_cast<std::uint64_t>(e)});
    int s = start;
    int goal_idx = 0;
    int goal = sample_goal(seed, e, goal_idx, n, s);
    arm.replan(goal);
    int goals = 0;
    double ret = 0.0;
    std::vector<int> traj{s};
    for (int t = 0; t < p.steps_per_episode; ++t) {
      const int a = arm.act(s);
      const Gridworld::GridStep gs = grid.sample_step(s, a, env_rng);
      ret += gs.reward;
      if (p.capture_trajectories) traj.push_back(gs.next_state);
      if (gs.next_state == goal) {
        ++goals;
        ++goal_idx;
        goal = sample_goal(seed, e, goal_idx, n, gs.next_state);
        arm.replan(goal);
      }
      s = gs.next_state;
    }
    out.goals_per_episode.push_back(goals);
    out.return_per_episode.push_back(ret);
    if (p.capture_trajectories) out.trajectories.push_back(std::move(traj));
  }
  out.name = arm.name;
  out.mean_plan_ops =
      arm.cost->plans > 0 ? static_cast<double>(arm.cost->ops) / arm.cost->plans : 0.0;
}

ArmRunner make_frp_arm(const std::string& name, const std::vector<OccupancyMatrix>& frs,
                       const std::vector<Policy>& policies, int sweeps, double tol) {
  auto pt = std::make_shared<PlanTable>();
  ArmRunner arm;
  arm.name = name;
  arm.replan = [&frs, pt, sweeps, tol, cost = arm.cost](int goal) {
    *pt = frp(frs, goal, sweeps, tol);
    cost->ops += pt->ops_count;
    ++cost->plans;
  };
  arm.act = [pt, &policies](int s) { return policies[pt->plan_policy[s]].action(s); };
  return arm;
}

// Single-goal GPI over state-indexed FRs: the policy whose first-occupancy
// discount to the goal is largest wins, lowest index on ties.
ArmRunner make_gpi_arm(const std::vector<OccupancyMatrix>& frs,
                       const std::vector<Policy>& policies) {
  auto goal_state = std::make_shared<int>(0);
  ArmRunner arm;
  arm.name = "gpi";
  arm.replan = [goal_state](int goal) { *goal_state = goal; };
  arm.act = [&frs, &policies, goal_state](int s) {
    int best = 0;
    double best_v = frs[0].matrix()(s, *goal_state);
    for (int pidx = 1; pidx < static_cast<int>(frs.size()); ++pidx) {
      const double v = frs[pidx].matrix()(s, *goal_state);
      if (v > best_v) {
        best_v = v;
        best = pidx;
      }
    }
    return policies[best].action(s);
  };
  return arm;
}

ArmRunner make_vi_arm(const std::string& name, const Gridworld& grid, int max_iters, double tol) {
  auto mdp = std::make_shared<TabularMdp>(grid.mdp);
  auto greedy = std::make_shared<Policy>();
  ArmRunner arm;
  arm.name = name;
  arm.replan = [mdp, greedy, max_iters, tol, &grid, cost = arm.cost](int goal) {
    mdp->reward.setZero();
    mdp->reward[goal] = grid.spec.goal_reward;
    ValueIterationResult res = value_iteration(*mdp, tol, max_iters);
    *greedy = std::move(res.greedy);
    cost->ops += res.ops_count;
    ++cost->plans;
  };
  arm.act = [greedy](int s) { return greedy->action(s); };
  return arm;
}

}  // namespace

FourRoomsResult run_four_rooms(const FourRoomsParams& p, std::uint64_t seed) {
  FourRoomsResult result;
  result.grid = four_rooms(p.gamma, p.slip);
  const Gridworld& grid = result.grid;

  std::vector<Policy> policies;
  for (int a = 0; a < grid.mdp.num_actions; ++a) policies.push_back(one_action_policy(grid.mdp, a));

  result.fr_curves.name = "fr_learning_curve";
  result.fr_curves.columns = {"episode", "policy", "td_error_norm_mean", "td_error_norm_std"};
  result.fr_curves.series = true;

  std::vector<std::vector<double>> curve_mean(policies.size()), curve_std(policies.size());
  result.learned_frs.resize(policies.size());
  parallel_for(static_cast<int>(policies.size()), [&](int pi) {
    if (p.learn_frs_by_td) {
      result.learned_frs[pi] = pretrain_fr(grid, policies[pi], p.fr_alpha, p, seed, pi,
                                           &curve_mean[pi], &curve_std[pi]);
    } else {
      result.learned_frs[pi] = fr_dp(grid.mdp, policies[pi], 1e-12);
    }
  });
  for (std::size_t pi = 0; pi < policies.size(); ++pi) {
    for (std::size_t e = 0; e < curve_mean[pi].size(); ++e) {
      result.fr_curves.add_row({std::to_string(e), action_name(grid.spec.action_set, static_cast<int>(pi)),
                                fmt_num(curve_mean[pi][e]), fmt_num(curve_std[pi][e])});
    }
  }

  std::vector<ArmRunner> runners;
  for (int k : p.frp_k) {
    if (k < 0) {
      runners.push_back(
          make_frp_arm("frp-converged", result.learned_frs, policies, p.frp_converged_sweeps, p.frp_tol));
    } else {
      runners.push_back(
          make_frp_arm("frp-k" + std::to_string(k), result.learned_frs, policies, k, p.frp_tol));
    }
  }
  if (p.run_gpi) runners.push_back(make_gpi_arm(result.learned_frs, policies));
  for (int k : p.vi_k) {
    runners.push_back(make_vi_arm("vi-k" + std::to_string(k), grid, k, 1e-13));
  }
  if (p.run_vi_converged) runners.push_back(make_vi_arm("vi", grid, 100000, p.vi_tol));

  result.arms.resize(runners.size());
  for (std::size_t i = 0; i < runners.size(); ++i) {
    run_arm(grid, runners[i], p, seed, result.arms[i]);
  }
  return result;
}

std::vector<NoiseSweepLevel> run_noise_sweep(const NoiseSweepParams& params, std::uint64_t seed) {
  std::vector<NoiseSweepLevel> levels(params.slips.size());
  parallel_for(static_cast<int>(params.slips.size()), [&](int i) {
    FourRoomsParams p = params.base;
    p.slip = params.slips[i];
    p.frp_k = {-1};  // converged planning only
    p.vi_k.clear();
    p.run_gpi = false;
    p.run_vi_converged = true;
    FourRoomsResult res = run_four_rooms(p, seed + i);
    levels[i].slip = params.slips[i];
    levels[i].frp = res.arm("frp-converged");
    levels[i].vi = res.arm("vi");
  });
  return levels;
}

namespace detail {

ExperimentReport report_four_rooms(const FourRoomsParams& params, std::uint64_t seed) {
  FourRoomsResult res = run_four_rooms(params, seed);
  ExperimentReport report;
  report.experiment = "fourrooms";
  report.seed = seed;

  DataTable episodes;
  episodes.name = "fourrooms_episodes";
  episodes.columns = {"arm", "episode", "goals", "reward"};
  for (const FourRoomsArm& arm : res.arms) {
    for (std::size_t e = 0; e < arm.goals_per_episode.size(); ++e) {
      episodes.add_row({arm.name, std::to_string(e), std::to_string(arm.goals_per_episode[e]),
                        fmt_num(arm.return_per_episode[e])});
    }
  }
  report.tables.push_back(std::move(episodes));

  DataTable summary;
  summary.name = "fourrooms_summary";
  summary.columns = {"arm",         "mean_goals",  "std_goals",
                     "mean_return", "std_return",  "mean_plan_ops"};
  for (const FourRoomsArm& arm : res.arms) {
    summary.add_row({arm.name, fmt_num(arm.mean_goals()), fmt_num(arm.std_goals()),
                     fmt_num(arm.mean_return()), fmt_num(std_of(arm.return_per_episode)),
                     fmt_num(arm.mean_plan_ops)});
  }
  report.tables.push_back(std::move(summary));
  report.tables.push_back(res.fr_curves);

  for (std::size_t pi = 0; pi < res.learned_frs.size(); ++pi) {
    report.artifacts.emplace_back(
        "fr_" + action_name(res.grid.spec.action_set, static_cast<int>(pi)) + ".occ",
        occupancy_artifact_text(res.learned_frs[pi]));
  }
  return report;
}

ExperimentReport report_noise_sweep(const NoiseSweepParams& params, std::uint64_t seed) {
  const std::vector<NoiseSweepLevel> levels = run_noise_sweep(params, seed);
  ExperimentReport report;
  report.experiment = "fourrooms-noise";
  report.seed = seed;

  DataTable episodes;
  episodes.name = "noise_episodes";
  episodes.columns = {"slip", "arm", "episode", "goals", "reward"};
  DataTable summary;
  summary.name = "noise_summary";
  summary.columns = {"slip", "arm", "mean_goals", "std_goals", "mean_return"};
  summary.series = true;
  for (const NoiseSweepLevel& level : levels) {
    for (const FourRoomsArm* arm : {&level.frp, &level.vi}) {
      for (std::size_t e = 0; e < arm->goals_per_episode.size(); ++e) {
        episodes.add_row({fmt_num(level.slip), arm->name, std::to_string(e),
                          std::to_string(arm->goals_per_episode[e]),
                          fmt_num(arm->return_per_episode[e])});
      }
      summary.add_row({fmt_num(level.slip), arm->name, fmt_num(arm->mean_goals()),
                       fmt_num(arm->std_goals()), fmt_num(arm->mean_return())});
    }
  }
  report.tables.push_back(std::move(episodes));
  report.tables.push_back(std::move(summary));
  return report;
}

}  // namespace detail

}  // namespace firstocc
