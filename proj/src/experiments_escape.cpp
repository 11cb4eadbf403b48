#include "experiments_internal.hpp"

#include <cmath>

namespace firstocc {

using detail::kEnvStream;
using detail::kExploreStream;
using detail::kKickStream;
using detail::mean_of;

const EscapeArm& EscapeResult::arm(const std::string& name) const {
  for (const EscapeArm& a : arms) {
    if (a.name == name) return a;
  }
  throw std::invalid_argument("escape: no arm named " + name);
}

std::vector<Cell> escape_barrier_end_cells() { return {Cell{12, 6}, Cell{12, 18}}; }

namespace {

struct EscapeContext {
  const Gridworld* arena = nullptr;
  std::vector<Policy> policies;
  int start = 0;
  int shelter = 0;
};

EscapeContext make_context(const Gridworld& arena) {
  EscapeContext ctx;
  ctx.arena = &arena;
  for (int a = 0; a < arena.mdp.num_actions; ++a) {
    ctx.policies.push_back(one_action_policy(arena.mdp, a));
  }
  ctx.start = *arena.start_state;
  ctx.shelter = arena.goal_states.at(0);
  return ctx;
}

// Random base-policy walk from the shelter; each step updates the selected
// policy's representation.
void exploration_phase(const EscapeContext& ctx, std::vector<OccupancyMatrix>& reps, bool fr_kind,
                       const EscapeParams& p, std::uint64_t seed, std::uint64_t arm_id, int phase,
                       std::vector<double>& down_curve) {
  const int num_policies = static_cast<int>(ctx.policies.size());
  for (int ep = 0; ep < p.explore_episodes; ++ep) {
    Rng rng = Rng::substream(seed, {kExploreStream, arm_id, static_cast<std::uint64_t>(phase),
                                    static_cast<std::uint64_t>(ep)});
    int s = ctx.shelter;
    double down_acc = 0.0;
    int down_count = 0;
    for (int t = 0; t < p.explore_steps; ++t) {
      const int pidx = rng.next_int(num_policies);
      const int a = ctx.policies[pidx].action(s);
      const int next = ctx.arena->sample_step(s, a, rng).next_state;
      const Vector delta = fr_kind ? fr_td_update(reps[pidx], s, next, p.alpha)
                                   : sr_td_update(reps[pidx], s, next, p.alpha);
      if (pidx == p.default_policy) {
        down_acc += delta.norm();
        ++down_count;
      }
      s = next;
    }
    down_curve.push_back(down_count > 0 ? down_acc / down_count : 0.0);
  }
}

// Plan-following escape: run the planner's policy where the table knows a
// route and the default (away-from-threat) policy where it does not. A
// blocked move triggers a re-plan with the freshly updated FRs and starts a
// flight kick: a random base policy that does not retreat toward the threat,
// held until it bumps in turn or the plan takes over.
EscapeTrial fr_escape_trial(const EscapeContext& ctx, std::vector<OccupancyMatrix>& frs,
                            const EscapeParams& p, std::uint64_t seed, std::uint64_t arm_id,
                            int trial_idx) {
  const int num_policies = static_cast<int>(ctx.policies.size());
  const auto& offsets = action_offsets(ctx.arena->spec.action_set);
  const Cell default_dir = offsets[p.default_policy];

  EscapeTrial trial;
  PlanTable pt = frp(frs, ctx.shelter, p.frp_max_sweeps, 0.0);
  if (pt.gamma_to_goal[ctx.start] > 0.0) {
    trial.planned_at_start = true;
    trial.start_plan = construct_plan(pt, ctx.start).steps;
  }

  Rng kick_rng = Rng::substream(seed, {kKickStream, arm_id, static_cast<std::uint64_t>(trial_idx)});
  Rng env_rng = Rng::substream(seed, {kEnvStream, arm_id, static_cast<std::uint64_t>(trial_idx)});

  auto sample_kick = [&](int blocked) {
    while (true) {
      const int cand = kick_rng.next_int(num_policies);
      if (cand == blocked) continue;
      const Cell dir = offsets[cand];
      if (dir.row * default_dir.row + dir.col * default_dir.col < 0) continue;
      return cand;
    }
  };

  int s = ctx.start;
  trial.trajectory.states.push_back(s);
  int kick_policy = -1;
  double td_acc = 0.0;
  int td_count = 0;

  for (int t = 0; t < p.trial_max_steps && s != ctx.shelter; ++t) {
    int pidx;
    if (pt.gamma_to_goal[s] > 0.0) {
      pidx = pt.plan_policy[s];
      kick_policy = -1;
    } else if (kick_policy >= 0) {
      pidx = kick_policy;
    } else {
      pidx = p.default_policy;
    }

    const int a = ctx.policies[pidx].action(s);
    const Gridworld::GridStep gs = ctx.arena->sample_step(s, a, env_rng);
    const Vector delta = fr_td_update(frs[pidx], s, gs.next_state, p.alpha);
    if (pidx == p.default_policy) {
      td_acc += delta.norm();
      ++td_count;
    }
    trial.trajectory.actions.push_back(a);
    trial.trajectory.rewards.push_back(gs.reward);
    trial.trajectory.states.push_back(gs.next_state);

    if (gs.bumped) {
      pt = frp(frs, ctx.shelter, p.frp_max_sweeps, 0.0);
      ++trial.replans;
      kick_policy = sample_kick(pidx);
    }
    s = gs.next_state;
  }
  trial.trajectory.reached_goal = s == ctx.shelter;
  trial.mean_td_norm = td_count > 0 ? td_acc / td_count : 0.0;
  return trial;
}

// Reactive policy selection from the SRs: in each state follow the policy
// with the largest expected occupancy of the shelter; unexplored states fall
// back to the default policy. No subgoal composition is possible here.
EscapeTrial sr_escape_trial(const EscapeContext& ctx, std::vector<OccupancyMatrix>& srs,
                            const EscapeParams& p, std::uint64_t seed, std::uint64_t arm_id,
                            int trial_idx) {
  EscapeTrial trial;
  Rng env_rng = Rng::substream(seed, {kEnvStream, arm_id, static_cast<std::uint64_t>(trial_idx)});

  int s = ctx.start;
  trial.trajectory.states.push_back(s);
  double td_acc = 0.0;
  int td_count = 0;

  for (int t = 0; t < p.trial_max_steps && s != ctx.shelter; ++t) {
    int pidx = p.default_policy;
    double best = 0.0;
    for (int cand = 0; cand < static_cast<int>(ctx.policies.size()); ++cand) {
      const double v = srs[cand].matrix()(s, ctx.shelter);
      if (v > best) {
        best = v;
        pidx = cand;
      }
    }
    const int a = ctx.policies[pidx].action(s);
    const Gridworld::GridStep gs = ctx.arena->sample_step(s, a, env_rng);
    const Vector delta = sr_td_update(srs[pidx], s, gs.next_state, p.alpha);
    if (pidx == p.default_policy) {
      td_acc += delta.norm();
      ++td_count;
    }
    trial.trajectory.actions.push_back(a);
    trial.trajectory.rewards.push_back(gs.reward);
    trial.trajectory.states.push_back(gs.next_state);
    s = gs.next_state;
  }
  trial.trajectory.reached_goal = s == ctx.shelter;
  trial.mean_td_norm = td_count > 0 ? td_acc / td_count : 0.0;
  return trial;
}

EscapeArm run_arm(const Gridworld& arena, bool fr_kind, bool barrier, const EscapeParams& p,
                  std::uint64_t seed, std::uint64_t arm_id) {
  const EscapeContext ctx = make_context(arena);
  const int n = arena.mdp.num_states;

  std::vector<OccupancyMatrix> reps;
  for (std::size_t pi = 0; pi < ctx.policies.size(); ++pi) {
    reps.push_back(fr_kind ? OccupancyMatrix::fr_initial(n, p.gamma)
                           : OccupancyMatrix::sr_initial(n, p.gamma, /*identity=*/false));
  }

  EscapeArm arm;
  arm.name = std::string(fr_kind ? "fr" : "sr") + (barrier ? "-barrier" : "-open");
  arm.barrier = barrier;
  for (int trial = 0; trial < p.trials; ++trial) {
    exploration_phase(ctx, reps, fr_kind, p, seed, arm_id, trial, arm.explore_td_curve);
    arm.trials.push_back(fr_kind ? fr_escape_trial(ctx, reps, p, seed, arm_id, trial)
                                 : sr_escape_trial(ctx, reps, p, seed, arm_id, trial));
  }
  return arm;
}

}  // namespace

EscapeResult run_escape(const EscapeParams& p, std::uint64_t seed) {
  EscapeResult result;
  result.arena_barrier = escape_arena(true, p.gamma);
  result.arena_open = escape_arena(false, p.gamma);

  result.arms.push_back(run_arm(result.arena_barrier, true, true, p, seed, 0));
  if (p.run_sr_arms) {
    result.arms.push_back(run_arm(result.arena_barrier, false, true, p, seed, 1));
    result.arms.push_back(run_arm(result.arena_open, false, false, p, seed, 2));
  }
  if (p.run_fr_open) {
    result.arms.push_back(run_arm(result.arena_open, true, false, p, seed, 3));
  }
  return result;
}

namespace detail {

ExperimentReport report_escape(const EscapeParams& params, std::uint64_t seed) {
  const EscapeResult res = run_escape(params, seed);
  ExperimentReport report;
  report.experiment = "escape";
  report.seed = seed;

  DataTable trials;
  trials.name = "escape_trials";
  trials.columns = {"arm",     "trial",       "path_length", "reached",
                    "replans", "planned_at_start", "mean_td_norm"};
  DataTable trajs;
  trajs.name = "escape_trajectories";
  trajs.columns = {"arm", "trial", "step", "row", "col"};
  DataTable plans;
  plans.name = "escape_plans";
  plans.columns = {"arm", "trial", "step", "policy", "subgoal_row", "subgoal_col"};
  bool have_plan_rows = false;

  for (const EscapeArm& arm : res.arms) {
    const Gridworld& arena = arm.barrier ? res.arena_barrier : res.arena_open;
    for (std::size_t t = 0; t < arm.trials.size(); ++t) {
      const EscapeTrial& trial = arm.trials[t];
      trials.add_row({arm.name, std::to_string(t), std::to_string(trial.trajectory.length()),
                      trial.trajectory.reached_goal ? "1" : "0", std::to_string(trial.replans),
                      trial.planned_at_start ? "1" : "0", fmt_num(trial.mean_td_norm)});
      for (std::size_t i = 0; i < trial.trajectory.states.size(); ++i) {
        const Cell c = arena.cell_of(trial.trajectory.states[i]);
        trajs.add_row({arm.name, std::to_string(t), std::to_string(i), std::to_string(c.row),
                       std::to_string(c.col)});
      }
      for (std::size_t i = 0; i < trial.start_plan.size(); ++i) {
        const Cell c = arena.cell_of(trial.start_plan[i].subgoal);
        plans.add_row({arm.name, std::to_string(t), std::to_string(i),
                       action_name(arena.spec.action_set, trial.start_plan[i].policy),
                       std::to_string(c.row), std::to_string(c.col)});
        have_plan_rows = true;
      }
    }
  }
  report.tables.push_back(std::move(trials));
  report.tables.push_back(std::move(trajs));
  if (have_plan_rows) report.tables.push_back(std::move(plans));

  DataTable curves;
  curves.name = "escape_td_curve";
  curves.columns = {"arm", "episode", "down_td_norm"};
  curves.series = true;
  for (const EscapeArm& arm : res.arms) {
    for (std::size_t e = 0; e < arm.explore_td_curve.size(); ++e) {
      curves.add_row({arm.name, std::to_string(e), fmt_num(arm.explore_td_curve[e])});
    }
  }
  report.tables.push_back(std::move(curves));
  return report;
}

}  // namespace detail

}  // namespace firstocc
