#include "experiments_internal.hpp"
#include "firstocc/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace firstocc {

using detail::kMcGoalStream;
using detail::kMcPretrainStream;
using detail::kMcSampleStream;
using detail::mean_of;
using detail::std_of;

namespace {

std::vector<FixedPowerPolicy> power_policies(int count) {
  std::vector<FixedPowerPolicy> policies;
  for (int i = 1; i <= count; ++i) policies.push_back({0.1 * i});
  return policies;
}

struct SeedReps {
  std::vector<FeatureOccupancy> ff;
  std::vector<FeatureOccupancy> sf;
  std::vector<double> ff_curve;  // mean TD-error norm per pretraining episode
  std::vector<double> sf_curve;
};

// Learns FFs and SFs for every policy from the same rewardless trajectories.
SeedReps pretrain_seed(const MountainCarParams& p, const FeatureBasis& basis,
                       const std::vector<FixedPowerPolicy>& policies, std::uint64_t seed,
                       int seed_idx) {
  SeedReps reps;
  reps.ff_curve.assign(p.pretrain_episodes, 0.0);
  reps.sf_curve.assign(p.pretrain_episodes, 0.0);
  for (std::size_t pi = 0; pi < policies.size(); ++pi) {
    FeatureOccupancy ff = FeatureOccupancy::zeros(OccupancyKind::FR, p.gamma, basis.size());
    FeatureOccupancy sf = FeatureOccupancy::zeros(OccupancyKind::SR, p.gamma, basis.size());
    for (int e = 0; e < p.pretrain_episodes; ++e) {
      Rng rng = Rng::substream(seed, {kMcPretrainStream, static_cast<std::uint64_t>(seed_idx),
                                      static_cast<std::uint64_t>(pi),
                                      static_cast<std::uint64_t>(e)});
      CarState s{rng.uniform(p.start_lo, p.start_hi), 0.0};
      double ff_acc = 0.0, sf_acc = 0.0;
      for (int t = 0; t < p.episode_steps; ++t) {
        const CarState next = mountain_car_step(s, policies[pi].force(s));
        ff_acc += ff_td_update(ff, basis, s, next, p.alpha).norm();
        sf_acc += sf_td_update(sf, basis, s, next, p.alpha).norm();
        s = next;
      }
      reps.ff_curve[e] += ff_acc / p.episode_steps / policies.size();
      reps.sf_curve[e] += sf_acc / p.episode_steps / policies.size();
    }
    reps.ff.push_back(std::move(ff));
    reps.sf.push_back(std::move(sf));
  }
  return reps;
}

// Reward samples for the regression come from policy rollouts roaming the
// test dynamics; the label of a state is its test reward (1 at or beyond the
// goal position).
RewardWeights fit_goal_weights(const MountainCarParams& p, const FeatureBasis& basis,
                               const std::vector<FixedPowerPolicy>& policies, double goal,
                               std::uint64_t seed, int seed_idx, int goal_idx) {
  const int per_policy = p.episode_steps;
  const int total = per_policy * static_cast<int>(policies.size());
  Matrix features(total, basis.size());
  Vector rewards(total);
  int row = 0;
  for (std::size_t pi = 0; pi < policies.size(); ++pi) {
    Rng rng = Rng::substream(seed, {kMcSampleStream, static_cast<std::uint64_t>(seed_idx),
                                    static_cast<std::uint64_t>(goal_idx),
                                    static_cast<std::uint64_t>(pi)});
    CarState s{rng.uniform(p.start_lo, p.start_hi), 0.0};
    for (int t = 0; t < per_policy; ++t) {
      features.row(row) = basis.features(s).transpose();
      rewards[row] = s.position >= goal ? 1.0 : 0.0;
      ++row;
      s = mountain_car_step(s, policies[pi].force(s));
    }
  }
  return fit_reward_weights(features, rewards, p.ridge);
}

struct GoalEval {
  MountainCarGoalRow ff;
  MountainCarGoalRow sf;
};

GoalEval evaluate_goal(const MountainCarParams& p, const FeatureBasis& basis,
                       const std::vector<FixedPowerPolicy>& policies, const SeedReps& reps,
                       double goal, std::uint64_t seed, int seed_idx, int goal_idx) {
  const RewardWeights w = fit_goal_weights(p, basis, policies, goal, seed, seed_idx, goal_idx);

  double v_star = 0.0;
  double optimal_power = policies[0].power;
  for (const FixedPowerPolicy& pi : policies) {
    const double v = true_policy_value(pi, p.eval_start, goal, p.gamma, p.true_value_horizon);
    if (v > v_star) {
      v_star = v;
      optimal_power = pi.power;
    }
  }

  GoalEval eval;
  const Vector start_phi = basis.features(p.eval_start);
  const SmpChoice ff_choice = smp_select(reps.ff, w, start_phi);
  const SmpChoice sf_choice = smp_select(reps.sf, w, start_phi);
  for (auto [row, choice, method] :
       {std::tuple{&eval.ff, ff_choice, "ff"}, std::tuple{&eval.sf, sf_choice, "sf"}}) {
    row->seed = seed_idx;
    row->goal = goal;
    row->method = method;
    row->v_est = choice.value_estimate;
    row->v_true = true_policy_value(policies[choice.policy], p.eval_start, goal, p.gamma,
                                    p.true_value_horizon);
    row->v_star = v_star;
    row->selected_power = policies[choice.policy].power;
    row->optimal_power = optimal_power;
  }
  return eval;
}

std::string feature_artifact_text(const FeatureOccupancy& rep) {
  std::ostringstream out;
  char header[160];
  std::snprintf(header, sizeof(header), "# features kind=%s d=%d rows=%d cols=%d gamma=%.17g\n",
                rep.kind == OccupancyKind::FR ? "FF" : "SF", static_cast<int>(rep.weights.cols()),
                static_cast<int>(rep.weights.rows()), static_cast<int>(rep.weights.cols()),
                rep.gamma);
  out << header;
  char buf[40];
  for (int i = 0; i < rep.weights.rows(); ++i) {
    for (int j = 0; j < rep.weights.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", rep.weights(i, j));
      out << buf << (j + 1 == rep.weights.cols() ? '\n' : ',');
    }
  }
  return out.str();
}

}  // namespace

MountainCarResult run_mountain_car_eval(const MountainCarParams& p, std::uint64_t seed) {
  const FeatureBasis basis = FeatureBasis::position_rbf(p.feature_dim, p.threshold);
  const std::vector<FixedPowerPolicy> policies = power_policies(p.num_policies);

  std::vector<std::vector<GoalEval>> evals(p.seeds);
  std::vector<std::vector<double>> ff_curves(p.seeds), sf_curves(p.seeds);
  MountainCarResult result;

  parallel_for(p.seeds, [&](int seed_idx) {
    const SeedReps reps = pretrain_seed(p, basis, policies, seed, seed_idx);
    ff_curves[seed_idx] = reps.ff_curve;
    sf_curves[seed_idx] = reps.sf_curve;
    Rng goal_rng =
        Rng::substream(seed, {kMcGoalStream, static_cast<std::uint64_t>(seed_idx)});
    for (int g = 0; g < p.goals_per_seed; ++g) {
      const double goal = goal_rng.uniform(p.goal_lo, p.goal_hi);
      evals[seed_idx].push_back(evaluate_goal(p, basis, policies, reps, goal, seed, seed_idx, g));
    }
    if (seed_idx == 0 && p.cache_representations) {
      result.cached_ff = reps.ff;
      result.cached_sf = reps.sf;
    }
  });

  for (const auto& seed_evals : evals) {
    for (const GoalEval& e : seed_evals) {
      result.rows.push_back(e.ff);
      result.rows.push_back(e.sf);
    }
  }

  result.curves.name = "feature_learning_curve";
  result.curves.columns = {"episode", "kind", "td_error_norm_mean", "td_error_norm_std"};
  result.curves.series = true;
  for (int e = 0; e < p.pretrain_episodes; ++e) {
    std::vector<double> ff_e, sf_e;
    for (int s = 0; s < p.seeds; ++s) {
      ff_e.push_back(ff_curves[s][e]);
      sf_e.push_back(sf_curves[s][e]);
    }
    result.curves.add_row(
        {std::to_string(e), "ff", fmt_num(mean_of(ff_e)), fmt_num(std_of(ff_e))});
    result.curves.add_row(
        {std::to_string(e), "sf", fmt_num(mean_of(sf_e)), fmt_num(std_of(sf_e))});
  }
  return result;
}

std::vector<DimsRow> run_mountain_car_dims(const DimsSweepParams& params, std::uint64_t seed) {
  std::vector<DimsRow> rows(params.dims.size());
  parallel_for(static_cast<int>(params.dims.size()), [&](int i) {
    MountainCarParams p = params.base;
    p.feature_dim = params.dims[i];
    const FeatureBasis basis = FeatureBasis::position_rbf(p.feature_dim, p.threshold);
    const std::vector<FixedPowerPolicy> policies = power_policies(p.num_policies);
    const SeedReps reps = pretrain_seed(p, basis, policies, seed, 0);
    const GoalEval eval =
        evaluate_goal(p, basis, policies, reps, params.example_goal, seed, 0, 0);
    rows[i] = {params.dims[i],     eval.ff.selected_power, eval.sf.selected_power,
               eval.ff.optimal_power, eval.ff.v_est,          eval.sf.v_est};
  });
  return rows;
}

namespace detail {

ExperimentReport report_mountain_car(const MountainCarParams& params, std::uint64_t seed) {
  MountainCarParams p = params;
  p.cache_representations = true;
  MountainCarResult res = run_mountain_car_eval(p, seed);
  ExperimentReport report;
  report.experiment = "mountaincar-ff";
  report.seed = seed;

  DataTable goals;
  goals.name = "mountaincar_goals";
  goals.columns = {"seed",   "goal_position", "method",         "v_est",
                   "v_true", "v_star",        "selected_power", "optimal_power"};
  for (const MountainCarGoalRow& row : res.rows) {
    goals.add_row({std::to_string(row.seed), fmt_num(row.goal), row.method, fmt_num(row.v_est),
                   fmt_num(row.v_true), fmt_num(row.v_star), fmt_num(row.selected_power),
                   fmt_num(row.optimal_power)});
  }
  report.tables.push_back(std::move(goals));
  report.tables.push_back(res.curves);

  for (std::size_t pi = 0; pi < res.cached_ff.size(); ++pi) {
    report.artifacts.emplace_back("ff_policy" + std::to_string(pi) + ".fo",
                                  feature_artifact_text(res.cached_ff[pi]));
    report.artifacts.emplace_back("sf_policy" + std::to_string(pi) + ".fo",
                                  feature_artifact_text(res.cached_sf[pi]));
  }
  return report;
}

ExperimentReport report_mountain_car_dims(const DimsSweepParams& params, std::uint64_t seed) {
  const std::vector<DimsRow> rows = run_mountain_car_dims(params, seed);
  ExperimentReport report;
  report.experiment = "mountaincar-dims";
  report.seed = seed;

  DataTable table;
  table.name = "dims_sweep";
  table.columns = {"dim", "ff_power", "sf_power", "optimal_power", "ff_v_est", "sf_v_est"};
  table.series = true;
  for (const DimsRow& row : rows) {
    table.add_row({std::to_string(row.dim), fmt_num(row.ff_power), fmt_num(row.sf_power),
                   fmt_num(row.optimal_power), fmt_num(row.ff_v_est), fmt_num(row.sf_v_est)});
  }
  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace detail

}  // namespace firstocc
