#include "experiments_internal.hpp"
#include "firstocc/parallel.hpp"

#include <cmath>

namespace firstocc {

using detail::kTrialStream;
using detail::mean_of;
using detail::std_of;

double ExplorationCell::mean() const { return mean_of(returns); }
double ExplorationCell::stddev() const { return std_of(returns); }

const ExplorationCell& ExplorationSuiteResult::selected_cell(const std::string& task,
                                                             const std::string& method) const {
  for (const ExplorationCell& cell : selected) {
    if (cell.task == task && cell.method == method) return cell;
  }
  throw std::invalid_argument("exploration: no selected cell for " + task + "/" + method);
}

namespace {

ExplorationCell run_cell(const TabularMdp& env, const ExplorationSuiteParams& p,
                         const std::string& task, const std::string& method, BonusKind kind,
                         double beta, std::uint64_t seed, std::uint64_t config_id) {
  ExplorationCell cell;
  cell.task = task;
  cell.method = method;
  cell.beta = beta;
  cell.returns.resize(p.trials);
  parallel_for(p.trials, [&](int trial) {
    BonusSarsaConfig cfg;
    cfg.alpha = p.alpha;
    cfg.gamma = p.gamma;
    cfg.epsilon = p.epsilon;
    cfg.bonus_kind = kind;
    cfg.beta = beta;
    cfg.rep_alpha = p.rep_alpha;
    cfg.bonus_post_update = p.bonus_post_update;
    BonusSarsaAgent agent(env, cfg);
    Rng rng = Rng::substream(seed, {kTrialStream, config_id, static_cast<std::uint64_t>(trial)});
    cell.returns[trial] = run_exploration_trial(env, agent, p.horizon, rng);
  });
  return cell;
}

}  // namespace

ExplorationSuiteResult run_exploration_suite(const ExplorationSuiteParams& p, std::uint64_t seed) {
  ExplorationSuiteResult result;
  std::uint64_t config_id = 0;
  for (const std::string& task : p.tasks) {
    const TabularMdp env = [&] {
      TabularMdp e = build_exploration_env(task);
      e.gamma = p.gamma;
      return e;
    }();

    result.selected.push_back(
        run_cell(env, p, task, "sarsa", BonusKind::None, 0.0, seed, config_id++));

    for (const auto& [method, kind] :
         {std::pair{std::string("sarsa+sr"), BonusKind::SrInverseNorm},
          std::pair{std::string("sarsa+fr"), BonusKind::FrNorm}}) {
      int best_idx = -1;
      double best_mean = 0.0;
      for (double beta : p.betas) {
        result.sweep.push_back(run_cell(env, p, task, method, kind, beta, seed, config_id++));
        const double m = result.sweep.back().mean();
        if (best_idx < 0 || m > best_mean) {
          best_idx = static_cast<int>(result.sweep.size()) - 1;
          best_mean = m;
        }
      }
      result.selected.push_back(result.sweep[best_idx]);
    }
  }
  return result;
}

namespace detail {

ExperimentReport report_exploration(const ExplorationSuiteParams& params, std::uint64_t seed) {
  const ExplorationSuiteResult res = run_exploration_suite(params, seed);
  ExperimentReport report;
  report.experiment = "exploration";
  report.seed = seed;

  DataTable trials;
  trials.name = "exploration_trials";
  trials.columns = {"task", "bonus_kind", "beta", "seed", "cumulative_reward"};
  for (const ExplorationCell& cell : res.selected) {
    for (std::size_t t = 0; t < cell.returns.size(); ++t) {
      trials.add_row({cell.task, cell.method, fmt_num(cell.beta), std::to_string(t),
                      fmt_num(cell.returns[t])});
    }
  }
  report.tables.push_back(std::move(trials));

  DataTable summary;
  summary.name = "exploration_summary";
  summary.columns = {"task", "method", "beta", "mean", "std", "n"};
  for (const ExplorationCell& cell : res.selected) {
    summary.add_row({cell.task, cell.method, fmt_num(cell.beta), fmt_num(cell.mean()),
                     fmt_num(cell.stddev()), std::to_string(cell.returns.size())});
  }
  report.tables.push_back(std::move(summary));

  DataTable sweep;
  sweep.name = "exploration_beta_sweep";
  sweep.columns = {"task", "method", "beta", "mean", "std", "n"};
  for (const ExplorationCell& cell : res.sweep) {
    sweep.add_row({cell.task, cell.method, fmt_num(cell.beta), fmt_num(cell.mean()),
                   fmt_num(cell.stddev()), std::to_string(cell.returns.size())});
  }
  report.tables.push_back(std::move(sweep));
  return report;
}

}  // namespace detail

}  // namespace firstocc
