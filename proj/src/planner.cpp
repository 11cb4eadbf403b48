#include "firstocc/planner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace firstocc {

PlanTable frp(const std::vector<OccupancyMatrix>& frs, int goal, int max_iters, double tol) {
  require(!frs.empty(), "frp: empty policy set");
  require(max_iters >= 0, "frp: max_iters must be non-negative");
  const int n = frs[0].num_states();
  require(goal >= 0 && goal < n, "frp: goal out of range");
  for (const OccupancyMatrix& f : frs) {
    require(f.kind == OccupancyKind::FR && !f.action_conditioned,
            "frp: inputs must be state-indexed FRs");
    require(f.num_states() == n && f.gamma == frs[0].gamma, "frp: FRs must share shape and gamma");
  }
  const int num_policies = static_cast<int>(frs.size());

  PlanTable pt;
  pt.goal = goal;
  pt.gamma_to_goal = Vector::Zero(n);
  pt.plan_policy.assign(n, 0);
  pt.plan_subgoal.assign(n, goal);

  for (int s = 0; s < n; ++s) {
    double best = frs[0].matrix()(s, goal);
    int best_pi = 0;
    for (int p = 1; p < num_policies; ++p) {
      const double v = frs[p].matrix()(s, goal);
      if (v > best) {
        best = v;
        best_pi = p;
      }
    }
    pt.gamma_to_goal[s] = best;
    pt.plan_policy[s] = best_pi;
  }
  pt.ops_count += static_cast<long long>(num_policies) * n;

  for (int k = 0; k < max_iters; ++k) {
    const Vector prev = pt.gamma_to_goal;
    bool improved = false;
    for (int s = 0; s < n; ++s) {
      double best = prev[s];
      int best_pi = -1, best_sub = -1;
      for (int p = 0; p < num_policies; ++p) {
        const auto row = frs[p].matrix().row(s);
        for (int t = 0; t < n; ++t) {
          const double v = row[t] * prev[t];
          if (v > best + tol) {
            best = v;
            best_pi = p;
            best_sub = t;
          }
        }
      }
      if (best_pi >= 0) {
        pt.gamma_to_goal[s] = best;
        pt.plan_policy[s] = best_pi;
        pt.plan_subgoal[s] = best_sub;
        improved = true;
      }
    }
    pt.ops_count += static_cast<long long>(num_policies) * n * n;
    if (!improved) break;
    pt.iterations_used = k + 1;
  }

  pt.gamma_to_goal = pt.gamma_to_goal.cwiseMax(0.0).cwiseMin(1.0);
  return pt;
}

Plan construct_plan(const PlanTable& pt, int start) {
  const int n = static_cast<int>(pt.gamma_to_goal.size());
  require(start >= 0 && start < n, "construct_plan: start out of range");
  Plan plan;
  plan.start = start;
  plan.goal = pt.goal;
  if (start == pt.goal) return plan;
  if (pt.gamma_to_goal[start] <= 0.0) {
    throw NoPlanError("construct_plan: goal unreachable from start under the plan table");
  }
  std::unordered_set<int> seen;
  int s = start;
  while (s != pt.goal) {
    const int sub = pt.plan_subgoal[s];
    if (sub == s || seen.count(sub) || static_cast<int>(plan.steps.size()) > n) {
      throw NoPlanError("construct_plan: subgoal cycle detected");
    }
    plan.steps.push_back({pt.plan_policy[s], sub});
    seen.insert(sub);
    s = sub;
  }
  return plan;
}

Trajectory execute_plan_table(const TabularMdp& mdp, const PlanTable& pt,
                              const std::vector<Policy>& policies, int start, Rng& rng,
                              int max_steps) {
  require(!policies.empty(), "execute_plan_table: empty policy set");
  Trajectory traj;
  traj.states.push_back(start);
  int s = start;
  for (int t = 0; t < max_steps && s != pt.goal; ++t) {
    const int pi = pt.plan_policy[s];
    require(pi >= 0 && pi < static_cast<int>(policies.size()),
            "execute_plan_table: policy index out of range");
    const int a = policies[pi].sample(s, rng);
    const StepResult res = step(mdp, s, a, rng);
    traj.actions.push_back(a);
    traj.rewards.push_back(res.reward);
    traj.states.push_back(res.next_state);
    s = res.next_state;
  }
  traj.reached_goal = s == pt.goal;
  return traj;
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol, int max_iters) {
  require(tol > 0.0, "value_iteration: tol must be positive");
  const int n = mdp.num_states;
  Vector mask = Vector::Ones(n);
  for (int t : mdp.terminal_states) mask[t] = 0.0;

  Vector v = Vector::Zero(n);
  Matrix q(n, mdp.num_actions);
  ValueIterationResult out;
  for (int k = 0; k < max_iters; ++k) {
    const Vector backup = mdp.reward + mdp.gamma * v.cwiseProduct(mask);
    for (int a = 0; a < mdp.num_actions; ++a) q.col(a) = mdp.transition[a] * backup;
    Vector next = q.rowwise().maxCoeff();
    out.ops_count += static_cast<long long>(mdp.num_actions) * n * n;
    const double change = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    out.iterations_used = k + 1;
    if (change < tol) break;
  }

  const Vector backup = mdp.reward + mdp.gamma * v.cwiseProduct(mask);
  for (int a = 0; a < mdp.num_actions; ++a) q.col(a) = mdp.transition[a] * backup;
  std::vector<int> greedy(n, 0);
  for (int s = 0; s < n; ++s) {
    double best = q(s, 0);
    for (int a = 1; a < mdp.num_actions; ++a) {
      if (q(s, a) > best) {
        best = q(s, a);
        greedy[s] = a;
      }
    }
  }
  out.values = std::move(v);
  out.greedy = Policy::deterministic(std::move(greedy), mdp.num_actions);
  return out;
}

int vi_iteration_bound(double gamma, double epsilon) {
  require(gamma > 0.0 && gamma < 1.0, "vi_iteration_bound: gamma must lie in (0, 1)");
  require(epsilon > 0.0, "vi_iteration_bound: epsilon must be positive");
  const double arg = 2.0 / ((1.0 - gamma) * (1.0 - gamma) * epsilon);
  const double bound = std::log(arg) / (1.0 - gamma);
  return std::max(0, static_cast<int>(std::ceil(bound)));
}

GoalDiscountMatrix multi_goal_discounts(const std::vector<OccupancyMatrix>& frs,
                                        const std::vector<int>& goals, int max_iters, double tol) {
  require(!goals.empty(), "multi_goal_discounts: empty goal list");
  GoalDiscountMatrix gd;
  gd.goal_states = goals;
  gd.values.resize(frs.at(0).num_states(), static_cast<Eigen::Index>(goals.size()));
  for (int i = 0; i < static_cast<int>(goals.size()); ++i) {
    gd.values.col(i) = frp(frs, goals[i], max_iters, tol).gamma_to_goal;
  }
  return gd;
}

GoalOrdering optimal_goal_ordering(const GoalDiscountMatrix& gd, int start) {
  const int n = static_cast<int>(gd.goal_states.size());
  require(n >= 1, "optimal_goal_ordering: empty goal list");
  if (n > 10) {
    throw std::invalid_argument("optimal_goal_ordering: too many goals for n! enumeration");
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  GoalOrdering best;
  best.discount = -1.0;
  do {
    double discount = 1.0;
    int from = start;
    for (int idx : perm) {
      discount *= gd.values(from, idx);
      from = gd.goal_states[idx];
    }
    if (discount > best.discount) {
      best.discount = discount;
      best.order = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {

int deterministic_successor(const Matrix& row_matrix, int s) {
  int arg = -1;
  for (int t = 0; t < row_matrix.cols(); ++t) {
    const double p = row_matrix(s, t);
    if (p > 1.0 - 1e-12) {
      arg = t;
      break;
    }
    require(p < 1e-12, "shortest_path_oracle: MDP is not deterministic");
  }
  require(arg >= 0, "shortest_path_oracle: MDP is not deterministic");
  return arg;
}

}  // namespace

std::optional<int> shortest_path_oracle(const TabularMdp& mdp,
                                        const std::vector<Policy>& policies, int start, int goal) {
  const int n = mdp.num_states;
  std::vector<int> dist(n, -1);
  dist[start] = 0;
  std::deque<int> queue{start};
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    if (s == goal) return dist[s];
    for (const Policy& pi : policies) {
      require(pi.is_deterministic(), "shortest_path_oracle: policies must be deterministic");
      const int t = deterministic_successor(mdp.transition[pi.action(s)], s);
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
    }
  }
  return std::nullopt;
}

std::string plan_to_text(const Plan& plan, const PlanTable& pt,
                         const std::function<std::string(int)>& state_name,
                         const std::function<std::string(int)>& policy_name) {
  std::ostringstream out;
  int s = plan.start;
  for (const PlanStep& step : plan.steps) {
    out << state_name(s) << " -> (" << policy_name(step.policy) << ", "
        << state_name(step.subgoal) << ")\n";
    s = step.subgoal;
  }
  out << "gamma_to_goal: " << pt.gamma_to_goal[plan.start] << "\n";
  return out.str();
}

}  // namespace firstocc
