#pragma once

#include "firstocc/occupancy.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace firstocc {

// Output of the subgoal planner: per-state expected discount to the goal,
// the policy to follow and the subgoal it runs to. Immutable once returned.
struct PlanTable {
  Vector gamma_to_goal;
  std::vector<int> plan_policy;
  std::vector<int> plan_subgoal;
  int goal = 0;
  int iterations_used = 0;      // refinement sweeps that improved some state
  long long ops_count = 0;      // inner products examined, for cost reports
};

struct PlanStep {
  int policy = 0;
  int subgoal = 0;
};

struct Plan {
  int start = 0;
  int goal = 0;
  std::vector<PlanStep> steps;  // final subgoal equals the goal; cycle-free
};

struct GoalDiscountMatrix {
  Matrix values;                // (state, goal index)
  std::vector<int> goal_states;
};

struct Trajectory {
  std::vector<int> states;      // includes the start state
  std::vector<int> actions;
  std::vector<double> rewards;
  bool reached_goal = false;
  int length() const { return static_cast<int>(actions.size()); }
};

// Joint refinement over (policy, subgoal) pairs: seeds Gamma with the best
// direct discount to the goal, then runs up to max_iters sweeps of
// Gamma(s) <- max over (pi, s') of F_pi(s, s') * Gamma(s'). Argmaxes are
// recorded only on strict improvement (> tol), so converged tables never
// point a state at itself. Unreachable states end with Gamma = 0.
PlanTable frp(const std::vector<OccupancyMatrix>& frs, int goal, int max_iters,
              double tol = 1e-12);

// Walks s <- subgoal(s) from start until the goal, collecting the
// (policy, subgoal) pairs. Throws NoPlanError when Gamma(start) is 0 or a
// subgoal repeats (inconsistent table, e.g. from a mid-training FR).
Plan construct_plan(const PlanTable& pt, int start);

// Follows plan_policy(s) in each state until the goal or max_steps.
Trajectory execute_plan_table(const TabularMdp& mdp, const PlanTable& pt,
                              const std::vector<Policy>& policies, int start, Rng& rng,
                              int max_steps);

struct ValueIterationResult {
  Vector values;
  Policy greedy;
  int iterations_used = 0;
  long long ops_count = 0;
};

// Synchronous Bellman-optimality sweeps from V = 0; rewards are collected on
// arrival and terminal states carry no future value. Greedy ties break to the
// lowest action index.
ValueIterationResult value_iteration(const TabularMdp& mdp, double tol = 1e-6,
                                     int max_iters = 100000);

// ceil((1 / (1 - gamma)) * log(2 / ((1 - gamma)^2 * epsilon))), floored at 0:
// sweeps needed for value iteration to reach error epsilon.
int vi_iteration_bound(double gamma, double epsilon);

// Column g = frp(frs, g).gamma_to_goal for every goal.
GoalDiscountMatrix multi_goal_discounts(const std::vector<OccupancyMatrix>& frs,
                                        const std::vector<int>& goals, int max_iters,
                                        double tol = 1e-12);

struct GoalOrdering {
  std::vector<int> order;  // indices into the goal list
  double discount = 0.0;   // product of leg discounts
};

// Brute-force over all goal permutations (guarded at n <= 10); ties break to
// the lexicographically smallest ordering.
GoalOrdering optimal_goal_ordering(const GoalDiscountMatrix& gd, int start);

// Breadth-first search over the policy-switching graph s -> rho(s, pi(s)).
// Requires a deterministic MDP and deterministic policies; returns nullopt
// when no policy sequence reaches the goal.
std::optional<int> shortest_path_oracle(const TabularMdp& mdp,
                                        const std::vector<Policy>& policies, int start, int goal);

// One line per step, "state -> (policy_name, subgoal_state)", then the
// start state's expected discount.
std::string plan_to_text(const Plan& plan, const PlanTable& pt,
                         const std::function<std::string(int)>& state_name,
                         const std::function<std::string(int)>& policy_name);

}  // namespace firstocc
