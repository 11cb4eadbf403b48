#pragma once

#include "firstocc/common.hpp"
#include "firstocc/rng.hpp"

#include <vector>

namespace firstocc {

// Finite MDP with state-based rewards: the reward vector is collected on
// arrival at the next state. Immutable after construction; safe to share
// across workers.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<Matrix> transition;  // one S x S row-stochastic matrix per action
  Vector reward;                   // indexed by state, paid on arrival
  double gamma = 0.0;
  Vector initial_dist;
  std::vector<int> terminal_states;

  bool is_terminal(int s) const;

  // Throws std::invalid_argument if any structural invariant is broken:
  // rows must sum to 1 within 1e-9, probabilities in [0,1], gamma in [0,1),
  // initial_dist a distribution, terminal states absorbing under every action.
  void validate() const;
};

struct Policy {
  // Deterministic policies store one action per state; stochastic ones a
  // row-stochastic S x A matrix.
  static Policy deterministic(std::vector<int> actions, int num_actions);
  static Policy stochastic(Matrix probs);
  static Policy uniform(int num_states, int num_actions);

  bool is_deterministic() const { return !actions_.empty(); }
  int num_states() const;
  int num_actions() const { return num_actions_; }

  int action(int s) const;  // deterministic only
  double prob(int s, int a) const;
  int sample(int s, Rng& rng) const;

  void validate() const;

 private:
  std::vector<int> actions_;
  Matrix probs_;
  int num_actions_ = 0;
};

struct StepResult {
  int next_state = 0;
  double reward = 0.0;
};

// Samples the next state from transition(s, a, .); reward is reward[next].
StepResult step(const TabularMdp& mdp, int s, int a, Rng& rng);

// Entry (s, s') = sum_a p(s'|s, a) pi(a|s).
Matrix policy_matrix(const TabularMdp& mdp, const Policy& pi);

// Deterministic policy taking action a in every state.
Policy one_action_policy(const TabularMdp& mdp, int a);

// Random MDP fixture: transition rows from a symmetric random simplex,
// rewards uniform in [-1, 1]. Test-suite generator.
TabularMdp random_mdp(int num_states, int num_actions, double gamma, Rng& rng);

// Random MDP whose transitions are deterministic (one next state per (s, a)).
TabularMdp random_deterministic_mdp(int num_states, int num_actions, double gamma, Rng& rng);

}  // namespace firstocc
