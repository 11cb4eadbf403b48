#pragma once

#include "firstocc/occupancy.hpp"

namespace firstocc {

enum class BonusKind { None, SrInverseNorm, FrNorm };

struct TransitionSample {
  int s = 0;
  int a = 0;
  double r = 0.0;
  int s_next = 0;
  int a_next = 0;
};

struct BonusSarsaConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon = 0.1;
  BonusKind bonus_kind = BonusKind::None;
  double beta = 0.0;
  double rep_alpha = 0.1;
  // When true (the default) the bonus is read from the representation row
  // after it absorbed the current transition.
  bool bonus_post_update = true;
};

// On-policy Sarsa whose TD target carries an occupancy-norm exploration
// bonus: beta / |M(s)|_1 for the SR kind, beta * |F(s)|_1 for the FR kind.
// The representation is learned alongside Q from the same transitions.
class BonusSarsaAgent {
 public:
  BonusSarsaAgent(const TabularMdp& mdp, BonusSarsaConfig cfg);

  const BonusSarsaConfig& config() const { return cfg_; }
  const Matrix& q_values() const { return q_; }
  const OccupancyMatrix& representation() const { return rep_; }

  int select_action(int s, Rng& rng) const;

  // Applies one Sarsa update (and the representation TD update) for an
  // on-policy transition. Returns the scalar TD error.
  double update(const TransitionSample& sample);

  double bonus_at(int s) const;

 private:
  BonusSarsaConfig cfg_;
  Matrix q_;
  OccupancyMatrix rep_;
};

// Uniform random action with probability epsilon, otherwise the argmax
// (lowest index on ties).
int epsilon_greedy(const Eigen::Ref<const Vector>& q_row, double epsilon, Rng& rng);

// One trial of `horizon` steps with no episode resets; returns the
// undiscounted cumulative reward. The agent is updated in place.
double run_exploration_trial(const TabularMdp& env, BonusSarsaAgent& agent, int horizon, Rng& rng);

}  // namespace firstocc
