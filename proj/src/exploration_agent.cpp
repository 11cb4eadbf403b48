#include "firstocc/exploration_agent.hpp"

namespace firstocc {

BonusSarsaAgent::BonusSarsaAgent(const TabularMdp& mdp, BonusSarsaConfig cfg)
    : cfg_(cfg), q_(Matrix::Zero(mdp.num_states, mdp.num_actions)) {
  require(cfg_.alpha > 0.0 && cfg_.alpha <= 1.0, "bonus sarsa: alpha must lie in (0, 1]");
  require(cfg_.epsilon > 0.0 && cfg_.epsilon <= 1.0, "bonus sarsa: epsilon must lie in (0, 1]");
  require(cfg_.beta >= 0.0, "bonus sarsa: beta must be non-negative");
  // Both norms start at 1 per state: the FR knows only its diagonal and the
  // SR row grows toward 1/(1-gamma) with repeat visits.
  rep_ = cfg_.bonus_kind == BonusKind::SrInverseNorm
             ? OccupancyMatrix::sr_initial(mdp.num_states, cfg_.gamma)
             : OccupancyMatrix::fr_initial(mdp.num_states, cfg_.gamma);
}

int BonusSarsaAgent::select_action(int s, Rng& rng) const {
  return epsilon_greedy(q_.row(s), cfg_.epsilon, rng);
}

double BonusSarsaAgent::bonus_at(int s) const {
  switch (cfg_.bonus_kind) {
    case BonusKind::None:
      return 0.0;
    case BonusKind::SrInverseNorm:
      return cfg_.beta / std::max(rep_.matrix().row(s).lpNorm<1>(), 1e-12);
    case BonusKind::FrNorm:
      return cfg_.beta * rep_.matrix().row(s).lpNorm<1>();
  }
  return 0.0;
}

double BonusSarsaAgent::update(const TransitionSample& t) {
  double bonus = 0.0;
  if (cfg_.bonus_kind != BonusKind::None) {
    if (!cfg_.bonus_post_update) bonus = bonus_at(t.s);
    if (cfg_.bonus_kind == BonusKind::SrInverseNorm) {
      sr_td_update(rep_, t.s, t.s_next, cfg_.rep_alpha);
    } else {
      fr_td_update(rep_, t.s, t.s_next, cfg_.rep_alpha);
    }
    if (cfg_.bonus_post_update) bonus = bonus_at(t.s);
  }
  const double delta =
      t.r + bonus + cfg_.gamma * q_(t.s_next, t.a_next) - q_(t.s, t.a);
  q_(t.s, t.a) += cfg_.alpha * delta;
  return delta;
}

int epsilon_greedy(const Eigen::Ref<const Vector>& q_row, double epsilon, Rng& rng) {
  require(q_row.size() > 0, "epsilon_greedy: empty action values");
  if (rng.next_double() < epsilon) return rng.next_int(static_cast<int>(q_row.size()));
  int best = 0;
  for (int a = 1; a < q_row.size(); ++a) {
    if (q_row[a] > q_row[best]) best = a;
  }
  return best;
}

double run_exploration_trial(const TabularMdp& env, BonusSarsaAgent& agent, int horizon, Rng& rng) {
  int s = rng.categorical(env.initial_dist);
  int a = agent.select_action(s, rng);
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    const StepResult res = step(env, s, a, rng);
    const int a_next = agent.select_action(res.next_state, rng);
    agent.update({s, a, res.reward, res.next_state, a_next});
    total += res.reward;
    s = res.next_state;
    a = a_next;
  }
  return total;
}

}  // namespace firstocc
