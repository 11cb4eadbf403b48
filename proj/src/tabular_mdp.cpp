#include "firstocc/tabular_mdp.hpp"

#include <algorithm>
#include <cmath>

namespace firstocc {

namespace {
constexpr double kProbTol = 1e-9;
}

bool TabularMdp::is_terminal(int s) const {
  return std::find(terminal_states.begin(), terminal_states.end(), s) != terminal_states.end();
}

void TabularMdp::validate() const {
  require(num_states >= 1 && num_actions >= 1, "mdp: sizes must be positive");
  require(static_cast<int>(transition.size()) == num_actions, "mdp: one transition matrix per action");
  require(reward.size() == num_states, "mdp: reward vector size mismatch");
  require(gamma >= 0.0 && gamma < 1.0, "mdp: gamma must lie in [0, 1)");
  require(initial_dist.size() == num_states, "mdp: initial_dist size mismatch");
  require(std::abs(initial_dist.sum() - 1.0) < kProbTol, "mdp: initial_dist must sum to 1");
  require(initial_dist.minCoeff() >= -kProbTol, "mdp: initial_dist has negative mass");

  for (int a = 0; a < num_actions; ++a) {
    const Matrix& p = transition[a];
    require(p.rows() == num_states && p.cols() == num_states, "mdp: transition shape mismatch");
    require(p.minCoeff() >= -kProbTol && p.maxCoeff() <= 1.0 + kProbTol,
            "mdp: transition probabilities out of [0, 1]");
    for (int s = 0; s < num_states; ++s) {
      require(std::abs(p.row(s).sum() - 1.0) < kProbTol, "mdp: transition row does not sum to 1");
    }
  }
  for (int t : terminal_states) {
    require(t >= 0 && t < num_states, "mdp: terminal state out of range");
    for (int a = 0; a < num_actions; ++a) {
      require(std::abs(transition[a](t, t) - 1.0) < kProbTol,
              "mdp: terminal state must self-transition under every action");
    }
  }
}

Policy Policy::deterministic(std::vector<int> actions, int num_actions) {
  Policy pi;
  pi.actions_ = std::move(actions);
  pi.num_actions_ = num_actions;
  pi.validate();
  return pi;
}

Policy Policy::stochastic(Matrix probs) {
  Policy pi;
  pi.probs_ = std::move(probs);
  pi.num_actions_ = static_cast<int>(pi.probs_.cols());
  pi.validate();
  return pi;
}

Policy Policy::uniform(int num_states, int num_actions) {
  return stochastic(Matrix::Constant(num_states, num_actions, 1.0 / num_actions));
}

int Policy::num_states() const {
  return is_deterministic() ? static_cast<int>(actions_.size()) : static_cast<int>(probs_.rows());
}

int Policy::action(int s) const {
  require(is_deterministic(), "policy: action() requires a deterministic policy");
  return actions_[s];
}

double Policy::prob(int s, int a) const {
  if (is_deterministic()) return actions_[s] == a ? 1.0 : 0.0;
  return probs_(s, a);
}

int Policy::sample(int s, Rng& rng) const {
  if (is_deterministic()) return actions_[s];
  return rng.categorical(probs_.row(s));
}

void Policy::validate() const {
  if (is_deterministic()) {
    for (int a : actions_) require(a >= 0 && a < num_actions_, "policy: action out of range");
  } else {
    require(probs_.minCoeff() >= -1e-9, "policy: negative probability");
    for (int s = 0; s < probs_.rows(); ++s) {
      require(std::abs(probs_.row(s).sum() - 1.0) < 1e-9, "policy: row does not sum to 1");
    }
  }
}

StepResult step(const TabularMdp& mdp, int s, int a, Rng& rng) {
  require(s >= 0 && s < mdp.num_states, "step: state out of range");
  require(a >= 0 && a < mdp.num_actions, "step: action out of range");
  const int next = rng.categorical(mdp.transition[a].row(s));
  return {next, mdp.reward[next]};
}

Matrix policy_matrix(const TabularMdp& mdp, const Policy& pi) {
  require(pi.num_states() == mdp.num_states, "policy_matrix: policy must cover all states");
  Matrix p = Matrix::Zero(mdp.num_states, mdp.num_states);
  for (int a = 0; a < mdp.num_actions; ++a) {
    for (int s = 0; s < mdp.num_states; ++s) {
      const double w = pi.prob(s, a);
      if (w != 0.0) p.row(s) += w * mdp.transition[a].row(s);
    }
  }
  return p;
}

Policy one_action_policy(const TabularMdp& mdp, int a) {
  require(a >= 0 && a < mdp.num_actions, "one_action_policy: action out of range");
  return Policy::deterministic(std::vector<int>(mdp.num_states, a), mdp.num_actions);
}

TabularMdp random_mdp(int num_states, int num_actions, double gamma, Rng& rng) {
  require(num_states >= 1 && num_actions >= 1, "random_mdp: sizes must be positive");
  TabularMdp mdp;
  mdp.num_states = num_states;
  mdp.num_actions = num_actions;
  mdp.gamma = gamma;
  mdp.transition.assign(num_actions, Matrix::Zero(num_states, num_states));
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      // Exponential spacings normalized to the simplex (symmetric Dirichlet).
      Vector row(num_states);
      for (int t = 0; t < num_states; ++t) {
        row[t] = -std::log(1.0 - rng.next_double());
      }
      mdp.transition[a].row(s) = row / row.sum();
    }
  }
  mdp.reward = Vector::NullaryExpr(num_states, [&](Eigen::Index) { return rng.uniform(-1.0, 1.0); });
  mdp.initial_dist = Vector::Constant(num_states, 1.0 / num_states);
  mdp.validate();
  return mdp;
}

TabularMdp random_deterministic_mdp(int num_states, int num_actions, double gamma, Rng& rng) {
  require(num_states >= 1 && num_actions >= 1, "random_deterministic_mdp: sizes must be positive");
  TabularMdp mdp;
  mdp.num_states = num_states;
  mdp.num_actions = num_actions;
  mdp.gamma = gamma;
  mdp.transition.assign(num_actions, Matrix::Zero(num_states, num_states));
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      mdp.transition[a](s, rng.next_int(num_states)) = 1.0;
    }
  }
  mdp.reward = Vector::NullaryExpr(num_states, [&](Eigen::Index) { return rng.uniform(-1.0, 1.0); });
  mdp.initial_dist = Vector::Constant(num_states, 1.0 / num_states);
  mdp.validate();
  return mdp;
}

}  // namespace firstocc
