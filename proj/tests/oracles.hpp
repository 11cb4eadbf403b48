#pragma once

// Test-only oracles, kept independent of the library's solution paths: these
// enumerate, roll out or solve small systems directly so that fixed expected
// values in the tests have a second derivation.

#include "firstocc/tabular_mdp.hpp"

#include <cmath>
#include <vector>

namespace firstocc::testing {

inline int deterministic_next(const TabularMdp& mdp, int s, int a) {
  const auto& row = mdp.transition[a].row(s);
  for (int t = 0; t < mdp.num_states; ++t) {
    if (row[t] > 0.5) return t;
  }
  throw std::logic_error("deterministic_next: no successor with probability 1");
}

// Discounted return that counts each state's reward only at its first visit.
// Deterministic dynamics: the trajectory enters a cycle once a state repeats,
// after which no new first visits can happen.
inline double first_visit_return_deterministic(const TabularMdp& mdp, const Policy& pi, int s0,
                                               const Vector& r) {
  std::vector<bool> visited(mdp.num_states, false);
  double total = 0.0;
  double discount = 1.0;
  int s = s0;
  for (int k = 0; k <= mdp.num_states; ++k) {
    if (!visited[s]) {
      total += discount * r[s];
      visited[s] = true;
    }
    s = deterministic_next(mdp, s, pi.action(s));
    discount *= mdp.gamma;
  }
  return total;
}

// Monte-Carlo estimate of the same quantity for stochastic dynamics.
inline double first_visit_return_mc(const TabularMdp& mdp, const Policy& pi, int s0,
                                    const Vector& r, long rollouts, Rng& rng) {
  const int horizon =
      mdp.gamma == 0.0
          ? 1
          : static_cast<int>(std::ceil(std::log(1e-7) / std::log(mdp.gamma))) + 1;
  double acc = 0.0;
  std::vector<bool> visited(mdp.num_states);
  for (long i = 0; i < rollouts; ++i) {
    std::fill(visited.begin(), visited.end(), false);
    double total = 0.0;
    double discount = 1.0;
    int s = s0;
    int remaining = mdp.num_states;
    for (int k = 0; k < horizon && remaining > 0; ++k) {
      if (!visited[s]) {
        total += discount * r[s];
        visited[s] = true;
        --remaining;
      }
      s = rng.categorical(mdp.transition[pi.is_deterministic() ? pi.action(s) : pi.sample(s, rng)]
                              .row(s));
      discount *= mdp.gamma;
    }
    acc += total;
  }
  return acc / static_cast<double>(rollouts);
}

// Exact V^pi for arrival rewards: V = (I - gamma P)^-1 P r.
inline Vector policy_values_exact(const TabularMdp& mdp, const Policy& pi) {
  const Matrix p = policy_matrix(mdp, pi);
  const int n = mdp.num_states;
  return (Matrix::Identity(n, n) - mdp.gamma * p).partialPivLu().solve(p * mdp.reward);
}

// Optimal values by enumerating every deterministic policy (tiny MDPs only).
inline Vector brute_force_optimal_values(const TabularMdp& mdp) {
  const long long count = static_cast<long long>(
      std::llround(std::pow(mdp.num_actions, mdp.num_states)));
  Vector best = Vector::Constant(mdp.num_states, -1e300);
  for (long long code = 0; code < count; ++code) {
    long long rest = code;
    std::vector<int> actions(mdp.num_states);
    for (int s = 0; s < mdp.num_states; ++s) {
      actions[s] = static_cast<int>(rest % mdp.num_actions);
      rest /= mdp.num_actions;
    }
    const Vector v = policy_values_exact(mdp, Policy::deterministic(actions, mdp.num_actions));
    best = best.cwiseMax(v);
  }
  return best;
}

}  // namespace firstocc::testing
