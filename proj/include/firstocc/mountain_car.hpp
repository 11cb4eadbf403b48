#pragma once

#include "firstocc/occupancy.hpp"

#include <string>
#include <vector>

namespace firstocc {

// Continuous mountain-car state; steps keep it inside these bounds.
struct CarState {
  double position = -0.5;
  double velocity = 0.0;
};

inline constexpr double kCarMinPosition = -1.2;
inline constexpr double kCarMaxPosition = 0.6;
inline constexpr double kCarMaxSpeed = 0.07;
inline constexpr double kCarForceScale = 0.0015;
inline constexpr double kCarGravity = 0.0025;

// velocity += 0.0015 * force - 0.0025 * cos(3 * position), both clipped;
// hitting either track bound zeroes velocity. Requires |force| <= 1.
CarState mountain_car_step(const CarState& s, double force);

// Swings back and forth with a fixed acceleration magnitude: at rest it
// accelerates away from its current displacement, otherwise it keeps pushing
// in the direction of motion. sign(0) is 0.
struct FixedPowerPolicy {
  double power = 0.1;
  double force(const CarState& s) const;
};

// Position-only Gaussian bumps with a shared width and per-feature firing
// thresholds.
struct FeatureBasis {
  Vector centers;
  double width = 0.1;
  Vector thresholds;

  // D centers uniform over the position range, width = spacing / 2.
  static FeatureBasis position_rbf(int d, double threshold);

  int size() const { return static_cast<int>(centers.size()); }
  Vector features(const CarState& s) const;
};

// Per-policy FF or SF estimates, maintained as linear functions of the base
// features: estimate_d(s) = weights.row(d) . phi(s). With one-hot features
// this reduces to a plain table.
struct FeatureOccupancy {
  OccupancyKind kind = OccupancyKind::FR;  // FR => first-occupancy features
  double gamma = 0.99;
  Matrix weights;  // (D, D)

  static FeatureOccupancy zeros(OccupancyKind kind, double gamma, int d);
  Vector estimate(const Vector& phi) const { return weights * phi; }
};

// TD targets, shared by the continuous learner and tabular reductions.
// FF: per feature d, i = 1(phi_d >= theta_d); target = i + gamma*(1-i)*next_d.
template <typename D1, typename D2, typename D3>
Vector ff_td_target(const Eigen::MatrixBase<D1>& phi, const Eigen::MatrixBase<D2>& thresholds,
                    const Eigen::MatrixBase<D3>& next_estimate, double gamma) {
  const auto fired = (phi.array() >= thresholds.array()).template cast<double>();
  return fired + gamma * (1.0 - fired) * next_estimate.array();
}

template <typename D1, typename D2>
Vector sf_td_target(const Eigen::MatrixBase<D1>& phi, const Eigen::MatrixBase<D2>& next_estimate,
                    double gamma) {
  return phi + gamma * next_estimate;
}

// Semi-gradient TD step: weights += alpha * delta * phi(s)'; returns delta.
Vector ff_td_update(FeatureOccupancy& rep, const FeatureBasis& basis, const CarState& s,
                    const CarState& s_next, double alpha);
Vector sf_td_update(FeatureOccupancy& rep, const FeatureBasis& basis, const CarState& s,
                    const CarState& s_next, double alpha);

struct RewardWeights {
  Vector w;
};

// Least squares on (feature vector, reward) pairs via normal equations with
// a small ridge for conditioning.
RewardWeights fit_reward_weights(const Matrix& features, const Vector& rewards,
                                 double ridge = 1e-8);

struct SmpChoice {
  int policy = 0;
  double value_estimate = 0.0;
};

// Set-max policy at a point-mass start: argmax over policies of
// w' * rep(phi(start)), lowest index on ties.
SmpChoice smp_select(const std::vector<FeatureOccupancy>& reps, const RewardWeights& w,
                     const Vector& start_features);

// Ground truth by deterministic rollout: gamma^T * goal_reward where T is the
// first step with position >= goal_position, 0 if the horizon expires.
double true_policy_value(const FixedPowerPolicy& pi, const CarState& start, double goal_position,
                         double gamma, int horizon, double goal_reward = 1.0);

// Cache artifact with a (kind, D, weight shape, gamma) header.
void save_feature_occupancy(const FeatureOccupancy& rep, const std::string& path);
FeatureOccupancy load_feature_occupancy(const std::string& path);

}  // namespace firstocc
