#include "firstocc/mountain_car.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace firstocc {

namespace {
double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

CarState mountain_car_step(const CarState& s, double force) {
  require(std::abs(force) <= 1.0, "mountain_car_step: |force| must be <= 1");
  CarState next;
  next.velocity = s.velocity + kCarForceScale * force - kCarGravity * std::cos(3.0 * s.position);
  next.velocity = std::clamp(next.velocity, -kCarMaxSpeed, kCarMaxSpeed);
  next.position = std::clamp(s.position + next.velocity, kCarMinPosition, kCarMaxPosition);
  // Both walls stop the car; beyond the crest gravity points outward, so
  // without this the track bounds would pin it in place forever.
  if (next.position <= kCarMinPosition && next.velocity < 0.0) next.velocity = 0.0;
  if (next.position >= kCarMaxPosition && next.velocity > 0.0) next.velocity = 0.0;
  return next;
}

double FixedPowerPolicy::force(const CarState& s) const {
  if (s.velocity == 0.0) return -sign(s.position) * power;
  return sign(s.velocity) * power;
}

FeatureBasis FeatureBasis::position_rbf(int d, double threshold) {
  require(d >= 1, "position_rbf: need at least one feature");
  FeatureBasis basis;
  basis.centers = Vector::LinSpaced(d, kCarMinPosition, kCarMaxPosition);
  const double spacing =
      d > 1 ? basis.centers[1] - basis.centers[0] : (kCarMaxPosition - kCarMinPosition);
  basis.width = spacing / 2.0;
  basis.thresholds = Vector::Constant(d, threshold);
  return basis;
}

Vector FeatureBasis::features(const CarState& s) const {
  const double inv = 1.0 / (2.0 * width * width);
  return ((centers.array() - s.position).square() * -inv).exp();
}

FeatureOccupancy FeatureOccupancy::zeros(OccupancyKind kind, double gamma, int d) {
  FeatureOccupancy rep;
  rep.kind = kind;
  rep.gamma = gamma;
  rep.weights = Matrix::Zero(d, d);
  return rep;
}

Vector ff_td_update(FeatureOccupancy& rep, const FeatureBasis& basis, const CarState& s,
                    const CarState& s_next, double alpha) {
  require(rep.kind == OccupancyKind::FR, "ff_td_update: representation kind must be FF");
  const Vector phi = basis.features(s);
  const Vector target =
      ff_td_target(phi, basis.thresholds, rep.estimate(basis.features(s_next)), rep.gamma);
  Vector delta = target - rep.estimate(phi);
  rep.weights += alpha * delta * phi.transpose();
  return delta;
}

Vector sf_td_update(FeatureOccupancy& rep, const FeatureBasis& basis, const CarState& s,
                    const CarState& s_next, double alpha) {
  require(rep.kind == OccupancyKind::SR, "sf_td_update: representation kind must be SF");
  const Vector phi = basis.features(s);
  const Vector target = sf_td_target(phi, rep.estimate(basis.features(s_next)), rep.gamma);
  Vector delta = target - rep.estimate(phi);
  rep.weights += alpha * delta * phi.transpose();
  return delta;
}

RewardWeights fit_reward_weights(const Matrix& features, const Vector& rewards, double ridge) {
  require(features.rows() >= 1, "fit_reward_weights: need at least one sample");
  require(features.rows() == rewards.size(), "fit_reward_weights: sample count mismatch");
  const int d = static_cast<int>(features.cols());
  const Matrix gram = features.transpose() * features + ridge * Matrix::Identity(d, d);
  return {gram.ldlt().solve(features.transpose() * rewards)};
}

SmpChoice smp_select(const std::vector<FeatureOccupancy>& reps, const RewardWeights& w,
                     const Vector& start_features) {
  require(!reps.empty(), "smp_select: empty policy set");
  SmpChoice best{0, reps[0].estimate(start_features).dot(w.w)};
  for (int p = 1; p < static_cast<int>(reps.size()); ++p) {
    require(reps[p].kind == reps[0].kind, "smp_select: representations must share a kind");
    const double v = reps[p].estimate(start_features).dot(w.w);
    if (v > best.value_estimate) best = {p, v};
  }
  return best;
}

double true_policy_value(const FixedPowerPolicy& pi, const CarState& start, double goal_position,
                         double gamma, int horizon, double goal_reward) {
  require(horizon >= 1, "true_policy_value: horizon must be positive");
  CarState s = start;
  if (s.position >= goal_position) return goal_reward;
  double discount = 1.0;
  for (int t = 0; t < horizon; ++t) {
    s = mountain_car_step(s, pi.force(s));
    discount *= gamma;
    if (s.position >= goal_position) return discount * goal_reward;
  }
  return 0.0;
}

void save_feature_occupancy(const FeatureOccupancy& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_feature_occupancy: cannot open " + path);
  char header[160];
  std::snprintf(header, sizeof(header), "# features kind=%s d=%d rows=%d cols=%d gamma=%.17g\n",
                rep.kind == OccupancyKind::FR ? "FF" : "SF", static_cast<int>(rep.weights.cols()),
                static_cast<int>(rep.weights.rows()), static_cast<int>(rep.weights.cols()),
                rep.gamma);
  out << header;
  char buf[32];
  for (int i = 0; i < rep.weights.rows(); ++i) {
    for (int j = 0; j < rep.weights.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", rep.weights(i, j));
      out << buf << (j + 1 == rep.weights.cols() ? '\n' : ',');
    }
  }
  if (!out) throw std::runtime_error("save_feature_occupancy: write failed for " + path);
}

FeatureOccupancy load_feature_occupancy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_feature_occupancy: cannot open " + path);
  std::string header;
  std::getline(in, header);
  char kind_buf[8] = {0};
  int d = 0, rows = 0, cols = 0;
  double gamma = 0.0;
  if (std::sscanf(header.c_str(), "# features kind=%7s d=%d rows=%d cols=%d gamma=%lg", kind_buf,
                  &d, &rows, &cols, &gamma) != 5) {
    throw std::runtime_error("load_feature_occupancy: malformed header in " + path);
  }
  FeatureOccupancy rep;
  rep.kind = std::string(kind_buf) == "FF" ? OccupancyKind::FR : OccupancyKind::SR;
  rep.gamma = gamma;
  rep.weights = Matrix::Zero(rows, cols);
  std::string line;
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error("load_feature_occupancy: truncated " + path);
    }
    std::istringstream ls(line);
    std::string cellv;
    for (int j = 0; j < cols; ++j) {
      if (!std::getline(ls, cellv, ',')) {
        throw std::runtime_error("load_feature_occupancy: short row in " + path);
      }
      rep.weights(i, j) = std::stod(cellv);
    }
  }
  return rep;
}

}  // namespace firstocc
