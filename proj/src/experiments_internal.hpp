#pragma once

#include "firstocc/experiments.hpp"

namespace firstocc {
namespace detail {

ExperimentReport report_four_rooms(const FourRoomsParams& params, std::uint64_t seed);
ExperimentReport report_noise_sweep(const NoiseSweepParams& params, std::uint64_t seed);
ExperimentReport report_exploration(const ExplorationSuiteParams& params, std::uint64_t seed);
ExperimentReport report_mountain_car(const MountainCarParams& params, std::uint64_t seed);
ExperimentReport report_mountain_car_dims(const DimsSweepParams& params, std::uint64_t seed);
ExperimentReport report_escape(const EscapeParams& params, std::uint64_t seed);

std::string occupancy_artifact_text(const OccupancyMatrix& rep);

// Substream tags so independent parts of an experiment never share draws.
enum StreamTag : std::uint64_t {
  kPretrainStream = 1,
  kGoalStream = 2,
  kEnvStream = 3,
  kTrialStream = 4,
  kExploreStream = 5,
  kKickStream = 6,
  kMcPretrainStream = 7,
  kMcGoalStream = 8,
  kMcSampleStream = 9,
};

template <typename Seq>
double mean_of(const Seq& xs) {
  double sum = 0.0;
  for (const auto& x : xs) sum += static_cast<double>(x);
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

template <typename Seq>
double std_of(const Seq& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (const auto& x : xs) {
    const double d = static_cast<double>(x) - mu;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace detail
}  // namespace firstocc
