#pragma once

#include <cstdint>
#include <optional>

#include "dpclust/common.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

using Points = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Uniform placement in [0, side]^2 with truncated power-law path loss.
struct GeneratorConfig {
  Index bs_count = 50;
  Index user_count = 200;
  double side = 1000.0;
  double dist_min = 1.0;
  double dist_max = 200.0;
  double alpha = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Instance {
  WeightMatrixd weights;
  std::optional<Points> bs;  // row i = position of BS i
  std::optional<Points> users;
  std::optional<GeneratorConfig> generator;
};

/// dist_min^-alpha inside dist_min, d^-alpha up to dist_max, 0 beyond.
double path_loss_weight(double distance, const GeneratorConfig& config);

WeightMatrixd weights_from_positions(const Points& bs, const Points& users,
                                     const GeneratorConfig& config);

/// Draws BS positions then user positions (x before y for each point) from a
/// single stream seeded with config.seed, then evaluates the path-loss weights.
Instance generate(const GeneratorConfig& config);

}  // namespace dpclust
