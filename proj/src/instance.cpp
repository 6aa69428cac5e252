#include "dpclust/instance.hpp"

#include <cmath>
#include <string>

#include "dpclust/rng.hpp"

namespace dpclust {

void GeneratorConfig::validate() const {
  if (bs_count < 1 || user_count < 1) {
    throw ParameterError("generator needs at least one base-station and one user");
  }
  if (!(side > 0.0)) throw ParameterError("side must be positive");
  if (!(dist_min > 0.0) || !(dist_min <= dist_max)) {
    throw ParameterError("need 0 < dist_min <= dist_max");
  }
  if (!(dist_max <= side * std::sqrt(2.0))) {
    throw ParameterError("dist_max exceeds the diagonal of the square");
  }
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
}

double path_loss_weight(double distance, const GeneratorConfig& config) {
  if (distance > config.dist_max) return 0.0;
  if (distance <= config.dist_min) return std::pow(config.dist_min, -config.alpha);
  return std::pow(distance, -config.alpha);
}

WeightMatrixd weights_from_positions(const Points& bs, const Points& users,
                                     const GeneratorConfig& config) {
  MatrixXd w(bs.rows(), users.rows());
  for (Index j = 0; j < users.rows(); ++j) {
    for (Index i = 0; i < bs.rows(); ++i) {
      w(i, j) = path_loss_weight((bs.row(i) - users.row(j)).norm(), config);
    }
  }
  return WeightMatrixd(std::move(w));
}

namespace {

Points draw_points(Rng& rng, Index n, double side) {
  Points p(n, 2);
  for (Index k = 0; k < n; ++k) {
    p(k, 0) = rng.uniform() * side;
    p(k, 1) = rng.uniform() * side;
  }
  return p;
}

}  // namespace

Instance generate(const GeneratorConfig& config) {
  config.validate();
  Rng rng(config.seed);
  Points bs = draw_points(rng, config.bs_count, config.side);
  Points users = draw_points(rng, config.user_count, config.side);
  Instance inst;
  inst.weights = weights_from_positions(bs, users, config);
  inst.bs = std::move(bs);
  inst.users = std::move(users);
  inst.generator = config;
  return inst;
}

}  // namespace dpclust
