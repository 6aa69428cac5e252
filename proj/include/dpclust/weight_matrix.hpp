#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "dpclust/common.hpp"

namespace dpclust {

/// Dense b x u matrix of nonnegative base-station/user signal strengths.
///
/// Row i is the signal vector of base-station i, column j that of user j.
/// A zero entry means there is no edge between the two in the network graph.
/// Immutable after construction.
template <typename Scalar_>
class WeightMatrix {
 public:
  using Scalar = Scalar_;
  using Dense = Matrix<Scalar>;

  WeightMatrix() = default;

  explicit WeightMatrix(Dense w) : w_(std::move(w)) {
    if (w_.rows() < 1 || w_.cols() < 1) {
      throw ParameterError("weight matrix needs at least one base-station and one user");
    }
    for (Index j = 0; j < w_.cols(); ++j) {
      for (Index i = 0; i < w_.rows(); ++i) {
        const Scalar v = w_(i, j);
        if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v))) {
          throw ParameterError("weight (" + std::to_string(i) + ", " + std::to_string(j) +
                               ") must be finite and nonnegative");
        }
      }
    }
  }

  Index bs_count() const { return w_.rows(); }
  Index user_count() const { return w_.cols(); }

  Scalar operator()(Index i, Index j) const { return w_(i, j); }
  bool has_edge(Index i, Index j) const { return w_(i, j) > Scalar(0); }

  const Dense& dense() const { return w_; }
  auto row(Index i) const { return w_.row(i); }
  auto col(Index j) const { return w_.col(j); }

  WeightMatrix scaled(Scalar c) const { return WeightMatrix(Dense(w_ * c)); }

  /// Users with no positive weight to any base-station.
  IndexList isolated_users() const {
    IndexList out;
    for (Index j = 0; j < w_.cols(); ++j) {
      if (!(w_.col(j).array() > Scalar(0)).any()) out.push_back(j);
    }
    return out;
  }

  template <typename NewScalar>
  WeightMatrix<NewScalar> cast() const {
    return WeightMatrix<NewScalar>(w_.template cast<NewScalar>());
  }

 private:
  Dense w_;
};

using WeightMatrixd = WeightMatrix<double>;

}  // namespace dpclust
