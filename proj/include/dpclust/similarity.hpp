#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dpclust/common.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

/// Gram matrix of the summed signal vectors of the current BS clusters.
///
/// Slot k initially holds BS k. Merging two slots keeps the smaller index
/// alive and tombstones the other; slots are never compacted.
template <typename Scalar>
class GramTable {
 public:
  GramTable() = default;

  explicit GramTable(const WeightMatrix<Scalar>& w)
      : dot_(w.dense() * w.dense().transpose()),
        alive_(static_cast<std::size_t>(w.bs_count()), true),
        alive_count_(w.bs_count()) {
    // The blocked product is not bitwise symmetric.
    dot_.template triangularView<Eigen::StrictlyLower>() = dot_.transpose();
  }

  Index slot_count() const { return dot_.rows(); }
  Index alive_count() const { return alive_count_; }
  bool alive(Index k) const { return k >= 0 && k < slot_count() && alive_[k]; }

  Scalar dot(Index k, Index m) const {
    require_alive(k);
    require_alive(m);
    return dot_(k, m);
  }

  /// Cosine similarity of the two clusters' summed signal vectors; 0 when
  /// either vector is zero.
  Scalar rho(Index k, Index m) const {
    require_alive(k);
    require_alive(m);
    if (k == m) throw StructuralError("rho needs two distinct slots");
    const Scalar dkk = dot_(k, k);
    const Scalar dmm = dot_(m, m);
    if (dkk == Scalar(0) || dmm == Scalar(0)) return Scalar(0);
    using std::sqrt;
    return dot_(k, m) / sqrt(dkk * dmm);
  }

  /// Merges slots k and m into min(k, m). Returns the surviving slot.
  Index merge(Index k, Index m) {
    require_alive(k);
    require_alive(m);
    if (k == m) throw StructuralError("cannot merge a slot with itself");
    const Index s = std::min(k, m);
    const Index d = std::max(k, m);
    const Scalar self = dot_(s, s) + Scalar(2) * dot_(s, d) + dot_(d, d);
    for (Index x = 0; x < slot_count(); ++x) {
      if (!alive_[x] || x == s || x == d) continue;
      const Scalar v = dot_(s, x) + dot_(d, x);
      dot_(s, x) = v;
      dot_(x, s) = v;
    }
    dot_(s, s) = self;
    alive_[d] = false;
    --alive_count_;
    return s;
  }

  const Matrix<Scalar>& raw() const { return dot_; }

 private:
  void require_alive(Index k) const {
    if (!alive(k)) throw StructuralError("slot " + std::to_string(k) + " is not alive");
  }

  Matrix<Scalar> dot_;
  std::vector<bool> alive_;
  Index alive_count_ = 0;
};

template <typename Scalar>
GramTable<Scalar> gram_init(const WeightMatrix<Scalar>& w) {
  return GramTable<Scalar>(w);
}

}  // namespace dpclust
