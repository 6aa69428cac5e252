#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpclust/partition.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

template <typename Scalar>
struct ClassTerms {
  Scalar weight{0};  // w(P_l): intra-class weight
  Scalar cut{0};     // w̄(P_l): weight crossing the class boundary on either side
  std::optional<Scalar> ratio;  // cut / weight, empty when the class has no users
};

template <typename Scalar>
struct TinfBreakdown {
  std::vector<ClassTerms<Scalar>> per_class;
  Scalar total{0};

  bool skipped(Index l) const { return !per_class.at(l).ratio.has_value(); }
};

namespace detail {

inline void check_class(const ClusterSystem& system, Index l) {
  if (l < 0 || l >= system.size()) {
    throw StructuralError("class index " + std::to_string(l) + " out of range");
  }
}

}  // namespace detail

/// Sum of weights between the base-stations and users of class l.
template <typename Scalar>
Scalar class_weight(const ClusterSystem& system, const WeightMatrix<Scalar>& w, Index l) {
  check_dimensions(system, w);
  detail::check_class(system, l);
  Scalar sum{0};
  for (Index i : system.bs_class(l)) {
    for (Index j : system.user_class(l)) sum += w(i, j);
  }
  return sum;
}

/// Weight of edges leaving class l: its BSs to foreign users plus foreign
/// (active) BSs to its users.
template <typename Scalar>
Scalar class_cut(const ClusterSystem& system, const WeightMatrix<Scalar>& w, Index l) {
  check_dimensions(system, w);
  detail::check_class(system, l);
  const auto& bs_labels = system.bs_labels();
  const auto& user_labels = system.user_labels();
  Scalar sum{0};
  for (Index i : system.bs_class(l)) {
    for (Index j = 0; j < w.user_count(); ++j) {
      if (user_labels[j] != l) sum += w(i, j);
    }
  }
  for (Index j : system.user_class(l)) {
    for (Index i = 0; i < w.bs_count(); ++i) {
      if (bs_labels[i] != l && bs_labels[i] != kNoClass) sum += w(i, j);
    }
  }
  return sum;
}

/// Total interference: sum over classes with users of cut / weight.
///
/// Evaluated in a single pass over W. Works on IF-invalid systems as long as
/// every class with users has positive intra-class weight; otherwise throws
/// DivisionError naming the first offending class.
template <typename Scalar>
TinfBreakdown<Scalar> tinf(const ClusterSystem& system, const WeightMatrix<Scalar>& w) {
  check_dimensions(system, w);
  const Index m = system.size();
  const auto& bs_labels = system.bs_labels();
  const auto& user_labels = system.user_labels();

  TinfBreakdown<Scalar> out;
  out.per_class.resize(static_cast<std::size_t>(m));
  const auto& dense = w.dense();
  for (Index j = 0; j < dense.cols(); ++j) {
    const Index uc = user_labels[j];
    for (Index i = 0; i < dense.rows(); ++i) {
      const Scalar v = dense(i, j);
      const Index bc = bs_labels[i];
      if (v == Scalar(0) || bc == kNoClass) continue;
      if (bc == uc) {
        out.per_class[bc].weight += v;
      } else {
        out.per_class[bc].cut += v;
        out.per_class[uc].cut += v;
      }
    }
  }
  for (Index l = 0; l < m; ++l) {
    auto& terms = out.per_class[l];
    if (system.user_class(l).empty()) continue;
    if (!(terms.weight > Scalar(0))) {
      throw DivisionError(l, "class " + std::to_string(l) +
                                 " has users but zero intra-class weight; tinf is undefined");
    }
    terms.ratio = terms.cut / terms.weight;
    out.total += *terms.ratio;
  }
  return out;
}

template <typename Scalar>
Scalar tinf_value(const ClusterSystem& system, const WeightMatrix<Scalar>& w) {
  return tinf(system, w).total;
}

}  // namespace dpclust
