#pragma once

#include <utility>
#include <vector>

#include "dpclust/dph_clustering.hpp"
#include "dpclust/metrics.hpp"
#include "dpclust/partition.hpp"

namespace dpclust {

struct AssignmentResult {
  ClusterSystem system;
  IndexList empty_user_classes;  // classes with no users; skipped by tinf
  IndexList isolated_users;      // users with no edge at all; placed in class 0
};

/// Signal each user receives from each class: row k is the sum of the rows
/// of W over the (active) base-stations of class k.
template <typename Scalar>
Matrix<Scalar> class_signal(const BsPartition& partition, const WeightMatrix<Scalar>& w) {
  Matrix<Scalar> sums = Matrix<Scalar>::Zero(partition.size(), w.user_count());
  for (Index k = 0; k < partition.size(); ++k) {
    for (Index i : partition[k]) sums.row(k) += w.row(i);
  }
  return sums;
}

// Column argmax, ties to the smallest row.
template <typename Derived>
Index best_class(const Eigen::MatrixBase<Derived>& column) {
  Index best = 0;
  for (Index k = 1; k < column.size(); ++k) {
    if (column(k) > column(best)) best = k;
  }
  return best;
}

/// Places every user in the class from which it receives the largest total
/// signal (ties to the smallest class index).
template <typename Scalar>
AssignmentResult assign_users(const BsPartition& partition, const WeightMatrix<Scalar>& w) {
  if (partition.bs_count() != w.bs_count()) {
    throw StructuralError("BS partition does not match the weight matrix");
  }
  const Matrix<Scalar> sums = class_signal(partition, w);
  std::vector<IndexList> users(static_cast<std::size_t>(partition.size()));
  AssignmentResult result;
  for (Index j = 0; j < w.user_count(); ++j) {
    users[best_class(sums.col(j))].push_back(j);
    if (!(w.col(j).array() > Scalar(0)).any()) result.isolated_users.push_back(j);
  }
  for (Index k = 0; k < partition.size(); ++k) {
    if (users[k].empty()) result.empty_user_classes.push_back(k);
  }
  result.system = ClusterSystem(partition, std::move(users), w.user_count());
  return result;
}

/// Full pipeline: dot-product hierarchical clustering of the base-stations
/// followed by best-class user assignment.
template <typename Scalar>
ClusterSystem dp_similarity_clustering(const WeightMatrix<Scalar>& w, Index target) {
  return assign_users(dph_cluster(w, target).partition, w).system;
}

/// Switches off base-stations whose removal strictly lowers their own class's
/// cut/weight ratio, provided the class keeps a BS and every one of its users
/// stays served. Classes are scanned in index order, their BSs in index order,
/// and passes repeat until nothing changes.
template <typename Scalar>
ClusterSystem prune_bs(const ClusterSystem& system, const WeightMatrix<Scalar>& w) {
  if (!validate_if_cluster(system, w).valid) {
    throw StructuralError("pruning needs a valid IF-cluster system");
  }
  IndexList bs_labels = system.bs_labels();
  const IndexList& user_labels = system.user_labels();
  const Index m = system.size();

  std::vector<Index> class_size(static_cast<std::size_t>(m), 0);
  for (Index l : bs_labels) {
    if (l != kNoClass) ++class_size[l];
  }
  // Number of BSs in the user's own class that have an edge to it.
  std::vector<Index> servers(static_cast<std::size_t>(w.user_count()), 0);
  for (Index j = 0; j < w.user_count(); ++j) {
    for (Index i = 0; i < w.bs_count(); ++i) {
      if (bs_labels[i] == user_labels[j] && w.has_edge(i, j)) ++servers[j];
    }
  }

  auto current = [&] { return tinf(ClusterSystem::from_labels(bs_labels, user_labels, m), w); };
  auto terms = current();

  bool changed = true;
  while (changed) {
    changed = false;
    for (Index k = 0; k < m; ++k) {
      if (system.user_class(k).empty()) continue;
      for (Index i = 0; i < w.bs_count(); ++i) {
        if (bs_labels[i] != k || class_size[k] < 2) continue;
        Scalar inside{0}, outside{0};
        bool orphans = false;
        for (Index j = 0; j < w.user_count(); ++j) {
          const Scalar v = w(i, j);
          if (v == Scalar(0)) continue;
          if (user_labels[j] == k) {
            inside += v;
            orphans = orphans || servers[j] == 1;
          } else {
            outside += v;
          }
        }
        if (orphans) continue;
        const Scalar weight = terms.per_class[k].weight;
        const Scalar cut = terms.per_class[k].cut;
        const Scalar new_weight = weight - inside;
        const Scalar new_cut = cut - outside;
        if (!(new_weight > Scalar(0))) continue;
        // new_cut / new_weight < cut / weight, cross-multiplied (both weights > 0)
        if (!(new_cut * weight < cut * new_weight)) continue;

        bs_labels[i] = kNoClass;
        --class_size[k];
        for (Index j = 0; j < w.user_count(); ++j) {
          if (user_labels[j] == k && w.has_edge(i, j)) --servers[j];
        }
        terms = current();
        changed = true;
      }
    }
  }
  return ClusterSystem::from_labels(bs_labels, user_labels, m);
}

}  // namespace dpclust
