#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "dpclust/common.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

inline constexpr Index kNoClass = -1;

/// Partition of the base-stations into M nonempty classes.
///
/// Base-stations listed in `switched_off` belong to no class; they stay part
/// of the instance but carry no signal in any objective.
class BsPartition {
 public:
  BsPartition() = default;

  BsPartition(std::vector<IndexList> classes, Index bs_count, IndexList switched_off = {})
      : classes_(std::move(classes)), switched_off_(std::move(switched_off)),
        labels_(static_cast<std::size_t>(bs_count), kNoClass) {
    if (classes_.empty()) throw StructuralError("BS partition needs at least one class");
    std::vector<bool> off(labels_.size(), false);
    for (Index i : switched_off_) {
      check_index(i);
      if (off[i]) throw StructuralError("BS " + std::to_string(i) + " switched off twice");
      off[i] = true;
    }
    for (std::size_t l = 0; l < classes_.size(); ++l) {
      auto& cls = classes_[l];
      if (cls.empty()) throw StructuralError("BS class " + std::to_string(l) + " is empty");
      std::sort(cls.begin(), cls.end());
      for (Index i : cls) {
        check_index(i);
        if (off[i] || labels_[i] != kNoClass) {
          throw StructuralError("BS " + std::to_string(i) + " appears in more than one class");
        }
        labels_[i] = static_cast<Index>(l);
      }
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == kNoClass && !off[i]) {
        throw StructuralError("BS " + std::to_string(i) + " is not covered by the partition");
      }
    }
    std::sort(switched_off_.begin(), switched_off_.end());
  }

  /// Builds the partition from one label per BS (kNoClass = switched off).
  static BsPartition from_labels(const IndexList& labels, Index class_count) {
    std::vector<IndexList> classes(static_cast<std::size_t>(class_count));
    IndexList off;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const Index l = labels[i];
      if (l == kNoClass) {
        off.push_back(static_cast<Index>(i));
      } else if (l < 0 || l >= class_count) {
        throw StructuralError("BS label out of range");
      } else {
        classes[l].push_back(static_cast<Index>(i));
      }
    }
    return BsPartition(std::move(classes), static_cast<Index>(labels.size()), std::move(off));
  }

  Index size() const { return static_cast<Index>(classes_.size()); }
  Index bs_count() const { return static_cast<Index>(labels_.size()); }
  const IndexList& operator[](Index l) const { return classes_.at(l); }
  const std::vector<IndexList>& classes() const { return classes_; }
  const IndexList& labels() const { return labels_; }
  Index label(Index i) const { return labels_.at(i); }
  const IndexList& switched_off() const { return switched_off_; }

  friend bool operator==(const BsPartition&, const BsPartition&) = default;

 private:
  void check_index(Index i) const {
    if (i < 0 || i >= static_cast<Index>(labels_.size())) {
      throw StructuralError("BS index " + std::to_string(i) + " out of range");
    }
  }

  std::vector<IndexList> classes_;
  IndexList switched_off_;
  IndexList labels_;
};

/// Paired partitions: class l of the system is (bs[l], users[l]).
/// User classes may be empty; validity against a weight matrix is checked by
/// validate_if_cluster, not enforced here.
class ClusterSystem {
 public:
  ClusterSystem() = default;

  ClusterSystem(BsPartition bs, std::vector<IndexList> user_classes, Index user_count)
      : bs_(std::move(bs)), user_classes_(std::move(user_classes)),
        user_labels_(static_cast<std::size_t>(user_count), kNoClass) {
    if (static_cast<Index>(user_classes_.size()) != bs_.size()) {
      throw StructuralError("BS and user partitions have different class counts");
    }
    for (std::size_t l = 0; l < user_classes_.size(); ++l) {
      auto& cls = user_classes_[l];
      std::sort(cls.begin(), cls.end());
      for (Index j : cls) {
        if (j < 0 || j >= user_count) {
          throw StructuralError("user index " + std::to_string(j) + " out of range");
        }
        if (user_labels_[j] != kNoClass) {
          throw StructuralError("user " + std::to_string(j) + " appears in more than one class");
        }
        user_labels_[j] = static_cast<Index>(l);
      }
    }
    for (std::size_t j = 0; j < user_labels_.size(); ++j) {
      if (user_labels_[j] == kNoClass) {
        throw StructuralError("user " + std::to_string(j) + " is not covered by the partition");
      }
    }
  }

  static ClusterSystem from_labels(const IndexList& bs_labels, const IndexList& user_labels,
                                   Index class_count) {
    std::vector<IndexList> users(static_cast<std::size_t>(class_count));
    for (std::size_t j = 0; j < user_labels.size(); ++j) {
      const Index l = user_labels[j];
      if (l < 0 || l >= class_count) throw StructuralError("user label out of range");
      users[l].push_back(static_cast<Index>(j));
    }
    return ClusterSystem(BsPartition::from_labels(bs_labels, class_count), std::move(users),
                         static_cast<Index>(user_labels.size()));
  }

  Index size() const { return bs_.size(); }
  Index bs_count() const { return bs_.bs_count(); }
  Index user_count() const { return static_cast<Index>(user_labels_.size()); }

  const BsPartition& bs() const { return bs_; }
  const IndexList& bs_class(Index l) const { return bs_[l]; }
  const IndexList& user_class(Index l) const { return user_classes_.at(l); }
  const std::vector<IndexList>& user_classes() const { return user_classes_; }
  const IndexList& bs_labels() const { return bs_.labels(); }
  const IndexList& user_labels() const { return user_labels_; }

  friend bool operator==(const ClusterSystem&, const ClusterSystem&) = default;

 private:
  BsPartition bs_;
  std::vector<IndexList> user_classes_;
  IndexList user_labels_;
};

struct Violation {
  enum class Kind { kEmptyBsClass, kUnservedUser };
  Kind kind;
  Index cls;
  Index user;  // kNoClass for kEmptyBsClass

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;
};

template <typename Scalar>
void check_dimensions(const ClusterSystem& system, const WeightMatrix<Scalar>& w) {
  if (system.bs_count() != w.bs_count() || system.user_count() != w.user_count()) {
    throw StructuralError("cluster system is " + std::to_string(system.bs_count()) + "x" +
                          std::to_string(system.user_count()) + " but weight matrix is " +
                          std::to_string(w.bs_count()) + "x" + std::to_string(w.user_count()));
  }
}

/// Checks that no class lacks base-stations and that every user has an edge
/// to some base-station of its own class.
template <typename Scalar>
ValidationReport validate_if_cluster(const ClusterSystem& system, const WeightMatrix<Scalar>& w) {
  check_dimensions(system, w);
  ValidationReport report;
  for (Index l = 0; l < system.size(); ++l) {
    const auto& bs = system.bs_class(l);
    if (bs.empty()) {
      report.violations.push_back({Violation::Kind::kEmptyBsClass, l, kNoClass});
      continue;
    }
    for (Index j : system.user_class(l)) {
      const bool served =
          std::any_of(bs.begin(), bs.end(), [&](Index i) { return w.has_edge(i, j); });
      if (!served) report.violations.push_back({Violation::Kind::kUnservedUser, l, j});
    }
  }
  report.valid = report.violations.empty();
  return report;
}

}  // namespace dpclust
