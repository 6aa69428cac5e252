#pragma once

#include <variant>
#include <vector>

#include "dpclust/partition.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

struct JoinEvent {
  VectorXd weights;  // one entry per base-station
};
struct LeaveEvent {
  Index user = 0;  // later users shift down by one
};
struct UpdateEvent {
  Index bs = 0;
  Index user = 0;
  double weight = 0.0;
};
using Event = std::variant<JoinEvent, LeaveEvent, UpdateEvent>;

enum class Action { kNone, kLocalReassign, kGlobalRecluster };

const char* to_string(Action action);

struct EventOutcome {
  Action action = Action::kNone;
  double tinf = 0.0;
  bool valid = true;          // false while some user has no edge to its class
  IndexList moved_users;      // users whose class changed locally (after index shifts)
};

/// Keeps a DP-similarity clustering current under user churn.
///
/// The BS partition stays frozen between global re-clusterings; users follow
/// the best-class rule locally. Per-class aggregates make each tinf refresh
/// O(M). A global re-clustering runs when tinf exceeds
/// (1 + threshold) * tinf at the last global clustering.
class DynamicClustering {
 public:
  DynamicClustering(WeightMatrixd w, Index target, double threshold = 0.2);

  EventOutcome apply(const Event& event);

  /// Full dph_cluster + assign_users on the current weights; resets the baseline.
  void recluster();

  /// Incrementally maintained total interference; +inf when a class with users
  /// has no intra-class weight.
  double tinf() const;
  double baseline_tinf() const { return baseline_; }
  double threshold() const { return threshold_; }
  bool valid() const { return isolated_ == 0; }

  Index target() const { return target_; }
  Index user_count() const { return static_cast<Index>(labels_.size()); }
  const MatrixXd& weights() const { return w_; }
  const BsPartition& bs_partition() const { return partition_; }
  const IndexList& user_labels() const { return labels_; }
  ClusterSystem system() const;

 private:
  struct ClassAggregate {
    double bs_side = 0.0;    // all weight leaving the class's BSs
    double user_side = 0.0;  // all weight arriving at the class's users
    double inner = 0.0;      // weight between the class's BSs and users
    Index users = 0;
  };

  void rebuild();
  void detach(Index j);
  void attach(Index j);
  void refresh_column(Index j);
  bool recheck(Index j);

  MatrixXd w_;
  Index target_;
  double threshold_;
  BsPartition partition_;
  IndexList labels_;
  MatrixXd signal_;        // M x u, class signal per user
  VectorXd column_total_;  // u
  std::vector<ClassAggregate> classes_;
  Index isolated_ = 0;
  double baseline_ = 0.0;
};

}  // namespace dpclust
