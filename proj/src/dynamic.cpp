#include "dpclust/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpclust/assignment.hpp"

namespace dpclust {

const char* to_string(Action action) {
  switch (action) {
    case Action::kNone: return "none";
    case Action::kLocalReassign: return "local-reassign";
    case Action::kGlobalRecluster: return "global-recluster";
  }
  return "unknown";
}

DynamicClustering::DynamicClustering(WeightMatrixd w, Index target, double threshold)
    : w_(w.dense()), target_(target), threshold_(threshold) {
  if (!(threshold >= 0.0)) throw ParameterError("threshold must be nonnegative");
  recluster();
}

void DynamicClustering::recluster() {
  const WeightMatrixd w(w_);
  partition_ = dph_cluster(w, target_).partition;
  labels_ = assign_users(partition_, w).system.user_labels();
  rebuild();
  baseline_ = tinf();
}

void DynamicClustering::rebuild() {
  signal_ = class_signal(partition_, WeightMatrixd(w_));
  column_total_ = w_.colwise().sum().transpose();
  classes_.assign(static_cast<std::size_t>(partition_.size()), {});
  isolated_ = 0;
  for (Index j = 0; j < user_count(); ++j) attach(j);
}

// Removes user j's contribution from the class aggregates.
void DynamicClustering::detach(Index j) {
  for (Index k = 0; k < partition_.size(); ++k) classes_[k].bs_side -= signal_(k, j);
  auto& own = classes_[labels_[j]];
  own.inner -= signal_(labels_[j], j);
  own.user_side -= column_total_(j);
  if (signal_(labels_[j], j) == 0.0) --isolated_;
  if (--own.users == 0) {
    own.inner = 0.0;
    own.user_side = 0.0;
  }
}

void DynamicClustering::attach(Index j) {
  for (Index k = 0; k < partition_.size(); ++k) classes_[k].bs_side += signal_(k, j);
  auto& own = classes_[labels_[j]];
  own.inner += signal_(labels_[j], j);
  own.user_side += column_total_(j);
  if (signal_(labels_[j], j) == 0.0) ++isolated_;
  ++own.users;
}

void DynamicClustering::refresh_column(Index j) {
  for (Index k = 0; k < partition_.size(); ++k) {
    double s = 0.0;
    for (Index i : partition_[k]) s += w_(i, j);
    signal_(k, j) = s;
  }
  column_total_(j) = w_.col(j).sum();
}

// Moves user j to its best class if it is not there already.
bool DynamicClustering::recheck(Index j) {
  const Index best = best_class(signal_.col(j));
  if (best == labels_[j]) return false;
  detach(j);
  labels_[j] = best;
  attach(j);
  return true;
}

double DynamicClustering::tinf() const {
  double total = 0.0;
  for (const auto& c : classes_) {
    if (c.users == 0) continue;
    if (!(c.inner > 0.0)) return std::numeric_limits<double>::infinity();
    total += (c.bs_side + c.user_side - 2.0 * c.inner) / c.inner;
  }
  return total;
}

ClusterSystem DynamicClustering::system() const {
  return ClusterSystem::from_labels(partition_.labels(), labels_, partition_.size());
}

EventOutcome DynamicClustering::apply(const Event& event) {
  EventOutcome out;
  const Index b = w_.rows();
  auto check_user = [&](Index j) {
    if (j < 0 || j >= user_count()) {
      throw StructuralError("user index " + std::to_string(j) + " out of range");
    }
  };

  if (const auto* join = std::get_if<JoinEvent>(&event)) {
    if (join->weights.size() != b) {
      throw StructuralError("joining user has " + std::to_string(join->weights.size()) +
                            " weights, expected " + std::to_string(b));
    }
    if (!((join->weights.array() >= 0.0).all() && join->weights.allFinite())) {
      throw StructuralError("joining user has a negative or non-finite weight");
    }
    const Index j = user_count();
    w_.conservativeResize(Eigen::NoChange, j + 1);
    w_.col(j) = join->weights;
    signal_.conservativeResize(Eigen::NoChange, j + 1);
    column_total_.conservativeResize(j + 1);
    refresh_column(j);
    labels_.push_back(best_class(signal_.col(j)));
    attach(j);
    out.action = Action::kLocalReassign;
    out.moved_users.push_back(j);
  } else if (const auto* leave = std::get_if<LeaveEvent>(&event)) {
    const Index j = leave->user;
    check_user(j);
    if (user_count() == 1) throw StructuralError("cannot remove the last user");
    detach(j);
    const Index tail = user_count() - j - 1;
    w_.middleCols(j, tail) = w_.rightCols(tail).eval();
    signal_.middleCols(j, tail) = signal_.rightCols(tail).eval();
    column_total_.segment(j, tail) = column_total_.tail(tail).eval();
    w_.conservativeResize(Eigen::NoChange, user_count() - 1);
    signal_.conservativeResize(Eigen::NoChange, user_count() - 1);
    column_total_.conservativeResize(user_count() - 1);
    labels_.erase(labels_.begin() + j);
  } else {
    const auto& update = std::get<UpdateEvent>(event);
    check_user(update.user);
    if (update.bs < 0 || update.bs >= b) {
      throw StructuralError("BS index " + std::to_string(update.bs) + " out of range");
    }
    if (!(update.weight >= 0.0) || !std::isfinite(update.weight)) {
      throw StructuralError("updated weight must be finite and nonnegative");
    }
    const Index j = update.user;
    const Index old_class = labels_[j];
    detach(j);
    w_(update.bs, j) = update.weight;
    refresh_column(j);
    const Index new_class = best_class(signal_.col(j));
    labels_[j] = new_class;
    attach(j);
    if (new_class != old_class) out.moved_users.push_back(j);

    // Users of the classes whose sums changed.
    const Index bs_class = partition_.label(update.bs);
    for (Index other = 0; other < user_count(); ++other) {
      if (other == j) continue;
      const Index l = labels_[other];
      if (l == old_class || l == new_class || l == bs_class) {
        if (recheck(other)) out.moved_users.push_back(other);
      }
    }
    out.action = out.moved_users.empty() ? Action::kNone : Action::kLocalReassign;
  }

  out.tinf = tinf();
  if (out.tinf > (1.0 + threshold_) * baseline_) {
    recluster();
    out.action = Action::kGlobalRecluster;
    out.tinf = tinf();
  }
  out.valid = valid();
  return out;
}

}  // namespace dpclust
