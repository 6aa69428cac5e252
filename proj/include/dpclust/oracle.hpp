#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dpclust/metrics.hpp"
#include "dpclust/partition.hpp"

namespace dpclust {

/// Stirling number of the second kind, as a floating value (only used for bounds).
inline double stirling2(Index n, Index k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  std::vector<double> row(static_cast<std::size_t>(k + 1), 0.0);
  row[0] = 1.0;
  for (Index i = 1; i <= n; ++i) {
    for (Index j = std::min(i, k); j >= 1; --j) row[j] = static_cast<double>(j) * row[j] + row[j - 1];
    row[0] = 0.0;
  }
  return row[k];
}

/// Number of paired systems with exactly `classes` nonempty BS classes.
inline double cluster_system_count(Index bs_count, Index user_count, Index classes) {
  return stirling2(bs_count, classes) *
         std::pow(static_cast<double>(classes), static_cast<double>(user_count));
}

class InstanceTooLarge : public ParameterError {
 public:
  InstanceTooLarge(double bound, double limit)
      : ParameterError("brute force would enumerate " + std::to_string(bound) +
                       " systems, limit is " + std::to_string(limit)),
        bound_(bound), limit_(limit) {}
  double bound() const { return bound_; }
  double limit() const { return limit_; }

 private:
  double bound_;
  double limit_;
};

/// Calls fn(bs_labels, user_labels) for every partition of the BSs into
/// exactly `classes` nonempty classes (as restricted growth strings) and every
/// assignment of users to those classes, in lexicographic order of the
/// concatenated label vectors.
template <typename Fn>
void for_each_cluster_system(Index bs_count, Index user_count, Index classes, Fn&& fn) {
  if (classes < 1 || classes > bs_count) return;
  IndexList bs(static_cast<std::size_t>(bs_count), 0);
  IndexList prefix_max(static_cast<std::size_t>(bs_count), 0);
  IndexList users(static_cast<std::size_t>(user_count), 0);

  auto visit_users = [&] {
    std::fill(users.begin(), users.end(), 0);
    for (;;) {
      fn(static_cast<const IndexList&>(bs), static_cast<const IndexList&>(users));
      Index pos = user_count - 1;
      while (pos >= 0 && users[pos] == classes - 1) users[pos--] = 0;
      if (pos < 0) return;
      ++users[pos];
    }
  };

  // Depth-first generation of restricted growth strings: bs[i] <= max(bs[0..i-1]) + 1.
  std::function<void(Index, Index)> extend = [&](Index i, Index used) {
    if (i == bs_count) {
      if (used == classes) visit_users();
      return;
    }
    const Index remaining = bs_count - i;
    for (Index label = 0; label <= std::min(used, classes - 1); ++label) {
      const Index now_used = std::max(used, label + 1);
      if (classes - now_used > remaining - 1) continue;
      bs[i] = label;
      extend(i + 1, now_used);
    }
  };
  extend(0, 0);
}

/// Total interference straight from the class-by-class definition, over raw
/// label vectors. Empty when some class with users has zero intra weight.
template <typename Scalar>
std::optional<Scalar> tinf_by_definition(const IndexList& bs_labels, const IndexList& user_labels,
                                         Index classes, const WeightMatrix<Scalar>& w) {
  Scalar total{0};
  for (Index l = 0; l < classes; ++l) {
    bool has_users = false;
    Scalar weight{0}, cut_out{0}, cut_in{0};
    for (Index j = 0; j < w.user_count(); ++j) {
      const bool user_in = user_labels[j] == l;
      has_users = has_users || user_in;
      for (Index i = 0; i < w.bs_count(); ++i) {
        if (bs_labels[i] == kNoClass) continue;
        const bool bs_in = bs_labels[i] == l;
        if (bs_in && user_in) weight += w(i, j);
        if (bs_in && !user_in) cut_out += w(i, j);
        if (!bs_in && user_in) cut_in += w(i, j);
      }
    }
    if (!has_users) continue;
    if (!(weight > Scalar(0))) return std::nullopt;
    total += (cut_out + cut_in) / weight;
  }
  return total;
}

template <typename Scalar>
struct OracleResult {
  std::optional<ClusterSystem> best_system;  // empty when no IF-valid system exists
  Scalar best_tinf = std::numeric_limits<Scalar>::infinity();
  std::uint64_t systems_enumerated = 0;
  std::uint64_t valid_systems = 0;
};

inline constexpr double kOracleLimit = 1e8;

/// Exhaustive minimum of tinf over IF-valid systems with exactly `classes`
/// BS classes. Ties go to the lexicographically smallest label encoding.
template <typename Scalar>
OracleResult<Scalar> brute_force_optimal(const WeightMatrix<Scalar>& w, Index classes,
                                         double limit = kOracleLimit) {
  if (classes < 1 || classes > w.bs_count()) {
    throw ParameterError("class count must lie in [1, b]");
  }
  const double bound = cluster_system_count(w.bs_count(), w.user_count(), classes);
  if (bound > limit) throw InstanceTooLarge(bound, limit);

  OracleResult<Scalar> result;
  std::vector<std::vector<bool>> served;  // served[j][l]
  IndexList last_bs;
  for_each_cluster_system(w.bs_count(), w.user_count(), classes,
                          [&](const IndexList& bs, const IndexList& users) {
    ++result.systems_enumerated;
    if (bs != last_bs) {
      last_bs = bs;
      served.assign(static_cast<std::size_t>(w.user_count()),
                    std::vector<bool>(static_cast<std::size_t>(classes), false));
      for (Index j = 0; j < w.user_count(); ++j) {
        for (Index i = 0; i < w.bs_count(); ++i) {
          if (w.has_edge(i, j)) served[j][bs[i]] = true;
        }
      }
    }
    for (Index j = 0; j < w.user_count(); ++j) {
      if (!served[j][users[j]]) return;
    }
    ++result.valid_systems;
    auto system = ClusterSystem::from_labels(bs, users, classes);
    const Scalar value = tinf_value(system, w);
    if (!result.best_system || value < result.best_tinf) {
      result.best_tinf = value;
      result.best_system = std::move(system);
    }
  });
  return result;
}

}  // namespace dpclust
