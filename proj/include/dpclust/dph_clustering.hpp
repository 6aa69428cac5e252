#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "dpclust/partition.hpp"
#include "dpclust/similarity.hpp"

namespace dpclust {

template <typename Scalar>
struct MergeRecord {
  Index round = 0;
  Index slot_a = 0;  // survivor (smaller slot)
  Index slot_b = 0;
  Scalar rho{0};

  friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

/// The b - M merges in execution order and the resulting partition.
template <typename Scalar>
struct MergeTrace {
  std::vector<MergeRecord<Scalar>> merges;
  BsPartition partition;

  friend bool operator==(const MergeTrace&, const MergeTrace&) = default;
};

struct DphOptions {
  // Cross-check every heap pop against a full scan of alive pairs (O(b^2) per round).
  bool verify_heap = false;
};

namespace detail {

template <typename Scalar>
struct MergeCandidate {
  Scalar rho;
  Index slot_a;
  Index slot_b;
  std::uint32_t version_a;
  std::uint32_t version_b;
};

// True when x should be popped after y: lower rho, or equal rho and a
// lexicographically larger slot pair.
template <typename Scalar>
bool ranks_below(Scalar rho_x, Index ax, Index bx, Scalar rho_y, Index ay, Index by) {
  if (rho_x != rho_y) return rho_x < rho_y;
  return std::tie(ax, bx) > std::tie(ay, by);
}

inline void check_target(Index bs_count, Index target) {
  if (target < 1) throw ParameterError("target cluster count must be at least 1");
  if (target > bs_count) {
    throw ParameterError("target cluster count " + std::to_string(target) +
                         " exceeds the number of base-stations " + std::to_string(bs_count));
  }
}

// Best alive pair by full scan; ties go to the smallest (a, b).
template <typename Scalar>
std::tuple<Index, Index, Scalar> scan_best_pair(const GramTable<Scalar>& gram) {
  Index best_a = -1, best_b = -1;
  Scalar best{0};
  for (Index a = 0; a < gram.slot_count(); ++a) {
    if (!gram.alive(a)) continue;
    for (Index b = a + 1; b < gram.slot_count(); ++b) {
      if (!gram.alive(b)) continue;
      const Scalar r = gram.rho(a, b);
      if (best_a < 0 || ranks_below(best, best_a, best_b, r, a, b)) {
        best_a = a;
        best_b = b;
        best = r;
      }
    }
  }
  return {best_a, best_b, best};
}

class MemberSets {
 public:
  explicit MemberSets(Index n) : members_(static_cast<std::size_t>(n)) {
    for (Index i = 0; i < n; ++i) members_[i].push_back(i);
  }
  void absorb(Index into, Index from) {
    auto& dst = members_[into];
    dst.insert(dst.end(), members_[from].begin(), members_[from].end());
    members_[from].clear();
  }
  template <typename Scalar>
  BsPartition finish(const GramTable<Scalar>& gram) {
    std::vector<IndexList> classes;
    for (Index k = 0; k < gram.slot_count(); ++k) {
      if (gram.alive(k)) classes.push_back(std::move(members_[k]));
    }
    return BsPartition(std::move(classes), gram.slot_count());
  }

 private:
  std::vector<IndexList> members_;
};

}  // namespace detail

/// Agglomerative clustering of base-stations: repeatedly merges the pair of
/// clusters whose summed signal vectors have the largest cosine, until
/// `target` clusters remain. Candidate pairs live in a max-heap with lazy
/// deletion (stale entries are recognised by slot version counters).
template <typename Scalar>
MergeTrace<Scalar> dph_cluster(const WeightMatrix<Scalar>& w, Index target,
                               DphOptions options = {}) {
  using Candidate = detail::MergeCandidate<Scalar>;
  detail::check_target(w.bs_count(), target);

  GramTable<Scalar> gram(w);
  const Index n = gram.slot_count();
  std::vector<std::uint32_t> version(static_cast<std::size_t>(n), 0);

  auto lower = [](const Candidate& x, const Candidate& y) {
    return detail::ranks_below(x.rho, x.slot_a, x.slot_b, y.rho, y.slot_a, y.slot_b);
  };
  std::vector<Candidate> storage;
  storage.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(lower)> heap(lower,
                                                                              std::move(storage));
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) heap.push({gram.rho(a, b), a, b, 0, 0});
  }

  MergeTrace<Scalar> trace;
  detail::MemberSets members(n);
  for (Index round = 0; round < n - target; ++round) {
    Candidate top{};
    for (;;) {
      top = heap.top();
      heap.pop();
      if (gram.alive(top.slot_a) && gram.alive(top.slot_b) &&
          version[top.slot_a] == top.version_a && version[top.slot_b] == top.version_b) {
        break;
      }
    }
    if (options.verify_heap) {
      const auto [a, b, r] = detail::scan_best_pair(gram);
      if (a != top.slot_a || b != top.slot_b || r != top.rho) {
        throw std::logic_error("heap argmax disagrees with full scan in round " +
                               std::to_string(round));
      }
    }

    const Index s = gram.merge(top.slot_a, top.slot_b);
    members.absorb(s, top.slot_b);
    ++version[s];
    trace.merges.push_back({round, top.slot_a, top.slot_b, top.rho});

    for (Index x = 0; x < n; ++x) {
      if (x == s || !gram.alive(x)) continue;
      const Index a = std::min(s, x);
      const Index b = std::max(s, x);
      heap.push({gram.rho(a, b), a, b, version[a], version[b]});
    }
  }
  trace.partition = members.finish(gram);
  return trace;
}

/// Reference implementation: full rescan of alive pairs each round, no heap.
template <typename Scalar>
MergeTrace<Scalar> dph_cluster_naive(const WeightMatrix<Scalar>& w, Index target) {
  detail::check_target(w.bs_count(), target);
  GramTable<Scalar> gram(w);
  const Index n = gram.slot_count();
  MergeTrace<Scalar> trace;
  detail::MemberSets members(n);
  for (Index round = 0; round < n - target; ++round) {
    const auto [a, b, r] = detail::scan_best_pair(gram);
    gram.merge(a, b);
    members.absorb(a, b);
    trace.merges.push_back({round, a, b, r});
  }
  trace.partition = members.finish(gram);
  return trace;
}

}  // namespace dpclust
