#include "dpclust/spectral.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dpclust/rng.hpp"

namespace dpclust {

namespace {

double squared_distance(const MatrixXd& points, Index p, const MatrixXd& centers, Index c) {
  return (points.row(p) - centers.row(c)).squaredNorm();
}

MatrixXd seed_centers(const MatrixXd& points, Index k, Rng& rng) {
  const Index n = points.rows();
  MatrixXd centers(k, points.cols());
  centers.row(0) = points.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  VectorXd nearest(n);
  for (Index p = 0; p < n; ++p) nearest(p) = squared_distance(points, p, centers, 0);

  for (Index c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Index p = 0; p < n; ++p) {
        target -= nearest(p);
        if (target < 0.0) {
          pick = p;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = points.row(pick);
    for (Index p = 0; p < n; ++p) {
      nearest(p) = std::min(nearest(p), squared_distance(points, p, centers, c));
    }
  }
  return centers;
}

KMeansResult lloyd(const MatrixXd& points, MatrixXd centers, int max_iterations) {
  const Index n = points.rows();
  const Index k = centers.rows();
  IndexList labels(static_cast<std::size_t>(n), -1);
  VectorXd dist(n);

  auto assign = [&] {
    bool changed = false;
    for (Index p = 0; p < n; ++p) {
      // Ties keep the current cluster, so a re-seeded duplicate stays put.
      Index best = labels[p] < 0 ? 0 : labels[p];
      double best_d = squared_distance(points, p, centers, best);
      for (Index c = 0; c < k; ++c) {
        const double d = squared_distance(points, p, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      changed = changed || labels[p] != best;
      labels[p] = best;
      dist(p) = best_d;
    }
    return changed;
  };

  assign();
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    MatrixXd sums = MatrixXd::Zero(k, points.cols());
    for (Index p = 0; p < n; ++p) {
      sums.row(labels[p]) += points.row(p);
      ++counts[labels[p]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        continue;
      }
      // Re-seed an empty cluster at the worst-served point that is not the
      // sole member of its own cluster.
      Index far = -1;
      for (Index p = 0; p < n; ++p) {
        if (counts[labels[p]] > 1 && (far < 0 || dist(p) > dist(far))) far = p;
      }
      if (far < 0) continue;
      --counts[labels[far]];
      labels[far] = c;
      counts[c] = 1;
      dist(far) = 0.0;
      centers.row(c) = points.row(far);
    }
    if (!assign()) break;
  }

  KMeansResult out;
  out.labels = std::move(labels);
  out.centers = std::move(centers);
  out.inertia = dist.sum();
  return out;
}

}  // namespace

KMeansResult kmeans(const MatrixXd& points, Index k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k < 1 || k > points.rows()) throw ParameterError("k must lie in [1, number of points]");
  Rng rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    KMeansResult run = lloyd(points, seed_centers(points, k, rng), options.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

std::optional<MatrixXd> spectral_embedding(const WeightMatrixd& w, Index dims) {
  const Index b = w.bs_count();
  const Index n = b + w.user_count();
  if (dims < 1 || dims > n) throw ParameterError("embedding dimension must lie in [1, b + u]");

  VectorXd degree(n);
  degree.head(b) = w.dense().rowwise().sum();
  degree.tail(n - b) = w.dense().colwise().sum().transpose();
  const VectorXd inv_sqrt = degree.unaryExpr([](double d) {
    return 1.0 / std::sqrt(d > 0.0 ? d : kDegreeFloor);
  });

  // L = I - D^-1/2 A D^-1/2 with A = [0 W; W^T 0]
  MatrixXd laplacian = MatrixXd::Identity(n, n);
  const MatrixXd scaled = inv_sqrt.head(b).asDiagonal() * w.dense() * inv_sqrt.tail(n - b).asDiagonal();
  laplacian.topRightCorner(b, n - b) = -scaled;
  laplacian.bottomLeftCorner(n - b, b) = -scaled.transpose();

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) return std::nullopt;

  MatrixXd embedding = solver.eigenvectors().leftCols(dims);
  for (Index r = 0; r < n; ++r) {
    const double norm = embedding.row(r).norm();
    if (norm > 0.0) embedding.row(r) /= norm;
  }
  return embedding;
}

const char* to_string(SpectralFailure failure) {
  switch (failure) {
    case SpectralFailure::kUserOnlyCluster: return "user-only-cluster";
    case SpectralFailure::kEigensolverFailure: return "eigensolver-failure";
  }
  return "unknown";
}

SpectralOutcome spectral_cluster(const WeightMatrixd& w, Index clusters, std::uint64_t seed,
                                 const KMeansOptions& options) {
  const Index b = w.bs_count();
  const Index u = w.user_count();
  if (clusters < 1 || clusters > b + u) {
    throw ParameterError("cluster count must lie in [1, b + u]");
  }

  SpectralOutcome outcome;
  const auto embedding = spectral_embedding(w, clusters);
  if (!embedding) {
    outcome.failure = SpectralFailure::kEigensolverFailure;
    outcome.detail = "symmetric eigensolver did not converge";
    return outcome;
  }
  outcome.labels = kmeans(*embedding, clusters, seed, options).labels;

  std::vector<bool> has_bs(static_cast<std::size_t>(clusters), false);
  for (Index i = 0; i < b; ++i) has_bs[outcome.labels[i]] = true;
  for (Index j = 0; j < u; ++j) {
    const Index l = outcome.labels[b + j];
    if (!has_bs[l]) {
      outcome.failure = SpectralFailure::kUserOnlyCluster;
      outcome.detail = "group " + std::to_string(l) + " holds user " + std::to_string(j) +
                       " but no base-station";
      return outcome;
    }
  }

  // Classes are numbered by first base-station; groups without any vertex
  // are dropped.
  IndexList order(static_cast<std::size_t>(clusters), -1);
  Index next = 0;
  for (Index i = 0; i < b; ++i) {
    const Index l = outcome.labels[i];
    if (order[l] < 0) order[l] = next++;
  }
  IndexList bs_labels(static_cast<std::size_t>(b)), user_labels(static_cast<std::size_t>(u));
  for (Index i = 0; i < b; ++i) bs_labels[i] = order[outcome.labels[i]];
  for (Index j = 0; j < u; ++j) user_labels[j] = order[outcome.labels[b + j]];
  if (next < clusters) {
    outcome.detail = "only " + std::to_string(next) + " of " + std::to_string(clusters) +
                     " groups are nonempty";
  }
  outcome.system = ClusterSystem::from_labels(bs_labels, user_labels, next);
  outcome.validation = validate_if_cluster(*outcome.system, w);
  return outcome;
}

}  // namespace dpclust
