#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dpclust/partition.hpp"
#include "dpclust/weight_matrix.hpp"

namespace dpclust {

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 100;
};

struct KMeansResult {
  IndexList labels;
  MatrixXd centers;  // k x dims
  double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding; keeps the restart of lowest
/// inertia. Clusters that empty out are re-seeded with the point farthest
/// from its current center, so every label in [0, k) is used whenever the
/// data has at least k distinct rows.
KMeansResult kmeans(const MatrixXd& points, Index k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Rows 0..b-1 embed the base-stations, rows b..b+u-1 the users: the
/// eigenvectors of the `dims` smallest eigenvalues of the symmetric
/// normalized Laplacian of the bipartite graph, each row scaled to unit length.
/// Returns nullopt if the eigensolver does not converge.
std::optional<MatrixXd> spectral_embedding(const WeightMatrixd& w, Index dims);

inline constexpr double kDegreeFloor = 1e-12;

enum class SpectralFailure { kUserOnlyCluster, kEigensolverFailure };

const char* to_string(SpectralFailure failure);

struct SpectralOutcome {
  std::optional<ClusterSystem> system;
  ValidationReport validation;
  std::optional<SpectralFailure> failure;
  std::string detail;
  IndexList labels;  // raw k-means label per vertex (BSs first, then users)

  bool failed() const { return failure.has_value(); }
};

/// Bipartite spectral co-clustering of BSs and users into `clusters` groups.
/// A group that receives users but no base-station makes the outcome a failure.
SpectralOutcome spectral_cluster(const WeightMatrixd& w, Index clusters, std::uint64_t seed,
                                 const KMeansOptions& options = {});

}  // namespace dpclust
