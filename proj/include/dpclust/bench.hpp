#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dpclust/instance.hpp"

namespace dpclust {

enum class Algorithm { kDp, kSpectral };

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// A grid of (b, u) cells, each evaluated on `samples` generated instances for
/// every cluster count M <= b. Sample s of cell c is generated with seed
/// derive_seed(base_seed, c, s), and that one instance is fed to every
/// algorithm and every M.
struct BenchPlan {
  IndexList bs_counts{50};
  IndexList user_counts{200};
  IndexList cluster_counts{20};
  Index samples = 100;
  std::vector<Algorithm> algorithms{Algorithm::kDp, Algorithm::kSpectral};
  std::uint64_t base_seed = 0;
  unsigned threads = 0;     // 0: DPCLUST_THREADS, else hardware concurrency
  int timing_repeats = 3;   // wall time is the median over this many runs
  GeneratorConfig geometry;  // side, dist_min, dist_max, alpha; counts and seed are overridden

  void validate() const;
};

struct BenchRecord {
  Index cell = 0;
  Index sample = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kDp;
  Index bs_count = 0;
  Index user_count = 0;
  Index clusters = 0;
  bool isolated_users = false;  // instance has a user with no edge at all
  std::optional<double> tinf;   // empty iff failed
  std::string failure;          // user-only-cluster | eigensolver-failure | undefined-tinf
  double wall_ms = 0.0;
  IndexList bs_sizes;
  IndexList user_sizes;
};

/// Statistics for one (b, u, M, algorithm) over all samples.
struct CellSummary {
  Index bs_count = 0;
  Index user_count = 0;
  Index clusters = 0;
  Algorithm algorithm = Algorithm::kDp;
  Index samples = 0;
  Index isolated_samples = 0;  // samples whose instance has an isolated user
  Index failures = 0;
  double failure_ratio = 0.0;
  double mean_tinf = 0.0;    // over non-failed samples
  double stddev_tinf = 0.0;  // sample standard deviation over non-failed samples
  double median_ms = 0.0;
  // Against the other algorithm, when both ran. Ties and double failures count
  // half to each side; a failure loses to any success.
  std::optional<double> best_ratio;
  Index head_to_heads = 0;  // both succeeded
  Index strict_wins = 0;    // of those, strictly smaller tinf
};

struct BenchResult {
  std::vector<BenchRecord> records;  // ordered by cell, sample, M, algorithm
  std::vector<CellSummary> summaries;
};

unsigned default_parallelism();

BenchResult run_bench(const BenchPlan& plan);
std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records);

// seed,algorithm,b,u,M,sample,isolated_users,status,tinf,failure,wall_ms,bs_sizes,user_sizes
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
// b,u,M,algorithm,samples,isolated_samples,failures,failure_ratio,mean_tinf,stddev_tinf,
// median_ms,best_ratio,head_to_heads,strict_wins
void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summaries);

}  // namespace dpclust
