#include "dpclust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <thread>
#include <tuple>

#include "dpclust/assignment.hpp"
#include "dpclust/rng.hpp"
#include "dpclust/spectral.hpp"

namespace dpclust {

const char* to_string(Algorithm algorithm) {
  return algorithm == Algorithm::kDp ? "dp" : "spectral";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "dp") return Algorithm::kDp;
  if (name == "spectral") return Algorithm::kSpectral;
  throw ParameterError("unknown algorithm '" + name + "'");
}

void BenchPlan::validate() const {
  if (bs_counts.empty() || user_counts.empty() || cluster_counts.empty()) {
    throw ParameterError("bench plan needs at least one b, u and M");
  }
  if (samples < 1) throw ParameterError("bench plan needs at least one sample");
  if (algorithms.empty()) throw ParameterError("bench plan needs at least one algorithm");
  if (timing_repeats < 1) throw ParameterError("timing repeats must be at least 1");
  for (Index m : cluster_counts) {
    if (m < 1) throw ParameterError("cluster counts must be positive");
  }
  GeneratorConfig probe = geometry;
  for (Index b : bs_counts) {
    for (Index u : user_counts) {
      probe.bs_count = b;
      probe.user_count = u;
      probe.validate();
    }
  }
}

unsigned default_parallelism() {
  if (const char* env = std::getenv("DPCLUST_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Cell {
  Index bs_count;
  Index user_count;
};

template <typename Fn>
double median_ms(int repeats, Fn&& fn) {
  std::vector<double> times;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
  }
  std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
  return times[times.size() / 2];
}

void fill_sizes(BenchRecord& rec, const ClusterSystem& system) {
  for (Index l = 0; l < system.size(); ++l) {
    rec.bs_sizes.push_back(static_cast<Index>(system.bs_class(l).size()));
    rec.user_sizes.push_back(static_cast<Index>(system.user_class(l).size()));
  }
}

void score(BenchRecord& rec, const ClusterSystem& system, const WeightMatrixd& w) {
  fill_sizes(rec, system);
  try {
    rec.tinf = tinf_value(system, w);
  } catch (const DivisionError&) {
    rec.failure = "undefined-tinf";
  }
}

BenchRecord run_one(const BenchPlan& plan, Algorithm algorithm, const Instance& inst, Index m,
                    std::uint64_t seed) {
  BenchRecord rec;
  rec.algorithm = algorithm;
  rec.clusters = m;
  const auto& w = inst.weights;
  if (algorithm == Algorithm::kDp) {
    ClusterSystem system;
    rec.wall_ms = median_ms(plan.timing_repeats, [&] { system = dp_similarity_clustering(w, m); });
    score(rec, system, w);
  } else {
    SpectralOutcome outcome;
    const std::uint64_t spectral_seed = derive_seed(seed, static_cast<std::uint64_t>(m), 1);
    rec.wall_ms =
        median_ms(plan.timing_repeats, [&] { outcome = spectral_cluster(w, m, spectral_seed); });
    if (outcome.failed()) {
      rec.failure = to_string(*outcome.failure);
    } else {
      score(rec, *outcome.system, w);
    }
  }
  return rec;
}

}  // namespace

BenchResult run_bench(const BenchPlan& plan) {
  plan.validate();
  std::vector<Cell> cells;
  for (Index b : plan.bs_counts) {
    for (Index u : plan.user_counts) cells.push_back({b, u});
  }

  // Each (cell, sample) work item owns a contiguous block of record slots.
  struct Item {
    Index cell, sample;
    std::size_t offset;
    IndexList clusters;
  };
  std::vector<Item> items;
  std::size_t total = 0;
  for (Index c = 0; c < static_cast<Index>(cells.size()); ++c) {
    IndexList ms;
    for (Index m : plan.cluster_counts) {
      if (m <= cells[c].bs_count) ms.push_back(m);
    }
    for (Index s = 0; s < plan.samples; ++s) {
      items.push_back({c, s, total, ms});
      total += ms.size() * plan.algorithms.size();
    }
  }

  BenchResult result;
  result.records.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) {
      const Item& item = items[k];
      GeneratorConfig config = plan.geometry;
      config.bs_count = cells[item.cell].bs_count;
      config.user_count = cells[item.cell].user_count;
      config.seed = derive_seed(plan.base_seed, static_cast<std::uint64_t>(item.cell),
                                static_cast<std::uint64_t>(item.sample));
      const Instance inst = generate(config);
      const bool isolated = !inst.weights.isolated_users().empty();
      std::size_t slot = item.offset;
      for (Index m : item.clusters) {
        for (Algorithm alg : plan.algorithms) {
          BenchRecord rec = run_one(plan, alg, inst, m, config.seed);
          rec.cell = item.cell;
          rec.sample = item.sample;
          rec.seed = config.seed;
          rec.bs_count = config.bs_count;
          rec.user_count = config.user_count;
          rec.isolated_users = isolated;
          result.records[slot++] = std::move(rec);
        }
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(plan.threads ? plan.threads : default_parallelism(),
                                      static_cast<unsigned>(items.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  result.summaries = summarize(result.records);
  return result;
}

std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records) {
  using Key = std::tuple<Index, Index, Index, int>;  // b, u, M, algorithm
  std::map<Key, std::vector<const BenchRecord*>> groups;
  // (b, u, M, sample) -> records of each algorithm
  std::map<std::tuple<Index, Index, Index, Index>, std::map<int, const BenchRecord*>> pairs;
  for (const auto& r : records) {
    const int alg = static_cast<int>(r.algorithm);
    groups[{r.bs_count, r.user_count, r.clusters, alg}].push_back(&r);
    pairs[{r.bs_count, r.user_count, r.clusters, r.sample}][alg] = &r;
  }

  std::vector<CellSummary> out;
  for (const auto& [key, recs] : groups) {
    CellSummary s;
    std::tie(s.bs_count, s.user_count, s.clusters, std::ignore) = key;
    s.algorithm = static_cast<Algorithm>(std::get<3>(key));
    std::vector<double> values, times;
    double best = 0.0;
    bool has_opponent = false;
    for (const BenchRecord* r : recs) {
      if (r->isolated_users) ++s.isolated_samples;
      ++s.samples;
      times.push_back(r->wall_ms);
      if (r->tinf) {
        values.push_back(*r->tinf);
      } else {
        ++s.failures;
      }
      const auto& both = pairs[{r->bs_count, r->user_count, r->clusters, r->sample}];
      for (const auto& [other_alg, other] : both) {
        if (other == r) continue;
        has_opponent = true;
        if (r->tinf && other->tinf) {
          ++s.head_to_heads;
          if (*r->tinf < *other->tinf) {
            ++s.strict_wins;
            best += 1.0;
          } else if (*r->tinf == *other->tinf) {
            best += 0.5;
          }
        } else if (r->tinf) {
          best += 1.0;
        } else if (!other->tinf) {
          best += 0.5;
        }
      }
    }
    if (s.samples > 0) {
      s.failure_ratio = static_cast<double>(s.failures) / static_cast<double>(s.samples);
      if (has_opponent) s.best_ratio = best / static_cast<double>(s.samples);
      std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
      s.median_ms = times[times.size() / 2];
    }
    if (!values.empty()) {
      double sum = 0.0;
      for (double v : values) sum += v;
      s.mean_tinf = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - s.mean_tinf) * (v - s.mean_tinf);
      s.stddev_tinf = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

std::string join_sizes(const IndexList& sizes) {
  std::string out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (k) out += ';';
    out += std::to_string(sizes[k]);
  }
  return out;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "seed,algorithm,b,u,M,sample,isolated_users,status,tinf,failure,wall_ms,bs_sizes,user_sizes\n";
  out << std::setprecision(17);
  for (const auto& r : records) {
    out << r.seed << ',' << to_string(r.algorithm) << ',' << r.bs_count << ',' << r.user_count
        << ',' << r.clusters << ',' << r.sample << ',' << (r.isolated_users ? 1 : 0) << ','
        << (r.tinf ? "ok" : "failed") << ',';
    if (r.tinf) out << *r.tinf;
    out << ',' << r.failure << ',' << r.wall_ms << ',' << join_sizes(r.bs_sizes) << ','
        << join_sizes(r.user_sizes) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& summaries) {
  out << "b,u,M,algorithm,samples,isolated_samples,failures,failure_ratio,mean_tinf,"
         "stddev_tinf,median_ms,best_ratio,head_to_heads,strict_wins\n";
  out << std::setprecision(10);
  for (const auto& s : summaries) {
    out << s.bs_count << ',' << s.user_count << ',' << s.clusters << ',' << to_string(s.algorithm)
        << ',' << s.samples << ',' << s.isolated_samples << ',' << s.failures << ','
        << s.failure_ratio << ',' << s.mean_tinf << ',' << s.stddev_tinf << ',' << s.median_ms
        << ',';
    if (s.best_ratio) out << *s.best_ratio;
    out << ',' << s.head_to_heads << ',' << s.strict_wins << '\n';
  }
}

}  // namespace dpclust
