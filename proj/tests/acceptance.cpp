// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dpclust/assignment.hpp"
#include "dpclust/bench.hpp"
#include "dpclust/dph_clustering.hpp"
#include "dpclust/dynamic.hpp"
#include "dpclust/instance.hpp"
#include "dpclust/metrics.hpp"
#include "dpclust/oracle.hpp"
#include "dpclust/rng.hpp"
#include "dpclust/spectral.hpp"

using namespace dpclust;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool close_rel(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

double tinf_or_inf(const ClusterSystem& s, const WeightMatrixd& w) {
  try {
    return tinf_value(s, w);
  } catch (const DivisionError&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Dense random weights with no isolated user.
WeightMatrixd random_weights(std::mt19937_64& rng, Index b, Index u, double density) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    MatrixXd m(b, u);
    for (Index i = 0; i < b; ++i) {
      for (Index j = 0; j < u; ++j) m(i, j) = unit(rng) < density ? 0.01 + unit(rng) : 0.0;
    }
    WeightMatrixd w(std::move(m));
    if (w.isolated_users().empty()) return w;
  }
}

GeneratorConfig default_config(Index b, Index u, std::uint64_t seed) {
  GeneratorConfig c;
  c.bs_count = b;
  c.user_count = u;
  c.seed = seed;
  return c;
}

struct Verdict {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("[%s] %2d %-28s %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  std::uint64_t systems = 0, mismatches = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto w = random_weights(rng, 4, 4, 0.6);
    for (Index m = 1; m <= 4; ++m) {
      for_each_cluster_system(4, 4, m, [&](const IndexList& bs, const IndexList& users) {
        ++systems;
        const auto by_def = tinf_by_definition(bs, users, m, w);
        const auto system = ClusterSystem::from_labels(bs, users, m);
        std::optional<double> single;
        try {
          single = tinf_value(system, w);
        } catch (const DivisionError&) {
        }
        const bool agree = by_def.has_value() == single.has_value() &&
                           (!by_def || close_rel(*by_def, *single, 1e-12));
        if (!agree) ++mismatches;
      });
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 10.0,
          fmt("%llu systems, %llu mismatches, %.2f s", static_cast<unsigned long long>(systems),
              static_cast<unsigned long long>(mismatches), secs)};
}

Verdict heuristic_vs_optimal() {
  std::mt19937_64 rng(2);
  int cases = 0, violations = 0, exact = 0;
  double gap_sum = 0.0;
  for (int inst = 0; inst < 30; ++inst) {
    const auto w = random_weights(rng, 5, 6, 0.5);
    for (Index m = 2; m <= 3; ++m) {
      const double dp = tinf_value(dp_similarity_clustering(w, m), w);
      const auto opt = brute_force_optimal(w, m);
      ++cases;
      if (dp < opt.best_tinf && !close_rel(dp, opt.best_tinf, 1e-12)) ++violations;
      if (close_rel(dp, opt.best_tinf, 1e-12)) ++exact;
      gap_sum += dp - opt.best_tinf;
    }
  }
  const double mean_gap = gap_sum / cases;
  return {violations == 0 && std::isfinite(mean_gap),
          fmt("%d cases, dp below optimum %d, mean gap %.4f, exact optimum %.0f%%", cases,
              violations, mean_gap, 100.0 * exact / cases)};
}

Verdict always_valid() {
  const auto start = Clock::now();
  int runs = 0, invalid = 0, excluded = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto inst = generate(default_config(50, 200, derive_seed(3, 0, s)));
    if (!inst.weights.isolated_users().empty()) {
      ++excluded;
      continue;
    }
    for (Index m = 1; m <= 20; ++m) {
      ++runs;
      if (!validate_if_cluster(dp_similarity_clustering(inst.weights, m), inst.weights).valid) {
        ++invalid;
      }
    }
  }
  const double secs = seconds_since(start);
  return {invalid == 0 && secs < 60.0,
          fmt("%d runs, %d invalid, %d samples excluded (isolated users), %.1f s", runs, invalid,
              excluded, secs)};
}

Verdict heap_naive() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4);
  int differ = 0;
  for (int k = 0; k < 200; ++k) {
    const Index b = 2 + static_cast<Index>(rng() % 39);
    const Index u = 1 + static_cast<Index>(rng() % 60);
    const Index m = 1 + static_cast<Index>(rng() % b);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MatrixXd raw(b, u);
    // Every fourth instance uses small integers so that exact rho ties occur.
    for (Index i = 0; i < b; ++i) {
      for (Index j = 0; j < u; ++j) {
        raw(i, j) = k % 4 == 0 ? static_cast<double>(rng() % 3) : (unit(rng) < 0.4 ? unit(rng) : 0.0);
      }
    }
    const WeightMatrixd w(raw);
    if (!(dph_cluster(w, m) == dph_cluster_naive(w, m))) ++differ;
  }
  const double secs = seconds_since(start);
  return {differ == 0 && secs < 30.0, fmt("200 instances, %d differ, %.2f s", differ, secs)};
}

// Shared bench run for the distributional criteria at b=50, u=200.
const BenchResult& default_bench() {
  static const BenchResult result = [] {
    BenchPlan plan;
    plan.bs_counts = {50};
    plan.user_counts = {200};
    plan.cluster_counts = {1, 2, 3, 4, 20};
    plan.samples = 100;
    plan.base_seed = 6;
    return run_bench(plan);
  }();
  return result;
}

const CellSummary* find_summary(Index m, Algorithm alg) {
  for (const auto& s : default_bench().summaries) {
    if (s.clusters == m && s.algorithm == alg) return &s;
  }
  return nullptr;
}

Verdict single_cluster() {
  int runs = 0, nonzero = 0;
  for (const auto& r : default_bench().records) {
    if (r.clusters != 1) continue;
    ++runs;
    if (!r.tinf || *r.tinf != 0.0) ++nonzero;
  }
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const auto w = random_weights(rng, 4, 5, 0.5);
    const auto opt = brute_force_optimal(w, 1);
    runs += 3;
    if (!opt.best_system || opt.best_tinf != 0.0) ++nonzero;
    if (tinf_value(dp_similarity_clustering(w, 1), w) != 0.0) ++nonzero;
    const auto sp = spectral_cluster(w, 1, static_cast<std::uint64_t>(k));
    if (sp.failed() || tinf_value(*sp.system, w) != 0.0) ++nonzero;
  }
  return {runs > 0 && nonzero == 0,
          fmt("%d runs over dp, spectral and oracle, %d with nonzero tinf", runs, nonzero)};
}

Verdict spectral_failures() {
  const auto* at20 = find_summary(20, Algorithm::kSpectral);
  if (!at20) return {false, "missing M=20 summary"};
  bool small_ok = true;
  std::string small;
  for (Index m = 1; m <= 4; ++m) {
    const auto* s = find_summary(m, Algorithm::kSpectral);
    small_ok = small_ok && s && s->failures == 0;
    small += fmt(" M=%d:%.2f", static_cast<int>(m), s ? s->failure_ratio : -1.0);
  }
  const double r = at20->failure_ratio;
  return {r >= 0.2 && r <= 0.6 && small_ok,
          fmt("failure ratio M=20: %.2f over %d samples;%s", r, static_cast<int>(at20->samples),
              small.c_str())};
}

Verdict quality() {
  const auto* dp = find_summary(20, Algorithm::kDp);
  if (!dp || dp->head_to_heads == 0) return {false, "no head-to-heads at M=20"};
  const double share = static_cast<double>(dp->strict_wins) / dp->head_to_heads;
  const auto* sp = find_summary(20, Algorithm::kSpectral);
  return {share >= 0.75,
          fmt("dp strict wins %d of %d (%.2f); best-ratio %.2f; mean tinf dp %.2f vs spectral %.2f",
              static_cast<int>(dp->strict_wins), static_cast<int>(dp->head_to_heads), share,
              dp->best_ratio.value_or(-1.0), dp->mean_tinf, sp ? sp->mean_tinf : -1.0)};
}

Verdict runtime_ordering() {
  BenchPlan plan;
  plan.bs_counts = {200};
  plan.user_counts = {500};
  plan.cluster_counts = {40};
  plan.samples = 5;
  plan.base_seed = 8;
  plan.threads = 1;
  plan.timing_repeats = 3;
  const auto result = run_bench(plan);
  std::vector<double> dp, sp;
  for (const auto& r : result.records) (r.algorithm == Algorithm::kDp ? dp : sp).push_back(r.wall_ms);
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double a = median(dp), b = median(sp);
  return {a * 3.0 <= b, fmt("median dp %.2f ms, spectral %.2f ms, ratio %.1f", a, b, b / a)};
}

Verdict scale_invariance() {
  std::mt19937_64 rng(9);
  int checks = 0, broken = 0;
  for (int k = 0; k < 20; ++k) {
    const Index b = 3 + static_cast<Index>(rng() % 20);
    const Index u = 5 + static_cast<Index>(rng() % 40);
    const Index m = 1 + static_cast<Index>(rng() % b);
    const auto w = random_weights(rng, b, u, 0.5);
    const auto trace = dph_cluster(w, m);
    const auto system = assign_users(trace.partition, w).system;
    const double base = tinf_value(system, w);
    for (double c : {0.5, 3.0, 10.0}) {
      const auto cw = w.scaled(c);
      const auto scaled_trace = dph_cluster(cw, m);
      bool same = scaled_trace.partition == trace.partition &&
                  scaled_trace.merges.size() == trace.merges.size();
      for (std::size_t r = 0; same && r < trace.merges.size(); ++r) {
        const auto& x = trace.merges[r];
        const auto& y = scaled_trace.merges[r];
        same = x.slot_a == y.slot_a && x.slot_b == y.slot_b && close_rel(x.rho, y.rho, 1e-12);
      }
      same = same && close_rel(tinf_value(system, cw), base, 1e-12);
      ++checks;
      if (!same) ++broken;
    }
  }
  return {broken == 0, fmt("%d scaled instances, %d not invariant", checks, broken)};
}

Verdict incremental() {
  const auto inst = generate(default_config(50, 200, 10));
  const double threshold = 0.2;
  DynamicClustering d(inst.weights, 20, threshold);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int mismatches = 0, trigger_errors = 0, reclusters = 0;
  double worst = 0.0;
  for (int step = 0; step < 1000; ++step) {
    Event e;
    const auto kind = rng() % 3;
    if (kind == 0 || d.user_count() < 50) {
      // New user near a random BS, in path-loss units.
      VectorXd col = VectorXd::Zero(50);
      const Index near = static_cast<Index>(rng() % 50);
      col(near) = 1e-4 * (1.0 + unit(rng));
      for (int extra = 0; extra < 3; ++extra) col(static_cast<Index>(rng() % 50)) += 2.5e-5 * unit(rng);
      e = JoinEvent{col};
    } else if (kind == 1) {
      e = LeaveEvent{static_cast<Index>(rng() % d.user_count())};
    } else {
      e = UpdateEvent{static_cast<Index>(rng() % 50), static_cast<Index>(rng() % d.user_count()),
                      unit(rng) < 0.2 ? 0.0 : 1e-4 * unit(rng)};
    }
    const BsPartition before = d.bs_partition();
    const double baseline = d.baseline_tinf();
    const auto r = d.apply(e);
    const WeightMatrixd w(d.weights());

    // State the local rules lead to, rebuilt from scratch.
    const double local = tinf_or_inf(assign_users(before, w).system, w);
    const bool should_trigger = local > (1.0 + threshold) * baseline;
    const bool triggered = r.action == Action::kGlobalRecluster;
    if (triggered) ++reclusters;
    if (should_trigger != triggered) ++trigger_errors;

    const double scratch = tinf_or_inf(d.system(), w);
    if (!close_rel(r.tinf, scratch, 1e-9)) ++mismatches;
    if (std::isfinite(scratch)) {
      worst = std::max(worst, std::abs(r.tinf - scratch) / std::max(1.0, std::abs(scratch)));
    }
  }
  return {mismatches == 0 && trigger_errors == 0,
          fmt("1000 events, %d tinf mismatches (worst rel %.1e), %d re-clusterings, %d trigger "
              "disagreements",
              mismatches, worst, reclusters, trigger_errors)};
}

Verdict pruning() {
  int runs = 0, increased = 0, removed = 0;
  std::mt19937_64 rng(11);
  for (std::uint64_t s = 0; s < 100; ++s) {
    GeneratorConfig c = default_config(20, 60, derive_seed(11, 0, s));
    c.side = 500;
    const auto inst = generate(c);
    if (!inst.weights.isolated_users().empty()) continue;
    const Index m = 1 + static_cast<Index>(rng() % 10);
    const auto system = dp_similarity_clustering(inst.weights, m);
    const auto pruned = prune_bs(system, inst.weights);
    ++runs;
    removed += static_cast<int>(pruned.bs().switched_off().size());
    if (tinf_value(pruned, inst.weights) > tinf_value(system, inst.weights)) ++increased;
  }
  return {runs >= 50 && increased == 0,
          fmt("%d clustered instances, %d increased, %d BSs switched off", runs, increased,
              removed)};
}

}  // namespace

int main() {
  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "heuristic vs optimal", heuristic_vs_optimal);
  report(3, "always-valid output", always_valid);
  report(4, "heap/naive equivalence", heap_naive);
  report(5, "single-cluster identity", single_cluster);
  report(6, "spectral failure ratio", spectral_failures);
  report(7, "quality comparison", quality);
  report(8, "runtime ordering", runtime_ordering);
  report(9, "scale invariance", scale_invariance);
  report(10, "incremental consistency", incremental);
  report(11, "pruning monotonicity", pruning);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
