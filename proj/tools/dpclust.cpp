// Command-line front end: instance generation, clustering, evaluation,
// brute-force optimum, dynamic replay and the benchmark harness.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "dpclust/assignment.hpp"
#include "dpclust/bench.hpp"
#include "dpclust/dynamic.hpp"
#include "dpclust/io.hpp"
#include "dpclust/oracle.hpp"
#include "dpclust/spectral.hpp"

namespace {

using dpclust::Index;
using dpclust::io::Json;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw dpclust::DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

dpclust::Instance load_instance(const std::string& path) {
  return dpclust::io::instance_from_json(dpclust::io::read_json_file(path));
}

void write_json(const Json& j, const std::string& path) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

struct GenArgs {
  dpclust::GeneratorConfig config;
  bool matrix_only = false;
  std::string output;
};

struct ClusterArgs {
  std::string instance;
  std::string alg = "dp";
  Index clusters = 1;
  std::uint64_t seed = 0;
  bool prune = false;
  std::string trace;
  std::string output;
};

struct EvalArgs {
  std::string instance;
  std::string system;
  std::string output;
};

struct OracleArgs {
  std::string instance;
  Index clusters = 1;
  double limit = dpclust::kOracleLimit;
  std::string output;
};

struct ReplayArgs {
  std::string instance;
  std::string events;
  Index clusters = 1;
  double threshold = 0.2;
  std::string output;
};

struct BenchArgs {
  dpclust::BenchPlan plan;
  std::vector<std::string> algs{"dp", "spectral"};
  Index m_min = 1;
  Index m_max = 20;
  std::string records;
  std::string summary;
};

int run_gen(const GenArgs& a) {
  write_json(dpclust::io::to_json(dpclust::generate(a.config), a.matrix_only), a.output);
  return 0;
}

int run_cluster(const ClusterArgs& a) {
  const auto inst = load_instance(a.instance);
  const auto& w = inst.weights;
  dpclust::ClusterSystem system;
  Json extra;
  if (a.alg == "dp") {
    const auto trace = dpclust::dph_cluster(w, a.clusters);
    if (!a.trace.empty()) write_json(dpclust::io::to_json(trace), a.trace);
    const auto assigned = dpclust::assign_users(trace.partition, w);
    system = assigned.system;
    if (!assigned.isolated_users.empty()) {
      extra["warnings"] = {{"isolated_users", assigned.isolated_users}};
    }
  } else if (a.alg == "spectral") {
    const auto outcome = dpclust::spectral_cluster(w, a.clusters, a.seed);
    if (outcome.failed()) {
      write_json(dpclust::io::to_json(outcome), a.output);
      return 0;
    }
    system = *outcome.system;
  } else {
    throw CLI::ValidationError("--alg", "expected dp or spectral");
  }
  if (a.prune) system = dpclust::prune_bs(system, w);
  Json out = dpclust::io::to_json(system);
  out["validation"] = dpclust::io::to_json(dpclust::validate_if_cluster(system, w));
  for (auto& [k, v] : extra.items()) out[k] = v;
  write_json(out, a.output);
  return 0;
}

int run_eval(const EvalArgs& a) {
  const auto inst = load_instance(a.instance);
  const auto system = dpclust::io::system_from_json(dpclust::io::read_json_file(a.system),
                                                    inst.weights.bs_count(),
                                                    inst.weights.user_count());
  Json out = dpclust::io::to_json(dpclust::tinf(system, inst.weights));
  out["validation"] = dpclust::io::to_json(dpclust::validate_if_cluster(system, inst.weights));
  write_json(out, a.output);
  return 0;
}

int run_oracle(const OracleArgs& a) {
  const auto inst = load_instance(a.instance);
  write_json(dpclust::io::to_json(dpclust::brute_force_optimal(inst.weights, a.clusters, a.limit)),
             a.output);
  return 0;
}

int run_replay(const ReplayArgs& a) {
  const auto inst = load_instance(a.instance);
  std::ifstream in(a.events);
  if (!in) throw dpclust::DataError("cannot open '" + a.events + "'");
  const auto events = dpclust::io::read_events(in);
  dpclust::DynamicClustering state(inst.weights, a.clusters, a.threshold);
  Output out(a.output);
  auto& os = out.stream();
  os << std::setprecision(17);
  os << "event,op,action,tinf,baseline_tinf,valid,users\n";
  os << 0 << ",init," << dpclust::to_string(dpclust::Action::kGlobalRecluster) << ','
     << state.tinf() << ',' << state.baseline_tinf() << ',' << (state.valid() ? 1 : 0) << ','
     << state.user_count() << '\n';
  for (std::size_t k = 0; k < events.size(); ++k) {
    const char* op = std::visit(
        [](const auto& e) -> const char* {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, dpclust::JoinEvent>) return "join";
          if constexpr (std::is_same_v<T, dpclust::LeaveEvent>) return "leave";
          return "update";
        },
        events[k]);
    dpclust::EventOutcome r;
    try {
      r = state.apply(events[k]);
    } catch (const dpclust::StructuralError& e) {
      throw dpclust::DataError("event " + std::to_string(k + 1) + ": " + e.what());
    }
    os << k + 1 << ',' << op << ',' << dpclust::to_string(r.action) << ',' << r.tinf << ','
       << state.baseline_tinf() << ',' << (r.valid ? 1 : 0) << ',' << state.user_count() << '\n';
  }
  return 0;
}

int run_bench(BenchArgs& a) {
  a.plan.algorithms.clear();
  for (const auto& name : a.algs) a.plan.algorithms.push_back(dpclust::algorithm_from_string(name));
  if (a.m_min < 1 || a.m_max < a.m_min) throw dpclust::ParameterError("need 1 <= m-min <= m-max");
  a.plan.cluster_counts.clear();
  for (Index m = a.m_min; m <= a.m_max; ++m) a.plan.cluster_counts.push_back(m);
  const auto result = dpclust::run_bench(a.plan);
  if (!a.records.empty()) {
    Output out(a.records);
    dpclust::write_records_csv(out.stream(), result.records);
  }
  Output out(a.summary);
  dpclust::write_summary_csv(out.stream(), result.summaries);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference-minimizing clustering of base-stations and users"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--b", gen.config.bs_count, "Number of base-stations")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--u", gen.config.user_count, "Number of users")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--side", gen.config.side, "Side of the square area");
  gen_cmd->add_option("--dist-min", gen.config.dist_min, "Distance below which the weight is clamped");
  gen_cmd->add_option("--dist-max", gen.config.dist_max, "Distance beyond which there is no edge");
  gen_cmd->add_option("--alpha", gen.config.alpha, "Path-loss exponent");
  gen_cmd->add_option("--seed", gen.config.seed, "RNG seed");
  gen_cmd->add_flag("--matrix-only", gen.matrix_only, "Omit coordinates");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  ClusterArgs cl;
  auto* cl_cmd = app.add_subcommand("cluster", "Cluster an instance");
  cl_cmd->add_option("instance", cl.instance, "Instance JSON")->required();
  cl_cmd->add_option("--alg", cl.alg, "dp or spectral")->check(CLI::IsMember({"dp", "spectral"}));
  cl_cmd->add_option("--m", cl.clusters, "Number of clusters")->required();
  cl_cmd->add_option("--seed", cl.seed, "Seed for the spectral k-means");
  cl_cmd->add_flag("--prune", cl.prune, "Switch off BSs that only add interference");
  cl_cmd->add_option("--emit-trace", cl.trace, "Write the dp merge trace to this file");
  cl_cmd->add_option("-o,--output", cl.output, "Output file (default stdout)");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Total interference of a cluster system");
  ev_cmd->add_option("instance", ev.instance, "Instance JSON")->required();
  ev_cmd->add_option("system", ev.system, "Cluster system JSON")->required();
  ev_cmd->add_option("-o,--output", ev.output, "Output file (default stdout)");

  OracleArgs orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Exhaustive optimum for tiny instances");
  orc_cmd->add_option("instance", orc.instance, "Instance JSON")->required();
  orc_cmd->add_option("--m", orc.clusters, "Number of clusters")->required();
  orc_cmd->add_option("--limit", orc.limit, "Refuse if more systems than this");
  orc_cmd->add_option("-o,--output", orc.output, "Output file (default stdout)");

  ReplayArgs rp;
  auto* rp_cmd = app.add_subcommand("replay", "Replay a JSON-lines event stream");
  rp_cmd->add_option("instance", rp.instance, "Initial instance JSON")->required();
  rp_cmd->add_option("events", rp.events, "Event stream (JSON lines)")->required();
  rp_cmd->add_option("--m", rp.clusters, "Number of clusters")->required();
  rp_cmd->add_option("--threshold", rp.threshold, "Relative tinf growth that triggers re-clustering");
  rp_cmd->add_option("-o,--output", rp.output, "Timeline CSV (default stdout)");

  BenchArgs bn;
  bn.plan.threads = dpclust::default_parallelism();
  auto* bn_cmd = app.add_subcommand("bench", "Run the dp vs spectral benchmark grid");
  bn_cmd->add_option("--b", bn.plan.bs_counts, "Base-station counts");
  bn_cmd->add_option("--u", bn.plan.user_counts, "User counts");
  bn_cmd->add_option("--m-min", bn.m_min, "Smallest cluster count");
  bn_cmd->add_option("--m-max", bn.m_max, "Largest cluster count");
  bn_cmd->add_option("--samples", bn.plan.samples, "Samples per cell");
  bn_cmd->add_option("--alg", bn.algs, "Algorithms")->check(CLI::IsMember({"dp", "spectral"}));
  bn_cmd->add_option("--seed", bn.plan.base_seed, "Base seed");
  bn_cmd->add_option("--threads", bn.plan.threads, "Worker threads (default $DPCLUST_THREADS)");
  bn_cmd->add_option("--repeats", bn.plan.timing_repeats, "Timing repeats per sample");
  bn_cmd->add_option("--alpha", bn.plan.geometry.alpha, "Path-loss exponent");
  bn_cmd->add_option("--records", bn.records, "Per-sample CSV output");
  bn_cmd->add_option("-o,--summary", bn.summary, "Summary CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*cl_cmd) return run_cluster(cl);
    if (*ev_cmd) return run_eval(ev);
    if (*orc_cmd) return run_oracle(orc);
    if (*rp_cmd) return run_replay(rp);
    if (*bn_cmd) return run_bench(bn);
  } catch (const dpclust::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
