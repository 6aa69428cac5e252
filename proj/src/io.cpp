#include "dpclust/io.hpp"

#include <fstream>
#include <limits>

namespace dpclust::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw DataError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

Index as_index(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<Index>();
}

double as_number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

IndexList as_index_list(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  IndexList out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(as_index(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

std::vector<IndexList> as_classes(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of arrays");
  std::vector<IndexList> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(as_index_list(j[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Points as_points(const Json& j, Index expected, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of [x, y] pairs");
  if (static_cast<Index>(j.size()) != expected) {
    fail(field, "expected " + std::to_string(expected) + " points, got " + std::to_string(j.size()));
  }
  Points p(expected, 2);
  for (Index k = 0; k < expected; ++k) {
    const std::string f = field + "[" + std::to_string(k) + "]";
    const Json& pt = j[k];
    if (!pt.is_array() || pt.size() != 2) fail(f, "expected [x, y]");
    p(k, 0) = as_number(pt[0], f + "[0]");
    p(k, 1) = as_number(pt[1], f + "[1]");
  }
  return p;
}

Json points_json(const Points& p) {
  Json out = Json::array();
  for (Index k = 0; k < p.rows(); ++k) out.push_back({p(k, 0), p(k, 1)});
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const GeneratorConfig& c) {
  return {{"b", c.bs_count}, {"u", c.user_count}, {"side", c.side},      {"dist_min", c.dist_min},
          {"dist_max", c.dist_max}, {"alpha", c.alpha}, {"seed", c.seed}};
}

GeneratorConfig generator_from_json(const Json& j) {
  if (!j.is_object()) fail("generator", "expected an object");
  GeneratorConfig c;
  auto number = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = as_number(j[key], std::string("generator.") + key);
  };
  if (j.contains("b")) c.bs_count = as_index(j["b"], "generator.b");
  if (j.contains("u")) c.user_count = as_index(j["u"], "generator.u");
  number("side", c.side);
  number("dist_min", c.dist_min);
  number("dist_max", c.dist_max);
  number("alpha", c.alpha);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("generator.seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  try {
    c.validate();
  } catch (const ParameterError& e) {
    fail("generator", e.what());
  }
  return c;
}

Json to_json(const Instance& inst, bool matrix_only) {
  Json out;
  out["b"] = inst.weights.bs_count();
  out["u"] = inst.weights.user_count();
  if (!matrix_only) {
    if (inst.bs) out["bs"] = points_json(*inst.bs);
    if (inst.users) out["users"] = points_json(*inst.users);
  }
  Json rows = Json::array();
  for (Index i = 0; i < inst.weights.bs_count(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < inst.weights.user_count(); ++j) row.push_back(inst.weights(i, j));
    rows.push_back(std::move(row));
  }
  out["weights"] = std::move(rows);
  if (inst.generator) out["generator"] = to_json(*inst.generator);
  return out;
}

Instance instance_from_json(const Json& j) {
  const Index b = as_index(require(j, "b", ""), "b");
  const Index u = as_index(require(j, "u", ""), "u");
  if (b < 1 || u < 1) fail(b < 1 ? "b" : "u", "must be at least 1");
  Instance inst;
  if (j.contains("generator")) inst.generator = generator_from_json(j["generator"]);
  if (j.contains("bs")) inst.bs = as_points(j["bs"], b, "bs");
  if (j.contains("users")) inst.users = as_points(j["users"], u, "users");

  if (j.contains("weights")) {
    const Json& rows = j["weights"];
    if (!rows.is_array() || static_cast<Index>(rows.size()) != b) {
      fail("weights", "expected " + std::to_string(b) + " rows");
    }
    MatrixXd w(b, u);
    for (Index i = 0; i < b; ++i) {
      const std::string f = "weights[" + std::to_string(i) + "]";
      if (!rows[i].is_array() || static_cast<Index>(rows[i].size()) != u) {
        fail(f, "expected " + std::to_string(u) + " entries");
      }
      for (Index k = 0; k < u; ++k) {
        const double v = as_number(rows[i][k], f + "[" + std::to_string(k) + "]");
        if (!(v >= 0.0) || !std::isfinite(v)) {
          fail(f + "[" + std::to_string(k) + "]", "weight must be finite and nonnegative");
        }
        w(i, k) = v;
      }
    }
    inst.weights = WeightMatrixd(std::move(w));
  } else if (inst.bs && inst.users && inst.generator) {
    inst.weights = weights_from_positions(*inst.bs, *inst.users, *inst.generator);
  } else {
    fail("weights", "missing, and coordinates plus generator are not all present");
  }
  return inst;
}

Json to_json(const ClusterSystem& system) {
  Json out;
  out["bs_classes"] = system.bs().classes();
  out["user_classes"] = system.user_classes();
  if (!system.bs().switched_off().empty()) out["switched_off"] = system.bs().switched_off();
  return out;
}

ClusterSystem system_from_json(const Json& j, Index bs_count, Index user_count) {
  auto bs = as_classes(require(j, "bs_classes", ""), "bs_classes");
  auto users = as_classes(require(j, "user_classes", ""), "user_classes");
  IndexList off;
  if (j.contains("switched_off")) off = as_index_list(j["switched_off"], "switched_off");
  try {
    return ClusterSystem(BsPartition(std::move(bs), bs_count, std::move(off)), std::move(users),
                         user_count);
  } catch (const StructuralError& e) {
    throw DataError(std::string("cluster system: ") + e.what());
  }
}

Json to_json(const TinfBreakdown<double>& t) {
  Json classes = Json::array();
  for (const auto& c : t.per_class) {
    classes.push_back({{"weight", c.weight},
                       {"cut", c.cut},
                       {"ratio", optional_number(c.ratio)},
                       {"skipped", !c.ratio.has_value()}});
  }
  return {{"total", t.total}, {"classes", std::move(classes)}};
}

Json to_json(const MergeTrace<double>& trace) {
  Json merges = Json::array();
  for (const auto& m : trace.merges) {
    merges.push_back({{"round", m.round}, {"merged", {m.slot_a, m.slot_b}}, {"rho", m.rho}});
  }
  return {{"merges", std::move(merges)}, {"bs_classes", trace.partition.classes()}};
}

Json to_json(const OracleResult<double>& r) {
  Json out;
  out["systems_enumerated"] = r.systems_enumerated;
  out["valid_systems"] = r.valid_systems;
  if (r.best_system) {
    out["best_system"] = to_json(*r.best_system);
    out["best_tinf"] = r.best_tinf;
  } else {
    out["best_system"] = nullptr;
    out["best_tinf"] = nullptr;
  }
  return out;
}

Json to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    if (v.kind == Violation::Kind::kEmptyBsClass) {
      violations.push_back({{"kind", "empty-bs-class"}, {"class", v.cls}});
    } else {
      violations.push_back({{"kind", "unserved-user"}, {"class", v.cls}, {"user", v.user}});
    }
  }
  return {{"valid", report.valid}, {"violations", std::move(violations)}};
}

Json to_json(const SpectralOutcome& o) {
  Json out;
  if (o.failed()) {
    out["failure"] = {{"reason", to_string(*o.failure)}, {"detail", o.detail}};
  } else {
    out["system"] = to_json(*o.system);
    out["validation"] = to_json(o.validation);
    if (!o.detail.empty()) out["detail"] = o.detail;
  }
  return out;
}

Event event_from_json(const Json& j) {
  const Json& op = require(j, "op", "");
  if (!op.is_string()) fail("op", "expected a string");
  const auto name = op.get<std::string>();
  if (name == "join") {
    const Json& ws = require(j, "weights", "");
    if (!ws.is_array()) fail("weights", "expected an array");
    JoinEvent e;
    e.weights.resize(static_cast<Index>(ws.size()));
    for (std::size_t k = 0; k < ws.size(); ++k) {
      e.weights(static_cast<Index>(k)) = as_number(ws[k], "weights[" + std::to_string(k) + "]");
    }
    return e;
  }
  if (name == "leave") return LeaveEvent{as_index(require(j, "j", ""), "j")};
  if (name == "update") {
    return UpdateEvent{as_index(require(j, "i", ""), "i"), as_index(require(j, "j", ""), "j"),
                       as_number(require(j, "w", ""), "w")};
  }
  fail("op", "unknown operation '" + name + "'");
}

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.push_back(event_from_json(Json::parse(line)));
    } catch (const Json::parse_error& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return events;
}

Json read_json(std::istream& in, const std::string& source) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(source + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_json(in, path);
}

}  // namespace dpclust::io
