#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emx/errors.hpp"
#include "emx/harness.hpp"
#include "emx/tower.hpp"

namespace emx::harness {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError("field " + path + ": " + message);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(path + "/" + key, "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "/" + key, "missing");
  return *it;
}

std::uint64_t as_uint(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    fail(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

Rational as_rational(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  const std::string text = as_string(v, path);
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

PointId as_point(const json& v, const std::string& path, const Domain& domain) {
  if (v.is_string()) {
    Rational q = as_rational(v, path);
    std::optional<PointId> p;
    try {
      p = domain.find(Payload{q});
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
    if (!p) fail(path, "'" + v.get<std::string>() + "' is not a point of the " + domain.describe() + " domain");
    return *p;
  }
  const PointId p = make_point(as_uint(v, path));
  if (!domain.contains(p)) fail(path, "point " + std::to_string(to_index(p)) + " is outside " + domain.describe());
  return p;
}

PointSet as_points(const json& v, const std::string& path, const Domain& domain) {
  if (v.is_array()) {
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < v.size(); ++i) ids.push_back(as_point(v[i], path + "/" + std::to_string(i), domain));
    PointSet out = PointSet::from(ids);
    if (out.size() != ids.size()) fail(path, "duplicate points");
    return out;
  }
  if (v.is_object()) {
    check_keys(v, path, {"range"});
    const json& r = require(v, path, "range");
    if (!r.is_array() || r.size() != 2) fail(path + "/range", "expected [first, last]");
    const PointId first = as_point(r[0], path + "/range/0", domain);
    const PointId last = as_point(r[1], path + "/range/1", domain);
    if (last < first) fail(path + "/range", "last precedes first");
    return PointSet::range(to_index(first), to_index(last));
  }
  fail(path, "expected an array of points or {\"range\": [first, last]}");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // the library message already carries line and column
    throw ConfigError(e.what());
  }
  check_keys(root, "", {"schema", "domain", "tower", "scheme", "learner", "distribution", "evaluation", "verify",
                        "descend", "compress", "output"});
  const std::string schema = as_string(require(root, "", "schema"), "/schema");
  if (schema != kSchemaTag) fail("/schema", "unsupported schema '" + schema + "', expected " + std::string(kSchemaTag));

  ExperimentConfig cfg;

  const json& dom = require(root, "", "domain");
  check_keys(dom, "/domain", {"kind", "size", "max_enumeration"});
  const std::string kind = as_string(require(dom, "/domain", "kind"), "/domain/kind");
  if (dom.contains("max_enumeration")) cfg.max_enumeration = as_uint(dom["max_enumeration"], "/domain/max_enumeration");
  if (kind == "finite") {
    const std::uint64_t size = as_uint(require(dom, "/domain", "size"), "/domain/size");
    if (size == 0) fail("/domain/size", "must be positive");
    cfg.domain = Domain::finite(size);
  } else if (kind == "naturals") {
    cfg.domain = Domain::naturals();
  } else if (kind == "calkin-wilf") {
    cfg.domain = Domain::calkin_wilf();
  } else {
    fail("/domain/kind", "unknown domain kind '" + kind + "'");
  }
  if (!cfg.domain.is_finite() && dom.contains("size")) fail("/domain/size", "only finite domains have a size");

  if (root.contains("tower")) {
    const json& t = root["tower"];
    check_keys(t, "/tower", {"depth", "seed"});
    if (t.contains("depth")) cfg.tower.depth = as_uint(t["depth"], "/tower/depth");
    if (t.contains("seed")) cfg.tower.seed = as_uint(t["seed"], "/tower/seed");
  }
  if (!cfg.domain.is_finite() && cfg.tower.depth != 0) {
    fail("/tower/depth", "enumerated domains only carry the depth-0 enumeration tower");
  }

  const json& s = require(root, "", "scheme");
  check_keys(s, "/scheme", {"kind", "budget", "m"});
  cfg.scheme.kind = as_string(require(s, "/scheme", "kind"), "/scheme/kind");
  if (s.contains("budget")) cfg.scheme.budget = as_uint(s["budget"], "/scheme/budget");
  std::size_t arity = 0;
  if (cfg.scheme.kind == "enumeration") {
    if (cfg.tower.depth != 0) fail("/scheme/kind", "the enumeration scheme needs tower depth 0");
    arity = 1;
  } else if (cfg.scheme.kind == "tower") {
    arity = cfg.tower.depth + 1;
  } else if (cfg.scheme.kind == "identity") {
    if (s.contains("m")) cfg.scheme.identity_arity = as_uint(s["m"], "/scheme/m");
    arity = cfg.scheme.identity_arity;
  } else {
    fail("/scheme/kind", "unknown scheme kind '" + cfg.scheme.kind + "'");
  }
  if (s.contains("m") && cfg.scheme.kind != "identity") fail("/scheme/m", "only identity schemes take an arity");

  if (root.contains("learner")) {
    const json& l = root["learner"];
    check_keys(l, "/learner", {"d", "cap"});
    if (l.contains("d") && as_uint(l["d"], "/learner/d") != arity) {
      fail("/learner/d", "kernel size must equal the scheme arity " + std::to_string(arity));
    }
    if (l.contains("cap")) cfg.cap = as_uint(l["cap"], "/learner/cap");
  }

  if (root.contains("distribution")) {
    const json& d = root["distribution"];
    check_keys(d, "/distribution", {"support", "masses"});
    const PointSet support = as_points(require(d, "/distribution", "support"), "/distribution/support", cfg.domain);
    if (support.empty()) fail("/distribution/support", "must not be empty");
    try {
      if (d.contains("masses")) {
        const json& masses = d["masses"];
        if (!masses.is_array() || masses.size() != support.size()) {
          fail("/distribution/masses", "expected one mass per support point");
        }
        // masses follow the order the support was written in
        const json& sup = d["support"];
        std::vector<FiniteSupportDistribution::Entry> entries;
        for (std::size_t i = 0; i < support.size(); ++i) {
          const PointId p = sup.is_array() ? as_point(sup[i], "/distribution/support/" + std::to_string(i), cfg.domain)
                                           : support[i];
          entries.push_back({p, as_rational(masses[i], "/distribution/masses/" + std::to_string(i))});
        }
        cfg.distribution.emplace(std::move(entries));
      } else {
        cfg.distribution = FiniteSupportDistribution::uniform(support);
      }
    } catch (const PreconditionError& e) {
      fail("/distribution", e.what());
    }
  }

  if (root.contains("evaluation")) {
    const json& e = root["evaluation"];
    check_keys(e, "/evaluation", {"m", "epsilon", "trials", "seed", "confidence", "per_trial"});
    EvaluationSpec spec;
    const json& ms = require(e, "/evaluation", "m");
    if (ms.is_array()) {
      for (std::size_t i = 0; i < ms.size(); ++i) spec.m_values.push_back(as_uint(ms[i], "/evaluation/m/" + std::to_string(i)));
    } else {
      spec.m_values.push_back(as_uint(ms, "/evaluation/m"));
    }
    const json& eps = require(e, "/evaluation", "epsilon");
    if (eps.is_array()) {
      for (std::size_t i = 0; i < eps.size(); ++i) {
        spec.epsilons.push_back(as_rational(eps[i], "/evaluation/epsilon/" + std::to_string(i)));
      }
    } else {
      spec.epsilons.push_back(as_rational(eps, "/evaluation/epsilon"));
    }
    if (spec.m_values.empty() || spec.epsilons.empty()) fail("/evaluation", "needs at least one m and one epsilon");
    for (const auto& x : spec.epsilons) {
      if (x < 0 || x > 1) fail("/evaluation/epsilon", "epsilon must lie in [0,1]");
    }
    spec.trials = as_uint(require(e, "/evaluation", "trials"), "/evaluation/trials");
    if (spec.trials == 0) fail("/evaluation/trials", "must be at least 1");
    if (e.contains("seed")) spec.seed = as_uint(e["seed"], "/evaluation/seed");
    if (e.contains("confidence")) {
      spec.confidence = as_rational(e["confidence"], "/evaluation/confidence");
      if (spec.confidence <= 0 || spec.confidence >= 1) fail("/evaluation/confidence", "must lie in (0,1)");
    }
    if (e.contains("per_trial")) {
      if (!e["per_trial"].is_boolean()) fail("/evaluation/per_trial", "expected true or false");
      spec.per_trial = e["per_trial"].get<bool>();
    }
    cfg.evaluation = std::move(spec);
  }

  if (root.contains("verify")) {
    const json& v = root["verify"];
    check_keys(v, "/verify", {"points", "mode", "count", "seed"});
    VerifySpec spec;
    spec.points = as_points(require(v, "/verify", "points"), "/verify/points", cfg.domain);
    const std::string mode = v.contains("mode") ? as_string(v["mode"], "/verify/mode") : "exhaustive";
    if (mode == "random") {
      spec.exhaustive = false;
      spec.count = as_uint(require(v, "/verify", "count"), "/verify/count");
    } else if (mode != "exhaustive") {
      fail("/verify/mode", "expected 'exhaustive' or 'random'");
    }
    if (v.contains("seed")) spec.seed = as_uint(v["seed"], "/verify/seed");
    if (spec.points.size() < arity + 1) fail("/verify/points", "need at least m+1 = " + std::to_string(arity + 1) + " points");
    cfg.verify = std::move(spec);
  }

  if (root.contains("descend")) {
    const json& d = root["descend"];
    check_keys(d, "/descend", {"x", "y", "z_reading", "max_subsets"});
    DescendSpec spec;
    spec.x = as_points(require(d, "/descend", "x"), "/descend/x", cfg.domain);
    spec.y = as_points(require(d, "/descend", "y"), "/descend/y", cfg.domain);
    if (!spec.x.includes(spec.y)) fail("/descend/y", "must be a subset of x");
    if (d.contains("z_reading")) {
      const std::string r = as_string(d["z_reading"], "/descend/z_reading");
      if (r == "superset") {
        spec.reading = ZReading::kSuperset;
      } else if (r == "direct") {
        spec.reading = ZReading::kDirect;
      } else {
        fail("/descend/z_reading", "expected 'superset' or 'direct'");
      }
    }
    if (d.contains("max_subsets")) spec.max_subsets = as_uint(d["max_subsets"], "/descend/max_subsets");
    cfg.descend = std::move(spec);
  }

  if (root.contains("compress")) {
    const json& c = root["compress"];
    check_keys(c, "/compress", {"points"});
    cfg.compress_points = as_points(require(c, "/compress", "points"), "/compress/points", cfg.domain);
  }

  if (root.contains("output")) {
    const json& o = root["output"];
    check_keys(o, "/output", {"dir"});
    if (o.contains("dir")) cfg.output_dir = as_string(o["dir"], "/output/dir");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SchemePtr build_scheme(const ExperimentConfig& cfg) {
  if (cfg.scheme.kind == "identity") return identity_scheme(cfg.scheme.identity_arity);
  std::shared_ptr<const OrderTower> tower = cfg.domain.is_finite() && cfg.scheme.kind == "tower"
                                                ? finite_proxy_tower(cfg.domain, cfg.tower.depth, cfg.tower.seed)
                                                : enumerated_tower(cfg.domain, cfg.max_enumeration);
  if (cfg.scheme.kind == "enumeration") return enumeration_scheme(tower, cfg.scheme.budget);
  return tower_scheme(tower, cfg.scheme.budget);
}

}  // namespace emx::harness
