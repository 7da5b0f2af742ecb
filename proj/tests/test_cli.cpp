#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "emx/evaluation.hpp"
#include "emx/harness.hpp"
#include "support.hpp"

using namespace emx;
using namespace emx::harness;

namespace {

const char* const kEnumeration = R"({
  "schema": "emx-experiment/1",
  "domain": {"kind": "calkin-wilf"},
  "scheme": {"kind": "enumeration"},
  "verify": {"points": {"range": [0, 29]}},
  "compress": {"points": ["1/1", "3/2", "2/5", "4/1"]}
})";

const char* const kTank = R"({
  "schema": "emx-experiment/1",
  "domain": {"kind": "naturals"},
  "scheme": {"kind": "enumeration"},
  "learner": {"d": 1},
  "distribution": {"support": {"range": [1, 20]}},
  "evaluation": {"m": [4, 10], "epsilon": ["1/4", "1/10"], "trials": 500, "seed": 3, "per_trial": true}
})";

const char* const kTower = R"({
  "schema": "emx-experiment/1",
  "domain": {"kind": "finite", "size": 60},
  "tower": {"depth": 2, "seed": 2024},
  "scheme": {"kind": "tower"},
  "verify": {"points": {"range": [0, 59]}, "mode": "random", "count": 200, "seed": 17},
  "compress": {"points": [3, 8, 14, 22, 31, 40, 47, 58]}
})";

struct Result {
  int code;
  std::string out;
  std::string err;
};

using Command = int (*)(const RunOptions&, std::ostream&, std::ostream&);

Result run(Command cmd, const RunOptions& opts) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cmd(opts, out, err);
  return {code, out.str(), err.str()};
}

RunOptions options_for(const testing::TempDir& dir, const std::string& json, const std::string& out = "out") {
  testing::write_file(dir / "config.json", json);
  RunOptions opts;
  opts.config = dir / "config.json";
  opts.out_dir = dir / out;
  return opts;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing reads every section") {
  const ExperimentConfig cfg = parse_config(kTank);
  CHECK_FALSE(cfg.domain.is_finite());
  REQUIRE(cfg.evaluation);
  CHECK(cfg.evaluation->m_values == std::vector<std::size_t>{4, 10});
  CHECK(cfg.evaluation->epsilons.size() == 2);
  CHECK(cfg.evaluation->epsilons[1] == Rational(1, 10));
  CHECK(cfg.evaluation->confidence == Rational(99, 100));
  REQUIRE(cfg.distribution);
  CHECK(cfg.distribution->support() == PointSet::range(1, 20));

  const ExperimentConfig cw = parse_config(kEnumeration);
  REQUIRE(cw.compress_points);
  CHECK(*cw.compress_points == PointSet{0, 4, 11, 14});
  CHECK(build_scheme(cw)->arity() == 1);
  CHECK(build_scheme(parse_config(kTower))->arity() == 3);
}

TEST_CASE("explicit masses follow the written support order") {
  const ExperimentConfig cfg = parse_config(R"({
    "schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 10}, "scheme": {"kind": "enumeration"},
    "distribution": {"support": [7, 2], "masses": ["3/4", "1/4"]}})");
  CHECK(cfg.distribution->mass(make_point(7)) == Rational(3, 4));
  CHECK(cfg.distribution->mass(make_point(2)) == Rational(1, 4));
}

TEST_CASE("config errors name the line or the field") {
  auto message = [](const std::string& json) {
    try {
      parse_config(json);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\n  \"schema\": \"emx-experiment/1\",\n  oops\n}").find("line 3") != std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/2"})").find("/schema") != std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 5},
                   "scheme": {"kind": "nope"}})").find("/scheme/kind") != std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 5},
                   "scheme": {"kind": "enumeration"}, "verfy": {}})").find("/verfy: unknown field") !=
        std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 5},
                   "scheme": {"kind": "enumeration"}, "verify": {"points": [1, 9]}})").find("/verify/points/1") !=
        std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 5},
                   "scheme": {"kind": "enumeration"}, "learner": {"d": 2}})").find("/learner/d") != std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "naturals"}, "scheme": {"kind": "enumeration"},
                   "distribution": {"support": [1, 2], "masses": ["1/2", "1/3"]}})").find("/distribution") !=
        std::string::npos);
  CHECK(message(R"({"schema": "emx-experiment/1", "domain": {"kind": "naturals"}, "tower": {"depth": 1},
                   "scheme": {"kind": "tower"}})").find("/tower/depth") != std::string::npos);
}

TEST_CASE("verify exits 0 on a sound scheme and 1 on a broken one") {
  testing::TempDir dir("verify");
  const Result ok = run(cmd_verify, options_for(dir, kEnumeration));
  CHECK(ok.code == kExitOk);
  const std::string csv = testing::read_file(dir / "out/soundness.csv");
  CHECK(count_lines(csv) == 436);
  CHECK(csv.find(",violation,") == std::string::npos);

  const Result bad = run(cmd_verify, options_for(dir, R"({
    "schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 8},
    "scheme": {"kind": "identity", "m": 1}, "verify": {"points": {"range": [0, 7]}}})"));
  CHECK(bad.code == kExitFailure);
  CHECK(testing::read_file(dir / "out/soundness.csv").find("0 1,violation,missing 1") != std::string::npos);
}

TEST_CASE("malformed or missing configs exit 2") {
  testing::TempDir dir("usage");
  CHECK(run(cmd_verify, options_for(dir, "{ not json")).code == kExitUsage);
  RunOptions missing;
  missing.config = dir / "absent.json";
  const Result r = run(cmd_verify, missing);
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("absent.json") != std::string::npos);
  CHECK(run(cmd_evaluate, options_for(dir, kEnumeration)).code == kExitUsage);  // no evaluation section
  RunOptions zero_workers = options_for(dir, kEnumeration);
  zero_workers.workers = 0;
  CHECK(run(cmd_verify, zero_workers).code == kExitUsage);
}

TEST_CASE("evaluate writes summary, text and per-trial files") {
  testing::TempDir dir("eval");
  const Result r = run(cmd_evaluate, options_for(dir, kTank));
  CHECK(r.code == kExitOk);
  const std::string csv = testing::read_file(dir / "out/eval_summary.csv");
  CHECK(count_lines(csv) == 5);
  CHECK(csv.rfind(eval_summary_header() + "\n", 0) == 0);
  CHECK(csv.find("\n10,1/4,500,500,") != std::string::npos);
  CHECK(testing::read_file(dir / "out/eval_summary.txt").rfind("# failure iff expectation <= 1 - epsilon", 0) == 0);
  CHECK(count_lines(testing::read_file(dir / "out/eval_trials.csv")) == 1 + 4 * 500);
}

TEST_CASE("evaluate with one trial or an exhausted cap still exits 0") {
  testing::TempDir dir("eval-edge");
  std::string one = kTank;
  one.replace(one.find("\"trials\": 500"), 13, "\"trials\": 1");
  CHECK(run(cmd_evaluate, options_for(dir, one)).code == kExitOk);

  RunOptions capped = options_for(dir, kTank);
  capped.cap = 5;
  const Result r = run(cmd_evaluate, capped);
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("warning:") != std::string::npos);
  CHECK(testing::read_file(dir / "out/eval_summary.txt").find("warning:") != std::string::npos);
}

TEST_CASE("search exit codes follow the verdict") {
  testing::TempDir dir("search");
  auto search = [&](std::size_t n, std::size_t m, std::size_t b, std::uint64_t limit = 50'000'000) {
    SearchOptions opts;
    opts.problem = {n, m, b};
    opts.witness = dir / "witness.txt";
    opts.node_limit = limit;
    std::ostringstream out;
    std::ostringstream err;
    return cmd_search(opts, out, err);
  };
  CHECK(search(3, 0, 2) == kExitFailure);
  CHECK(search(5, 1, 3) == kExitOk);
  CHECK(testing::read_file(dir / "witness.txt").find("sigma 0 1 |") != std::string::npos);
  CHECK(search(9, 2, 5) == kExitUsage);
  CHECK(search(1, 0, 1) == kExitUsage);
  CHECK(search(5, 1, 3, 1) == kExitResource);
}

TEST_CASE("descend exits 1 when Z covers X and 2 outside the guard") {
  testing::TempDir dir("descend");
  const Result r = run(cmd_descend, options_for(dir, R"({
    "schema": "emx-experiment/1", "domain": {"kind": "finite", "size": 60}, "tower": {"depth": 1, "seed": 11},
    "scheme": {"kind": "tower"}, "descend": {"x": {"range": [0, 59]}, "y": {"range": [0, 9]}}})"));
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("|Z| = 60") != std::string::npos);

  const Result ok = run(cmd_descend, options_for(dir, R"({
    "schema": "emx-experiment/1", "domain": {"kind": "naturals"}, "scheme": {"kind": "enumeration"},
    "descend": {"x": {"range": [0, 100]}, "y": {"range": [0, 5]}}})"));
  CHECK(ok.code == kExitOk);
  CHECK(testing::read_file(dir / "out/descend.txt").rfind("x 6\n", 0) == 0);

  const Result guard = run(cmd_descend, options_for(dir, R"({
    "schema": "emx-experiment/1", "domain": {"kind": "naturals"}, "scheme": {"kind": "enumeration"},
    "descend": {"x": {"range": [0, 100]}, "y": {"range": [0, 80]}, "max_subsets": 50}})"));
  CHECK(guard.code == kExitUsage);
}

TEST_CASE("compress writes a parseable trace and a lossless reconstruction") {
  testing::TempDir dir("compress");
  const Result r = run(cmd_compress, options_for(dir, kTower));
  CHECK(r.code == kExitOk);
  const std::string trace = testing::read_file(dir / "out/trace.txt");
  CHECK(trace.rfind("original 3 8 14 22 31 40 47 58\n", 0) == 0);
  CHECK(count_lines(trace) == 2 + 5);
  CHECK(testing::read_file(dir / "out/reconstruction.txt").find("lost \n") != std::string::npos);

  RunOptions capped = options_for(dir, kTower);
  capped.cap = 4;
  CHECK(run(cmd_compress, capped).code == kExitResource);
}

TEST_CASE("reruns produce byte-identical files") {
  testing::TempDir dir("determinism");
  const std::vector<std::pair<Command, std::string>> runs{
      {cmd_verify, kTower}, {cmd_evaluate, kTank}, {cmd_compress, kTower}, {cmd_verify, kEnumeration}};
  for (const auto& [cmd, json] : runs) {
    RunOptions a = options_for(dir, json, "a");
    RunOptions b = options_for(dir, json, "b");
    b.workers = 1;
    REQUIRE(run(cmd, a).code == run(cmd, b).code);
    for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
      const auto name = entry.path().filename();
      CAPTURE(name.string());
      CHECK(testing::read_file(entry.path()) == testing::read_file(dir / "b" / name.string()));
    }
    std::filesystem::remove_all(dir / "a");
    std::filesystem::remove_all(dir / "b");
  }
}

TEST_CASE("a seed override changes the sampled outputs") {
  testing::TempDir dir("seed");
  RunOptions a = options_for(dir, kTank, "a");
  RunOptions b = options_for(dir, kTank, "b");
  b.seed = 99;
  run(cmd_evaluate, a);
  run(cmd_evaluate, b);
  CHECK(testing::read_file(dir / "a/eval_trials.csv") != testing::read_file(dir / "b/eval_trials.csv"));
}
