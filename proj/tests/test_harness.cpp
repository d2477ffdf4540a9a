#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rso/config.hpp"
#include "rso/harness.hpp"

using namespace rso;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("rso_test_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

fs::path write_temp(const std::string& content) {
  static int counter = 0;
  const fs::path p =
      fs::temp_directory_path() / ("rso_cfg_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++) + ".json");
  std::ofstream out(p);
  out << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path only_subdir(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) return entry.path();
  }
  FAIL("no output subdirectory found in " << dir.string());
  return {};
}

constexpr const char* kRunConfig = R"({
  "seed": 1,
  "horizon": 1000,
  "noise": {"sigma": 0.0, "kind": "gaussian"},
  "optimizer": {"kind": "nsgdm", "mode": "agnostic"},
  "objective": {"kind": "quadratic", "L": 1.0, "dim": 2}
})";

}  // namespace

TEST_CASE("config parsing reports field-level errors") {
  CHECK_THROWS_WITH_AS(parse_run_config("{"), "$: not valid JSON",
                       ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_run_config(R"({"horizon": 10, "objective": {"kind": "quadratic"},
                           "optimizer": {"kind": "adam"}})"),
      "$.optimizer.kind: unknown optimizer 'adam'", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_run_config(R"({"objective": {"kind": "quadratic"},
                           "optimizer": {"kind": "nsgdm"}})"),
      "$.horizon: missing", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_run_config(R"({"horizon": 10,
                           "objective": {"kind": "hard_instance", "eps": 0.1,
                                         "eta": 1.0, "L0": 2.0, "L1": 1.0,
                                         "delta1": 1.0},
                           "optimizer": {"kind": "nsgdm"}})"),
      "$.objective: hard instance: requires L0 >= 8/eta", ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_run_config(R"({"horizon": 10, "noise": {"sigma": 0.5},
                           "objective": {"kind": "cosh"},
                           "optimizer": {"kind": "backtracking"}})"),
      "$.noise.sigma: backtracking line search requires sigma = 0",
      ConfigError);
}

TEST_CASE("parsed configs build and replay") {
  const auto parsed = parse_run_config(kRunConfig);
  CHECK(parsed.run.horizon == 1000);
  CHECK(parsed.run.objective.name == "quadratic");
  CHECK(std::holds_alternative<NsgdmConfig>(parsed.run.optimizer));
  const auto a = run(parsed.run);
  const auto b = run(parse_run_config(kRunConfig).run);
  CHECK(a.trace.to_csv() == b.trace.to_csv());
}

TEST_CASE("cmd_run writes trace and summary, deterministically") {
  const auto cfg = write_temp(kRunConfig);
  const auto out = temp_dir();
  CHECK(harness::cmd_run(cfg, out, std::nullopt) == harness::kExitOk);
  const auto dir = only_subdir(out);
  REQUIRE(fs::exists(dir / "trace.csv"));
  REQUIRE(fs::exists(dir / "summary.json"));
  const std::string first = slurp(dir / "trace.csv");
  // 1000 rows + header
  CHECK(std::count(first.begin(), first.end(), '\n') == 1001);
  const std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"t0\"") != std::string::npos);
  // byte-identical on a second invocation
  CHECK(harness::cmd_run(cfg, out, std::nullopt) == harness::kExitOk);
  CHECK(slurp(dir / "trace.csv") == first);
}

TEST_CASE("cmd_run exit codes") {
  const auto out = temp_dir();
  const auto bad = write_temp(R"({"horizon": 0})");
  CHECK(harness::cmd_run(bad, out, std::nullopt) == harness::kExitConfigError);
  const auto diverging = write_temp(R"({
    "seed": 1, "horizon": 50,
    "optimizer": {"kind": "clipped_sgd", "eta": 1e5, "clip": 0.25},
    "objective": {"kind": "cosh", "a": 1.0}
  })");
  CHECK(harness::cmd_run(diverging, out, std::nullopt) ==
        harness::kExitDiverged);
  // the partial trace is still written
  bool found_partial = false;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (entry.path().filename() == "summary.json") {
      found_partial |=
          slurp(entry.path()).find("\"diverged\": true") != std::string::npos;
    }
  }
  CHECK(found_partial);
}

TEST_CASE("sweep produces the full grid and is deterministic under threads") {
  const auto spec = write_temp(R"({
    "base_eta": 1.0,
    "multipliers": [0.1, 0.5, 1.0, 2.0, 10.0],
    "optimizers": [{"kind": "nsgdm", "mode": "custom", "eta": 1.0},
                   {"kind": "clipped_sgd"},
                   {"kind": "adagrad_norm"}],
    "objective": {"kind": "cosh", "a": 1.0},
    "seeds": [1, 2],
    "horizon": 300,
    "noise": {"sigma": 0.5, "kind": "gaussian"}
  })");
  const auto out = temp_dir();
  REQUIRE(harness::cmd_sweep(spec, out, 2) == harness::kExitOk);
  const auto dir = only_subdir(out);
  const std::string agg = slurp(dir / "sweep.csv");
  // 3 optimizers x 5 multipliers x 2 seeds = 30 rows + header
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 31);
  CHECK(agg.rfind("optimizer,lambda,seed,min_grad_norm,min_f\n", 0) == 0);
  // re-run with a different worker count: byte-identical aggregate
  const auto out2 = temp_dir();
  REQUIRE(harness::cmd_sweep(spec, out2, 4) == harness::kExitOk);
  CHECK(slurp(only_subdir(out2) / "sweep.csv") == agg);
}

TEST_CASE("hard-instance run reports the iteration floor in its summary") {
  const auto cfg = write_temp(R"({
    "seed": 1, "horizon": 100000, "target_eps": 0.1,
    "optimizer": {"kind": "gnmm", "eta": 1.0, "alpha": 0.75,
                  "rule": "last_gradient"},
    "objective": {"kind": "hard_instance", "eps": 0.1, "eta": 1.0,
                  "L0": 8.0, "L1": 2.0, "delta1": 1.0}
  })");
  const auto out = temp_dir();
  REQUIRE(harness::cmd_run(cfg, out, std::nullopt) == harness::kExitOk);
  const std::string summary = slurp(only_subdir(out) / "summary.json");
  REQUIRE(summary.find("\"T_eps\"") != std::string::npos);
  REQUIRE(summary.find("\"T_lower_bound\"") != std::string::npos);
  // parse the two values back out and compare
  auto value_of = [&](const std::string& key) {
    const auto pos = summary.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(summary.substr(summary.find(':', pos) + 1));
  };
  CHECK(value_of("\"T_eps\"") >= value_of("\"T_lower_bound\""));
}

TEST_CASE("oversize clipped stepsizes lose on cosh") {
  // mirrors the qualitative tuning-robustness comparison: a clipped run at
  // 10^{8/5} times the good stepsize never gets near the optimum
  const auto spec = write_temp(R"({
    "base_eta": 1.0,
    "multipliers": [1.0, 39.810717055349734],
    "optimizers": [{"kind": "clipped_sgd"}],
    "objective": {"kind": "cosh", "a": 1.0},
    "seeds": [1],
    "horizon": 2000
  })");
  const auto out = temp_dir();
  REQUIRE(harness::cmd_sweep(spec, out, 1) == harness::kExitOk);
  const std::string agg = slurp(only_subdir(out) / "sweep.csv");
  double min_f_tuned = -1.0, min_f_oversize = -1.0;
  std::istringstream lines(agg);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto last_comma = line.rfind(',');
    const double min_f = std::stod(line.substr(last_comma + 1));
    if (line.rfind("clipped_sgd,1,", 0) == 0) {
      min_f_tuned = min_f;
    } else if (line.rfind("clipped_sgd,39.8", 0) == 0) {
      min_f_oversize = min_f;
    }
  }
  REQUIRE(min_f_tuned > 0.0);
  REQUIRE(min_f_oversize > 0.0);
  CHECK(min_f_oversize > min_f_tuned);
}

TEST_CASE("sweep records divergent cells and keeps going") {
  // clipped SGD with a huge stepsize overflows cosh; backtracking ignores
  // the multiplier and survives
  const auto spec = write_temp(R"({
    "base_eta": 1e5,
    "multipliers": [1.0],
    "optimizers": [{"kind": "clipped_sgd"}, {"kind": "backtracking"}],
    "objective": {"kind": "cosh", "a": 1.0},
    "seeds": [1],
    "horizon": 100
  })");
  const auto out = temp_dir();
  REQUIRE(harness::cmd_sweep(spec, out, 1) == harness::kExitOk);
  const auto dir = only_subdir(out);
  const std::string agg = slurp(dir / "sweep.csv");
  // clipped cell diverges (cosh overflow); nsgdm survives (bounded steps)
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 2);
  REQUIRE(fs::exists(dir / "failures.csv"));
  CHECK(slurp(dir / "failures.csv").find("clipped_sgd") != std::string::npos);
}

TEST_CASE("lower-bound certification end to end") {
  harness::LowerBoundArgs args;
  args.eps = 0.1;
  args.eta = 1.0;
  args.alpha = 0.75;
  args.delta1 = 1.0;
  args.L0 = 8.0;
  args.L1 = 2.0;
  args.rule = MomentumRule::last_gradient;
  const auto out = temp_dir();
  CHECK(harness::cmd_certify_lower_bound(args, out) == harness::kExitOk);
  const std::string doc = slurp(only_subdir(out) / "certification.json");
  CHECK(doc.find("\"certified\": true") != std::string::npos);
  CHECK(doc.find("\"smoothness_certified\": true") != std::string::npos);
  CHECK(doc.find("\"x2\": 1.0") != std::string::npos);

  harness::LowerBoundArgs bad = args;
  bad.L0 = 1.0;
  CHECK(harness::cmd_certify_lower_bound(bad, temp_dir()) ==
        harness::kExitConfigError);
}

TEST_CASE("lemma verification batch") {
  // default grid: everything holds
  const auto out = temp_dir();
  CHECK(harness::cmd_verify_lemmas(std::nullopt, out) == harness::kExitOk);
  const std::string report = slurp(only_subdir(out) / "lemma_report.json");
  CHECK(report.find("\"failed\": 0") != std::string::npos);

  // invalid points are skipped, not failed (c.iii with eta L1 = 0.1)
  const auto grid = write_temp(R"({
    "explicit": {"T": [100], "eta": [1.0], "L1": [0.1]}
  })");
  const auto out2 = temp_dir();
  CHECK(harness::cmd_verify_lemmas(grid, out2) == harness::kExitOk);
  const std::string r2 = slurp(only_subdir(out2) / "lemma_report.json");
  CHECK(r2.find("\"skipped\": 1") != std::string::npos);
  CHECK(r2.find("part c.iii requires eta L1 >= 1/2") != std::string::npos);

  // empty grid: success with zero checks
  const auto empty = write_temp(R"({})");
  CHECK(harness::cmd_verify_lemmas(empty, temp_dir()) == harness::kExitOk);
}

TEST_CASE("smoothness certification command") {
  const auto cosh_spec = write_temp(R"({
    "objective": {"kind": "cosh", "a": 1.0},
    "pairs": 2000, "box": [-3.0, 3.0], "seed": 7
  })");
  CHECK(harness::cmd_certify_smoothness(cosh_spec, temp_dir()) ==
        harness::kExitOk);

  const auto hard_spec = write_temp(R"({
    "objective": {"kind": "hard_instance", "eps": 0.1, "eta": 1.0,
                  "L0": 8.0, "L1": 1.0, "delta1": 1.0},
    "pairs": 2000, "grid_points": 20000, "seed": 7
  })");
  const auto out = temp_dir();
  CHECK(harness::cmd_certify_smoothness(hard_spec, out) == harness::kExitOk);
  const std::string doc = slurp(only_subdir(out) / "smoothness.json");
  CHECK(doc.find("\"certified\": true") != std::string::npos);
  CHECK(doc.find("\"knot_discontinuity\"") != std::string::npos);
}
