#include "parset/harness.hpp"

#include <doctest.h>

#include <string>

using namespace parset;
using namespace parset::harness;

namespace {

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

SuiteConfig small_config(unsigned workers) {
  SuiteConfig c;
  c.workers = workers;
  c.samples = 20000;
  c.instances = 2;
  c.calibration_samples = 20000;
  c.entropy_samples = 20000;
  c.convergence_trials = 2;
  c.convergence = false;
  return c;
}

}  // namespace

TEST_CASE("suite config parsing") {
  const auto c = parse_suite_config(R"({"seed": 7, "workers": 3, "convergence": false})", "cfg.json");
  CHECK(c.seed == 7);
  CHECK(c.workers == 3);
  CHECK_FALSE(c.convergence);
  CHECK(c.samples == SuiteConfig{}.samples);
  const auto round = parse_suite_config(to_json(c).dump(), "x");
  CHECK(round.seed == 7);
  CHECK(round.workers == 3);
}

TEST_CASE("unknown keys are named with file and line") {
  const std::string text = "{\n  \"seed\": 1,\n  \"radious\": 2\n}\n";
  const auto msg = error_of([&] { parse_suite_config(text, "conf.json"); });
  CHECK(msg.find("radious") != std::string::npos);
  CHECK(msg.find("conf.json:3") != std::string::npos);
  CHECK(error_of([] { parse_suite_config("{ bad", "b.json"); }).find("b.json:1") != std::string::npos);
  CHECK_FALSE(error_of([] { parse_suite_config(R"({"seed": "x"})", "c.json"); }).empty());

  const std::string exp = R"({"name": "t", "module": "exact2d",
    "parameters": {"centers": [[0, 0]], "radious": 1}})";
  const auto emsg = error_of([&] { parse_experiment_config(exp, "e.json"); });
  CHECK(emsg.find("radious") != std::string::npos);
  CHECK(emsg.find("e.json:2") != std::string::npos);
}

TEST_CASE("experiments") {
  const auto disk = parse_experiment_config(
      R"({"name": "d", "module": "exact2d", "parameters": {"centers": [[0, 0], [1, 0]], "radius": 0.7}})", "x");
  const auto m = run_experiment(disk, 1);
  REQUIRE(m.checks.size() == 1);
  CHECK(m.all_pass());
  CHECK(m.checks[0].report.bound_name == "d/volume_constrained");

  const auto no_seed = parse_experiment_config(
      R"({"name": "m", "module": "mc-measure", "parameters": {"centers": [[0, 0]], "radius": 1, "samples": 1000}})", "x");
  CHECK(error_of([&] { run_experiment(no_seed, 1); }).find("seed") != std::string::npos);
  CHECK_FALSE(error_of([] { parse_experiment_config(R"({"name": "a", "module": "nope"})", "x"); }).empty());
  CHECK_FALSE(error_of([] { parse_experiment_config(R"({"name": "a", "module": "bounds", "seed": -1})", "x"); }).empty());

  const auto epi = parse_experiment_config(
      R"({"name": "e", "module": "entropy", "seed": 3,
          "parameters": {"x": [[0], [2]], "y": [[0]], "smoothing": 0.5, "samples": 20000}})",
      "x");
  CHECK(run_experiment(epi, 2).all_pass());
}

TEST_CASE("csv output") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  const std::vector<CheckRow> rows{{"s", compare_upper("x,y", 1.0, 0.5)}};
  const auto csv = reports_csv(rows);
  CHECK(csv.rfind("suite,check,kind,bound_value,measured,std_error,allowance,slack,verdict\r\n", 0) == 0);
  CHECK(csv.find("\"x,y\"") != std::string::npos);
  CHECK(csv.find("\r\n", csv.find("\r\n") + 2) != std::string::npos);
  const auto j = reports_json(rows);
  CHECK(j[0]["measured"].get<double>() == 0.5);
}

TEST_CASE("suites are deterministic and worker independent") {
  const auto a = run_suite("gaussian", small_config(1));
  const auto b = run_suite("gaussian", small_config(4));
  CHECK(reports_csv(a.checks) == reports_csv(b.checks));
  const auto e1 = run_suite("epi", small_config(1));
  const auto e2 = run_suite("epi", small_config(2));
  CHECK(reports_csv(e1.checks) == reports_csv(e2.checks));
  CHECK_FALSE(a.checks.empty());
  CHECK(manifest_json(a).contains("wall_seconds"));
  CHECK(error_of([] { run_suite("nope", SuiteConfig{}); }).find("nope") != std::string::npos);
  CHECK(suite_names().back() == "all");
}
