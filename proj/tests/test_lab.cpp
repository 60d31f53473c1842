#include <doctest.h>

#include "common.hpp"
#include "grushin/lab.hpp"

#include <json.hpp>

using namespace grushin;
using namespace grushin::lab;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("config parsing") {
  const Config c = parse_config(R"(# comment
experiment = "metric-volumes"
seed = 7
[grid]
points = 32   # trailing comment
half_width = 1.5
[perimeter]
s_values = [0.1, 0.2,
            0.3]
flag = true
names = ["a", "b"]
)");
  CHECK(c.string("experiment", "") == "metric-volumes");
  CHECK(c.integer("seed", 0) == 7);
  CHECK(c.integer("grid.points", 0) == 32);
  CHECK(c.number("grid.half_width", 0) == 1.5);
  CHECK(c.numbers("perimeter.s_values", {}) == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(c.boolean("perimeter.flag", false));
  CHECK(c.number("missing.key", 4.5) == 4.5);
  CHECK(std::get<std::vector<std::string>>(c.values().at("perimeter.names")).size() == 2);
}

TEST_CASE("config errors name the key path") {
  CHECK(error_of([] { parse_config("[grid]\npoints = \"many\"\n").integer("grid.points", 1); }).rfind("grid.points", 0) == 0);
  CHECK(error_of([] { parse_config("[grid]\npoints = 3\npoints = 4\n"); }).rfind("grid.points", 0) == 0);
  CHECK(error_of([] { parse_config("[grid]\npoints = [1, 2\n"); }).rfind("grid.points", 0) == 0);
  CHECK(error_of([] { parse_config("seed = 1.5\n").integer("seed", 1); }).rfind("seed", 0) == 0);
  Config c = parse_config("experiment = \"sobolev-hls\"\n[grid]\npointz = 3\n");
  CHECK(error_of([&] { run_experiment(c); }).rfind("grid.pointz", 0) == 0);
  CHECK(error_of([] { run_experiment(parse_config("seed = 1\n")); }).rfind("experiment", 0) == 0);
  CHECK(error_of([] { run_experiment(parse_config("experiment = \"nope\"\n")); }).rfind("experiment", 0) == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/file.toml"), ConfigurationError);
}

TEST_CASE("overrides") {
  Config c = parse_config("[grid]\npoints = 64\n");
  c.apply_override("grid.points=24");
  CHECK(c.integer("grid.points", 0) == 24);
  c.apply_override("bbm.beta_grid=[0.8,0.9]");
  CHECK(c.numbers("bbm.beta_grid", {}).size() == 2);
  c.apply_override("quadrature.tail_policy=\"drop\"");
  CHECK(c.string("quadrature.tail_policy", "") == "drop");
  CHECK_THROWS_AS(c.apply_override("novalue"), ConfigurationError);
  CHECK(c.exponent("q", kInfinity) == kInfinity);
  c.apply_override("q=\"inf\"");
  CHECK(c.exponent("q", 1.0) == kInfinity);
}

TEST_CASE("grid settings are validated") {
  Config c;
  c.set("grid.points", 1.0);
  CHECK_THROWS_AS(grid_from(c), ConfigurationError);
  Config d;
  const GridSpec s = grid_from(d);
  CHECK(s.points[0] == 64);
  CHECK(s.half_width[0] == 2.0);
  CHECK(s.alpha == 1.0);
}

TEST_CASE("row comparisons") {
  Config c;
  Context ctx(c, "x");
  ctx.row("g", "a", "", 1.0, 1.0, Comparison::at_most, 0.0, "t");
  ctx.row("g", "b", "", 1.1, 1.0, Comparison::at_most, 0.05, "t");
  ctx.row("g", "c", "", 0.9, 1.0, Comparison::at_least, 0.1, "t");
  ctx.row("g", "d", "", 1.09, 1.0, Comparison::relative, 0.1, "t");
  ctx.row("g", "e", "", -0.5, 0.0, Comparison::absolute, 0.4, "t");
  ctx.row("g", "f", "", std::nan(""), 0.0, Comparison::at_most, 1.0, "t");
  const auto& r = ctx.report.rows;
  CHECK(r[0].pass);
  CHECK_FALSE(r[1].pass);
  CHECK(r[2].pass);
  CHECK(r[3].pass);
  CHECK_FALSE(r[4].pass);
  CHECK_FALSE(r[5].pass);
  CHECK_FALSE(ctx.report.all_pass());
}

TEST_CASE("report serialization") {
  Config c = parse_config("experiment = \"x\"\nseed = 3\n");
  Context ctx(c, "x");
  ctx.row("grp", "a, quoted \"check\"", "p=1", 0.5, 1.0, Comparison::at_most, 0.0, "[TAG]");
  DataTable& t = ctx.table("tab", {"a", "b"});
  t.rows.push_back({"1", "x,y"});
  const std::string csv = results_csv(ctx.report);
  CHECK(csv.rfind("experiment,group,check,parameters,measured,target,comparison,tolerance,tag,pass\n", 0) == 0);
  CHECK(csv.find("\"a, quoted \"\"check\"\"\"") != std::string::npos);
  CHECK(csv.find(",true\n") != std::string::npos);
  CHECK(table_csv(t) == "a,b\n1,\"x,y\"\n");
  const auto j = nlohmann::json::parse(summary_json(ctx.report, c));
  CHECK(j["experiment"] == "x");
  CHECK(j["all_pass"] == true);
  CHECK(j["rows"] == 1);
  CHECK(j["groups"]["grp"]["passed"] == 1);
  CHECK(j["tables"][0] == "tab.csv");
}

TEST_CASE("number formatting is stable") {
  CHECK(format_number(0.5) == format_number(0.5));
  CHECK(std::stod(format_number(1.0 / 3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(format_number(kInfinity) == "inf");
}

TEST_CASE("experiment list") {
  const auto& t = experiment_table();
  CHECK(t.size() == 8);
  const std::string txt = list_text();
  for (const auto& e : t) CHECK(txt.find(e.id) != std::string::npos);
  CHECK(txt.find("besov-limits") != std::string::npos);
  CHECK(txt.find("isoperimetric-scan") != std::string::npos);
}

TEST_CASE("rng is reproducible") {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 10; ++i) {
    const double x = a.uniform(0, 1);
    CHECK(x == b.uniform(0, 1));
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(a.bits() != c.bits());
}

TEST_CASE("small runs are deterministic") {
  Config c = parse_config("experiment = \"metric-volumes\"\nseed = 2\n");
  c.apply_override("metric.slope_cells=60");
  c.apply_override("metric.cells=20");
  const ExperimentReport a = run_experiment(c), b = run_experiment(c);
  CHECK(a.id == "metric-volumes");
  CHECK(!a.rows.empty());
  CHECK(results_csv(a) == results_csv(b));
}

}
