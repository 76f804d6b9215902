#include "hdlp/pipeline.hpp"
#include "hdlp/synthetic.hpp"

#include <doctest.h>

#include <functional>
#include <string>

using namespace hdlp;
using nlohmann::json;

namespace {

json toy_config() {
  return json::parse(R"({"seed": 5, "lp": {"specs": [{"response": "output", "shock": "rate", "h_max": 3}]}})");
}

std::string config_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("lp defaults come from the metadata") {
  const Dataset d = toy_panel(150, 2);
  const LpRun run = parse_lp_run(toy_config(), d);
  REQUIRE(run.specs.size() == 1);
  const auto& s = run.specs[0];
  CHECK(s.lags == 4);
  CHECK(s.h_max == 3);
  CHECK(s.slow_controls == std::vector<std::string>{"prices"});  // output is the response
  CHECK(s.fast_controls.empty());
  CHECK(run.resolved["lp"]["specs"][0]["lags"] == 4);
  CHECK(run.resolved["lp"]["estimator"] == "hdlp");
}

TEST_CASE("resolved configs reproduce the run") {
  const Dataset d = toy_panel(150, 2);
  const LpRun a = parse_lp_run(toy_config(), d);
  const LpRun b = parse_lp_run(a.resolved, d);
  CHECK(a.resolved == b.resolved);
  const auto ra = run_lp(d, a), rb = run_lp(d, b);
  CHECK(ra.csv == rb.csv);
  CHECK(ra.svg == rb.svg);
  CHECK(ra.report == rb.report);
}

TEST_CASE("unknown keys and bad types are rejected") {
  const Dataset d = toy_panel(100, 2);
  json c = toy_config();
  c["lp"]["specs"][0]["lag"] = 3;
  CHECK(config_error([&] { parse_lp_run(c, d); }).find("lag") != std::string::npos);
  json t = toy_config();
  t["lp"]["specs"][0]["h_max"] = "three";
  CHECK(!config_error([&] { parse_lp_run(t, d); }).empty());
  json top = toy_config();
  top["sede"] = 1;
  CHECK(config_error([&] { parse_lp_run(top, d); }).find("sede") != std::string::npos);
  json noseed = toy_config();
  noseed.erase("seed");
  CHECK(config_error([&] { parse_lp_run(noseed, d); }).find("seed") != std::string::npos);
  json missing = toy_config();
  missing["lp"]["specs"][0]["response"] = "gdp";
  CHECK(!config_error([&] { parse_lp_run(missing, d); }).empty());
}

TEST_CASE("simulate grid and seeds") {
  const auto run = parse_simulate_run(json::parse(R"({"seed": 3, "simulate": {"dgp": ["dgp1", "dgp2"], "P": [5, 10], "T": 100}})"));
  REQUIRE(run.cells.size() == 4);
  CHECK(run.cells[0].P == 5);
  CHECK(run.cells[1].P == 10);
  CHECK(run.cells[2].sign_switch);
  for (const auto& c : run.cells) CHECK(c.seed == cell_seed(3, c));
  CHECK(run.cells[0].seed != run.cells[1].seed);
  CHECK(run.cells[0].seed != run.cells[2].seed);
  // a cell's seed does not depend on what else is in the grid
  const auto single = parse_simulate_run(json::parse(R"({"seed": 3, "simulate": {"dgp": "dgp2", "P": 10, "T": 100}})"));
  CHECK(single.cells[0].seed == run.cells[3].seed);
  CHECK(run.resolved["simulate"]["reps"] == 100);
  CHECK(!config_error([&] { parse_simulate_run(json::parse(R"({"seed": 3, "simulate": {"dgp": "dgp3"}})")); }).empty());
}

TEST_CASE("simulate output is thread independent") {
  const json c = json::parse(R"({"seed": 11, "simulate": {"P": 4, "T": 80, "reps": 4, "h_max": 2, "lags": 2}})");
  const auto a = run_simulate(parse_simulate_run(c, 1));
  const auto b = run_simulate(parse_simulate_run(c, 3));
  CHECK(a.csv == b.csv);
  CHECK(a.report == b.report);
}

TEST_CASE("tuning section") {
  json r;
  const auto t = parse_tuning(json::parse(R"({"method": "fixed", "fixed_lambda": 0.1})"), 4, &r);
  CHECK(t.fixed_lambda == 0.1);
  CHECK(r["method"] == "fixed");
  CHECK(!config_error([] { parse_tuning(json::parse(R"({"method": "magic"})"), 1); }).empty());
  CHECK(!config_error([] { parse_tuning(json::parse(R"({"draws": 5})"), 1); }).empty());
}

TEST_CASE("favar run") {
  const Dataset d = toy_panel(200, 2);
  const auto run = parse_favar_run(
      json::parse(R"({"seed": 1, "favar": {"policy": "rate", "n_factors": 1, "var_lags": 2, "h_max": 4, "draws": 19}})"), d);
  CHECK(run.favar.slow == std::vector<std::string>{"output", "prices"});
  const auto out = run_favar(d, run);
  CHECK(out.csv.rfind("estimator,response,horizon,state,estimate,se,lo,hi", 0) == 0);
  CHECK(out.csv.find("favar,rate,0,linear,1,nan,") != std::string::npos);
}

}
