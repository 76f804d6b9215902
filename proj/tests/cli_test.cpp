// End-to-end checks of the hdlp executable.

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "FAILED: " << what << "\n";
    ++failures;
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int run(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string("\"") + HDLP_CLI + "\" " + args + " > /dev/null 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

int main() {
  const fs::path work = HDLP_WORK_DIR;
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path configs = HDLP_CONFIG_DIR, data = HDLP_DATA_DIR;
  const fs::path err = work / "stderr.txt";

  // simulate with the shipped defaults: 2 estimators x 10 horizons
  const fs::path sim = work / "sim";
  expect(run("simulate --config \"" + (configs / "simulate.yaml").string() + "\" --out \"" + sim.string() + "\"", err) == 0,
         "simulate exits 0");
  const std::string cov = slurp(sim / "coverage.csv");
  expect(count_lines(cov) == 21, "coverage.csv has a header and 20 rows");
  expect(cov.rfind("dgp,P,T,estimator,horizon,coverage,mean_width,replications,failures\n", 0) == 0, "coverage header");
  expect(fs::exists(sim / "coverage.svg"), "coverage.svg written");

  // thread count does not change any output byte
  const fs::path sim8 = work / "sim8";
  expect(run("simulate --config \"" + (configs / "simulate.yaml").string() + "\" --threads 8 --out \"" + sim8.string() + "\"",
             err) == 0,
         "simulate with 8 threads exits 0");
  expect(slurp(sim8 / "coverage.csv") == cov, "coverage.csv identical at 1 and 8 threads");
  expect(slurp(sim8 / "manifest.json") == slurp(sim / "manifest.json"), "manifest identical at 1 and 8 threads");

  // toy local projections
  const fs::path lp = work / "lp";
  expect(run("lp -c \"" + (configs / "toy_lp.yaml").string() + "\" --out \"" + lp.string() + "\"", err) == 0, "lp exits 0");
  const std::string irf = slurp(lp / "irf.csv");
  expect(irf.rfind("estimator,response,horizon,state,estimate,se,lo,hi\n", 0) == 0, "irf.csv header");
  expect(irf.find("hdlp,rate,0,linear,1,0,1,1\n") != std::string::npos, "fixed impact row");
  expect(slurp(lp / "irf.svg").find("<svg") != std::string::npos, "irf.svg written");
  const auto manifest = nlohmann::json::parse(slurp(lp / "manifest.json"));
  expect(manifest["config"]["seed"] == 7, "manifest records the seed");
  expect(manifest["config"]["lp"]["specs"][0]["lags"] == 4, "manifest records defaults");

  // rerunning from the manifest reproduces the outputs
  const fs::path again = work / "lp_again";
  expect(run("lp -c \"" + (lp / "manifest.json").string() + "\" --out \"" + again.string() + "\"", err) == 0,
         "lp from manifest exits 0");
  expect(slurp(again / "irf.csv") == irf, "manifest rerun reproduces irf.csv");
  expect(slurp(again / "report.json") == slurp(lp / "report.json"), "manifest rerun reproduces report.json");

  // --seed overrides and changes nothing else in the schema
  const fs::path seeded = work / "lp_seed";
  expect(run("lp -c \"" + (configs / "toy_lp.yaml").string() + "\" --seed 99 --out \"" + seeded.string() + "\"", err) == 0,
         "lp --seed exits 0");
  expect(nlohmann::json::parse(slurp(seeded / "manifest.json"))["seed"] == 99, "seed override recorded");

  // a bad transform code names the series and exits with the config code
  std::string meta = slurp(data / "toy_meta.csv");
  const auto pos = meta.find("prices,");
  expect(pos != std::string::npos, "toy metadata lists prices");
  if (pos != std::string::npos) meta.replace(pos, meta.find('\n', pos) - pos, "prices,7,slow");
  write(work / "bad_meta.csv", meta);
  write(work / "bad.yaml", "seed: 1\ndata:\n  csv: " + (data / "toy.csv").string() + "\n  metadata: bad_meta.csv\nlp:\n  specs:\n    - response: output\n      shock: rate\n");
  const int code = run("lp -c \"" + (work / "bad.yaml").string() + "\" --out \"" + (work / "bad").string() + "\"", err);
  expect(code == 2, "bad transform code exits 2");
  const std::string msg = slurp(err);
  expect(msg.find("prices") != std::string::npos, "error names the series");
  expect(msg.find("\"series\":\"prices\"") != std::string::npos, "error JSON carries the series field");

  // missing seed, unknown key, missing file, wrong subcommand
  write(work / "noseed.yaml", "simulate:\n  reps: 2\n");
  expect(run("simulate -c \"" + (work / "noseed.yaml").string() + "\"", err) == 2, "missing seed exits 2");
  write(work / "typo.yaml", "seed: 1\nsimulate:\n  repz: 2\n");
  expect(run("simulate -c \"" + (work / "typo.yaml").string() + "\"", err) == 2, "unknown key exits 2");
  expect(slurp(err).find("repz") != std::string::npos, "unknown key is named");
  expect(run("simulate -c \"" + (work / "absent.yaml").string() + "\"", err) == 4, "missing config exits 4");
  expect(run("lp -c \"" + (sim / "manifest.json").string() + "\"", err) == 2, "manifest of another subcommand exits 2");
  expect(run("frobnicate", err) != 0, "unknown subcommand fails");

  if (failures) {
    std::cerr << failures << " CLI check(s) failed\n";
    return 1;
  }
  std::cout << "cli: all checks passed\n";
  return 0;
}
