#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "brw/cli.hpp"
#include "brw/errors.hpp"

using namespace brw;
namespace fs = std::filesystem;

namespace {

RunConfig parse(std::vector<const char*> args) {
  args.insert(args.begin(), "brw_lab");
  return parse_args(static_cast<int>(args.size()), args.data());
}

std::string env_or_skip(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_args defaults") {
  const auto c = parse({"--experiment", "oracles"});
  CHECK(c.experiment == "oracles");
  CHECK(c.seed == kDefaultSeed);
  CHECK(c.replicas == 1000);
  CHECK(c.format == "csv");
  CHECK(c.out == "brw_oracles.csv");
  CHECK_FALSE(c.check);
}

TEST_CASE("parse_args echoes a full CLT run") {
  const auto c = parse({"--experiment", "clt", "--dim", "17", "--n-grid", "1024,4096,16384", "--replicas", "10000",
                        "--seed", "7"});
  CHECK(c.dim == 17);
  CHECK(c.n_grid == std::vector<Index>{1024, 4096, 16384});
  CHECK(c.replicas == 10000);
  CHECK(c.seed == 7);
  CHECK(c.past_auto);
  const auto p = parse({"--experiment", "badpoints", "--past", "250", "--n", "500", "--format", "json", "--check"});
  CHECK_FALSE(p.past_auto);
  CHECK(p.past == 250);
  CHECK(p.n_grid == std::vector<Index>{500});
  CHECK(p.out == "brw_badpoints.json");
  CHECK(p.check);
}

TEST_CASE("parse_args errors") {
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--dim", "zero"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--dim", "0"}), UsageError);
  CHECK_THROWS_AS(parse({"--dim", "5"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--bogus"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--past", "soon"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--n-grid", "10,x"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--n", "5", "--n-grid", "5,6"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "clt", "--replicas", "0"}), UsageError);
  CHECK_THROWS_AS(parse({"--experiment", "dance"}), UsageError);
  try {
    parse({"--help"});
    FAIL("expected help");
  } catch (const HelpRequested& h) {
    CHECK(std::string(h.what()).find("--n-grid") != std::string::npos);
  }
}

TEST_CASE("binary: reports, manifest, exit codes") {
  const auto lab = env_or_skip("BRW_LAB");
  const auto validate = env_or_skip("BRW_VALIDATE");
  if (lab.empty() || validate.empty()) {
    MESSAGE("BRW_LAB / BRW_VALIDATE not set; skipping binary checks");
    return;
  }
  const auto dir = fs::temp_directory_path() / "brw_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto json = (dir / "o.json").string();
  const std::string base = lab + " --experiment oracles --replicas 10 --format json";

  CHECK(shell(base + " --threads 1 --out " + json) == 0);
  CHECK(fs::exists(json + ".manifest.json"));
  CHECK(shell(validate + " " + json) == 0);
  const auto first = slurp(json);
  CHECK(shell(base + " --threads 4 --check --out " + json) == 0);
  CHECK(slurp(json) == first);

  const auto manifest = nlohmann::json::parse(slurp(json + ".manifest.json"));
  CHECK(manifest["config"]["experiment"] == "oracles");
  CHECK(manifest["report_sha1"].get<std::string>().size() == 40);
  CHECK(manifest.contains("wall_clock_seconds"));

  // The slope threshold at d = 20 cannot be met at this size.
  const auto csv = (dir / "t.csv").string();
  const std::string failing = lab + " --experiment truncation --dim 20 --n 64 --k 8 --replicas 50 --out " + csv;
  CHECK(shell(failing) == 0);
  CHECK(shell(failing + " --check") == 2);
  CHECK(slurp(csv).rfind("name,d,n,k,M,replicas,seed,stat,value,stderr\n", 0) == 0);

  CHECK(shell(lab + " --experiment clt --dim zero") == 1);
  CHECK(shell(lab + " --experiment oracles --replicas 5 --out /nonexistent-dir/x.csv") == 1);
  CHECK(shell(lab + " --help") == 0);

  std::ofstream(dir / "bad.json") << "{\"schema_version\": 1}";
  CHECK(shell(validate + " " + (dir / "bad.json").string()) == 1);
  fs::remove_all(dir);
}
