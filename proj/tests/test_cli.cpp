#include "oracles.hpp"
#include "qce/cli.hpp"
#include "qce/random.hpp"
#include "qce/state_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qce;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kBell = std::string(QCE_DATA_DIR) + "/bell.json";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qce_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("region prints branch, coordinates and dual") {
    const Run r = run({"region", "--alpha", "0.5", "--z", "1", "--lambda", "1"});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "D1\nx=(2, 1, -1)\ndual=(2, 2, 0)\n");
    CHECK(run({"region", "--alpha", "3", "--z", "1", "--lambda", "0"}).out.rfind("outside", 0) == 0);
    CHECK(run({"region", "--alpha", "0.5", "--z", "0.5", "--lambda", "1"}).out.find("dual=undefined") != std::string::npos);
  }

  TEST_CASE("dual and chain") {
    const Run d = run({"dual", "--alpha", "2", "--z", "2", "--lambda", "1"});
    CHECK(d.code == kExitOk);
    CHECK(d.out.find("dual=(0.6666666667, 0.6666666667, 1)") != std::string::npos);
    CHECK(d.out.find("region=D1") != std::string::npos);
    const Run c = run({"chain", "--beta", "3", "--w", "1", "--gamma", "3", "--v", "1", "--lambda", "0"});
    CHECK(c.code == kExitOk);
    CHECK(c.out.find("alpha=2 z=1 mu=0") != std::string::npos);
    CHECK(c.out.find("all_in_region=false") != std::string::npos);
    CHECK(run({"chain", "--beta", "2", "--w", "2", "--gamma", "2", "--v", "2", "--lambda", "1"}).out.find("all_in_region=true") !=
          std::string::npos);
  }

  TEST_CASE("compute on the bundled Bell state") {
    const Run r = run({"compute", "--state", kBell, "--alpha", "2", "--z", "2", "--lambda", "1"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("H = -1.000000 bits", 0) == 0);
    const Run j = run({"compute", "--state", kBell, "--alpha", "0.5", "--z", "1", "--lambda", "0.5", "--json"});
    REQUIRE(j.code == kExitOk);
    const auto doc = nlohmann::json::parse(j.out);
    for (const char* key : {"value_bits", "sigma_star", "iterations", "fp_residual", "region", "converged"})
      CHECK(doc.contains(key));
    CHECK(doc["value_bits"].get<double>() == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(doc["region"] == "D1");
  }

  TEST_CASE("exit codes") {
    CHECK(run({}).code == kExitBadInput);
    CHECK(run({"region", "--alpha", "1", "--z", "1", "--lambda", "0"}).code == kExitBadInput);
    CHECK(run({"compute", "--state", "/nonexistent.json", "--alpha", "2", "--z", "1", "--lambda", "0"}).code == kExitBadInput);
    CHECK(run({"compute", "--state", kBell, "--alpha", "2", "--z", "1", "--lambda", "0", "--method", "magic"}).code == kExitBadInput);
    CHECK(run({"verify", "--suite", "nope", "--trials", "1"}).code == kExitBadInput);
    CHECK(run({"verify", "--suite", "additivity", "--trials", "2", "--dims", "2by2"}).code == kExitBadInput);
    const Run v = run({"verify", "--suite", "additivity", "--trials", "2", "--seed", "7", "--json"});
    CHECK(v.code == kExitOk);
    const auto arr = nlohmann::json::parse(v.out);
    CHECK(arr.size() == 12);
    CHECK(arr[0]["seed"] == 7);
  }

  TEST_CASE("non-convergence exits with 3") {
    // B of dimension 4 has no grid fallback, so a starved solver stays unconverged
    Rng rng(91);
    const auto path = scratch("wide.json");
    save_state(BipartiteState(random_density(8, rng), 2, 4), path.string());
    const std::vector<std::string> base{"compute", "--state", path.string(), "--alpha", "0.8", "--z", "2", "--lambda", "0.3"};
    const Run ok = run(base);
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("converged: true") != std::string::npos);
    std::vector<std::string> starved = base;
    starved.insert(starved.end(), {"--max-iter", "2"});
    const Run r = run(starved);
    CHECK(r.code == kExitNoConvergence);
    CHECK(r.out.find("converged: false") != std::string::npos);
  }

  TEST_CASE("sweep writes one row per grid point") {
    const auto csv = scratch("sweep.csv");
    const Run r = run({"sweep", "--state", kBell, "--alpha", "0.5:2:4", "--z", "1", "--lambda", "0:1:2", "--out", csv.string()});
    CHECK(r.code == kExitOk);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,z,lambda,H_bits,converged");
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      // alpha = 1 is not a valid order and is reported as nan
      CHECK(line.find(line.rfind("1,", 0) == 0 ? ",nan,0" : ",-1,1") != std::string::npos);
    }
    CHECK(rows == 8);
  }

  TEST_CASE("grid parsing") {
    CHECK(parse_grid("0.5") == std::vector<double>{0.5});
    CHECK(parse_grid("0:1:3") == std::vector<double>{0, 0.5, 1});
    CHECK(parse_grid("2:3:1") == std::vector<double>{2});
    CHECK_THROWS(parse_grid("1:2"));
    CHECK_THROWS(parse_grid("a:b:c"));
    CHECK_THROWS(parse_grid("0:1:0"));
  }

  TEST_CASE("state files round-trip") {
    Rng rng(92);
    const BipartiteState rho(random_density(6, rng), 2, 3);
    const auto path = scratch("roundtrip.json");
    save_state(rho, path.string());
    const BipartiteState back = load_state(path.string());
    CHECK(back.dim_a() == 2);
    CHECK(back.dim_b() == 3);
    CHECK((back.matrix() - rho.matrix()).norm() < 1e-15);
    CHECK_THROWS(state_from_json(nlohmann::json::parse(R"({"dims":[2,2],"matrix":{"re":[[1]],"im":[[0]]}})")));
  }
}
