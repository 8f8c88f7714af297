#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "blab/distributions.hpp"
#include "blab/networks.hpp"

using namespace blab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kCli = BLAB_CLI_PATH;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path tmp_path(const std::string& name) {
  return fs::temp_directory_path() / ("blab_cli_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string strip_runtime(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line))
    if (line.find("runtime_ms") == std::string::npos) out += line + "\n";
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sample runs are byte-identical and parse back") {
  const auto a = tmp_path("sample_a.csv");
  const auto b = tmp_path("sample_b.csv");
  CHECK(run_cli("sample --n 4 --M 6 --out " + a.string()) == 0);
  CHECK(run_cli("sample --n 4 --M 6 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));

  std::ifstream is(a);
  const Dataset data = read_dataset_csv(is);
  REQUIRE(data.size() == 6);
  CHECK(data.front().x.size() == 4);

  const auto j = tmp_path("sample.json");
  CHECK(run_cli("sample --n 4 --M 6 --format json --out " + j.string()) == 0);
  const auto env = dataset_from_json(slurp(j));
  CHECK(env.spec.n == 4);
  CHECK(env.seed == 7);
  REQUIRE(env.points.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(env.points[i].x == data[i].x);  // same stream, both formats exact
    CHECK(env.points[i].label == data[i].label);
  }
  fs::remove(a);
  fs::remove(b);
  fs::remove(j);
}

TEST_CASE("seed flag and environment fallback change the draw") {
  const auto a = tmp_path("seed_a.csv");
  const auto b = tmp_path("seed_b.csv");
  const auto c = tmp_path("seed_c.csv");
  CHECK(run_cli("sample --n 4 --M 6 --seed 99 --out " + a.string()) == 0);
  const std::string env_cmd = "BLAB_SEED=99 " + std::string(kCli) +
                              " sample --n 4 --M 6 --out " + b.string();
  REQUIRE(std::system(env_cmd.c_str()) == 0);
  CHECK(run_cli("sample --n 4 --M 6 --out " + c.string()) == 0);
  CHECK(slurp(a) == slurp(b));        // flag and env agree
  CHECK(slurp(a) != slurp(c));        // and differ from the default seed
  fs::remove(a);
  fs::remove(b);
  fs::remove(c);
}

TEST_CASE("build emits a net that loads and classifies") {
  const auto p = tmp_path("net.json");
  CHECK(run_cli("build --n 4 --kind robust --kappa 2 --out " + p.string()) == 0);
  const ThresholdNet net = net_from_json(slurp(p));
  CHECK(net.input_dim() == 4);
  CHECK(net.forward(cube_vertex({4, 5})) == 1.0);
  CHECK(net.forward(Point{2.0, 0.0, 0.0, 0.0}) == 0.0);

  CHECK(run_cli("build --n 4 --depth 3 --out " + p.string()) == 0);
  const ThresholdNet deep = net_from_json(slurp(p));
  CHECK(deep.architecture() == std::vector<int>{4, 8, 2, 2, 1});
  CHECK(deep.forward(cube_vertex({4, 5})) == 1.0);
  fs::remove(p);
}

TEST_CASE("attack reports rates and logs every trial") {
  const auto rep_path = tmp_path("attack.json");
  const auto log_path = tmp_path("attack_log.csv");
  CHECK(run_cli("attack --n 4 --m 2 --trials 400 --trial-log " + log_path.string() +
                " --out " + rep_path.string()) == 0);
  const json rep = json::parse(slurp(rep_path));
  CHECK(rep.at("theory_flip_rate") == 0.9375);
  CHECK(rep.at("per_point").at("trials") == 400);
  CHECK(rep.at("per_point").at("rate").get<double>() > 0.85);
  CHECK(rep.at("universal").at("rate").get<double>() > 0.75);

  std::istringstream log(slurp(log_path));
  std::string line;
  std::size_t rows = 0, flips = 0;
  REQUIRE(std::getline(log, line));
  CHECK(line.substr(0, 1) == "#");
  REQUIRE(std::getline(log, line));
  CHECK(line == "z1,z2,z3,z4,flipped");
  while (std::getline(log, line)) {
    ++rows;
    if (line.find(",true") != std::string::npos) ++flips;
  }
  CHECK(rows == 400);
  CHECK(flips == rep.at("per_point").at("hits").get<std::size_t>());
  fs::remove(rep_path);
  fs::remove(log_path);
}

TEST_CASE("certify reports the closed-form failure rates") {
  const auto p = tmp_path("certify.json");
  CHECK(run_cli("certify --n 4 --k 2 --M 10 --trials 1500 --out " + p.string()) == 0);
  const json rep = json::parse(slurp(p));
  CHECK(rep.at("theory_per_draw_failure") == 0.0625);
  CHECK(rep.at("theory_all_robust").get<double>() ==
        doctest::Approx(0.524460475048727).epsilon(1e-12));
  CHECK(rep.at("sample_radii").size() == 10);
  CHECK(rep.at("config").at("k") == 2);
  fs::remove(p);
}

TEST_CASE("exp emits reports in both formats and is reproducible") {
  const auto a = tmp_path("exp_a.json");
  const auto b = tmp_path("exp_b.json");
  const auto c = tmp_path("exp.csv");
  CHECK(run_cli("exp hoeffding --M 100 --trials 400 --out " + a.string()) == 0);
  CHECK(run_cli("exp hoeffding --M 100 --trials 400 --out " + b.string()) == 0);
  CHECK(strip_runtime(slurp(a)) == strip_runtime(slurp(b)));

  const json rep = json::parse(slurp(a));
  CHECK(rep.at("statement") == "hoeffding");
  CHECK(rep.at("metrics").at(0).at("pass") == true);

  CHECK(run_cli("exp hoeffding --M 100 --trials 400 --format csv --out " + c.string()) == 0);
  std::istringstream csv(slurp(c));
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line.substr(0, 22) == "# statement=hoeffding ");
  REQUIRE(std::getline(csv, line));
  CHECK(line == "name,empirical,bound_or_theory,ci_lo,ci_hi,comparison,tolerance,pass");
  REQUIRE(std::getline(csv, line));
  CHECK(line.find("count_reach_freq,") == 0);
  fs::remove(a);
  fs::remove(b);
  fs::remove(c);
}

TEST_CASE("every statement suite passes end to end at small sizes") {
  CHECK(run_cli("exp i --n 4 --M 20 --trials 300 >/dev/null") == 0);
  CHECK(run_cli("exp ii --n 4 --M 40 --trials 800 >/dev/null") == 0);
  CHECK(run_cli("exp iiia --n 4 --M 40 --trials 800 >/dev/null") == 0);
  CHECK(run_cli("exp iiib --n 4 --M 10 --alpha 0.1 --trials 800 >/dev/null") == 0);
}

TEST_CASE("bad invocations exit with the argument error code") {
  CHECK(run_cli("exp bogus >/dev/null 2>&1") == 2);
  CHECK(run_cli("sample --n 99 >/dev/null 2>&1") == 2);
  CHECK(run_cli(">/dev/null 2>&1") == 2);  // no subcommand
  CHECK(run_cli("sample --n 4 --eps 2 >/dev/null 2>&1") == 2);  // eps past sqrt(n) - 1
  const std::string env_cmd =
      "BLAB_SEED=abc " + std::string(kCli) + " sample --n 4 >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(env_cmd.c_str())) == 2);
  CHECK(run_cli("sample --out /no-such-dir/x.csv >/dev/null 2>&1") == 1);
}

}  // TEST_SUITE
