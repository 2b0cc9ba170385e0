#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hardylab/cli.hpp"

using namespace hardylab;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hardylab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const std::string& s) { return nlohmann::json::parse(s); }

}  // namespace

TEST_CASE("eval prints a phi value with the resolved config") {
  const Outcome o = invoke({"eval", "--alpha", "0.5", "--k", "3", "--u", "1.2"});
  REQUIRE(o.code == 0);
  const auto j = parse(o.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "eval");
  CHECK(j["config"]["k"] == 3);
  CHECK(j["result"]["phi"].get<double>() == doctest::Approx(-0.5822209628654194).epsilon(1e-13));
  CHECK(j.contains("version"));
}

TEST_CASE("orthocheck passes at the default tolerance") {
  const Outcome o = invoke({"orthocheck", "--alpha", "-0.5", "--kmax", "64"});
  CHECK(o.code == 0);
  CHECK(parse(o.out)["result"]["pass"] == true);
}

TEST_CASE("a failed check exits 1 with an error record") {
  const Outcome o = invoke({"orthocheck", "--alpha", "0", "--kmax", "16", "--tol", "1e-30"});
  CHECK(o.code == 1);
  const auto e = parse(o.err);
  CHECK(e["error"]["kind"] == "check_failed");
  CHECK(e["config"]["tol"].get<double>() == 1e-30);
}

TEST_CASE("usage errors exit 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({"eval", "--k", "abc"}).code == 2);
  CHECK(invoke({"eval", "--u", "-1"}).code == 2);
  CHECK(invoke({"eval", "--format", "xml"}).code == 2);
  CHECK(invoke({"kernel-check", "--r", "1.5"}).code == 2);
  CHECK(invoke({"hardy-sum", "--alpha", "-0.7"}).code == 2);
  CHECK(invoke({"sharpness", "--k-grid", "64:16:x2"}).code == 2);
  const Outcome o = invoke({"hardy-sum", "--function", "no-such-thing"});
  CHECK(o.code == 2);
  CHECK(parse(o.err)["error"]["kind"] == "usage");
}

TEST_CASE("help and version exit 0") {
  CHECK(invoke({"--help"}).code == 0);
  const Outcome v = invoke({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("identical config gives byte-identical CSV") {
  const std::vector<std::string> args = {"hardy-sum", "--function", "atom", "--K", "32", "--nmax", "64", "--format", "csv"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# hardylab ", 0) == 0);
  CHECK(a.out.find("K,E,N,partial_sum,tail_estimate\n") != std::string::npos);

  const std::vector<std::string> sweep = {"bound-check", "--which", "kernel-weighted-norm", "--format", "csv"};
  CHECK(invoke(sweep).out == invoke(sweep).out);
}

TEST_CASE("config file supplies defaults that flags override") {
  const auto path = std::filesystem::temp_directory_path() / "hardylab_cli_test.ini";
  {
    std::ofstream f(path);
    f << "alpha=0.5\nk=3\nu=2.0\n";
  }
  const Outcome from_file = invoke({"eval", "--config", path.string()});
  REQUIRE(from_file.code == 0);
  CHECK(parse(from_file.out)["config"]["u"].get<double>() == 2.0);
  const Outcome overridden = invoke({"eval", "--config", path.string(), "--u", "1.2"});
  const auto j = parse(overridden.out);
  CHECK(j["config"]["u"].get<double>() == 1.2);
  CHECK(j["config"]["k"] == 3);
  std::filesystem::remove(path);
}

TEST_CASE("output file receives the report") {
  const auto path = std::filesystem::temp_directory_path() / "hardylab_cli_out.json";
  const Outcome o = invoke({"parity-check", "--K", "64", "--output", path.string()});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  CHECK(j["result"]["pass"] == true);
  std::filesystem::remove(path);
}

TEST_CASE("sharpness half-integer branch and hardy-sum catalogue") {
  const Outcome h = invoke({"sharpness", "--alpha", "-0.5", "--k-grid", "64"});
  REQUIRE(h.code == 0);
  CHECK(parse(h.out)["result"]["samples"][0]["min_ratio"].get<double>() > 0.0);

  for (const char* fn : {"gaussian", "phi:2", "inv-sqrt", "indicator", "signed-quarter"}) {
    const Outcome s = invoke({"hardy-sum", "--basis", "hermite", "--function", fn, "--nmax", "64", "--E", "0.85"});
    CAPTURE(fn);
    CHECK(s.code == 0);
  }
  const Outcome inf = invoke({"hardy-sum", "--dim", "2", "--function", "atom", "--K", "16", "--nmax", "32", "--E", "1.2"});
  REQUIRE(inf.code == 0);
  CHECK(parse(inf.out)["result"]["tail_estimate"].is_string());
}

TEST_CASE("installed binary reports its version") {
  const std::string cmd = std::string("\"") + HARDYLAB_CLI_PATH + "\" --version > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string bad = std::string("\"") + HARDYLAB_CLI_PATH + "\" eval --u -3 2> /dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
