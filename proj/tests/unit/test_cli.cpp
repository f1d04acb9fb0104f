#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "hhf/cli.hpp"

using namespace hhf;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hhf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("gap subcommand") {
  const auto r = run({"gap", "--dim", "1", "--length", "4", "--coupling", "2"});
  CHECK(r.code == kExitPass);
  const auto j = Json::parse(r.out);
  CHECK(j["values"]["gap"]["delta"].get<double>() == doctest::Approx(0.408).epsilon(1e-3));
  CHECK(j["values"]["gap"]["a_half_coupling"].get<double>() == doctest::Approx(0.25));
  CHECK(j["config"]["L"] == 4);
}

TEST_CASE("invalid configurations exit with 2") {
  auto r = run({"gap", "--length", "6"});
  CHECK(r.code == kExitInvalidConfig);
  CHECK(r.err.find("L must be a multiple of 4") != std::string::npos);
  CHECK(run({"gap", "--coupling", "0"}).code == kExitInvalidConfig);
  CHECK(run({"verify", "--epsilon", "0.6", "thm2"}).code == kExitInvalidConfig);
  CHECK(run({"verify", "--fock-cap", "25", "thm1"}).code == kExitInvalidConfig);
  CHECK(run({"verify", "bogus"}).code == kExitInvalidConfig);
  CHECK(run({"sweep", "--dim", "1"}).code == kExitInvalidConfig);
  CHECK(run({"gap", "--unknown-flag"}).code == kExitInvalidConfig);
  CHECK(run({"gap", "--format", "xml"}).code == kExitInvalidConfig);
}

TEST_CASE("Fock cap exits with 4 and names the needed cap") {
  auto r = run({"verify", "--dim", "2", "--length", "4", "thm1"});
  CHECK(r.code == kExitCapExceeded);
  CHECK(r.err.find("32 modes") != std::string::npos);
  const auto j = Json::parse(r.out);
  CHECK(j["checks"][0]["status"] == "skipped: cap");
  r = run({"verify", "--length", "12", "--fock-cap", "20", "wick"});
  CHECK(r.code == kExitCapExceeded);
  CHECK(r.err.find("--fock-cap 24") != std::string::npos);
}

TEST_CASE("all: capped modules are skipped, the rest still runs") {
  const auto r = run({"verify", "--dim", "2", "--length", "4", "all"});
  CHECK(r.code == kExitCapExceeded);
  const auto j = Json::parse(r.out);
  int skipped = 0, thm3 = 0;
  for (const auto& c : j["checks"]) {
    skipped += c["status"] == "skipped: cap";
    thm3 += c["module"] == "thm3";
  }
  CHECK(skipped == 4);
  CHECK(thm3 > 0);
}

TEST_CASE("thm3 needs no Fock space") {
  const auto r = run({"verify", "--dim", "2", "--length", "64", "thm3"});
  CHECK((r.code == kExitPass || r.code == kExitFail));
  const auto j = Json::parse(r.out);
  CHECK(j["checks"].size() > 4);
}

TEST_CASE("failing records are named on stderr") {
  const auto r = run({"verify", "--length", "4", "thm3"});
  CHECK(r.code == kExitFail);
  CHECK(r.err.find("FAIL thm3.q7_exact_vs_a_half") != std::string::npos);
}

TEST_CASE("sweep table") {
  const auto r = run({"sweep", "--dim", "1", "--coupling", "2", "--lengths", "4,8,16,32"});
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line.rfind("L,delta,q7_per_vol,a_half,passed", 0) == 0);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 4);

  const auto single = run({"sweep", "--dim", "1", "--coupling", "2", "--lengths", "8", "--format", "json"});
  const auto gap = run({"gap", "--dim", "1", "--coupling", "2", "--length", "8"});
  CHECK(Json::parse(single.out)["rows"][0]["delta"] == Json::parse(gap.out)["values"]["gap"]["delta"]);
}

TEST_CASE("strong coupling warns but runs") {
  const auto r = run({"gap", "--coupling", "3"});
  CHECK(r.code == kExitPass);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("identical configuration gives byte-identical output") {
  const std::vector<std::string> args = {"verify", "--length", "4", "--seed", "5", "hf"};
  CHECK(run(args).out == run(args).out);
  CHECK(run({"verify", "--length", "4", "--timings", "hf"}).out.find("timings") != std::string::npos);
}
