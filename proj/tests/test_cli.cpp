#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "clo/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run clo_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = clo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json clo_json(std::vector<std::string> args, int expected = 0) {
  args.insert(args.begin(), "--json");
  auto r = clo_run(args);
  CHECK(r.code == expected);
  return json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("clo_test_" + name);
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("cli ef and rank-distinguish") {
  auto j = clo_json({"ef", "--rank", "3", "omega", "zeta"});
  CHECK(j["command"] == "ef");
  CHECK(j["result"]["equivalent"] == false);
  CHECK(j["result"]["distinguishingRank"] == 2);
  CHECK(j["budgets"]["rankBudget"] == 3);

  j = clo_json({"ef", "--rank", "2", "omega", "omega+omega"});
  CHECK(j["result"]["equivalent"] == true);

  j = clo_json({"ef", "--rank", "3", "--oracle", "pt[]+pt[]+pt[]", "pt[]+pt[]"});
  CHECK(j["result"]["oracleAgrees"] == true);

  j = clo_json({"rank-distinguish", "--max", "4", "omega", "zeta"});
  CHECK(j["result"]["distinguishingRank"] == 2);
  j = clo_json({"rank-distinguish", "--max", "2", "omega", "omega+omega"});
  CHECK(j["result"]["distinguishingRank"].is_null());
}

TEST_CASE("cli classify exit codes") {
  auto j = clo_json({"classify", "eta"});
  CHECK(j["result"]["verdict"] == "Categorical");

  j = clo_json({"classify", "--rank-budget", "2", "--depth", "0", "sh(pt[a],pt[b],pt[c])"}, 2);
  CHECK(j["result"]["verdict"] == "Unknown");

  auto r = clo_run({"classify", "--rank-budget", "2", "--depth", "0", "sh(pt[a],pt[b],pt[c])"});
  CHECK(r.code == 2);
  CHECK(r.out.starts_with("Unknown"));
}

TEST_CASE("cli errors exit 1 with a typed message") {
  auto r = clo_run({"parse", "pt[a"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error (parse)") != std::string::npos);

  r = clo_run({"ef", "--rank", "-1", "omega", "zeta"});
  CHECK(r.code == 1);
  CHECK(r.err.find("error (usage)") != std::string::npos);

  r = clo_run({"frobnicate"});
  CHECK(r.code == 1);

  r = clo_run({"parse", "@/nonexistent/file.clo"});
  CHECK(r.code == 1);

  auto j = clo_json({"splice", "pt[a]+omega", "pt[b]", "pt[]"}, 1);
  CHECK(j["error"]["kind"] == "precondition");

  CHECK(clo_run({"--help"}).code == 0);
}

TEST_CASE("cli json output is deterministic apart from timing") {
  std::vector<std::string> args{"itypes", "--rank", "2", "omega+pt[a]+zeta"};
  auto a = clo_json(args), b = clo_json(args);
  CHECK(a.contains("timing_ms"));
  a.erase("timing_ms");
  b.erase("timing_ms");
  CHECK(a.dump() == b.dump());
  for (const char* key : {"command", "inputs", "result", "budgets", "stability"}) CHECK(a.contains(key));
}

TEST_CASE("cli term files and structures") {
  auto terms = temp_file("terms.clo", "A = omega\nB = zeta\n");
  auto j = clo_json({"ef", "--rank", "3", "@" + terms + ":A", "@" + terms + ":B"});
  CHECK(j["result"]["equivalent"] == false);
  j = clo_json({"print", "@" + terms});
  CHECK(j["result"]["terms"].size() == 2);
  CHECK(clo_run({"parse", "@" + terms + ":C"}).code == 1);

  auto s1 = temp_file("s1.json", R"({"universe":2,"relations":[{"name":"R","arity":2,"tuples":[[0,1]]}]})");
  auto s2 = temp_file("s2.json", R"({"universe":2,"relations":[{"name":"R","arity":2,"tuples":[[1,0]]}]})");
  auto s3 = temp_file("s3.json", R"({"universe":2,"relations":[{"name":"R","arity":2,"tuples":[[0,0]]}]})");
  j = clo_json({"verify-reduction", "--rank", "5", s1, s2});
  CHECK(j["result"]["isoOracle"] == true);
  CHECK(j["result"]["consistent"] == true);
  j = clo_json({"verify-reduction", "--rank", "5", s1, s3});
  CHECK(j["result"]["isoOracle"] == false);
  CHECK(j["result"]["consistent"] == true);
  CHECK(clo_json({"encode", s1})["result"]["term"] == clo_json({"encode", s2})["result"]["term"]);
}

TEST_CASE("cli census and witness") {
  auto j = clo_json({"census", "--family", "tn", "--n", "3", "--trunc", "4", "--rank", "4"});
  CHECK(j["result"]["pass"] == true);
  CHECK(j["result"]["modelCount"] == 3);

  j = clo_json({"witness", "--rank", "2", "omega", "zeta"});
  CHECK(j["result"]["checked"] == true);
  CHECK(j["result"]["transcript"]["nodes"].size() >= 1);

  j = clo_json({"enum-m", "--colors", "1", "--level", "1", "--count-only"});
  CHECK(j["result"]["count"] == 9);
}

TEST_CASE("cli config file") {
  auto cfg = temp_file("cfg.json", R"({"rankBudget": 2, "outputFormat": "json"})");
  auto c = clo::cli::load_config(cfg);
  CHECK(c.rankBudget == 2);
  CHECK(c.json);
  setenv("CLO_CONFIG", cfg.c_str(), 1);
  auto r = clo_run({"ef", "omega", "omega+omega"});
  unsetenv("CLO_CONFIG");
  auto j = json::parse(r.out);
  CHECK(j["budgets"]["rankBudget"] == 2);
  CHECK(j["result"]["equivalent"] == true);

  auto bad = temp_file("bad.json", R"({"rankBudget": -3})");
  CHECK_THROWS(clo::cli::load_config(bad));
}
