#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "compactlin/cli.hpp"
#include "compactlin/io.hpp"
#include "support/fixtures.hpp"

using namespace compactlin;
using namespace compactlin::testing;
namespace fs = std::filesystem;

namespace {

int scratch_counter = 0;

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / ("compactlin_cli_" + std::to_string(scratch_counter++))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("linearize EX1") {
  Scratch s;
  const auto input = s.write("ex1.json", kEx1Json);
  const auto r = run_cli({"linearize", input, "--json"});
  CHECK(r.code == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["size_report"]["total_b"] == 4);
  CHECK(doc["size_report"]["num_f"] == 4);
  CHECK(doc["conditions"]["ok"] == true);
  CHECK(doc["lp"].get<std::string>().find("y1_3 + y2_3 - x3 = 0") != std::string::npos);

  const auto out = s.path("ex1.lp");
  CHECK(run_cli({"linearize", input, "-o", out}).code == kExitOk);
  CHECK(slurp(out).find("y1_3 + y2_3 - x3 = 0") != std::string::npos);
  const auto plan = Json::parse(slurp(out + ".plan.json"));
  CHECK(plan["b_sets"]["1"] == Json::array({3, 4}));
  CHECK(plan["b_sets"]["2"] == Json::array({1, 2}));

  const auto lib = run_cli({"linearize", input, "--liberti-mode"});
  CHECK(lib.code == kExitValidation);
  CHECK(lib.out.find("plan violates condition 2 at pair (1,3)") != std::string::npos);
}

TEST_CASE("verify") {
  Scratch s;
  const auto input = s.write("ex1.json", kEx1Json);
  const auto bad = run_cli({"verify", "--liberti-mode", input});
  CHECK(bad.code == kExitWitness);
  CHECK(bad.out.find("INCONSISTENT: pair (1,3) violates y <= x_i") != std::string::npos);
  CHECK(bad.out.find("x = (0,1,1,0)") != std::string::npos);

  const auto good = run_cli({"verify", input});
  CHECK(good.code == kExitOk);
  CHECK(good.out.find("checked 4 feasible x") != std::string::npos);

  const auto capped = run_cli({"verify", input, "--cap-x", "1"});
  CHECK(capped.code == kExitBudget);
  CHECK(capped.out.find("not exhaustively verified") != std::string::npos);

  const auto json = Json::parse(run_cli({"verify", input, "--liberti-mode", "--json"}).out);
  CHECK(json["consistency"]["consistent"] == false);
  CHECK(json["consistency"]["witness"]["pair"] == Json::array({1, 3}));
  CHECK(json["consistency"]["witness"]["bound"] == "y <= x_i");

  const auto plan_file = s.write("plan.json", R"({"b_sets": {"1": [3, 4], "2": [1, 2]}})");
  CHECK(run_cli({"verify", input, "--plan", plan_file}).code == kExitOk);
}

TEST_CASE("minimize, compare and emit") {
  Scratch s;
  const auto input = s.write("ex1.json", kEx1Json);
  const auto m = run_cli({"minimize", input, "--json"});
  CHECK(m.code == kExitOk);
  const auto doc = Json::parse(m.out);
  CHECK(doc["solution"]["objective"] == 8);
  CHECK(doc["closure_objective"] == 8);
  CHECK(doc["tu"]["structural_ok"] == true);

  const auto out = s.path("milp.lp");
  CHECK(run_cli({"minimize", input, "--weights", "1,0", "-o", out}).code == kExitOk);
  CHECK(slurp(out).find("fix_1: f1_3 = 1") != std::string::npos);
  CHECK(fs::exists(out + ".plan.json"));

  const auto c = run_cli({"compare", input, "--json"});
  CHECK(c.code == kExitOk);
  CHECK(Json::parse(c.out)["standard_rows"] == 3);
  CHECK(run_cli({"compare", input}).out.find("compact") != std::string::npos);

  CHECK(run_cli({"emit", input, "--standard"}).out.find("y1_3 - x1 <= 0") != std::string::npos);
  CHECK(run_cli({"emit", input, "--liberti-mode"}).code == kExitValidation);
  const auto unsafe = run_cli({"emit", input, "--liberti-mode", "--unsafe-emit"});
  CHECK(unsafe.code == kExitOk);
  CHECK(unsafe.out.find("\n\\ UNSAFE") < unsafe.out.find("Minimize"));
}

TEST_CASE("error exit codes") {
  Scratch s;
  CHECK(run_cli({"linearize", s.path("missing.json")}).code == kExitIo);
  CHECK(run_cli({"linearize", s.write("broken.json", "{\"n\": ")}).code == kExitIo);
  const auto uncovered = s.write("uncovered.json", R"({"n": 3, "assignment_sets": {"1": [1, 2]}, "products": []})");
  const auto r = run_cli({"linearize", uncovered});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("variable 3 uncovered") != std::string::npos);
  const auto input = s.write("ex1.json", kEx1Json);
  CHECK(run_cli({"linearize", input, "--weights", "-1,1"}).code == kExitIo);
  CHECK(run_cli({"frobnicate", input}).code == kExitIo);
  CHECK(run_cli({}).code == kExitIo);
  const auto qap = s.write("qap.json", R"({"n": 4, "assignment_sets": {"1": [1, 2], "2": [3, 4], "3": [1, 3], "4": [2, 4]},
                                          "products": [[1, 4], [2, 3]]})");
  CHECK(run_cli({"minimize", qap, "--budget", "1"}).code == kExitBudget);
}

TEST_CASE("simplify-trivial reports substitutions") {
  Scratch s;
  const auto input = s.write("t.json", R"({"n": 4, "assignment_sets": {"1": [1, 2], "2": [3, 4]},
                                           "products": [[1, 3], [1, 2], [4, 4]]})");
  const auto r = run_cli({"linearize", input, "--simplify-trivial", "--json"});
  CHECK(r.code == kExitOk);
  const auto doc = Json::parse(r.out);
  CHECK(doc["substitutions"] == Json::array({"y1_2 := 0", "y4_4 := x4"}));
  CHECK(doc["size_report"]["num_products"] == 1);
}

TEST_CASE("output is deterministic") {
  Scratch s;
  const auto input = s.write("ex1.json", kEx1Json);
  for (const char* cmd : {"linearize", "minimize", "verify", "compare", "emit"}) {
    const auto a = run_cli({cmd, input, "--json", "--seed", "3"});
    const auto b = run_cli({cmd, input, "--json", "--seed", "3"});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
}
