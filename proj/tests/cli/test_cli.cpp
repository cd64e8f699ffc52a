#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "perex/cli.hpp"

using nlohmann::json;
using perex::cli::run_task;

namespace {

const std::filesystem::path kData = PEREX_TEST_DATA;

json load(const std::string& name) {
  std::ifstream f(kData / name);
  REQUIRE(f.good());
  return json::parse(f);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Runs the installed tool and returns its exit status; stdout goes to `out`.
int tool(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string(PEREX_TOOL) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("perex_cli_" + std::to_string(::getpid()) + "_" + name);
}

const char* const kTasks[] = {"exp.json",     "exp_runs.json",   "lexnf.json",      "trace_pump.json",
                              "pp_check.json", "gp_nf.json",      "gp_pump.json",    "gp_sqrt.json",
                              "gp_torsion.json", "bs_nf.json",    "bs_sqrt.json",    "bs_witness.json",
                              "quad_infinite.json", "quad_finite.json", "quad_inconclusive.json"};

}  // namespace

TEST_CASE("task results") {
  CHECK(run_task(load("exp.json")).report.at("exp") == 2);
  CHECK(run_task(load("exp_runs.json")).report.at("exp") == 1000000000);
  CHECK(run_task(load("lexnf.json")).report.at("nf") == "abbccd");

  const auto tp = run_task(load("trace_pump.json")).report;
  CHECK(tp.at("ok") == true);
  CHECK(tp.at("perfect") == true);

  const auto pp = run_task(load("pp_check.json")).report;
  CHECK(pp.at("infinite") == true);
  CHECK(pp.at("perfect") == true);

  CHECK(run_task(load("gp_nf.json")).report.at("nf_global") == "x x y y y");
  const auto gp = run_task(load("gp_pump.json")).report;
  CHECK(gp.at("family").at(3).at("nf") == "a b b c b c b c c d a d a d");
  CHECK(run_task(load("gp_sqrt.json")).report.at("count") == 1);
  CHECK(run_task(load("gp_torsion.json")).report.at("finite_power_submonoid") == true);

  const auto bs = run_task(load("bs_nf.json")).report;
  CHECK(bs.at("letters") == "taa");
  CHECK(bs.at("random_orders_agree") == true);
  const auto sq = run_task(load("bs_sqrt.json")).report;
  CHECK(sq.at("has_fsqrt") == false);
  CHECK(sq.at("count").get<int>() >= 3);
  const auto wit = run_task(load("bs_witness.json")).report;
  CHECK(wit.at("distinct_roots") == true);
  for (const auto& w : wit.at("witnesses")) CHECK(w.at("square_matches") == true);

  const auto qi = run_task(load("quad_infinite.json"));
  CHECK(qi.exit_code == 0);
  CHECK(qi.report.at("verdict") == "infinite");
  const auto qf = run_task(load("quad_finite.json"));
  CHECK(qf.exit_code == 0);
  CHECK(qf.report.at("verdict") == "finite");
  const auto qn = run_task(load("quad_inconclusive.json"));
  CHECK(qn.exit_code == 2);
  CHECK(qn.report.at("verdict") == "inconclusive");
}

TEST_CASE("trace pumping report lists the expected normal forms") {
  const auto r = run_task(load("trace_pump.json")).report;
  const auto& nfs = r.at("normal_forms");
  for (std::size_t n = 1; n < nfs.size(); ++n) {
    std::string expect = "ab";
    for (std::size_t i = 0; i < n; ++i) expect += "bc";
    expect += "cd";
    for (std::size_t i = 1; i < n; ++i) expect += "ad";
    CHECK(nfs.at(n).at("word") == expect);
  }
}

TEST_CASE("errors") {
  const auto s = run_task(load("bad_schema.json"));
  CHECK(s.exit_code == 1);
  CHECK(s.report.at("error").at("kind") == "schema");
  const auto i = run_task(load("bad_input.json"));
  CHECK(i.exit_code == 1);
  CHECK(i.report.at("error").at("kind") == "input");
  CHECK(run_task(json{{"task", "nope"}}).exit_code == 1);
  CHECK(run_task(json::array()).exit_code == 1);
  const auto d = run_task(json{{"task", "bs-witness"}, {"p", 3}, {"q", 5}});
  CHECK(d.exit_code == 1);
  CHECK(d.report.at("error").at("kind") == "domain");
}

TEST_CASE("flags override payload fields") {
  perex::cli::Options opt;
  opt.n_max = 3;
  const auto r = run_task(load("gp_pump.json"), opt).report;
  CHECK(r.at("family").size() == 4);
  CHECK(r.at("task").at("n_max") == 3);
}

TEST_CASE("embedded payloads reproduce their reports") {
  for (const char* name : kTasks) {
    CAPTURE(name);
    const auto first = run_task(load(name));
    const auto again = run_task(first.report.at("task"));
    REQUIRE(again.exit_code == first.exit_code);
    REQUIRE(again.report.dump(2) == first.report.dump(2));
  }
}

TEST_CASE("executable exit codes and output") {
  const auto out = scratch("out.json");
  CHECK(tool((kData / "exp.json").string(), out) == 0);
  CHECK(json::parse(slurp(out)).at("exp") == 2);
  CHECK(tool((kData / "bad_schema.json").string(), out) == 1);
  CHECK(json::parse(slurp(out)).at("error").at("kind") == "schema");
  CHECK(tool((kData / "missing.json").string(), out) == 1);
  CHECK(tool((kData / "quad_inconclusive.json").string(), out) == 2);
  CHECK(tool((kData / "quad_finite.json").string(), out) == 0);

  const auto file = scratch("report.json");
  CHECK(tool((kData / "bs_nf.json").string() + " --out " + file.string(), out) == 0);
  const auto written = slurp(file);
  CHECK(json::parse(written).at("letters") == "taa");

  // the written report is deterministic and its payload reruns identically
  const auto payload = scratch("payload.json");
  {
    std::ofstream f(payload);
    f << json::parse(written).at("task").dump();
  }
  CHECK(tool(payload.string(), out) == 0);
  CHECK(slurp(out) == written);
  CHECK(tool((kData / "bs_nf.json").string() + " --seed 7", out) == 0);
  CHECK(slurp(out) == written);

  for (const auto& p : {out, file, payload}) std::filesystem::remove(p);
}
