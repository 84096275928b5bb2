#include "doctest.h"
#include "scratch_dir.hpp"

#include "nlpl/runner.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>
#include <string>

using namespace nlpl;
using testing::ScratchDir;
using testing::slurp;

namespace {

std::string config_with(const std::string& kernel, const std::string& g, const std::string& tasks,
                        const std::string& extra = "") {
  return R"({"version": 1, "kernel": )" + kernel +
         R"(, "domain": {"shape": "ball", "center": [0], "radius": 1, "h": 0.1}, "data": {"g": )" + g +
         R"(}, "tasks": )" + tasks + extra + "}";
}

const std::string kPower = R"({"phi": {"type": "power", "s": 0.5}, "p": 2})";

struct Outcome {
  int code;
  std::string log, err;
};

Outcome run_text(const ScratchDir& dir, const std::string& text, RunOptions opts = {}) {
  const auto path = dir.path() / "exp.json";
  std::ofstream(path) << text;
  if (!opts.out) opts.out = dir.path() / "out";
  std::ostringstream log, err;
  const int code = run_config_file(path, opts, log, err);
  return {code, log.str(), err.str()};
}

std::vector<std::string> csv_column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::size_t col = 0;
  {
    std::istringstream h(line);
    std::string f;
    bool found = false;
    while (std::getline(h, f, ',')) {
      if (f == name) {
        found = true;
        break;
      }
      ++col;
    }
    REQUIRE(found);
  }
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string f;
    for (std::size_t k = 0; k <= col; ++k) std::getline(r, f, ',');
    out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("constant data gives a constant solution CSV and exit 0") {
  ScratchDir dir("run_const");
  const auto o = run_text(dir, config_with(kPower, "\"3\"", R"([{"type": "solve", "name": "sol"}])"));
  CHECK(o.code == kExitOk);
  const auto u = csv_column(slurp(dir.path() / "out" / "sol.csv"), "u");
  REQUIRE(u.size() > 10);
  for (const auto& v : u) CHECK(std::stod(v) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(csv_column(slurp(dir.path() / "out" / "sol_summary.csv"), "converged") == std::vector<std::string>{"true"});
}

TEST_CASE("a divergent Dini kernel is recorded and does not abort") {
  ScratchDir dir("run_dini");
  const std::string kernel = R"({"phi": {"type": "pure_log", "gamma": 1}, "p": 2})";
  const auto o = run_text(dir, config_with(kernel, "\"0\"", R"([{"type": "check-kernel", "name": "k"}])"));
  CHECK(o.code == kExitOk);
  CHECK(csv_column(slurp(dir.path() / "out" / "k.csv"), "dini_convergent") == std::vector<std::string>{"false"});
  CHECK(o.log.find("\"pass\": false") != std::string::npos);
}

TEST_CASE("malformed config exits 2 with a located message") {
  ScratchDir dir("run_bad");
  const auto o = run_text(dir, "{\"version\": 1,\n \"kernel\": 7}");
  CHECK(o.code == kExitConfig);
  CHECK(o.err.find("exp.json:2:") != std::string::npos);
}

TEST_CASE("unreadable config and unwritable output exit 4") {
  ScratchDir dir("run_io");
  std::ostringstream log, err;
  CHECK(run_config_file(dir.path() / "absent.json", {}, log, err) == kExitIo);
  std::ofstream(dir.path() / "file") << "x";
  RunOptions opts;
  opts.out = dir.path() / "file" / "out";
  CHECK(run_text(dir, config_with(kPower, "\"0\"", R"([{"type": "solve"}])"), opts).code == kExitIo);
}

TEST_CASE("a solve that stops early exits 1") {
  ScratchDir dir("run_iter");
  const auto o = run_text(dir, config_with(kPower, "\"max(x, 0)\"", R"([{"type": "solve", "max_iter": 2}])"));
  CHECK(o.code == kExitCheckFailed);
}

TEST_CASE("a subcommand runs only its tasks, or a default one") {
  ScratchDir dir("run_only");
  const std::string text =
      config_with(kPower, "\"x\"", R"([{"type": "solve", "name": "a"}, {"type": "tail", "name": "b"}])");
  RunOptions opts;
  opts.only = Task::Kind::Tail;
  CHECK(run_text(dir, text, opts).code == kExitOk);
  CHECK(std::filesystem::exists(dir.path() / "out" / "b.csv"));
  CHECK(!std::filesystem::exists(dir.path() / "out" / "a.csv"));
  opts.only = Task::Kind::CheckKernel;
  CHECK(run_text(dir, text, opts).code == kExitOk);
  CHECK(std::filesystem::exists(dir.path() / "out" / "check-kernel.csv"));
}

TEST_CASE("tail task matches the closed form for constant data") {
  ScratchDir dir("run_tail");
  const std::string text = R"({"version": 1, "kernel": {"phi": {"type": "power", "s": 0.5}, "p": 2},
    "domain": {"shape": "ball", "center": [0], "radius": 1, "h": 0.1},
    "data": {"g": "1", "far_field": {"type": "constant", "A": 1}},
    "tasks": [{"type": "tail", "name": "t", "r": [0.5]}]})";
  CHECK(run_text(dir, text).code == kExitOk);
  const auto v = csv_column(slurp(dir.path() / "out" / "t.csv"), "value");
  REQUIRE(v.size() == 1);
  CHECK(std::stod(v[0]) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("verify writes the aggregate table and a Holder plot") {
  ScratchDir dir("run_verify");
  const std::string text = R"({"version": 1, "kernel": {"phi": {"type": "power", "s": 0.5}, "p": 2},
    "domain": {"shape": "ball", "center": [0], "radius": 1, "h": 0.02},
    "data": {"g": "x"},
    "tasks": [{"type": "verify", "name": "v", "reports": ["holder", "harnack", "sobolev_poincare"],
               "r": 0.5, "holder_r": 0.5}]})";
  const auto o = run_text(dir, text);
  CHECK(o.code == kExitOk);
  const std::string agg = slurp(dir.path() / "out" / "v.csv");
  CHECK(agg.rfind("report,s,h,lhs,rhs_scaled,rhs_fixed,parts,constant,ceiling,pass,note\n", 0) == 0);
  CHECK(csv_column(agg, "pass") == std::vector<std::string>{"true", "true"});
  const auto alpha = csv_column(slurp(dir.path() / "out" / "v_holder.csv"), "alpha_hat");
  REQUIRE(alpha.size() == 1);
  CHECK(std::stod(alpha[0]) == doctest::Approx(1.0).epsilon(0.05));
  const std::string svg = slurp(dir.path() / "out" / "v_holder.svg");
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("identical runs write byte-identical tables") {
  ScratchDir a("run_det_a"), b("run_det_b");
  const std::string text = config_with(
      kPower, "\"max(x, 0)\"",
      R"([{"type": "solve", "name": "s"}, {"type": "stability", "name": "st"},
          {"type": "verify", "name": "v", "reports": ["sobolev_poincare"], "test_functions": 3}])");
  RunOptions opts;
  opts.threads = 3;
  CHECK(run_text(a, text, opts).code == kExitOk);
  CHECK(run_text(b, text, opts).code == kExitOk);
  for (const char* f : {"s.csv", "s.json", "st.csv", "st_limit.csv", "v.csv", "v.json"})
    CHECK(slurp(a.path() / "out" / f) == slurp(b.path() / "out" / f));
}

TEST_CASE("command line usage errors exit 2") {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string(NLPL_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("") == kExitConfig);
  CHECK(status("solve") == kExitConfig);
  CHECK(status("frobnicate --config x.json") == kExitConfig);
  CHECK(status("run --config /nonexistent/exp.json") == kExitIo);
  CHECK(status("--help") == 0);
}
