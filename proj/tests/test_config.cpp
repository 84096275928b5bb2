#include "doctest.h"
#include "scratch_dir.hpp"

#include "nlpl/config.hpp"
#include "nlpl/errors.hpp"

#include <string>

using namespace nlpl;

namespace {

const char* kMinimal = R"({
  "version": 1,
  "kernel": {"phi": {"type": "power", "s": 0.5}, "p": 2},
  "domain": {"shape": "ball", "center": [0], "radius": 1, "h": 0.05},
  "data": {"g": "x"},
  "tasks": [{"type": "solve"}]
})";

std::string message_of(const std::string& text) {
  try {
    parse_config(text, "exp.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string with(const std::string& from, const std::string& to) {
  std::string s = kMinimal;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("line and column of byte offsets") {
  const std::string text = "ab\ncd\n\nx";
  CHECK(line_col(text, 0) == std::pair{1, 1});
  CHECK(line_col(text, 1) == std::pair{1, 2});
  CHECK(line_col(text, 3) == std::pair{2, 1});
  CHECK(line_col(text, 7) == std::pair{4, 1});
}

TEST_CASE("a minimal config takes the documented defaults") {
  const auto cfg = parse_config(kMinimal, "exp.json");
  CHECK(cfg.version == 1);
  CHECK(cfg.kernel.s == 0.5);
  CHECK(cfg.kernel.n == 1);
  CHECK(cfg.h == 0.05);
  CHECK(cfg.R_trunc == doctest::Approx(8.0));
  CHECK(cfg.g(0.25, 0.0) == 0.25);
  CHECK(!cfg.far_field);
  REQUIRE(cfg.tasks.size() == 1);
  CHECK(cfg.tasks[0].kind == Task::Kind::Solve);
  CHECK(cfg.tasks[0].name == "solve");
  CHECK(cfg.output_dir == "out");
  CHECK(cfg.formats.csv);
  CHECK(cfg.formats.json);
  CHECK(cfg.formats.svg);
}

TEST_CASE("every task type and kernel family parses") {
  const std::string text = R"json({
    "version": 1,
    "kernel": {"phi": {"type": "log_perturbed", "s": 0.5, "gamma": 1}, "p": 3, "s_tilde": 0.9, "L": 2, "n": 2},
    "domain": {"shape": "box", "lo": [-1, -1], "hi": [1, 2], "h": 0.1, "R_trunc": 20},
    "data": {"g": {"x": [0, 1], "y": [0, 1], "values": [[0, 1], [2, 3]]},
             "far_field": {"type": "power", "A": 2, "beta": 0.5}},
    "tasks": [
      {"type": "check-kernel", "t_count": 11},
      {"type": "solve", "name": "sol", "start": "zero"},
      {"type": "tail", "x0": [0, 0.5], "r": [0.5, 1]},
      {"type": "verify", "reports": ["harnack", "holder"], "r": 0.4, "holder_centers": [0.1]},
      {"type": "stability", "f": "max(1 - x^2, 0)", "s_list": [0.6, 0.8], "local_limit": true}
    ],
    "output": {"directory": "results", "formats": ["csv"]}
  })json";
  const auto cfg = parse_config(text);
  CHECK(cfg.kernel.n == 2);
  CHECK(cfg.kernel.p == 3.0);
  CHECK(cfg.shape.kind == Shape::Kind::Box);
  CHECK(cfg.g(0.5, 0.5) == doctest::Approx(1.5));
  CHECK(cfg.g(5.0, -5.0) == doctest::Approx(1.0));  // clamped to the table
  REQUIRE(cfg.far_field);
  CHECK(cfg.far_field->kind == FarField::Kind::Power);
  REQUIRE(cfg.tasks.size() == 5);
  CHECK(cfg.tasks[0].check.t_count == 11);
  CHECK(cfg.tasks[1].solve.start == SolveOptions::Start::Zero);
  CHECK(cfg.tasks[2].tail.x0[1] == 0.5);
  CHECK(cfg.tasks[3].verify.R == doctest::Approx(0.8));
  CHECK(cfg.tasks[3].verify.rho == doctest::Approx(0.2));
  CHECK(cfg.tasks[4].stability.local_limit);
  CHECK(cfg.output_dir == "results");
  CHECK(!cfg.formats.svg);
}

TEST_CASE("schema errors name the source, line, column and pointer") {
  // "radius" sits on line 4; its value starts at column 55.
  const std::string msg = message_of(with("\"radius\": 1", "\"radius\": -1"));
  CHECK(msg.rfind("exp.json:4:", 0) == 0);
  CHECK(msg.find("/domain/radius") != std::string::npos);

  const std::string unknown = message_of(with("\"p\": 2", "\"p\": 2, \"q\": 3"));
  CHECK(unknown.rfind("exp.json:3:", 0) == 0);
  CHECK(unknown.find("unknown key 'q'") != std::string::npos);

  const std::string expr = message_of(with("\"g\": \"x\"", "\"g\": \"x +\""));
  CHECK(expr.rfind("exp.json:5:", 0) == 0);
  CHECK(expr.find("/data/g") != std::string::npos);

  const std::string task = message_of(with("\"solve\"", "\"sovle\""));
  CHECK(task.rfind("exp.json:6:", 0) == 0);
  CHECK(task.find("unknown task type") != std::string::npos);
}

TEST_CASE("malformed JSON is a located config error") {
  const std::string msg = message_of("{\n  \"version\": 1,\n  \"kernel\": {\n}");
  CHECK(msg.rfind("exp.json:4:", 0) == 0);
  CHECK(msg.find("malformed JSON") != std::string::npos);
  CHECK(message_of("").find("malformed JSON") != std::string::npos);
}

TEST_CASE("range and consistency violations are rejected") {
  CHECK(!message_of(with("\"version\": 1", "\"version\": 2")).empty());
  CHECK(!message_of(with("\"s\": 0.5", "\"s\": 1.5")).empty());
  CHECK(!message_of(with("\"h\": 0.05", "\"h\": 0")).empty());
  CHECK(!message_of(with("\"center\": [0]", "\"center\": [0, 0]")).empty());
  CHECK(!message_of(with("\"h\": 0.05", "\"h\": 0.05, \"R_trunc\": 1.5")).empty());
  CHECK(!message_of(with("{\"type\": \"solve\"}", "{\"type\": \"verify\", \"reports\": [\"harnak\"]}")).empty());
  CHECK(!message_of(with("{\"type\": \"solve\"}", "{\"type\": \"verify\", \"reports\": [\"harnack\"], \"r\": 0.5, \"R\": 0.6}")).empty());
  CHECK(!message_of(with("{\"type\": \"solve\"}", "{\"type\": \"solve\", \"name\": \"../x\"}")).empty());
}

TEST_CASE("a missing config file is an IO error") {
  testing::ScratchDir dir("config");
  CHECK_THROWS_AS(load_config(dir.path() / "absent.json"), IoError);
  const auto path = dir.path() / "exp.json";
  std::ofstream(path) << kMinimal;
  CHECK(load_config(path).source == path.string());
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(NLPL_SOURCE_DIR) / "configs")) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_config(e.path()));
    ++count;
  }
  CHECK(count >= 2);
}
