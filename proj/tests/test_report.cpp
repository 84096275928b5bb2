#include "doctest.h"
#include "scratch_dir.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/report.hpp"

#include <json.hpp>

#include <cmath>

using namespace nlpl;
using testing::ScratchDir;
using testing::slurp;

namespace {

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty record list gives a header-only CSV") {
  ReportSet set{"empty", {"report", "constant", "pass"}, {}, {}};
  CHECK(render_csv(set) == "report,constant,pass\n");
  CHECK(render_json(set) == "[]\n");
}

TEST_CASE("CSV columns, quoting and missing fields") {
  ReportSet set{"t", {}, {}, {}};
  set.records.push_back(Record{}.add("a", 1.5).add("b", std::string("x,y")).add("c", true));
  set.records.push_back(Record{}.add("a", std::int64_t{7}).add("d", std::string("say \"hi\"")));
  CHECK(render_csv(set) == "a,b,c,d\n1.5,\"x,y\",true,\n7,,,\"say \"\"hi\"\"\"\n");
}

TEST_CASE("JSON has one object per record and strings for non-finite numbers") {
  ReportSet set{"t", {}, {}, {}};
  set.records.push_back(Record{}.add("v", INFINITY).add("w", NAN).add("k", std::int64_t{3}).add("ok", false));
  set.records.push_back(Record{}.add("v", 0.25));
  const auto j = nlohmann::json::parse(render_json(set));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["v"].is_string());
  CHECK(j[0]["w"].is_string());
  CHECK(j[0]["k"] == 3);
  CHECK(j[0]["ok"] == false);
  CHECK(j[1]["v"] == 0.25);
}

TEST_CASE("numbers round-trip through the CSV text") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 123456789.0}) {
    ReportSet set{"t", {}, {Record{}.add("v", v)}, {}};
    const std::string csv = render_csv(set);
    CHECK(std::stod(csv.substr(2)) == v);
  }
}

TEST_CASE("holder fit record renders log-log points and the fitted line") {
  Plot plot{"oscillation decay", "rho", "osc", true, true, {}};
  const std::vector<double> rho{0.5, 0.25, 0.125, 0.0625, 0.03125};
  std::vector<double> osc;
  for (double r : rho) osc.push_back(2.0 * std::sqrt(r));
  plot.series.push_back({"osc", rho, osc, false});
  plot.series.push_back({"fit alpha = 0.5", rho, osc, true});
  const std::string svg = render_svg(plot);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_of(svg, "<circle") == rho.size());
  CHECK(count_of(svg, "<polyline") == 1);
  CHECK(svg.find("(log)") != std::string::npos);
  CHECK(svg.find("fit alpha = 0.5") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("non-positive values are left out of a log plot") {
  Plot plot{"t", "x", "y", false, true, {{"s", {1, 2, 3}, {1.0, 0.0, -1.0}, false}}};
  CHECK(count_of(render_svg(plot), "<circle") == 1);
}

TEST_CASE("duplicate stems get suffixes and nothing is overwritten") {
  ScratchDir dir("report");
  Emitter em(dir.path(), Formats{true, true, true});
  ReportSet a{"run", {}, {Record{}.add("k", std::int64_t{1})}, {}};
  ReportSet b{"run", {}, {Record{}.add("k", std::int64_t{2})}, {}};
  ReportSet c{"run_2", {}, {Record{}.add("k", std::int64_t{3})}, {}};
  em.emit(a);
  em.emit(b);
  em.emit(c);
  CHECK(slurp(dir.path() / "run.csv") == "k\n1\n");
  CHECK(slurp(dir.path() / "run_2.csv") == "k\n2\n");
  CHECK(slurp(dir.path() / "run_2_2.csv") == "k\n3\n");
}

TEST_CASE("plots after the first get numbered files") {
  ScratchDir dir("plots");
  Emitter em(dir.path(), Formats{false, false, true});
  Plot p{"t", "x", "y", false, false, {{"s", {0, 1}, {0, 1}, true}}};
  const auto written = em.emit(ReportSet{"fig", {}, {}, {p, p, p}});
  CHECK(written.size() == 3);
  CHECK(std::filesystem::exists(dir.path() / "fig.svg"));
  CHECK(std::filesystem::exists(dir.path() / "fig_plot2.svg"));
  CHECK(std::filesystem::exists(dir.path() / "fig_plot3.svg"));
  CHECK(!std::filesystem::exists(dir.path() / "fig.csv"));
}

TEST_CASE("an unwritable output directory is an IO error") {
  ScratchDir dir("io");
  const auto file = dir.path() / "plain_file";
  std::ofstream(file) << "x";
  CHECK_THROWS_AS(Emitter(file / "sub", Formats{}), IoError);
}
