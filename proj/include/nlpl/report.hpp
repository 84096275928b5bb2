#pragma once

// Writes result tables as CSV and JSON and draws simple SVG line plots.
// Numbers go through num(), so equal inputs give byte-identical files.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace nlpl {

using Value = std::variant<double, std::int64_t, bool, std::string>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string key, Value v) {
    fields.emplace_back(std::move(key), std::move(v));
    return *this;
  }
  const Value* find(const std::string& key) const;
};

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool line = true;  // false: points only
};

struct Plot {
  std::string title, xlabel, ylabel;
  bool log_x = false, log_y = false;
  std::vector<Series> series;
};

struct ReportSet {
  std::string stem;
  // Column order of the CSV. Empty: every key in order of first appearance.
  std::vector<std::string> columns;
  std::vector<Record> records;
  std::vector<Plot> plots;  // written as <stem>.svg, <stem>_plot2.svg, ...
};

struct Formats {
  bool csv = true;
  bool json = true;
  bool svg = true;
};

std::string to_text(const Value& v);
std::string csv_field(const std::string& s);  // quoted when it holds , " or a newline

std::string render_csv(const ReportSet& set);
std::string render_json(const ReportSet& set);
std::string render_svg(const Plot& plot);

// Writes into one output directory. A stem already used by this emitter gets
// a suffix _2, _3, ... so no file written in the run is overwritten.
class Emitter {
 public:
  Emitter(std::filesystem::path dir, Formats formats);  // creates dir; IoError on failure

  // Returns the paths written. IoError when a file cannot be written.
  std::vector<std::filesystem::path> emit(const ReportSet& set);
  std::filesystem::path write_text(const std::string& name, const std::string& text);

  const std::filesystem::path& directory() const { return dir_; }

 private:
  std::string claim(const std::string& stem);

  std::filesystem::path dir_;
  Formats formats_;
  std::map<std::string, int> used_;
};

}  // namespace nlpl
