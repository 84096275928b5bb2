#include "nlpl/config.hpp"

#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"

#include <json.hpp>
#include <rapidjson/reader.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace nlpl {

using json = nlohmann::json;

std::pair<int, int> line_col(std::string_view text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

const char* task_kind_name(Task::Kind k) {
  switch (k) {
    case Task::Kind::CheckKernel: return "check-kernel";
    case Task::Kind::Solve: return "solve";
    case Task::Kind::Tail: return "tail";
    case Task::Kind::Verify: return "verify";
    case Task::Kind::Stability: return "stability";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Data source

namespace {

// Index i with t[i] <= x < t[i+1] and the weight of t[i+1]; clamped at the ends.
std::pair<std::size_t, double> bracket(const std::vector<double>& t, double x) {
  if (t.size() == 1 || x <= t.front()) return {0, 0.0};
  if (x >= t.back()) return {t.size() - 2, 1.0};
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  return {i, (x - t[i]) / (t[i + 1] - t[i])};
}

}  // namespace

double DataSource::operator()(double x, double y) const {
  if (expr) return (*expr)(x, y);
  if (values.empty()) return 0.0;
  const auto [i, wx] = bracket(tx, x);
  const std::size_t nx = tx.size();
  auto row = [&](std::size_t j) {
    const double a = values[j * nx + i];
    return nx == 1 ? a : a + wx * (values[j * nx + i + 1] - a);
  };
  if (ty.size() <= 1) return row(0);
  const auto [j, wy] = bracket(ty, y);
  return row(j) + wy * (row(j + 1) - row(j));
}

std::string DataSource::describe() const {
  if (expr) return expr->source();
  return "table(" + std::to_string(tx.size()) + (ty.empty() ? "" : "x" + std::to_string(ty.size())) + ")";
}

// ---------------------------------------------------------------------------
// JSON pointer -> byte offset, from a SAX pass

namespace {

class OffsetIndex {
 public:
  explicit OffsetIndex(std::string_view text) : text_(text) {
    std::string buf(text);
    rapidjson::StringStream ss(buf.c_str());
    Handler h{this, &ss};
    rapidjson::Reader reader;
    reader.Parse(ss, h);  // syntax errors are reported by the DOM parser
  }

  // Offset of the value at ptr, or of its nearest recorded ancestor.
  std::size_t find(std::string ptr) const {
    for (;;) {
      if (auto it = offsets_.find(ptr); it != offsets_.end()) return it->second;
      if (ptr.empty()) return 0;
      ptr.resize(ptr.rfind('/'));
    }
  }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string current() const {
    std::string p;
    for (const auto& f : stack_) {
      p += '/';
      if (f.array) {
        p += std::to_string(f.index);
      } else {
        for (char c : f.key) {
          if (c == '~') p += "~0";
          else if (c == '/') p += "~1";
          else p += c;
        }
      }
    }
    return p;
  }

  std::size_t value_start() const {
    std::size_t i = last_;
    while (i < text_.size() && (std::isspace(static_cast<unsigned char>(text_[i])) || text_[i] == ':' || text_[i] == ','))
      ++i;
    return i;
  }

  void scalar(std::size_t end) {
    offsets_.emplace(current(), value_start());
    advance(end);
  }
  void advance(std::size_t end) {
    if (!stack_.empty() && stack_.back().array) ++stack_.back().index;
    last_ = end;
  }

  struct Handler : rapidjson::BaseReaderHandler<rapidjson::UTF8<>, Handler> {
    OffsetIndex* self;
    rapidjson::StringStream* ss;
    Handler(OffsetIndex* s, rapidjson::StringStream* st) : self(s), ss(st) {}

    bool Default() {
      self->scalar(ss->Tell());
      return true;
    }
    bool String(const char*, rapidjson::SizeType, bool) { return Default(); }
    bool Key(const char* str, rapidjson::SizeType len, bool) {
      self->stack_.back().key.assign(str, len);
      self->last_ = ss->Tell();
      return true;
    }
    bool StartObject() { return start(false); }
    bool StartArray() { return start(true); }
    bool EndObject(rapidjson::SizeType) { return end(); }
    bool EndArray(rapidjson::SizeType) { return end(); }

    bool start(bool array) {
      self->offsets_.emplace(self->current(), ss->Tell() - 1);
      self->stack_.push_back({array, 0, {}});
      self->last_ = ss->Tell();
      return true;
    }
    bool end() {
      self->stack_.pop_back();
      self->advance(ss->Tell());
      return true;
    }
  };

  std::string_view text_;
  std::map<std::string, std::size_t> offsets_;
  std::vector<Frame> stack_;
  std::size_t last_ = 0;
};

// ---------------------------------------------------------------------------
// Typed access with located errors

class Reader {
 public:
  Reader(std::string_view text, std::string source) : text_(text), source_(std::move(source)), index_(text) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& what) const {
    const auto [line, col] = line_col(text_, index_.find(ptr));
    throw ConfigError(source_ + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      (ptr.empty() ? "/" : ptr) + ": " + what);
  }

  void object(const json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "expected an object");
  }

  void keys(const json& j, const std::string& ptr, std::initializer_list<const char*> allowed) const {
    object(j, ptr);
    for (const auto& [k, v] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        fail(ptr + "/" + k, "unknown key '" + k + "'");
    }
  }

  double number(const json& j, const std::string& ptr, double lo = -INFINITY, double hi = INFINITY) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v) || v < lo || v > hi) fail(ptr, "value " + num(v) + " outside [" + num(lo) + ", " + num(hi) + "]");
    return v;
  }

  double number(const json& obj, const std::string& ptr, const char* key, double def, double lo = -INFINITY,
                double hi = INFINITY) const {
    if (!obj.contains(key)) return def;
    return number(obj[key], ptr + "/" + key, lo, hi);
  }

  double positive(const json& obj, const std::string& ptr, const char* key, double def) const {
    const double v = number(obj, ptr, key, def);
    if (!(v > 0.0)) fail(ptr + "/" + key, "must be positive");
    return v;
  }

  int integer(const json& obj, const std::string& ptr, const char* key, int def, int lo, int hi) const {
    if (!obj.contains(key)) return def;
    const auto& j = obj[key];
    if (!j.is_number_integer()) fail(ptr + "/" + key, "expected an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > hi) fail(ptr + "/" + key, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  bool boolean(const json& obj, const std::string& ptr, const char* key, bool def) const {
    if (!obj.contains(key)) return def;
    if (!obj[key].is_boolean()) fail(ptr + "/" + key, "expected true or false");
    return obj[key].get<bool>();
  }

  std::string string(const json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  std::vector<double> numbers(const json& j, const std::string& ptr, double lo = -INFINITY,
                              double hi = INFINITY) const {
    if (!j.is_array()) fail(ptr, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], ptr + "/" + std::to_string(i), lo, hi));
    return out;
  }

  std::vector<double> numbers(const json& obj, const std::string& ptr, const char* key, std::vector<double> def,
                              double lo = -INFINITY, double hi = INFINITY) const {
    if (!obj.contains(key)) return def;
    return numbers(obj[key], ptr + "/" + key, lo, hi);
  }

  Expression expression(const json& j, const std::string& ptr) const {
    const std::string text = string(j, ptr);
    try {
      return Expression::parse(text);
    } catch (const ExprError& e) {
      fail(ptr, std::string("expression: ") + e.what());
    }
  }

  std::array<double, 2> point(const json& obj, const std::string& ptr, const char* key, int n,
                              std::array<double, 2> def) const {
    if (!obj.contains(key)) return def;
    const auto v = numbers(obj[key], ptr + "/" + key);
    if (static_cast<int>(v.size()) != n) fail(ptr + "/" + key, "expected " + std::to_string(n) + " coordinates");
    return {v[0], n == 2 ? v[1] : 0.0};
  }

 private:
  std::string_view text_;
  std::string source_;
  OffsetIndex index_;
};

KernelSpec parse_kernel(const Reader& rd, const json& k) {
  const std::string P = "/kernel";
  rd.keys(k, P, {"phi", "p", "s", "s_tilde", "L", "Lambda", "n"});
  KernelSpec spec;
  spec.p = rd.number(k, P, "p", 2.0, 1.0 + 1e-12, 1e3);
  spec.n = rd.integer(k, P, "n", 1, 1, 2);
  if (!k.contains("phi")) rd.fail(P, "missing 'phi'");
  const json& phi = k["phi"];
  const std::string Q = P + "/phi";
  rd.object(phi, Q);
  if (!phi.contains("type")) rd.fail(Q, "missing 'type'");
  const std::string type = rd.string(phi["type"], Q + "/type");
  std::optional<double> s_phi;
  auto need = [&](const char* key) {
    if (!phi.contains(key)) rd.fail(Q, std::string("missing '") + key + "'");
    return rd.number(phi[key], Q + "/" + key);
  };
  if (type == "power") {
    rd.keys(phi, Q, {"type", "s"});
    spec.phi = PowerPhi{need("s")};
    s_phi = std::get<PowerPhi>(spec.phi).s;
  } else if (type == "sum" || type == "min") {
    rd.keys(phi, Q, {"type", "s", "s2"});
    const double s = need("s"), s2 = need("s2");
    if (type == "sum") spec.phi = SumPhi{s, s2};
    else spec.phi = MinPhi{s, s2};
    s_phi = s;
  } else if (type == "log_perturbed") {
    rd.keys(phi, Q, {"type", "s", "gamma"});
    spec.phi = LogPerturbedPowerPhi{need("s"), need("gamma")};
    s_phi = std::get<LogPerturbedPowerPhi>(spec.phi).s;
  } else if (type == "log_borderline") {
    rd.keys(phi, Q, {"type", "s", "gamma"});
    spec.phi = LogBorderlinePhi{need("gamma"), need("s")};
    s_phi = std::get<LogBorderlinePhi>(spec.phi).s;
  } else if (type == "pure_log") {
    rd.keys(phi, Q, {"type", "gamma"});
    spec.phi = PureLogPhi{need("gamma")};
  } else if (type == "tabulated") {
    rd.keys(phi, Q, {"type", "t", "phi"});
    if (!phi.contains("t") || !phi.contains("phi")) rd.fail(Q, "tabulated phi needs 't' and 'phi'");
    TabulatedPhi tab{rd.numbers(phi["t"], Q + "/t", 0.0), rd.numbers(phi["phi"], Q + "/phi", 0.0)};
    if (tab.t.size() != tab.phi.size() || tab.t.size() < 2) rd.fail(Q, "'t' and 'phi' need the same length >= 2");
    spec.phi = std::move(tab);
  } else {
    rd.fail(Q + "/type", "unknown phi type '" + type + "'");
  }
  if (k.contains("s")) spec.s = rd.number(k["s"], P + "/s");
  else if (s_phi) spec.s = *s_phi;
  else if (!std::holds_alternative<PureLogPhi>(spec.phi)) rd.fail(P, "'s' is required for this phi");
  spec.s_tilde = rd.number(k, P, "s_tilde", 1.5);
  spec.L = rd.number(k, P, "L", 1.0);
  spec.Lambda = rd.number(k, P, "Lambda", 1.0);
  if (!std::holds_alternative<PureLogPhi>(spec.phi)) {
    try {
      spec.validate();
    } catch (const Error& e) {
      rd.fail(P, e.what());
    }
  }
  return spec;
}

void parse_domain(const Reader& rd, const json& d, ExperimentConfig& cfg) {
  const std::string P = "/domain";
  rd.keys(d, P, {"shape", "center", "radius", "lo", "hi", "h", "R_trunc"});
  const int n = cfg.kernel.n;
  const std::string shape = d.contains("shape") ? rd.string(d["shape"], P + "/shape") : "ball";
  if (shape == "ball") {
    cfg.shape = Shape::ball(rd.point(d, P, "center", n, {0.0, 0.0}), rd.positive(d, P, "radius", 1.0));
  } else if (shape == "box") {
    if (!d.contains("lo") || !d.contains("hi")) rd.fail(P, "a box needs 'lo' and 'hi'");
    const auto lo = rd.point(d, P, "lo", n, {}), hi = rd.point(d, P, "hi", n, {});
    for (int a = 0; a < n; ++a)
      if (!(hi[a] > lo[a])) rd.fail(P + "/hi", "hi must exceed lo in every coordinate");
    cfg.shape = Shape::box(lo, hi);
  } else {
    rd.fail(P + "/shape", "shape must be \"ball\" or \"box\"");
  }
  cfg.h = rd.positive(d, P, "h", 0.05);
  cfg.R_trunc = rd.positive(d, P, "R_trunc", 4.0 * cfg.shape.diameter(n));
  if (!(cfg.R_trunc > cfg.shape.diameter(n))) rd.fail(P + "/R_trunc", "R_trunc must exceed the diameter of Omega");
}

FarField parse_far_field(const Reader& rd, const json& f, const std::string& P) {
  rd.keys(f, P, {"type", "A", "beta"});
  if (!f.contains("type")) rd.fail(P, "missing 'type'");
  const std::string type = rd.string(f["type"], P + "/type");
  if (type == "none") return FarField::none();
  if (type == "constant") return FarField::constant(rd.number(f, P, "A", 0.0, 0.0));
  if (type == "power") return FarField::power(rd.number(f, P, "A", 0.0, 0.0), rd.number(f, P, "beta", 0.0));
  rd.fail(P + "/type", "far field type must be none, constant or power");
}

void parse_data(const Reader& rd, const json& d, ExperimentConfig& cfg) {
  const std::string P = "/data";
  rd.keys(d, P, {"g", "far_field"});
  if (d.contains("g")) {
    const json& g = d["g"];
    const std::string Q = P + "/g";
    if (g.is_string()) {
      cfg.g.expr = rd.expression(g, Q);
    } else {
      rd.keys(g, Q, {"x", "y", "values"});
      if (!g.contains("x") || !g.contains("values")) rd.fail(Q, "a table needs 'x' and 'values'");
      cfg.g.tx = rd.numbers(g["x"], Q + "/x");
      if (cfg.g.tx.empty() || !std::is_sorted(cfg.g.tx.begin(), cfg.g.tx.end()) ||
          std::adjacent_find(cfg.g.tx.begin(), cfg.g.tx.end()) != cfg.g.tx.end())
        rd.fail(Q + "/x", "'x' must be nonempty and strictly increasing");
      if (g.contains("y")) {
        cfg.g.ty = rd.numbers(g["y"], Q + "/y");
        if (cfg.g.ty.empty() || !std::is_sorted(cfg.g.ty.begin(), cfg.g.ty.end()) ||
            std::adjacent_find(cfg.g.ty.begin(), cfg.g.ty.end()) != cfg.g.ty.end())
          rd.fail(Q + "/y", "'y' must be nonempty and strictly increasing");
        const json& rows = g["values"];
        if (!rows.is_array() || rows.size() != cfg.g.ty.size()) rd.fail(Q + "/values", "expected one row per 'y'");
        for (std::size_t j = 0; j < rows.size(); ++j) {
          const auto row = rd.numbers(rows[j], Q + "/values/" + std::to_string(j));
          if (row.size() != cfg.g.tx.size()) rd.fail(Q + "/values/" + std::to_string(j), "row length differs from 'x'");
          cfg.g.values.insert(cfg.g.values.end(), row.begin(), row.end());
        }
      } else {
        cfg.g.values = rd.numbers(g["values"], Q + "/values");
        if (cfg.g.values.size() != cfg.g.tx.size()) rd.fail(Q + "/values", "length differs from 'x'");
      }
    }
  } else {
    cfg.g.expr = Expression::parse("0");
  }
  if (d.contains("far_field")) cfg.far_field = parse_far_field(rd, d["far_field"], P + "/far_field");
}

const std::set<std::string> kReportNames = {"sobolev_poincare", "caccioppoli",       "log_estimate",
                                            "log_oscillation",  "local_boundedness", "holder",
                                            "harnack",          "weak_harnack",      "embedding"};

Task parse_task(const Reader& rd, const json& t, const std::string& P, int n) {
  rd.object(t, P);
  if (!t.contains("type")) rd.fail(P, "missing 'type'");
  const std::string type = rd.string(t["type"], P + "/type");
  Task task{};
  task.name = t.contains("name") ? rd.string(t["name"], P + "/name") : type;
  if (task.name.empty() || task.name.find_first_of("/\\") != std::string::npos || task.name.front() == '.')
    rd.fail(P + "/name", "name must be a plain file stem");
  auto sweep = [&](const char* key, std::vector<double> def) {
    auto v = rd.numbers(t, P, key, std::move(def), 1e-9, 1.0 - 1e-9);
    if (v.empty()) rd.fail(P + "/" + key, "must not be empty");
    return v;
  };

  if (type == "check-kernel") {
    rd.keys(t, P, {"type", "name", "t_lo", "t_hi", "t_count", "dini_upper"});
    task.kind = Task::Kind::CheckKernel;
    task.check.t_lo = rd.positive(t, P, "t_lo", 1e-6);
    task.check.t_hi = rd.positive(t, P, "t_hi", 1e6);
    if (!(task.check.t_hi > task.check.t_lo)) rd.fail(P + "/t_hi", "t_hi must exceed t_lo");
    task.check.t_count = rd.integer(t, P, "t_count", 121, 2, 100000);
    task.check.dini_upper = rd.positive(t, P, "dini_upper", 1.0);
  } else if (type == "solve") {
    rd.keys(t, P, {"type", "name", "tol_g", "max_iter", "start"});
    task.kind = Task::Kind::Solve;
    task.solve.tol_g = rd.number(t, P, "tol_g", 0.0, 0.0);
    task.solve.max_iter = rd.integer(t, P, "max_iter", 20000, 1, 100000000);
    if (t.contains("start")) {
      const std::string s = rd.string(t["start"], P + "/start");
      if (s == "nearest") task.solve.start = SolveOptions::Start::NearestExterior;
      else if (s == "zero") task.solve.start = SolveOptions::Start::Zero;
      else rd.fail(P + "/start", "start must be \"nearest\" or \"zero\"");
    }
  } else if (type == "tail") {
    rd.keys(t, P, {"type", "name", "x0", "r"});
    task.kind = Task::Kind::Tail;
    task.tail.x0 = rd.point(t, P, "x0", n, {0.0, 0.0});
    if (t.contains("r")) {
      task.tail.r = t["r"].is_array() ? rd.numbers(t["r"], P + "/r", 1e-300) : std::vector<double>{rd.number(t["r"], P + "/r", 1e-300)};
      if (task.tail.r.empty()) rd.fail(P + "/r", "must not be empty");
    }
  } else if (type == "verify") {
    rd.keys(t, P, {"type", "name", "reports", "x0", "r", "R", "rho", "k", "d", "eps", "t", "a", "b", "holder_r",
                   "holder_centers", "test_functions", "s_sweep", "h_list", "ceiling", "tol_g", "max_iter"});
    task.kind = Task::Kind::Verify;
    auto& v = task.verify;
    if (!t.contains("reports")) rd.fail(P, "missing 'reports'");
    const json& reps = t["reports"];
    if (!reps.is_array() || reps.empty()) rd.fail(P + "/reports", "expected a nonempty array of report names");
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const std::string name = rd.string(reps[i], P + "/reports/" + std::to_string(i));
      if (!kReportNames.count(name)) rd.fail(P + "/reports/" + std::to_string(i), "unknown report '" + name + "'");
      v.reports.push_back(name);
    }
    v.x0 = rd.point(t, P, "x0", n, {0.0, 0.0});
    v.r = rd.positive(t, P, "r", 0.5);
    v.R = rd.positive(t, P, "R", 2.0 * v.r);
    v.rho = rd.positive(t, P, "rho", 0.5 * v.r);
    if (!(v.rho < v.r)) rd.fail(P + "/rho", "rho must be smaller than r");
    if (!(v.R >= 2.0 * v.r)) rd.fail(P + "/R", "R must be at least 2r");
    if (t.contains("k")) v.k = rd.number(t["k"], P + "/k");
    v.d = rd.positive(t, P, "d", 0.1);
    v.eps = rd.number(t, P, "eps", 0.5, 1e-12, 1.0);
    v.t = rd.positive(t, P, "t", 0.5);
    v.a = rd.positive(t, P, "a", 1.0);
    v.b = rd.number(t, P, "b", 2.0, 1.0 + 1e-12);
    v.holder_r = rd.positive(t, P, "holder_r", 0.5);
    v.holder_centers = rd.numbers(t, P, "holder_centers", {});
    v.test_functions = rd.integer(t, P, "test_functions", 0, 0, 100000);
    v.s_sweep = rd.numbers(t, P, "s_sweep", {}, 1e-9, 1.0 - 1e-9);
    v.h_list = rd.numbers(t, P, "h_list", {}, 1e-300);
    v.ceiling = rd.positive(t, P, "ceiling", 1e4);
    v.tol_g = rd.number(t, P, "tol_g", 0.0, 0.0);
    v.max_iter = rd.integer(t, P, "max_iter", 20000, 1, 100000000);
  } else if (type == "stability") {
    rd.keys(t, P, {"type", "name", "f", "s_list", "r_list", "fit_last", "local_limit", "local_s_list", "tol_g",
                   "max_iter"});
    task.kind = Task::Kind::Stability;
    auto& st = task.stability;
    if (t.contains("f")) st.f = rd.expression(t["f"], P + "/f");
    st.s_list = sweep("s_list", st.s_list);
    st.r_list = rd.numbers(t, P, "r_list", st.r_list, 1e-300);
    if (st.r_list.empty()) rd.fail(P + "/r_list", "must not be empty");
    st.fit_last = rd.integer(t, P, "fit_last", 3, 0, 1000);
    st.local_limit = rd.boolean(t, P, "local_limit", false);
    st.local_s_list = sweep("local_s_list", st.local_s_list);
    st.tol_g = rd.number(t, P, "tol_g", 0.0, 0.0);
    st.max_iter = rd.integer(t, P, "max_iter", 20000, 1, 100000000);
  } else {
    rd.fail(P + "/type", "unknown task type '" + type + "'");
  }
  return task;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                      e.what() + ")");
  }
  const Reader rd(text, source);
  rd.keys(root, "", {"version", "kernel", "domain", "data", "tasks", "output"});

  ExperimentConfig cfg;
  cfg.source = source;
  if (!root.contains("version")) rd.fail("", "missing 'version'");
  cfg.version = static_cast<int>(rd.number(root["version"], "/version"));
  if (cfg.version != 1) rd.fail("/version", "unsupported version " + std::to_string(cfg.version) + " (expected 1)");
  if (!root.contains("kernel")) rd.fail("", "missing 'kernel'");
  cfg.kernel = parse_kernel(rd, root["kernel"]);
  if (!root.contains("domain")) rd.fail("", "missing 'domain'");
  parse_domain(rd, root["domain"], cfg);
  if (root.contains("data")) parse_data(rd, root["data"], cfg);
  else cfg.g.expr = Expression::parse("0");

  if (!root.contains("tasks")) rd.fail("", "missing 'tasks'");
  const json& tasks = root["tasks"];
  if (!tasks.is_array()) rd.fail("/tasks", "expected an array");
  for (std::size_t i = 0; i < tasks.size(); ++i)
    cfg.tasks.push_back(parse_task(rd, tasks[i], "/tasks/" + std::to_string(i), cfg.kernel.n));

  if (root.contains("output")) {
    const json& o = root["output"];
    rd.keys(o, "/output", {"directory", "formats"});
    if (o.contains("directory")) cfg.output_dir = rd.string(o["directory"], "/output/directory");
    if (o.contains("formats")) {
      const json& f = o["formats"];
      if (!f.is_array()) rd.fail("/output/formats", "expected an array");
      cfg.formats = {false, false, false};
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string name = rd.string(f[i], "/output/formats/" + std::to_string(i));
        if (name == "csv") cfg.formats.csv = true;
        else if (name == "json") cfg.formats.json = true;
        else if (name == "svg") cfg.formats.svg = true;
        else rd.fail("/output/formats/" + std::to_string(i), "format must be csv, json or svg");
      }
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace nlpl
