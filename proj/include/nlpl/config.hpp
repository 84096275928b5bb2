#pragma once

// Experiment configuration: one JSON document, version 1. Every schema error
// is a ConfigError whose message starts with "<source>:<line>:<col>:".
// schema/experiment_config.schema.json describes the same format.

#include "nlpl/domain.hpp"
#include "nlpl/expr.hpp"
#include "nlpl/kernel.hpp"
#include "nlpl/report.hpp"
#include "nlpl/solver.hpp"
#include "nlpl/tail.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlpl {

// Exterior data: an expression in x, y or a table on a tensor grid
// (piecewise linear, constant beyond the last sample).
struct DataSource {
  std::optional<Expression> expr;
  std::vector<double> tx, ty;
  std::vector<double> values;  // row-major, ty.size() rows of tx.size()

  double operator()(double x, double y) const;
  std::string describe() const;
};

struct CheckKernelTask {
  double t_lo = 1e-6, t_hi = 1e6;
  int t_count = 121;
  double dini_upper = 1.0;
};

struct SolveTask {
  double tol_g = 0.0;
  int max_iter = 20000;
  SolveOptions::Start start = SolveOptions::Start::NearestExterior;
};

struct TailTask {
  std::array<double, 2> x0{0.0, 0.0};
  std::vector<double> r{1.0};
};

struct VerifyTask {
  std::vector<std::string> reports;
  std::array<double, 2> x0{0.0, 0.0};
  double r = 0.5;     // ball radius for every report
  double R = 1.0;     // outer radius (log, Harnack)
  double rho = 0.25;  // Caccioppoli inner radius
  std::optional<double> k;  // level; default the median of u on B_r
  double d = 0.1;           // log shift; scaled by the mean of u on B_r
  double eps = 0.5;
  double t = 0.5;           // weak Harnack exponent, as a fraction of t_bar (or absolute when sp >= n)
  double a = 1.0, b = 2.0;  // log oscillation
  double holder_r = 0.5;
  std::vector<double> holder_centers;  // x coordinates; default {x0}
  int test_functions = 0;   // random smooth f for sobolev_poincare (seeded); 0 uses the solution
  std::vector<double> s_sweep;   // empty: the kernel's s only
  std::vector<double> h_list;    // empty: the domain's h only
  double ceiling = 1e4;
  double tol_g = 0.0;
  int max_iter = 20000;
};

struct StabilityTask {
  std::optional<Expression> f;          // BBM test function; default a bump on Omega
  std::vector<double> s_list{0.5, 0.7, 0.9, 0.95, 0.99};
  std::vector<double> r_list{0.5};
  int fit_last = 3;
  bool local_limit = false;             // also run the solution study with the data g
  std::vector<double> local_s_list{0.5, 0.7, 0.9};
  double tol_g = 0.0;
  int max_iter = 20000;
};

struct Task {
  enum class Kind { CheckKernel, Solve, Tail, Verify, Stability };
  Kind kind;
  std::string name;  // output stem; defaults to the type, made unique by the emitter
  CheckKernelTask check;
  SolveTask solve;
  TailTask tail;
  VerifyTask verify;
  StabilityTask stability;
};

struct ExperimentConfig {
  int version = 1;
  KernelSpec kernel;
  Shape shape;
  double h = 0.05;
  double R_trunc = 4.0;
  DataSource g;
  std::optional<FarField> far_field;
  std::vector<Task> tasks;
  std::filesystem::path output_dir = "out";
  Formats formats;
  std::string source;  // file name used in messages
};

ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);  // IoError when unreadable

const char* task_kind_name(Task::Kind k);

// 1-based line and column of a byte offset.
std::pair<int, int> line_col(std::string_view text, std::size_t offset);

}  // namespace nlpl
