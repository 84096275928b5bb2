#include "nlpl/runner.hpp"

#include "nlpl/energy.hpp"
#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"
#include "nlpl/parallel.hpp"
#include "nlpl/report.hpp"
#include "nlpl/solver.hpp"
#include "nlpl/stability.hpp"
#include "nlpl/tail.hpp"
#include "nlpl/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

namespace nlpl {

namespace {

Value int_value(long long v) { return static_cast<std::int64_t>(v); }

// JSON has no inf or nan; those go out as the strings num() gives.
nlohmann::ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

KernelSpec with_s(const KernelSpec& base, double s) {
  if (!std::holds_alternative<PowerPhi>(base.phi))
    throw ConfigError("an s sweep needs a power kernel (phi type \"power\")");
  KernelSpec k = base;
  k.phi = PowerPhi{s};
  k.s = s;
  return k;
}

double max_abs_exterior(const GridFunction& g) {
  double m = 0.0;
  for (std::size_t j : g.domain->exterior_nodes()) m = std::max(m, std::abs(g[j]));
  return m;
}

SolveResult solve_for(const KernelSpec& spec, const GridFunction& data, double tol_g, int max_iter,
                      SolveOptions::Start start = SolveOptions::Start::NearestExterior) {
  const EnergyParams params = EnergyParams::with_default_regularization(spec, std::max(max_abs_exterior(data), 1.0));
  SolveOptions o;
  o.tol_g = tol_g;
  o.max_iter = max_iter;
  o.start = start;
  return solve_dirichlet(data, params, o);
}

std::string parts_text(const InequalityReport& r) {
  std::string s;
  for (const auto& p : r.rhs_parts) s += (s.empty() ? "" : ";") + p.name + "=" + num(p.value) + (p.scaled ? "" : "(fixed)");
  return s;
}

Record report_record(const InequalityReport& r, double s, double h) {
  Record rec;
  rec.add("report", r.name).add("s", s).add("h", h).add("lhs", r.lhs).add("rhs_scaled", r.scaled_sum());
  rec.add("rhs_fixed", r.fixed_sum()).add("parts", parts_text(r)).add("constant", r.measured_constant);
  rec.add("ceiling", r.ceiling).add("pass", r.pass).add("note", r.note).add("kernel", r.kernel);
  for (const auto& [k, v] : r.metadata)
    if (k != "s" && k != "h") rec.add("meta_" + k, v);
  return rec;
}

Record failed_record(const std::string& name, double s, double h, const std::string& why) {
  Record rec;
  rec.add("report", name).add("s", s).add("h", h).add("lhs", NAN).add("rhs_scaled", NAN).add("rhs_fixed", NAN);
  rec.add("parts", std::string()).add("constant", NAN).add("ceiling", NAN).add("pass", false).add("note", why);
  return rec;
}

const std::vector<std::string> kReportColumns = {"report", "s", "h", "lhs", "rhs_scaled", "rhs_fixed",
                                                 "parts", "constant", "ceiling", "pass", "note"};

// Smooth random test function: a few sine modes with seeded amplitudes.
PointFunction random_smooth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.3, 3.0), phase(0.0, 2 * std::numbers::pi);
  std::vector<double> a, w, ph, wy;
  for (int k = 0; k < 3; ++k) a.push_back(amp(rng)), w.push_back(freq(rng)), ph.push_back(phase(rng)), wy.push_back(amp(rng));
  return [=](double x, double y) {
    double v = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) v += a[k] * std::sin(w[k] * (x + wy[k] * y) + ph[k]);
    return v;
  };
}

double median_on(const GridFunction& u, const std::vector<std::size_t>& m) {
  std::vector<double> v;
  for (std::size_t i : m) v.push_back(u[i]);
  if (v.empty()) return 0.0;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

double mean_on(const GridFunction& u, const std::vector<std::size_t>& m) {
  double s = 0.0;
  for (std::size_t i : m) s += u[i];
  return m.empty() ? 0.0 : s / static_cast<double>(m.size());
}

class Run {
 public:
  Run(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log)
      : cfg_(cfg), opts_(opts), log_(log), emitter_(opts.out ? *opts.out : cfg.output_dir, cfg.formats) {}

  int execute() {
    std::vector<Task> tasks;
    for (const auto& t : cfg_.tasks)
      if (!opts_.only || t.kind == *opts_.only) tasks.push_back(t);
    if (tasks.empty() && opts_.only) tasks.push_back(default_task(*opts_.only));
    for (const auto& t : tasks) {
      log_ << "task " << t.name << " (" << task_kind_name(t.kind) << ")\n";
      switch (t.kind) {
        case Task::Kind::CheckKernel: check_kernel(t); break;
        case Task::Kind::Solve: solve(t); break;
        case Task::Kind::Tail: tail(t); break;
        case Task::Kind::Verify: verify(t); break;
        case Task::Kind::Stability: stability(t); break;
      }
    }
    log_ << (failed_ ? "some checks failed\n" : "all tasks succeeded\n");
    return failed_ ? kExitCheckFailed : kExitOk;
  }

 private:
  static Task default_task(Task::Kind kind) {
    Task t{};
    t.kind = kind;
    t.name = task_kind_name(kind);
    if (kind == Task::Kind::Verify)
      t.verify.reports = {"sobolev_poincare", "caccioppoli", "log_estimate", "log_oscillation", "local_boundedness",
                          "holder", "harnack", "weak_harnack", "embedding"};
    return t;
  }

  DomainPtr domain(double h) const { return build_domain(cfg_.shape, cfg_.kernel.n, h, cfg_.R_trunc); }

  PointFunction data_fn() const {
    const DataSource g = cfg_.g;
    return [g](double x, double y) { return g(x, y); };
  }

  void emit(const ReportSet& set) {
    for (const auto& p : emitter_.emit(set)) log_ << "  wrote " << p.string() << "\n";
  }

  // -------------------------------------------------------------------------

  void check_kernel(const Task& t) {
    const auto& spec = cfg_.kernel;
    Record rec;
    rec.add("kernel", describe(spec.phi)).add("p", spec.p).add("s", spec.s).add("n", int_value(spec.n));
    const DiniResult dini = check_dini(spec, 1e-10, t.check.dini_upper);
    std::string note;
    rec.add("dini_convergent", dini.convergent).add("dini_value", dini.value).add("dini_decay_exponent", dini.decay_exponent);
    try {
      const auto grid = log_grid(t.check.t_lo, t.check.t_hi, static_cast<std::size_t>(t.check.t_count));
      const ScalingBounds sb = check_scaling_bounds(spec, grid);
      rec.add("L_dec", sb.L_dec).add("L_inc", sb.L_inc).add("scaling_pass", sb.pass);
    } catch (const Error& e) {
      rec.add("L_dec", NAN).add("L_inc", NAN).add("scaling_pass", false);
      note = e.what();
    }
    if (dini.convergent) {
      try {
        rec.add("Phi_1", capital_phi(PhiTable(spec), 1.0)).add("exterior_mass_1", exterior_kernel_mass(spec, 1.0));
      } catch (const Error& e) {
        rec.add("Phi_1", NAN).add("exterior_mass_1", NAN);
        note += (note.empty() ? "" : "; ") + std::string(e.what());
      }
    }
    rec.add("note", note);

    // The nested record the subcommand prints.
    nlohmann::ordered_json j;
    j["kernel"] = describe(spec.phi);
    j["dini"] = {{"pass", dini.convergent}, {"value", json_number(dini.value)}};
    j["L_dec"] = json_number(std::get<double>(*rec.find("L_dec")));
    j["L_inc"] = json_number(std::get<double>(*rec.find("L_inc")));
    j["phi_samples"] = nlohmann::ordered_json::array();
    for (double tt : log_grid(1e-3, 1e3, 13)) {
      double ph = NAN;
      try {
        ph = phi_eval(spec, tt);
      } catch (const Error&) {
      }
      j["phi_samples"].push_back({{"t", tt}, {"phi", json_number(ph)}});
    }
    const std::string text = j.dump(2) + "\n";
    log_ << text;
    if (cfg_.formats.json) log_ << "  wrote " << emitter_.write_text(t.name + "_kernel.json", text).string() << "\n";
    ReportSet set{t.name,
                  {"kernel", "p", "s", "n", "dini_convergent", "dini_value", "dini_decay_exponent", "L_dec", "L_inc",
                   "scaling_pass", "Phi_1", "exterior_mass_1", "note"},
                  {rec},
                  {}};
    Plot plot{"shell sums of the Dini integral", "shell k", "S_k", false, true, {}};
    Series s{"S_k", {}, dini.shell_sums, false};
    for (std::size_t k = 0; k < dini.shell_sums.size(); ++k) s.x.push_back(static_cast<double>(k));
    plot.series.push_back(s);
    set.plots.push_back(plot);
    emit(set);
  }

  void solve(const Task& t) {
    const auto d = domain(cfg_.h);
    const auto data = impose_exterior_data(d, data_fn());
    const SolveResult res = solve_for(cfg_.kernel, data, t.solve.tol_g, t.solve.max_iter, t.solve.start);
    if (!res.converged) failed_ = true;
    const EnergyParams params =
        EnergyParams::with_default_regularization(cfg_.kernel, std::max(max_abs_exterior(data), 1.0));

    ReportSet sol{t.name, {}, {}, {}};
    for (std::size_t i = 0; i < d->size(); ++i) {
      Record r;
      const auto x = d->point(i);
      r.add("x", x[0]);
      if (d->n() == 2) r.add("y", x[1]);
      r.add("u", res.u[i]).add("interior", d->is_interior(i));
      sol.records.push_back(std::move(r));
    }
    if (d->n() == 1) {
      Series s{"u", {}, {}, true};
      for (std::size_t i = 0; i < d->size(); ++i) s.x.push_back(d->point(i)[0]), s.y.push_back(res.u[i]);
      sol.plots.push_back({"solution", "x", "u", false, false, {s}});
    }
    emit(sol);

    Record sum;
    sum.add("converged", res.converged).add("iterations", int_value(res.iterations)).add("final_energy", res.final_energy);
    sum.add("grad_norm", res.grad_norm).add("tol_g", res.tol_g).add("weak_residual", weak_residual(res.u, params));
    const RangeCheck rc = range_bounds_check(res.u, data, 1e-6 * std::max(max_abs_exterior(data), 1.0));
    sum.add("range_ok", rc.ok).add("nodes", int_value(static_cast<long long>(d->size())));
    sum.add("interior_nodes", int_value(static_cast<long long>(d->interior_nodes().size())));
    sum.add("meets_truncation_guideline", d->meets_truncation_guideline());
    ReportSet summary{t.name + "_summary", {}, {sum}, {}};
    Series trace{"energy", {}, res.energy_trace, true};
    for (std::size_t k = 0; k < res.energy_trace.size(); ++k) trace.x.push_back(static_cast<double>(k));
    summary.plots.push_back({"energy along the iteration", "iteration", "F", false, false, {trace}});
    emit(summary);
    log_ << "  " << (res.converged ? "converged" : "not converged") << " after " << res.iterations << " iterations\n";
  }

  void tail(const Task& t) {
    const auto d = domain(cfg_.h);
    const GridFunction g = sample(d, data_fn());
    const FarField far = cfg_.far_field ? *cfg_.far_field : boundary_layer_far_field(g);
    const PhiTable table(cfg_.kernel);
    ReportSet set{t.name, {}, {}, {}};
    for (double r : t.tail.r) {
      const TailResult tr = compute_tail({&g, far, t.tail.x0, r}, table);
      Record rec;
      rec.add("x0", t.tail.x0[0]);
      if (d->n() == 2) rec.add("y0", t.tail.x0[1]);
      rec.add("r", r).add("value", tr.value).add("quadrature_part", tr.quadrature_part);
      rec.add("remainder_bound", tr.remainder_bound).add("outer_radius", tr.outer_radius);
      set.records.push_back(std::move(rec));
      log_ << nlohmann::ordered_json{{"r", r}, {"value", json_number(tr.value)},
                                     {"quadrature_part", json_number(tr.quadrature_part)},
                                     {"remainder_bound", json_number(tr.remainder_bound)}}.dump()
           << "\n";
    }
    emit(set);
  }

  // -------------------------------------------------------------------------

  // u shifted up so that it is nonnegative on B_R (a solution plus a
  // constant is still a solution). Returns the shift.
  static double make_nonnegative(GridFunction& u, DiscreteDomain::Point x0, double R) {
    double lo = 0.0;
    for (std::size_t i : u.domain->ball_members(x0, R)) lo = std::min(lo, u[i]);
    if (lo < 0.0)
      for (double& v : u.values) v -= lo;
    return -lo;
  }

  void verify(const Task& t) {
    const auto& v = t.verify;
    const std::vector<double> s_list = v.s_sweep.empty() ? std::vector<double>{cfg_.kernel.s} : v.s_sweep;
    const std::vector<double> h_list = v.h_list.empty() ? std::vector<double>{cfg_.h} : v.h_list;

    ReportSet agg{t.name, kReportColumns, {}, {}};
    ReportSet solves{t.name + "_solves", {}, {}, {}};
    ReportSet holder{t.name + "_holder",
                     {"s", "h", "x0", "r", "alpha_hat", "c_hat", "degenerate", "max_residual", "note"},
                     {},
                     {}};
    std::mt19937_64 rng(opts_.seed);
    std::vector<PointFunction> test_fns;
    for (int k = 0; k < v.test_functions; ++k) test_fns.push_back(random_smooth(rng));

    for (double h : h_list) {
      const auto d = domain(h);
      const auto data = impose_exterior_data(d, data_fn());
      for (double s : s_list) {
        const KernelSpec spec = v.s_sweep.empty() ? cfg_.kernel : with_s(cfg_.kernel, s);
        const SolveResult res = solve_for(spec, data, v.tol_g, v.max_iter);
        if (!res.converged) failed_ = true;
        Record sr;
        sr.add("s", s).add("h", h).add("converged", res.converged).add("iterations", int_value(res.iterations));
        sr.add("grad_norm", res.grad_norm).add("tol_g", res.tol_g);
        solves.records.push_back(std::move(sr));
        log_ << "  s=" << num(s) << " h=" << num(h) << (res.converged ? " converged" : " not converged") << "\n";

        for (const auto& name : v.reports) {
          auto add = [&](const InequalityReport& r) {
            if (!r.pass) failed_ = true;
            agg.records.push_back(report_record(r, s, h));
          };
          try {
            run_report(name, v, spec, res.u, test_fns, s, h, add, holder);
          } catch (const PreconditionError& e) {
            failed_ = true;
            agg.records.push_back(failed_record(name, s, h, e.what()));
          } catch (const ResolutionError& e) {
            failed_ = true;
            agg.records.push_back(failed_record(name, s, h, e.what()));
          } catch (const ParameterError& e) {
            failed_ = true;
            agg.records.push_back(failed_record(name, s, h, e.what()));
          }
        }
      }
    }
    emit(agg);
    emit(solves);
    if (!holder.records.empty()) emit(holder);
    emit(sweep_summary(t.name, agg));
  }

  template <class Add>
  void run_report(const std::string& name, const VerifyTask& v, const KernelSpec& spec, const GridFunction& u0,
                  const std::vector<PointFunction>& test_fns, double s, double h, Add&& add, ReportSet& holder) {
    const auto& d = u0.domain;
    const auto members = d->ball_members(v.x0, v.r);
    if (name == "sobolev_poincare") {
      SobolevOptions o;
      o.ceiling = v.ceiling;
      if (test_fns.empty()) {
        add(sobolev_poincare_report(u0, v.x0, v.r, spec, o));
      } else {
        for (std::size_t k = 0; k < test_fns.size(); ++k) {
          auto r = sobolev_poincare_report(sample(d, test_fns[k]), v.x0, v.r, spec, o);
          r.metadata.emplace_back("test_function", static_cast<double>(k));
          add(r);
        }
      }
    } else if (name == "caccioppoli") {
      const double k = v.k ? *v.k : median_on(u0, members);
      for (bool plus : {true, false}) {
        CaccioppoliOptions o;
        o.plus = plus;
        o.far = cfg_.far_field;
        o.ceiling = v.ceiling;
        add(caccioppoli_report(u0, k, v.x0, v.rho, v.r, spec, o));
      }
    } else if (name == "log_estimate" || name == "log_oscillation") {
      GridFunction u = u0;
      const double shift = make_nonnegative(u, v.x0, v.R);
      const double mean = mean_on(u, members);
      const double dd = mean > 0.0 ? v.d * mean : v.d;
      LogOptions o;
      o.far = cfg_.far_field;  // u + c >= u, so a bound on |u| still bounds the new u_-
      o.ceiling = v.ceiling;
      auto r = name == "log_estimate" ? log_estimate_report(u, dd, v.x0, v.r, v.R, spec, o)
                                      : log_oscillation_report(u, v.a, v.b, dd, v.x0, v.r, v.R, spec, o);
      if (shift > 0.0) r.note += (r.note.empty() ? "" : "; ") + std::string("u shifted up by ") + num(shift);
      add(r);
    } else if (name == "local_boundedness") {
      BoundednessOptions o;
      o.far = cfg_.far_field;
      o.ceiling = v.ceiling;
      add(local_boundedness_report(u0, v.x0, v.r, v.eps, spec, o));
    } else if (name == "harnack" || name == "weak_harnack") {
      GridFunction u = u0;
      const double shift = make_nonnegative(u, v.x0, v.R);
      HarnackOptions o;
      o.far = cfg_.far_field;  // u + c >= u, so a bound on |u| still bounds the new u_-
      o.ceiling = v.ceiling;
      InequalityReport r;
      if (name == "harnack") {
        r = harnack_report(u, v.x0, v.r, v.R, spec, o);
      } else {
        const double t_bar = weak_harnack_t_bar(spec);
        r = weak_harnack_report(u, std::isfinite(t_bar) ? v.t * t_bar : v.t, v.x0, v.r, v.R, spec, o);
      }
      if (shift > 0.0) r.note += (r.note.empty() ? "" : "; ") + std::string("u shifted up by ") + num(shift);
      add(r);
    } else if (name == "embedding") {
      EmbeddingOptions o;
      o.ceiling = v.ceiling;
      for (const auto& r : embedding_report(u0, v.x0, v.r, spec, o)) add(r);
    } else if (name == "holder") {
      const std::vector<double> centers = v.holder_centers.empty() ? std::vector<double>{v.x0[0]} : v.holder_centers;
      for (double c : centers) {
        const DiscreteDomain::Point x0{c, d->n() == 2 ? v.x0[1] : 0.0};
        Record rec;
        rec.add("s", s).add("h", h).add("x0", c).add("r", v.holder_r);
        try {
          const HolderFit fit = holder_exponent_fit(u0, x0, v.holder_r);
          rec.add("alpha_hat", fit.alpha_hat).add("c_hat", fit.c_hat).add("degenerate", fit.degenerate);
          double res2 = 0.0;
          for (double e : fit.residuals) res2 = std::max(res2, std::abs(e));
          rec.add("max_residual", res2).add("note", fit.note);
          Plot plot{"oscillation decay at x0 = " + num(c) + ", s = " + num(s) + ", h = " + num(h), "rho", "osc",
                    true, true, {}};
          plot.series.push_back({"osc", fit.effective_radii, fit.osc, false});
          if (!fit.degenerate) {
            // residual = log osc - fitted, so the line is osc e^{-residual}
            Series line{"fit alpha = " + num(fit.alpha_hat), {}, {}, true};
            for (std::size_t k = 0; k < fit.osc.size(); ++k) {
              line.x.push_back(fit.effective_radii[k]);
              line.y.push_back(fit.osc[k] * std::exp(-fit.residuals[k]));
            }
            plot.series.push_back(line);
          }
          holder.plots.push_back(plot);
        } catch (const ResolutionError& e) {
          failed_ = true;
          rec.add("alpha_hat", NAN).add("note", std::string(e.what()));
        }
        holder.records.push_back(std::move(rec));
      }
    }
  }

  static ReportSet sweep_summary(const std::string& stem, const ReportSet& agg) {
    ReportSet out{stem + "_sweep", {}, {}, {}};
    std::vector<std::string> names;
    for (const auto& r : agg.records) {
      const std::string n = std::get<std::string>(*r.find("report"));
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
    }
    for (const auto& n : names) {
      double lo = INFINITY, hi = 0.0;
      long long count = 0;
      bool all = true;
      for (const auto& r : agg.records) {
        if (std::get<std::string>(*r.find("report")) != n) continue;
        ++count;
        all = all && std::get<bool>(*r.find("pass"));
        const double c = std::get<double>(*r.find("constant"));
        const double lhs = std::get<double>(*r.find("lhs"));
        if (lhs > 0.0 && std::isfinite(c)) lo = std::min(lo, c), hi = std::max(hi, c);
      }
      Record rec;
      rec.add("report", n).add("count", int_value(count)).add("min_constant", std::isfinite(lo) ? lo : NAN);
      rec.add("max_constant", std::isfinite(lo) ? hi : NAN).add("spread", std::isfinite(lo) && lo > 0.0 ? hi / lo : NAN);
      rec.add("all_pass", all);
      out.records.push_back(std::move(rec));
    }
    return out;
  }

  // -------------------------------------------------------------------------

  void stability(const Task& t) {
    const auto& st = t.stability;
    const auto& base = cfg_.kernel;
    if (!std::holds_alternative<PowerPhi>(base.phi)) throw ConfigError("the stability task needs a power kernel");
    const auto d = domain(cfg_.h);
    PointFunction f;
    if (st.f) {
      const Expression e = *st.f;
      f = [e](double x, double y) { return e(x, y); };
    } else {
      const Shape sh = cfg_.shape;
      const double rad = sh.kind == Shape::Kind::Ball ? sh.radius : 0.5 * std::min(sh.hi[0] - sh.lo[0], d->n() == 2 ? sh.hi[1] - sh.lo[1] : INFINITY);
      const auto c = sh.midpoint();
      f = [=](double x, double y) {
        const double q = ((x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1])) / (rad * rad);
        return q < 1.0 ? std::pow(1.0 - q, 3) : 0.0;
      };
    }
    GridFunction fg = sample(d, [&](double x, double y) { return f(x, d->n() == 2 ? y : 0.0); });

    ReportSet curve{t.name, {}, {}, {}};
    ReportSet limits{t.name + "_limit", {}, {}, {}};
    Plot plot{"normalized energy against s", "s", "energy", false, false, {}};
    BbmOptions bo;
    bo.fit_last = st.fit_last;
    double local = 0.0;
    for (double r : st.r_list) {
      const BbmCurve c = bbm_energy_curve(fg, power_family(base.p, base.n), r, st.s_list, bo);
      Series ser{"r = " + num(r), {}, {}, true};
      for (const auto& row : c.rows) {
        Record rec;
        rec.add("r", r).add("s", row.s).add("normalized", row.normalized).add("near", row.near).add("far", row.far);
        rec.add("far_bound", row.far_bound).add("diag", row.diag);
        curve.records.push_back(std::move(rec));
        ser.x.push_back(row.s);
        ser.y.push_back(row.normalized);
      }
      plot.series.push_back(ser);
      Record lim;
      lim.add("r", r).add("limit", c.limit).add("slope", c.slope).add("fit_points", int_value(c.fit_points));
      lim.add("local_energy", c.local_energy);
      limits.records.push_back(std::move(lim));
      local = c.local_energy;
    }
    Series target{"K int |Df|^p", {st.s_list.front(), st.s_list.back()}, {local, local}, true};
    plot.series.push_back(target);
    curve.plots.push_back(plot);
    emit(curve);
    emit(limits);

    if (st.local_limit) {
      if (d->n() != 1) throw ConfigError("local_limit needs a 1D domain");
      LocalLimitOptions lo;
      lo.solve.tol_g = st.tol_g;
      lo.solve.max_iter = st.max_iter;
      lo.far = cfg_.far_field;
      const auto rows = local_limit_solution_study(data_fn(), st.local_s_list, base.p, d, lo);
      ReportSet set{t.name + "_local", {}, {}, {}};
      Series dist{"distance", {}, {}, true}, tl{"Tail(g_+)", {}, {}, true};
      for (const auto& row : rows) {
        if (!row.converged) failed_ = true;
        Record rec;
        rec.add("s", row.s).add("distance", row.distance).add("tail", row.tail).add("converged", row.converged);
        rec.add("iterations", int_value(row.iterations)).add("grad_norm", row.grad_norm);
        set.records.push_back(std::move(rec));
        dist.x.push_back(row.s), dist.y.push_back(row.distance);
        tl.x.push_back(row.s), tl.y.push_back(row.tail);
      }
      set.plots.push_back({"distance to the local solution", "s", "L^p distance", false, false, {dist}});
      set.plots.push_back({"tail of the data", "s", "Tail", false, false, {tl}});
      emit(set);
    }
  }

  const ExperimentConfig& cfg_;
  const RunOptions& opts_;
  std::ostream& log_;
  Emitter emitter_;
  bool failed_ = false;
};

}  // namespace

int run_config(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  set_thread_count(opts.threads);
  return Run(cfg, opts, log).execute();
}

int run_config_file(const std::filesystem::path& path, const RunOptions& opts, std::ostream& log, std::ostream& err) {
  try {
    return run_config(load_config(path), opts, log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace nlpl
