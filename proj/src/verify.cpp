#include "nlpl/verify.hpp"

#include "nlpl/energy.hpp"
#include "nlpl/errors.hpp"
#include "nlpl/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nlpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> members_or_throw(const DiscreteDomain& d, DiscreteDomain::Point x0, double r,
                                          const char* who) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError(std::string(who) + ": radius must be positive");
  auto m = d.ball_members(x0, r);
  if (m.empty()) throw ResolutionError(std::string(who) + ": ball of radius " + num(r) + " holds no nodes");
  return m;
}

double nodal_mean(const std::vector<std::size_t>& m, const auto& g) {
  double s = 0.0;
  for (std::size_t i : m) s += g(i);
  return s / static_cast<double>(m.size());
}

double nodal_max(const GridFunction& u, const std::vector<std::size_t>& m) {
  double v = -kInf;
  for (std::size_t i : m) v = std::max(v, u[i]);
  return v;
}

double nodal_min(const GridFunction& u, const std::vector<std::size_t>& m) {
  double v = kInf;
  for (std::size_t i : m) v = std::min(v, u[i]);
  return v;
}

GridFunction map_values(const GridFunction& u, auto fn) {
  GridFunction w = u;
  for (double& v : w.values) v = fn(v);
  return w;
}

std::vector<std::uint8_t> mask_of(const DiscreteDomain& d, const std::vector<std::size_t>& m) {
  std::vector<std::uint8_t> mask(d.size(), 0);
  for (std::size_t i : m) mask[i] = 1;
  return mask;
}

// Raw exterior integral int_{|y-x0|>=r} |w|^{p-1} phi/|y-x0|^{n+p}, which is
// Phi(r)/r^p Tail(w; r)^{p-1}.
double tail_integral(const GridFunction& w, DiscreteDomain::Point x0, double r, const PhiTable& table,
                     const FarFieldModel& far) {
  const FarField ff = far ? *far : boundary_layer_far_field(w);
  const TailResult t = compute_tail({&w, ff, x0, r}, table);
  return (t.quadrature_part + t.remainder_bound) * table(r) / std::pow(r, table.spec().p);
}

double tail_of(const GridFunction& w, DiscreteDomain::Point x0, double r, const PhiTable& table,
               const FarFieldModel& far) {
  const FarField ff = far ? *far : boundary_layer_far_field(w);
  return compute_tail({&w, ff, x0, r}, table).value;
}

InequalityReport start(std::string name, const KernelSpec& spec, const GridFunction& f, double ceiling) {
  if (!f.domain) throw ShapeError(name + ": function has no domain");
  if (f.domain->n() != spec.n) throw ShapeError(name + ": kernel and domain dimensions differ");
  InequalityReport r;
  r.name = std::move(name);
  r.ceiling = ceiling;
  r.kernel = describe(spec.phi);
  r.metadata = {{"s", spec.s}, {"p", spec.p}, {"n", static_cast<double>(spec.n)}, {"h", f.domain->h()}};
  return r;
}

}  // namespace

double InequalityReport::scaled_sum() const {
  double s = 0.0;
  for (const auto& p : rhs_parts)
    if (p.scaled) s += p.value;
  return s;
}

double InequalityReport::fixed_sum() const {
  double s = 0.0;
  for (const auto& p : rhs_parts)
    if (!p.scaled) s += p.value;
  return s;
}

double InequalityReport::part(const std::string& n) const {
  for (const auto& p : rhs_parts)
    if (p.name == n) return p.value;
  throw std::out_of_range("InequalityReport: no part " + n);
}

void finalize(InequalityReport& r) {
  for (const auto& p : r.rhs_parts)
    if (!std::isfinite(p.value)) throw NumericError(r.name + ": right-side part " + p.name + " is not finite");
  if (!std::isfinite(r.lhs)) throw NumericError(r.name + ": left side is not finite");
  if (r.lhs <= 0.0) {
    r.measured_constant = 0.0;
    r.pass = true;
    return;
  }
  const double excess = std::max(r.lhs - r.fixed_sum(), 0.0);
  const double scaled = r.scaled_sum();
  if (excess == 0.0) r.measured_constant = 0.0;
  else r.measured_constant = scaled > 0.0 ? excess / scaled : kInf;
  r.pass = r.measured_constant <= r.ceiling;
}

// ---------------------------------------------------------------------------

InequalityReport sobolev_poincare_report(const GridFunction& f, DiscreteDomain::Point x0, double r,
                                         const KernelSpec& spec, const SobolevOptions& opts) {
  auto rep = start("sobolev_poincare", spec, f, opts.ceiling);
  const auto& d = *f.domain;
  const auto m = members_or_throw(d, x0, r, "sobolev_poincare_report");
  const double n = spec.n, p = spec.p, s = spec.s;
  double q, K;
  if (s * p < n) {
    q = n * p / (n - s * p);
    K = 1.0 / (std::pow(s, p) * std::pow(n - s * p, p - 1.0));
    rep.note = "critical exponent p*_s";
  } else {
    q = opts.p_tilde > 0.0 ? opts.p_tilde : 2.0 * p;
    if (!(q > p)) throw ParameterError("sobolev_poincare_report: sp >= n needs p_tilde > p");
    K = std::pow(q, 2.0 * p - 1.0) / std::pow(q - p, p);
    rep.note = "supercritical form with p_tilde";
  }
  const double mean = nodal_mean(m, [&](std::size_t i) { return f[i]; });
  const double qmean = nodal_mean(m, [&](std::size_t i) { return std::pow(std::abs(f[i] - mean), q); });
  rep.lhs = std::pow(qmean, p / q);

  const PhiTable table(spec);
  const double measure = static_cast<double>(m.size()) * d.cell_measure();
  const double energy = gagliardo_seminorm_p(f, spec, mask_of(d, m));
  rep.rhs_parts = {{"energy", K * std::pow(r, p) / table(r) * energy / measure, true}};
  rep.metadata.insert(rep.metadata.end(), {{"r", r}, {"q", q}, {"K", K}});
  finalize(rep);
  return rep;
}

InequalityReport caccioppoli_report(const GridFunction& u, double k, DiscreteDomain::Point x0, double rho,
                                    double r, const KernelSpec& spec, const CaccioppoliOptions& opts) {
  auto rep = start(opts.plus ? "caccioppoli_plus" : "caccioppoli_minus", spec, u, opts.ceiling);
  if (!(rho > 0.0 && rho < r)) throw ParameterError("caccioppoli_report: need 0 < rho < r");
  const auto& d = *u.domain;
  const auto inner = members_or_throw(d, x0, rho, "caccioppoli_report");
  const auto outer = members_or_throw(d, x0, r, "caccioppoli_report");
  const double p = spec.p, n = spec.n;
  const GridFunction w = map_values(u, [&](double v) { return std::max(opts.plus ? v - k : k - v, 0.0); });

  rep.lhs = gagliardo_seminorm_p(w, spec, mask_of(d, inner));
  const PhiTable table(spec);
  const double hn = d.cell_measure();
  double wp = 0.0, w1 = 0.0;
  for (std::size_t i : outer) wp += std::pow(w[i], p) * hn, w1 += w[i] * hn;
  const double Phi_r = table(r);
  const double tail_int = w1 > 0.0 ? tail_integral(w, x0, r, table, opts.far) : 0.0;
  rep.rhs_parts = {
      {"energy", Phi_r / std::pow(r - rho, p) * wp, true},
      {"tail", std::pow(r / (r - rho), n + spec.s_tilde * p) * tail_int * w1, true},
  };
  rep.metadata.insert(rep.metadata.end(), {{"k", k}, {"rho", rho}, {"r", r}});
  finalize(rep);
  return rep;
}

namespace {

// Precondition and tail term shared by the log and Harnack reports:
// Phi(R)/R^p Tail(u_-; R)^{p-1}.
double negative_tail_integral(const GridFunction& u, DiscreteDomain::Point x0, double r, double R,
                              const PhiTable& table, const FarFieldModel& far, const char* who) {
  const auto& d = *u.domain;
  if (!(r > 0.0) || !(R >= 2.0 * r * (1.0 - 1e-12)))
    throw ParameterError(std::string(who) + ": need 0 < r <= R/2");
  for (std::size_t i : d.ball_members(x0, R)) {
    if (u[i] < 0.0)
      throw PreconditionError(std::string(who) + ": u < 0 at node " + std::to_string(i) + " inside B_R");
  }
  const GridFunction neg = map_values(u, [](double v) { return std::max(-v, 0.0); });
  const bool any = std::any_of(neg.values.begin(), neg.values.end(), [](double v) { return v > 0.0; });
  if (!any && (!far || far->A == 0.0 || far->kind == FarField::Kind::None)) return 0.0;
  return tail_integral(neg, x0, R, table, far);
}

}  // namespace

InequalityReport log_estimate_report(const GridFunction& u, double dd, DiscreteDomain::Point x0, double r,
                                     double R, const KernelSpec& spec, const LogOptions& opts) {
  auto rep = start("log_estimate", spec, u, opts.ceiling);
  if (!(dd > 0.0) || !std::isfinite(dd)) throw ParameterError("log_estimate_report: d must be positive");
  const PhiTable table(spec);
  const double tail_int = negative_tail_integral(u, x0, r, R, table, opts.far, "log_estimate_report");
  const auto& d = *u.domain;
  const auto m = members_or_throw(d, x0, r, "log_estimate_report");
  const auto mask = mask_of(d, m);
  GridFunction lg(u.domain, 0.0);
  for (std::size_t i : m) lg[i] = std::log(u[i] + dd);
  rep.lhs = gagliardo_seminorm_p(lg, spec, mask);
  const double n = spec.n, p = spec.p;
  rep.rhs_parts = {
      {"base", std::pow(r, n - p) * table(r), true},
      {"tail", std::pow(r, n) * std::pow(dd, 1.0 - p) * tail_int, true},
  };
  rep.metadata.insert(rep.metadata.end(), {{"d", dd}, {"r", r}, {"R", R}});
  finalize(rep);
  return rep;
}

InequalityReport log_oscillation_report(const GridFunction& u, double a, double b, double dd,
                                        DiscreteDomain::Point x0, double r, double R, const KernelSpec& spec,
                                        const LogOptions& opts) {
  auto rep = start("log_oscillation", spec, u, opts.ceiling);
  if (!(a > 0.0) || !(dd > 0.0) || !(b > 1.0)) throw ParameterError("log_oscillation_report: need a, d > 0 and b > 1");
  const PhiTable table(spec);
  const double tail_int = negative_tail_integral(u, x0, r, R, table, opts.far, "log_oscillation_report");
  const auto m = members_or_throw(*u.domain, x0, r, "log_oscillation_report");
  const double p = spec.p;
  const double top = std::log(a + dd), cap = std::log(b);
  auto v = [&](std::size_t i) { return std::min(std::max(top - std::log(u[i] + dd), 0.0), cap); };
  const double mean = nodal_mean(m, v);
  rep.lhs = nodal_mean(m, [&](std::size_t i) { return std::pow(std::abs(v(i) - mean), p); });
  rep.rhs_parts = {
      {"base", 1.0, true},
      {"tail", std::pow(dd, 1.0 - p) * std::pow(r, p) / table(r) * tail_int, true},
  };
  rep.metadata.insert(rep.metadata.end(), {{"a", a}, {"b", b}, {"d", dd}, {"r", r}, {"R", R}});
  finalize(rep);
  return rep;
}

InequalityReport local_boundedness_report(const GridFunction& u, DiscreteDomain::Point x0, double r, double eps,
                                          const KernelSpec& spec, const BoundednessOptions& opts) {
  auto rep = start("local_boundedness", spec, u, opts.ceiling);
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("local_boundedness_report: eps must lie in (0, 1]");
  const auto& d = *u.domain;
  const auto half = members_or_throw(d, x0, 0.5 * r, "local_boundedness_report");
  const auto full = members_or_throw(d, x0, r, "local_boundedness_report");
  const double n = spec.n, p = spec.p, s = spec.s;
  rep.lhs = nodal_max(u, half);
  const double mean_p = nodal_mean(full, [&](std::size_t i) { return std::pow(std::max(u[i], 0.0), p); });
  const GridFunction plus = map_values(u, [](double v) { return std::max(v, 0.0); });
  const PhiTable table(spec);
  const double tail = tail_of(plus, x0, 0.5 * r, table, opts.far);
  rep.rhs_parts = {
      {"mean", std::pow(eps, -n * (p - 1.0) / (s * p * p)) * std::pow(mean_p, 1.0 / p), true},
      {"tail", eps * tail, false},
  };
  rep.metadata.insert(rep.metadata.end(), {{"r", r}, {"eps", eps}});
  finalize(rep);
  return rep;
}

HolderFit holder_exponent_fit(const GridFunction& u, DiscreteDomain::Point x0, double r, int count) {
  if (!u.domain) throw ShapeError("holder_exponent_fit: function has no domain");
  if (!(r > 0.0)) throw ParameterError("holder_exponent_fit: r must be positive");
  if (count < 5) throw ParameterError("holder_exponent_fit: at least 5 radii are required");
  const auto& d = *u.domain;
  HolderFit fit;
  for (int k = 0; k < count; ++k) {
    const double rho = r * std::ldexp(1.0, -k);
    const auto m = d.ball_members(x0, rho);
    double reach = 0.0;
    for (std::size_t i : m) {
      const auto pt = d.point(i);
      reach = std::max(reach, std::hypot(pt[0] - x0[0], d.n() == 2 ? pt[1] - x0[1] : 0.0));
    }
    // Resolvable: the ball reaches at least one spacing from the center.
    if (reach < d.h() * (1.0 - 1e-9))
      throw ResolutionError("holder_exponent_fit: radius " + num(rho) + " is below the lattice spacing");
    fit.radii.push_back(rho);
    fit.effective_radii.push_back(reach);
    fit.osc.push_back(nodal_max(u, m) - nodal_min(u, m));
  }
  std::vector<double> X, Y;
  for (std::size_t k = 0; k < fit.osc.size(); ++k) {
    if (fit.osc[k] > 0.0) X.push_back(std::log(fit.effective_radii[k])), Y.push_back(std::log(fit.osc[k]));
  }
  if (X.size() < 2) {
    fit.degenerate = true;
    fit.alpha_hat = kInf;
    fit.note = "degenerate: unbounded";
    return fit;
  }
  const double mx = std::accumulate(X.begin(), X.end(), 0.0) / X.size();
  const double my = std::accumulate(Y.begin(), Y.end(), 0.0) / Y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) sxy += (X[k] - mx) * (Y[k] - my), sxx += (X[k] - mx) * (X[k] - mx);
  fit.alpha_hat = sxy / sxx;
  const double b = my - fit.alpha_hat * mx;
  for (std::size_t k = 0; k < X.size(); ++k) fit.residuals.push_back(Y[k] - (b + fit.alpha_hat * X[k]));
  for (std::size_t k = 0; k < fit.osc.size(); ++k)
    fit.c_hat = std::max(fit.c_hat, fit.osc[k] / std::pow(fit.effective_radii[k] / r, fit.alpha_hat));
  if (X.size() < fit.osc.size()) fit.note = "zero oscillation at some radii left out of the fit";
  return fit;
}

namespace {

InequalityReport harnack_like(std::string name, const GridFunction& u, double lhs_value, double inf_value,
                              double r, double R, const KernelSpec& spec,
                              const PhiTable& table, double tail_int, double ceiling) {
  auto rep = start(std::move(name), spec, u, ceiling);
  const double p = spec.p;
  rep.lhs = lhs_value;
  // (r^p/Phi(r) Phi(R)/R^p)^{1/(p-1)} Tail(u_-; R) = (r^p/Phi(r) * tail_int)^{1/(p-1)}.
  const double tail_term = tail_int > 0.0 ? std::pow(std::pow(r, p) / table(r) * tail_int, 1.0 / (p - 1.0)) : 0.0;
  rep.rhs_parts = {{"inf", inf_value, true}, {"tail", tail_term, true}};
  rep.metadata.insert(rep.metadata.end(), {{"r", r}, {"R", R}});
  return rep;
}

}  // namespace

InequalityReport harnack_report(const GridFunction& u, DiscreteDomain::Point x0, double r, double R,
                                const KernelSpec& spec, const HarnackOptions& opts) {
  if (!u.domain) throw ShapeError("harnack_report: function has no domain");
  const PhiTable table(spec);
  const double tail_int = negative_tail_integral(u, x0, r, R, table, opts.far, "harnack_report");
  const auto m = members_or_throw(*u.domain, x0, r, "harnack_report");
  auto rep = harnack_like("harnack", u, nodal_max(u, m), nodal_min(u, m), r, R, spec, table, tail_int,
                          opts.ceiling);
  finalize(rep);
  return rep;
}

double weak_harnack_t_bar(const KernelSpec& spec) {
  const double n = spec.n, p = spec.p, s = spec.s;
  return s * p < n ? n * (p - 1.0) / (n - s * p) : kInf;
}

InequalityReport weak_harnack_report(const GridFunction& u, double t, DiscreteDomain::Point x0, double r,
                                     double R, const KernelSpec& spec, const HarnackOptions& opts) {
  if (!u.domain) throw ShapeError("weak_harnack_report: function has no domain");
  const double t_bar = weak_harnack_t_bar(spec);
  if (!(t > 0.0 && t < t_bar)) throw ParameterError("weak_harnack_report: need 0 < t < " + num(t_bar));
  const PhiTable table(spec);
  const double tail_int = negative_tail_integral(u, x0, r, R, table, opts.far, "weak_harnack_report");
  const auto half = members_or_throw(*u.domain, x0, 0.5 * r, "weak_harnack_report");
  const auto full = members_or_throw(*u.domain, x0, r, "weak_harnack_report");
  const double mean_t = nodal_mean(half, [&](std::size_t i) { return std::pow(u[i], t); });
  auto rep = harnack_like("weak_harnack", u, std::pow(mean_t, 1.0 / t), nodal_min(u, full), r, R, spec, table,
                          tail_int, opts.ceiling);
  rep.metadata.emplace_back("t", t);
  rep.metadata.emplace_back("t_bar", t_bar);
  finalize(rep);
  return rep;
}

std::vector<InequalityReport> embedding_report(const GridFunction& f, DiscreteDomain::Point x0, double r,
                                               const KernelSpec& spec, const EmbeddingOptions& opts) {
  const auto& d = *f.domain;
  const double p = spec.p;
  const double hn = d.cell_measure();
  const PhiTable table(spec);
  std::vector<InequalityReport> out;

  {
    auto rep = start("embedding_i", spec, f, opts.ceiling);
    const auto m = members_or_throw(d, x0, r, "embedding_report");
    rep.lhs = gagliardo_seminorm_p(f, spec, mask_of(d, m));
    double grad = 0.0;
    for (std::size_t i : m) grad += std::pow(nodal_gradient_norm(f, i), p) * hn;
    rep.rhs_parts = {{"gradient", table(2.0 * r) * grad, true}};
    rep.metadata.emplace_back("r", r);
    finalize(rep);
    out.push_back(std::move(rep));
  }

  const double R = d.diameter();
  const auto interior = d.interior_nodes();
  std::vector<std::size_t> omega(interior.begin(), interior.end());
  {
    auto rep = start("embedding_ii", spec, f, opts.ceiling);
    for (std::size_t j : d.exterior_nodes()) {
      if (f[j] != 0.0) {
        rep.note = "f does not vanish off Omega; pairs beyond the lattice left out";
        break;
      }
    }
    // Pairs inside the lattice with at least one end in Omega. Pairs with
    // both ends outside vanish when f = 0 off Omega and are removed otherwise.
    double lhs = gagliardo_seminorm_p(f, spec);
    if (!rep.note.empty()) {
      std::vector<std::uint8_t> ext(d.size(), 0);
      for (std::size_t j : d.exterior_nodes()) ext[j] = 1;
      lhs -= gagliardo_seminorm_p(f, spec, ext);
    }
    // Pairs whose far end lies beyond the lattice, where f = 0: twice
    // |f_i|^p h^n times the kernel mass off the lattice seen from x_i. Off
    // the lattice f is taken as 0 only when it vanishes on the collar;
    // otherwise its extension is unknown and these pairs are left out.
    double beyond = 0.0;
    for (std::size_t i : omega) {
      if (!rep.note.empty()) break;
      const double fp = std::pow(std::abs(f[i]), p);
      if (fp == 0.0) continue;
      const double mass = off_lattice_kernel_mass(spec, d, i);
      beyond += 2.0 * fp * hn * mass;
    }
    rep.lhs = lhs + beyond;
    double grad = 0.0, fp = 0.0;
    for (std::size_t i : omega) {
      grad += std::pow(nodal_gradient_norm(f, i), p) * hn;
      fp += std::pow(std::abs(f[i]), p) * hn;
    }
    rep.rhs_parts = {
        {"gradient", table(R) * grad, true},
        {"mass", phi_eval_extended(spec, R) / std::pow(R, p) * fp, true},
    };
    rep.metadata.emplace_back("R", R);
    finalize(rep);
    out.push_back(std::move(rep));
  }

  {
    auto rep = start("embedding_iii", spec, f, opts.ceiling);
    const auto mask = mask_of(d, omega);
    rep.lhs = gagliardo_seminorm_p(f, power_kernel(spec.s, p, spec.n), mask);
    const double a = (1.0 - spec.s) * p;
    rep.rhs_parts = {{"phi_energy", std::pow(R, a) / phi_eval_extended(spec, R) * gagliardo_seminorm_p(f, spec, mask), true}};
    rep.metadata.emplace_back("R", R);
    rep.metadata.emplace_back("L", spec.L);
    rep.note = "constant bounded by L";
    finalize(rep);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace nlpl
