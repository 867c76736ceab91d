#include "rys/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rys/curvature.hpp"
#include "rys/error.hpp"
#include "rys/parallel.hpp"
#include "rys/quadrature.hpp"
#include "rys/solver.hpp"

namespace rys::app {
namespace {

using Clock = std::chrono::steady_clock;

constexpr double kClosedFormTolerance = 1e-7;
constexpr double kIntegralTolerance = 1e-6;
constexpr double kVolumeTolerance = 1e-5;
constexpr double kDivergenceTolerance = 1e-5;
constexpr double kConcircularTolerance = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Bad input detected before any computation.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Target {
  std::string name;
  const CatalogCase* kase = nullptr;
  const CatalogEntry* entry = nullptr;
};

std::vector<Target> resolve_targets(const std::vector<std::string>& names) {
  std::vector<std::string> list;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& c : catalog_cases()) list.push_back(c.name);
    } else {
      list.push_back(n);
    }
  }
  if (list.empty()) {
    for (const auto& c : catalog_cases()) list.push_back(c.name);
  }
  std::vector<Target> out;
  for (const auto& n : list) {
    Target t{n};
    for (const auto& c : catalog_cases()) {
      if (c.name == n) t.kase = &c;
    }
    if (t.kase) {
      t.entry = &find_entry(t.kase->entry);
    } else {
      for (const auto& e : catalog_entries()) {
        if (e.name == n) t.entry = &e;
      }
    }
    if (!t.entry) throw UsageError("unknown case '" + n + "'");
    out.push_back(t);
  }
  return out;
}

std::vector<double> coords(const ChartPoint& p) { return {p.coords().begin(), p.coords().end()}; }

/// One sample of a pointwise check.
struct Sample {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::string error;
};

Sample from_identity(const IdentityResidual& r) { return {r.lhs, r.rhs, r.rel_gap, {}}; }

struct PointCheck {
  std::string name;
  std::string anchor;
  double tol = 0.0;
  std::function<Sample(const ChartPoint&)> eval;
};

/// Runs every check at every point (points in parallel) and reduces each
/// check to its worst point. Ties keep the lowest index, so the result does
/// not depend on scheduling.
std::vector<CheckRecord> sweep(const std::string& case_name, const std::vector<ChartPoint>& points,
                               const std::vector<PointCheck>& checks) {
  const std::size_t nc = checks.size();
  std::vector<Sample> grid(points.size() * nc);
  parallel_for(points.size(), [&](std::size_t i) {
    for (std::size_t c = 0; c < nc; ++c) {
      Sample& s = grid[i * nc + c];
      try {
        s = checks[c].eval(points[i]);
      } catch (const Error& e) {
        s = {kInf, kInf, kInf, e.what()};
      }
    }
  });
  std::vector<CheckRecord> out;
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double g = grid[i * nc + c].gap;
      const double w = grid[worst * nc + c].gap;
      if (g > w || (std::isnan(g) && !std::isnan(w))) worst = i;
    }
    const Sample& s = grid[worst * nc + c];
    CheckRecord r = make_record(case_name, checks[c].name, checks[c].anchor, coords(points[worst]), s.lhs, s.rhs,
                                s.gap, checks[c].tol, points.size());
    if (std::isnan(s.gap)) r.verdict = Verdict::Fail;
    r.note = s.error;
    out.push_back(std::move(r));
  }
  return out;
}

std::string soliton_anchor(const SolitonKind& kind) {
  if (std::holds_alternative<Grys>(kind)) return "alpha Ric + Hess f + (lambda - beta R / 2) g = 0";
  if (std::holds_alternative<GenGrys>(kind)) return "alpha Ric + Hess f + mu df (x) df + (lambda - beta R / 2) g = 0";
  if (std::holds_alternative<Rys>(kind)) return "alpha Ric + (1/2) L_X g + (lambda - beta R / 2) g = 0";
  return "alpha Ric + (1/2) L_X g + mu eta (x) eta + (lambda - beta R / 2) g = 0";
}

/// Closed-form curvature and the contracted Bianchi identity on one chart.
std::vector<PointCheck> curvature_checks(const CatalogEntry& entry, const std::string& suffix) {
  std::vector<PointCheck> out;
  const MetricField g = entry.metric;
  const ClosedForms& cf = entry.closed_forms;
  if (cf.scalar) {
    const double r = *cf.scalar;
    out.push_back({"scalar-curvature" + suffix, "R = " + std::to_string(r), kClosedFormTolerance,
                   [g, r](const ChartPoint& p) {
                     const double v = scalar_curvature(g, p);
                     return Sample{v, r, std::abs(v - r), {}};
                   }});
  }
  if (cf.einstein) {
    const double c = *cf.einstein;
    out.push_back({"einstein-constant" + suffix, "Ric = " + std::to_string(c) + " g", kClosedFormTolerance,
                   [g, c](const ChartPoint& p) {
                     const LocalGeometry geo(g, p, 2);
                     const Eigen::MatrixXd ric = geo.ricci().values();
                     const Eigen::MatrixXd target = c * geo.metric_value();
                     Eigen::Index i = 0;
                     Eigen::Index j = 0;
                     const double gap = (ric - target).cwiseAbs().maxCoeff(&i, &j);
                     return Sample{ric(i, j), target(i, j), gap, {}};
                   }});
  }
  if (cf.ricci) {
    const auto ricci_form = cf.ricci;
    out.push_back({"ricci-closed-form" + suffix, "Ric = closed form", kClosedFormTolerance,
                   [g, ricci_form](const ChartPoint& p) {
                     const Eigen::MatrixXd ric = ricci(g, p).matrix();
                     const Eigen::MatrixXd target = ricci_form(p);
                     Eigen::Index i = 0;
                     Eigen::Index j = 0;
                     const double gap = (ric - target).cwiseAbs().maxCoeff(&i, &j);
                     return Sample{ric(i, j), target(i, j), gap, {}};
                   }});
  }
  out.push_back({"bianchi" + suffix, "div Ric = (1/2) dR", Tolerances{}.order3,
                 [g](const ChartPoint& p) { return from_identity(bianchi_residual(g, p)); }});
  return out;
}

struct CaseRun {
  std::vector<CheckRecord> records;
  std::vector<std::string> warnings;
};

void append(std::vector<CheckRecord>& to, std::vector<CheckRecord> from) {
  for (auto& r : from) to.push_back(std::move(r));
}

CheckRecord flag_record(const std::string& case_name, const std::string& name, const std::string& anchor,
                        double value, double tol, std::size_t samples) {
  return make_record(case_name, name, anchor, {}, value, 0.0, std::abs(value), tol, samples);
}

void integral_checks(const std::string& case_name, const SolitonInstance& inst, const CatalogEntry& entry,
                     int resolution, std::vector<CheckRecord>& out) {
  const std::string ineq_anchor = "k int R^2 >= int Ric(grad f, grad f), k = (n-1)/n (beta n / 2 - alpha)^2";
  const std::string energy_anchor = "int |Hess f|^2 = -(beta - alpha)/(alpha - beta(n-1)) int Ric(grad f, grad f)";
  const QuadratureOptions opts{resolution};
  const std::size_t samples = make_grid(entry, opts).size();

  if (!inst.is_gradient()) {
    out.push_back(skipped_record(case_name, "integral-inequality", ineq_anchor, "needs a gradient soliton"));
    out.push_back(skipped_record(case_name, "hessian-energy", energy_anchor, "needs a gradient soliton"));
    return;
  }
  if (classify(inst.params) != SolitonClass::Steady) {
    out.push_back(skipped_record(case_name, "integral-inequality", ineq_anchor, "needs lambda = 0"));
  } else {
    try {
      const IntegralInequality q = check_integral_inequality(inst, entry, {}, opts);
      const double scale = 1.0 + std::max(std::abs(q.lhs), std::abs(q.rhs));
      out.push_back(make_record(case_name, "integral-inequality", ineq_anchor, {}, q.lhs, q.rhs,
                                std::max(0.0, q.rhs - q.lhs) / scale, kIntegralTolerance, samples));
    } catch (const Error& e) {
      CheckRecord r = make_record(case_name, "integral-inequality", ineq_anchor, {}, kInf, kInf, kInf,
                                  kIntegralTolerance, samples);
      r.note = e.what();
      out.push_back(std::move(r));
    }
  }
  if (inst.effective_mu() != 0.0) {
    out.push_back(skipped_record(case_name, "hessian-energy", energy_anchor, "needs mu = 0"));
    return;
  }
  try {
    const IdentityResidual r = check_hessian_energy(inst, entry, {}, opts);
    out.push_back(
        make_record(case_name, "hessian-energy", energy_anchor, {}, r.lhs, r.rhs, r.rel_gap, kIntegralTolerance, samples));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateDenominator) {
      out.push_back(skipped_record(case_name, "hessian-energy", energy_anchor, "alpha = beta (n - 1)"));
    } else {
      CheckRecord r =
          make_record(case_name, "hessian-energy", energy_anchor, {}, kInf, kInf, kInf, kIntegralTolerance, samples);
      r.note = e.what();
      out.push_back(std::move(r));
    }
  }
}

void gradient_checks(const std::string& name, const SolitonInstance& inst, const std::vector<ChartPoint>& pts,
                     const Tolerances& tol, bool soliton_ok, std::vector<CheckRecord>& out) {
  struct Spec {
    std::string name;
    std::string anchor;
    double tol;
    bool reduced;
    std::function<IdentityResidual(const ChartPoint&)> fn;
  };
  const std::vector<Spec> specs = {
      {"trace", "alpha R + Delta f + n (lambda - beta R / 2) + mu |grad f|^2 = 0", tol.order2, false,
       [&inst, tol](const ChartPoint& p) { return check_trace_identity(inst, p, tol); }},
      {"gradient",
       "{alpha - beta(n-1)} dR + 2 mu {alpha R + (n-1)(lambda - beta R / 2)} df = 2 (mu alpha + 1) Ric(grad f)",
       tol.order3, false, [&inst, tol](const ChartPoint& p) { return check_gradient_identity(inst, p, tol); }},
      {"laplacian",
       "{alpha - beta(n-1)} Delta R + {2 mu alpha - 2 mu beta (n-1) - 1} g(grad R, grad f) = 2 mu {alpha R + (n-1) s}"
       "{alpha R + n s} - 2 (mu alpha + 1) {alpha |Ric|^2 + R s}, s = lambda - beta R / 2",
       tol.order4, false, [&inst, tol](const ChartPoint& p) { return check_laplacian_identity(inst, p, tol); }},
      {"reduced-trace", "alpha R + Delta f + n (lambda - beta R / 2) = 0", tol.order2, true,
       [&inst, tol](const ChartPoint& p) { return check_reduced_trace_identity(inst, p, tol); }},
      {"reduced-gradient", "{alpha - beta(n-1)} dR = 2 Ric(grad f)", tol.order3, true,
       [&inst, tol](const ChartPoint& p) { return check_reduced_gradient_identity(inst, p, tol); }},
      {"reduced-laplacian",
       "{alpha - beta(n-1)} Delta R = g(grad R, grad f) - 2 {alpha |Ric|^2 + R (lambda - beta R / 2)}", tol.order4,
       true, [&inst, tol](const ChartPoint& p) { return check_reduced_laplacian_identity(inst, p, tol); }},
      {"splitting",
       "(1/2) Delta |grad f|^2 = |Hess f|^2 + (beta - alpha)/(alpha - beta(n-1)) Ric(grad f, grad f)",
       tol.splitting, true, [&inst, tol](const ChartPoint& p) { return check_splitting_identity(inst, p, tol); }},
  };
  const SolitonParams& prm = inst.params;
  const int n = inst.metric.dim();
  const bool mu_zero = inst.effective_mu() == 0.0;
  const bool split_degenerate = std::abs(prm.alpha - prm.beta * (n - 1)) <= 1e-12;

  std::vector<PointCheck> run;
  std::vector<std::optional<CheckRecord>> slots;
  for (const auto& s : specs) {
    if (!soliton_ok) {
      slots.push_back(skipped_record(name, s.name, s.anchor, "soliton residual above tolerance"));
    } else if (s.reduced && !mu_zero) {
      slots.push_back(skipped_record(name, s.name, s.anchor, "needs mu = 0"));
    } else if (s.name == "splitting" && split_degenerate) {
      slots.push_back(skipped_record(name, s.name, s.anchor, "alpha = beta (n - 1)"));
    } else {
      slots.emplace_back();
      run.push_back({s.name, s.anchor, s.tol, [fn = s.fn](const ChartPoint& p) { return from_identity(fn(p)); }});
    }
  }
  auto done = sweep(name, pts, run);
  auto next = done.begin();
  for (auto& slot : slots) out.push_back(slot ? std::move(*slot) : std::move(*next++));
}

void compact_checks(const std::string& name, const SolitonInstance& inst, const std::vector<ChartPoint>& pts,
                    const Tolerances& tol, std::vector<CheckRecord>& out) {
  const std::string anchor = "R = 2 n lambda / (n beta - 2 alpha) on a compact soliton";
  const std::string sign_anchor = "R < 0, = 0, > 0 as lambda < 0, = 0, > 0 when n beta > 2 alpha";
  try {
    const CompactScalarCheck c = check_compact_scalar_constant(inst, pts, tol.flags);
    out.push_back(make_record(name, "compact-scalar-constant", anchor, coords(c.worst), c.measured_at_worst,
                              c.predicted, c.gap, tol.flags, pts.size()));
    if (!c.sign_law_applies) {
      out.push_back(skipped_record(name, "scalar-sign-law", sign_anchor, "n beta <= 2 alpha"));
    } else {
      CheckRecord r = make_record(name, "scalar-sign-law", sign_anchor, coords(c.worst), c.measured_at_worst,
                                  inst.params.lambda, c.sign_consistent ? 0.0 : 1.0, 0.0, pts.size());
      r.note = std::string("lambda class ") + std::string(to_string(c.lambda_class));
      out.push_back(std::move(r));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateDenominator) throw;
    out.push_back(skipped_record(name, "compact-scalar-constant", anchor, "n beta = 2 alpha"));
    out.push_back(skipped_record(name, "scalar-sign-law", sign_anchor, "n beta = 2 alpha"));
  }
}

void concircular_checks(const std::string& name, const CatalogCase& kase, const SolitonInstance& inst,
                        const std::vector<ChartPoint>& pts, std::vector<CheckRecord>& out) {
  const auto* rys = std::get_if<Rys>(&inst.kind);
  if (!rys) return;
  const ScalarField phi = kase.concircular_factor;
  const MetricField g = inst.metric;
  const VectorField x = rys->field;
  append(out, sweep(name, pts,
                    {{"concircular-defect", "nabla X = phi Id", kConcircularTolerance, [=](const ChartPoint& p) {
                        const double d = concircular_defect(g, x, phi, p).cwiseAbs().maxCoeff();
                        return Sample{d, 0.0, d, {}};
                      }}}));
  const double variation = phi_variation(phi, pts);
  out.push_back(flag_record(name, "phi-constant", "phi constant", variation, kConcircularTolerance, pts.size()));

  const std::string e_anchor = "Ric = (R / n) g";
  const std::string s_anchor = "R = 2 n (lambda + phi) / (beta - 2 alpha)";
  const std::string v_anchor = "Q = (beta R - 2 phi - 2 lambda) / (2 alpha) Id";
  const std::string c_anchor = "phi against (beta - 2 alpha) R / (2 n) classifies like lambda";
  const SolitonParams prm = inst.params;
  if (prm.alpha == 0.0) {
    for (const auto& [n, a] : {std::pair{"einstein-defect", e_anchor}, {"scalar-prediction", s_anchor},
                               {"eigenvalue-prediction", v_anchor}, {"classification", c_anchor}}) {
      out.push_back(skipped_record(name, n, a, "needs alpha != 0"));
    }
    return;
  }
  const bool predict = std::abs(prm.beta - 2.0 * prm.alpha) > 1e-12;
  std::vector<ConcircularConclusions> cc(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    cc[i] = concircular_conclusions(g, prm, phi(pts[i]), pts[i], predict);
  });
  auto worst_of = [&](auto key) {
    std::size_t w = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (key(cc[i]) > key(cc[w])) w = i;
    }
    return w;
  };
  std::size_t w = worst_of([](const auto& c) { return c.einstein_defect; });
  out.push_back(make_record(name, "einstein-defect", e_anchor, coords(pts[w]), cc[w].einstein_defect, 0.0,
                            cc[w].einstein_defect, kConcircularTolerance, pts.size()));
  if (predict) {
    w = worst_of([](const auto& c) { return std::abs(c.measured_scalar - *c.scalar_prediction); });
    out.push_back(make_record(name, "scalar-prediction", s_anchor, coords(pts[w]), *cc[w].scalar_prediction,
                              cc[w].measured_scalar, std::abs(cc[w].measured_scalar - *cc[w].scalar_prediction),
                              kConcircularTolerance, pts.size()));
  } else {
    out.push_back(skipped_record(name, "scalar-prediction", s_anchor, "beta = 2 alpha"));
  }
  w = worst_of([](const auto& c) { return c.eigen_residual; });
  out.push_back(make_record(name, "eigenvalue-prediction", v_anchor, coords(pts[w]), cc[w].eigenvalue_prediction,
                            cc[w].measured_scalar / g.dim(), cc[w].eigen_residual, kConcircularTolerance,
                            pts.size()));
  w = worst_of([](const auto& c) { return c.threshold_class != c.lambda_class ? 1.0 : 0.0; });
  CheckRecord r = make_record(name, "classification", c_anchor, coords(pts[w]), 0.0, 0.0,
                              cc[w].threshold_class != cc[w].lambda_class ? 1.0 : 0.0, 0.0, pts.size());
  r.note = std::string("threshold ") + std::string(to_string(cc[w].threshold_class)) + ", lambda " +
           std::string(to_string(cc[w].lambda_class));
  out.push_back(std::move(r));
}

CaseRun verify_case(const Target& t, const SolitonInstance& inst, const RunConfig& cfg) {
  CaseRun run;
  const std::string& name = t.name;
  const CatalogCase& kase = *t.kase;
  const auto pts = sample_points(inst.domain, cfg.points, cfg.seed);
  const Tolerances& tol = cfg.tolerances;

  if (inst.params.mu_alpha_degenerate()) {
    run.warnings.push_back(name + ": mu alpha = -1, the Ricci term drops out of the gradient and Laplacian identities");
  }

  const SolitonInstance* ip = &inst;
  auto soliton = sweep(name, pts,
                       {{"soliton-residual", soliton_anchor(inst.kind), tol.soliton, [ip](const ChartPoint& p) {
                           const double m = residual_norms(*ip, p).max_abs;
                           return Sample{m, 0.0, m, {}};
                         }}});
  const bool soliton_ok = soliton.front().verdict == Verdict::Pass;
  append(run.records, std::move(soliton));

  if (inst.is_gradient()) gradient_checks(name, inst, pts, tol, soliton_ok, run.records);
  append(run.records, sweep(name, pts, curvature_checks(*t.entry, "")));

  if (inst.compact) {
    compact_checks(name, inst, pts, tol, run.records);
    integral_checks(name, inst, *t.entry, cfg.resolution, run.records);
  }
  if (kase.affine_potential && inst.is_gradient()) {
    const AffineSplittingFlags a = check_affine_splitting_flags(inst, pts, tol.flags);
    run.records.push_back(flag_record(name, "hessian-norm", "Hess f = 0", a.hessian_norm, tol.flags, pts.size()));
    run.records.push_back(flag_record(name, "gradient-length-variation", "|grad f| constant", a.grad_norm_variation,
                                      tol.flags, pts.size()));
  }
  if (kase.ricci_flat_steady) {
    const SteadyRicciFlatFlags f = check_steady_ricci_flat(inst, pts, tol.flags);
    run.records.push_back(flag_record(name, "ricci-flat", "Ric = 0", f.ricci_max, tol.flags, pts.size()));
    run.records.push_back(flag_record(name, "steady", "lambda = 0", f.lambda, kSteadyTolerance, 1));
  }
  if (kase.concircular_factor) concircular_checks(name, kase, inst, pts, run.records);
  return run;
}

CaseRun verify_entry(const Target& t, const RunConfig& cfg) {
  CaseRun run;
  const CatalogEntry& e = *t.entry;
  for (std::size_t c = 0; c < e.charts.size(); ++c) {
    const std::string suffix = e.charts.size() > 1 ? "@" + e.chart(c).label() : "";
    append(run.records, sweep(t.name, sample_points(e.chart(c), cfg.points, cfg.seed), curvature_checks(e, suffix)));
  }
  return run;
}

void echo_config(CheckReport& rep, const RunConfig& cfg, const std::vector<Target>& targets) {
  std::vector<std::string> names;
  for (const auto& t : targets) names.push_back(t.name);
  rep.cases = names;
  auto& c = rep.config;
  c.emplace_back("cases", names);
  if (cfg.params.alpha) c.emplace_back("alpha", *cfg.params.alpha);
  if (cfg.params.beta) c.emplace_back("beta", *cfg.params.beta);
  if (cfg.params.lambda) c.emplace_back("lambda", *cfg.params.lambda);
  if (cfg.params.mu) c.emplace_back("mu", *cfg.params.mu);
  c.emplace_back("points", static_cast<long long>(cfg.points));
  c.emplace_back("seed", std::to_string(cfg.seed));
  c.emplace_back("resolution", static_cast<long long>(cfg.resolution));
  if (cfg.radius) c.emplace_back("radius", *cfg.radius);
  c.emplace_back("tol_soliton", cfg.tolerances.soliton);
  c.emplace_back("tol_order2", cfg.tolerances.order2);
  c.emplace_back("tol_order3", cfg.tolerances.order3);
  c.emplace_back("tol_order4", cfg.tolerances.order4);
  c.emplace_back("tol_splitting", cfg.tolerances.splitting);
  c.emplace_back("tol_flags", cfg.tolerances.flags);
}

void validate(const RunConfig& cfg) {
  if (cfg.points == 0) throw UsageError("--points must be positive");
  if (cfg.resolution < 8) throw UsageError("--resolution must be at least 8");
  const Tolerances& t = cfg.tolerances;
  for (double v : {t.soliton, t.order2, t.order3, t.order4, t.splitting, t.flags}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw UsageError("tolerances must be finite and non-negative");
  }
  if (cfg.radius && !(*cfg.radius > 0.0 && std::isfinite(*cfg.radius))) throw UsageError("--radius must be positive");
}

std::vector<std::optional<SolitonInstance>> build_instances(const std::vector<Target>& targets,
                                                            const ParamOverrides& params) {
  std::vector<std::optional<SolitonInstance>> out;
  for (const auto& t : targets) {
    if (!t.kase) {
      out.emplace_back();
      continue;
    }
    try {
      out.push_back(t.kase->build(params));
    } catch (const Error& e) {
      throw UsageError(t.name + ": " + e.what());
    }
  }
  return out;
}

std::string summary_line(const CheckReport& rep) {
  const Summary s = rep.summary();
  std::ostringstream os;
  os << rep.command << ": " << s.passed << " passed, " << s.failed << " failed, " << s.skipped << " skipped";
  return os.str();
}

/// Writes the report when an output path is set and fills the result.
CommandResult finish(CheckReport& rep, const RunConfig& cfg, Clock::time_point start) {
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  if (cfg.timing) rep.wall_seconds = wall;
  CommandResult res;
  res.output = rep.to_json();
  res.exit_code = rep.all_passed() ? kExitPass : kExitCheckFailed;
  char buf[64];
  std::snprintf(buf, sizeof buf, " (%.3f s)", wall);
  res.message = summary_line(rep) + buf;
  if (cfg.output) {
    try {
      write_atomic(*cfg.output, res.output);
    } catch (const Error& e) {
      return {kExitUsage, {}, e.what()};
    }
  }
  return res;
}

template <class F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    return {kExitUsage, {}, e.what()};
  } catch (const Error& e) {
    return {kExitCheckFailed, {}, e.what()};
  }
}

CatalogEntry integration_entry(const Target& t, const RunConfig& cfg) {
  const CatalogEntry& e = *t.entry;
  if (!e.compact) throw UsageError("'" + t.name + "' has no compact atlas to integrate over");
  if (cfg.radius) {
    if (e.name != "sphere" && e.name != "unit-s3") throw UsageError("--radius only applies to the sphere entries");
    if (t.kase) throw UsageError("--radius cannot rescale the metric of a case");
    return make_sphere(*cfg.radius);
  }
  return e;
}

void volume_and_divergence(const std::string& name, const CatalogEntry& entry, const RunConfig& cfg,
                           std::vector<CheckRecord>& out) {
  const QuadratureOptions opts{cfg.resolution};
  const QuadratureGrid grid = make_grid(entry, opts);
  const ScalarField u = random_polynomial(entry.ambient_dim, 3, cfg.seed);
  const std::vector<ScalarField> charts = chart_pullbacks(entry, u);
  const MetricField g = entry.metric;
  const std::vector<double> lap =
      evaluate(grid, [&](std::size_t c, const ChartPoint& p) { return laplacian(g, charts[c], p); });
  std::vector<double> mag(lap.size());
  std::transform(lap.begin(), lap.end(), mag.begin(), [](double v) { return std::abs(v); });

  const double vol = grid.total_weight();
  if (entry.closed_forms.volume) {
    const double ref = *entry.closed_forms.volume;
    out.push_back(make_record(name, "volume", "Vol = " + std::to_string(ref), {}, vol, ref,
                              std::abs(vol - ref) / std::abs(ref), kVolumeTolerance, grid.size()));
  }
  const double div = weighted_sum(grid, lap);
  const double scale = 1.0 + weighted_sum(grid, mag);
  CheckRecord r = make_record(name, "divergence-theorem", "int Delta u = 0", {}, div, 0.0, std::abs(div) / scale,
                              kDivergenceTolerance, grid.size());
  r.note = "u = seeded cubic on R^" + std::to_string(entry.ambient_dim);
  out.push_back(std::move(r));
}

}  // namespace

CheckReport verify_report(const RunConfig& config) {
  validate(config);
  const auto targets = resolve_targets(config.cases);
  const auto instances = build_instances(targets, config.params);
  CheckReport rep;
  rep.command = "verify";
  echo_config(rep, config, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Target& t = targets[i];
    CaseRun run;
    try {
      run = t.kase ? verify_case(t, *instances[i], config) : verify_entry(t, config);
    } catch (const Error& e) {
      CheckRecord r = make_record(t.name, "case-error", "", {}, kInf, kInf, kInf, 0.0, 0);
      r.note = e.what();
      run.records.push_back(std::move(r));
    }
    append(rep.records, std::move(run.records));
    for (auto& w : run.warnings) rep.warnings.push_back(std::move(w));
  }
  return rep;
}

CommandResult run_verify(const RunConfig& config) {
  return guarded([&] {
    const auto start = Clock::now();
    CheckReport rep = verify_report(config);
    return finish(rep, config, start);
  });
}

CommandResult run_integrate(const RunConfig& config) {
  return guarded([&] {
    const auto start = Clock::now();
    validate(config);
    std::vector<std::string> names = config.cases;
    if (names.empty()) names = {"unit-s3"};
    const auto targets = resolve_targets(names);
    std::vector<CatalogEntry> entries;
    for (const auto& t : targets) entries.push_back(integration_entry(t, config));
    const auto instances = build_instances(targets, config.params);

    CheckReport rep;
    rep.command = "integrate";
    echo_config(rep, config, targets);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Target& t = targets[i];
      try {
        volume_and_divergence(t.name, entries[i], config, rep.records);
        if (t.kase) integral_checks(t.name, *instances[i], entries[i], config.resolution, rep.records);
      } catch (const Error& e) {
        CheckRecord r = make_record(t.name, "case-error", "", {}, kInf, kInf, kInf, 0.0, 0);
        r.note = e.what();
        rep.records.push_back(std::move(r));
      }
    }
    return finish(rep, config, start);
  });
}

CommandResult run_solve(const RunConfig& config) {
  return guarded([&]() -> CommandResult {
    const auto start = Clock::now();
    Background bg;
    SolveOptions opts;
    RadialGrid grid;
    SolitonParams prm;
    try {
      bg.kind = parse_background(config.background);
      bg.radius = config.radius.value_or(1.0);
      if (!(bg.radius > 0.0 && std::isfinite(bg.radius))) throw UsageError("--radius must be positive");
      if (config.ansatz == "free") {
        opts.ansatz = Ansatz::Free;
      } else if (config.ansatz == "constant") {
        opts.ansatz = Ansatz::Constant;
      } else {
        throw UsageError("unknown ansatz '" + config.ansatz + "' (free, constant)");
      }
      prm.alpha = config.params.alpha.value_or(1.0);
      prm.beta = config.params.beta.value_or(0.0);
      prm.mu = config.params.mu.value_or(0.0);
      if (prm.mu != 0.0) throw UsageError("the radial solver needs mu = 0");
      prm.lambda = config.params.lambda.value_or(bg.balanced_lambda(prm));
      prm.validate();
      grid.nodes = config.grid;
      grid.r_max = config.r_max.value_or(std::min(2.0, 0.9 * bg.r_limit()));
      if (grid.r_max >= bg.r_limit()) throw UsageError("--rmax must stay below the antipode");
      grid.points();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }

    SolveResult result;
    CommandResult res;
    try {
      result = solve_radial(prm, bg, grid, opts);
    } catch (const NoConvergenceError& e) {
      result = e.partial();
      res.exit_code = kExitCheckFailed;
      res.message = e.what();
    }
    const auto nodes = node_residuals(result.profile);
    std::string csv = "r,f,residual\n";
    char line[128];
    for (std::size_t k = 0; k < result.profile.r.size(); ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", result.profile.r[k], result.profile.f[k], nodes[k]);
      csv += line;
    }
    res.output = csv;
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    if (res.exit_code == kExitPass) {
      std::snprintf(line, sizeof line, "solve: converged in %d iterations, residual %.3g (%.3f s)", result.iterations,
                    result.residual_inf, wall);
      res.message = line;
    }
    if (config.output) {
      try {
        write_atomic(*config.output, csv);
      } catch (const Error& e) {
        return {kExitUsage, {}, e.what()};
      }
    }
    return res;
  });
}

CommandResult run_catalog() {
  std::ostringstream os;
  os << "entries\n";
  for (const auto& e : catalog_entries()) {
    os << "  " << e.name << std::string(e.name.size() < 18 ? 18 - e.name.size() : 1, ' ') << "dim " << e.dim()
       << ", " << e.charts.size() << (e.charts.size() == 1 ? " chart" : " charts") << (e.compact ? ", compact" : "")
       << ". " << e.summary << "\n";
  }
  os << "cases\n";
  for (const auto& c : catalog_cases()) {
    os << "  " << c.name << std::string(c.name.size() < 18 ? 18 - c.name.size() : 1, ' ') << "on " << c.entry
       << ". " << c.summary << "\n";
  }
  return {kExitPass, os.str(), {}};
}

}  // namespace rys::app
