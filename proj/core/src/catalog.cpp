#include "rys/catalog.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "rys/curvature.hpp"
#include "rys/error.hpp"

namespace rys {
namespace {

using Exponents = std::array<int, kMaxJetDim>;

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Exponents> monomials(int dim, int degree) {
  std::vector<Exponents> out;
  Exponents e{};
  // graded order: all exponents of total degree d, d = 0..degree
  for (int d = 0; d <= degree; ++d) {
    std::function<void(int, int)> fill = [&](int axis, int left) {
      if (axis == dim - 1) {
        e[static_cast<std::size_t>(axis)] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[static_cast<std::size_t>(axis)] = k;
        fill(axis + 1, left - k);
      }
    };
    fill(0, d);
  }
  return out;
}

int total_degree(const Exponents& e) {
  int d = 0;
  for (int v : e) d += v;
  return d;
}

/// Sum of c_a x^a over a fixed monomial list.
template <class T>
T eval_polynomial(std::span<const T> x, const std::vector<Exponents>& terms, std::span<const double> coeffs) {
  T total(0.0);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (coeffs[t] == 0.0) continue;
    T m(coeffs[t]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      for (int p = 0; p < terms[t][k]; ++p) m = m * x[k];
    }
    total = total + m;
  }
  return total;
}

std::vector<double> seeded_coefficients(const std::vector<Exponents>& terms, std::mt19937_64& rng, double scale) {
  std::vector<double> c;
  c.reserve(terms.size());
  for (const auto& e : terms) c.push_back(scale * (2.0 * unit_uniform(rng) - 1.0) / std::ldexp(1.0, total_degree(e)));
  return c;
}

template <class T>
T radius_sq(std::span<const T> x) {
  T s = x[0] * x[0];
  for (std::size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
  return s;
}

ClosedForms flat_forms() {
  ClosedForms c;
  c.scalar = 0.0;
  c.einstein = 0.0;
  return c;
}

MetricField hyperbolic_metric() {
  return MetricField(3, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const T w = 1.0 / (x[2] * x[2]);
    std::vector<T> m(9, T(0.0));
    m[0] = w;
    m[4] = w;
    m[8] = w;
    return m;
  });
}

MetricField s2xr_metric() {
  return MetricField(3, [](const auto& x) {
    using T = scalar_of<decltype(x)>;
    const T d = 1.0 + x[0] * x[0] + x[1] * x[1];
    const T w = 4.0 / (d * d);
    std::vector<T> m(9, T(0.0));
    m[0] = w;
    m[4] = w;
    m[8] = T(1.0);
    return m;
  });
}

CatalogEntry make_hyperbolic() {
  CatalogEntry e;
  e.name = "h3";
  e.summary = "hyperbolic 3-space, upper half-space model";
  e.metric = hyperbolic_metric();
  e.charts = {ChartDomain("h3", {{-1.0, 1.0}, {-1.0, 1.0}, {0.5, 2.0}})};
  e.closed_forms.scalar = -6.0;
  e.closed_forms.einstein = -2.0;
  return e;
}

CatalogEntry make_s2xr() {
  CatalogEntry e;
  e.name = "s2xr";
  e.summary = "product of the unit 2-sphere (stereographic) with the real line";
  e.metric = s2xr_metric();
  e.charts = {ChartDomain("s2xr", {{-1.0, 1.0}, {-1.0, 1.0}, {-2.0, 2.0}})};
  e.closed_forms.scalar = 2.0;
  e.closed_forms.ricci = [](const ChartPoint& p) {
    const double d = 1.0 + p[0] * p[0] + p[1] * p[1];
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 3);
    r(0, 0) = r(1, 1) = 4.0 / (d * d);
    return r;
  };
  return e;
}

SolitonKind gradient_kind(ScalarField f, double mu) {
  if (mu == 0.0) return Grys{std::move(f)};
  return GenGrys{std::move(f)};
}

SolitonParams resolve(const ParamOverrides& o, SolitonParams base,
                      const std::function<double(const SolitonParams&)>& balance = {}) {
  if (o.alpha) base.alpha = *o.alpha;
  if (o.beta) base.beta = *o.beta;
  if (o.mu) base.mu = *o.mu;
  if (o.lambda) {
    base.lambda = *o.lambda;
  } else if (balance) {
    base.lambda = balance(base);
  }
  base.validate();
  return base;
}

ScalarField constant_potential() { return ScalarField::constant(0.7); }

CatalogCase make_case(std::string name, std::string entry, std::string summary, bool gradient,
                      std::function<SolitonInstance(const ParamOverrides&)> build) {
  CatalogCase c;
  c.name = std::move(name);
  c.entry = std::move(entry);
  c.summary = std::move(summary);
  c.gradient = gradient;
  c.build = std::move(build);
  return c;
}

std::vector<CatalogCase> build_cases() {
  std::vector<CatalogCase> cases;

  cases.push_back(make_case("gaussian", "flat-r3", "f = -lambda |x|^2 / 2 on flat R^3", true, [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, 2.0, 0.0});
                     const double lambda = prm.lambda;
                     ScalarField f([lambda](const auto& x) { return -0.5 * lambda * radius_sq(x); });
                     return SolitonInstance{prm, find_entry("flat-r3").chart(), find_entry("flat-r3").metric,
                                            gradient_kind(f, prm.mu), false};
                   }));

  cases.push_back(make_case("einstein-s3", "unit-s3", "constant f on the unit 3-sphere, lambda = 3 beta - 2 alpha", true,
                   [](const ParamOverrides& o) {
                     const SolitonParams prm =
                         resolve(o, {1.0, 0.0, 0.0, 0.0}, [](const SolitonParams& p) { return 3.0 * p.beta - 2.0 * p.alpha; });
                     const CatalogEntry& s3 = find_entry("unit-s3");
                     return SolitonInstance{prm, s3.chart(), s3.metric, gradient_kind(constant_potential(), prm.mu), true};
                   }));

  cases.push_back(make_case("einstein-h3", "h3", "constant f on hyperbolic 3-space, lambda = 2 alpha - 3 beta", true,
                   [](const ParamOverrides& o) {
                     const SolitonParams prm =
                         resolve(o, {1.0, 0.0, 0.0, 0.0}, [](const SolitonParams& p) { return 2.0 * p.alpha - 3.0 * p.beta; });
                     const CatalogEntry& h3 = find_entry("h3");
                     return SolitonInstance{prm, h3.chart(), h3.metric, gradient_kind(constant_potential(), prm.mu), false};
                   }));

  cases.push_back(make_case("s3-log-eigen", "unit-s3",
                   "f = log(X1) / mu on the unit 3-sphere where X1 > 0, lambda = 1/mu - 2 alpha + 3 beta", true,
                   [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, 0.0, 1.0}, [](const SolitonParams& p) {
                       return 1.0 / p.mu - 2.0 * p.alpha + 3.0 * p.beta;
                     });
                     if (prm.mu == 0.0) throw Error(ErrorCode::InvalidArgument, "s3-log-eigen needs mu != 0");
                     const double mu = prm.mu;
                     ScalarField f([mu](const auto& x) {
                       using std::log;
                       return log(2.0 * x[0] / (1.0 + radius_sq(x))) / mu;
                     });
                     ChartDomain dom("s3-half", {{0.2, 1.1}, {-0.8, 0.8}, {-0.8, 0.8}});
                     return SolitonInstance{prm, dom, find_entry("unit-s3").metric, GenGrys{f}, false};
                   }));

  cases.push_back(make_case("h3-log-cosh", "h3", "f = log(cosh d) / mu on hyperbolic 3-space, lambda = 2 alpha - 3 beta - 1/mu",
                   true, [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, 0.0, 1.0}, [](const SolitonParams& p) {
                       return 2.0 * p.alpha - 3.0 * p.beta - 1.0 / p.mu;
                     });
                     if (prm.mu == 0.0) throw Error(ErrorCode::InvalidArgument, "h3-log-cosh needs mu != 0");
                     const double mu = prm.mu;
                     ScalarField f([mu](const auto& x) {
                       using std::log;
                       return log((1.0 + radius_sq(x)) / (2.0 * x[2])) / mu;
                     });
                     const CatalogEntry& h3 = find_entry("h3");
                     return SolitonInstance{prm, h3.chart(), h3.metric, GenGrys{f}, false};
                   }));

  cases.push_back(make_case("s2xr", "s2xr", "f = t on S^2 x R, alpha = 0, lambda = beta", true, [](const ParamOverrides& o) {
                     const SolitonParams prm =
                         resolve(o, {0.0, 1.0, 1.0, 0.0}, [](const SolitonParams& p) { return p.beta; });
                     ScalarField f([](const auto& x) { return x[2]; });
                     const CatalogEntry& e = find_entry("s2xr");
                     return SolitonInstance{prm, e.chart(), e.metric, gradient_kind(f, prm.mu), false};
                   }));
  cases.back().affine_potential = true;

  cases.push_back(make_case("flat-product", "flat-r3", "f = x3 on flat R^3, steady", true, [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, 0.0, 0.0});
                     ScalarField f([](const auto& x) { return x[2]; });
                     const CatalogEntry& e = find_entry("flat-r3");
                     return SolitonInstance{prm, e.chart(), e.metric, gradient_kind(f, prm.mu), false};
                   }));
  cases.back().affine_potential = true;
  cases.back().ricci_flat_steady = true;

  cases.push_back(make_case("concircular-flat", "flat-r3", "X = position field on flat R^3, phi = 1", false,
                   [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, -1.0, 0.0});
                     VectorField x(3, [](const auto& p) {
                       using T = scalar_of<decltype(p)>;
                       return std::vector<T>{p[0], p[1], p[2]};
                     });
                     const CatalogEntry& e = find_entry("flat-r3");
                     return SolitonInstance{prm, e.chart(), e.metric, Rys{x}, false};
                   }));
  cases.back().concircular_factor = ScalarField::constant(1.0);

  cases.push_back(make_case("eta-flat", "flat-r3", "X = -lambda x - mu x1 e1, eta = dx1 on flat R^3", false,
                   [](const ParamOverrides& o) {
                     const SolitonParams prm = resolve(o, {1.0, 0.0, 1.0, 1.0});
                     const double lambda = prm.lambda;
                     const double mu = prm.mu;
                     VectorField x(3, [lambda, mu](const auto& p) {
                       using T = scalar_of<decltype(p)>;
                       return std::vector<T>{-(lambda + mu) * p[0], -lambda * p[1], -lambda * p[2]};
                     });
                     OneFormField eta(3, [](const auto& p) {
                       using T = scalar_of<decltype(p)>;
                       return std::vector<T>{T(1.0), T(0.0), T(0.0)};
                     });
                     const CatalogEntry& e = find_entry("flat-r3");
                     return SolitonInstance{prm, e.chart(), e.metric, EtaRys{x, eta}, false};
                   }));
  return cases;
}

}  // namespace

CatalogEntry make_flat(int dim) {
  CatalogEntry e;
  e.name = "flat-r" + std::to_string(dim);
  e.summary = "Euclidean space, Cartesian chart";
  e.metric = MetricField::flat(dim);
  e.charts = {ChartDomain::box(e.name, dim, -2.0, 2.0)};
  e.closed_forms = flat_forms();
  return e;
}

CatalogEntry make_sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
  const double a2 = radius * radius;
  CatalogEntry e;
  e.name = radius == 1.0 ? "unit-s3" : "sphere";
  e.summary = "round 3-sphere on two stereographic charts";
  e.metric = MetricField::conformal(3, ScalarField([a2](const auto& x) {
                                      const auto d = 1.0 + radius_sq(x);
                                      return 4.0 * a2 / (d * d);
                                    }));
  e.charts = {ChartDomain::box("north", 3, -1.15, 1.15), ChartDomain::box("south", 3, -1.15, 1.15)};
  e.compact = true;
  e.closed_forms.scalar = 6.0 / a2;
  e.closed_forms.einstein = 2.0 / a2;
  e.closed_forms.volume = 2.0 * std::numbers::pi * std::numbers::pi * radius * a2;
  for (const double pole : {1.0, -1.0}) {
    e.embeddings.emplace_back(4, [radius, pole](const auto& x) {
      using T = scalar_of<decltype(x)>;
      const T r2 = radius_sq(x);
      const T s = radius / (1.0 + r2);
      return std::vector<T>{2.0 * s * x[0], 2.0 * s * x[1], 2.0 * s * x[2], pole * s * (1.0 - r2)};
    });
  }
  e.ambient_dim = 4;
  return e;
}

CatalogEntry make_perturbed_flat(double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 0");
  const auto terms = std::make_shared<const std::vector<Exponents>>(monomials(3, 3));
  std::mt19937_64 rng(seed);
  auto coeffs = std::make_shared<std::vector<double>>();
  for (int pair = 0; pair < 6; ++pair) {
    const auto c = seeded_coefficients(*terms, rng, 1.0);
    coeffs->insert(coeffs->end(), c.begin(), c.end());
  }
  const std::shared_ptr<const std::vector<double>> h = coeffs;

  CatalogEntry e;
  e.name = "perturbed-flat";
  e.summary = "delta + epsilon h with seeded cubic h";
  e.metric = MetricField(3, [terms, h, epsilon](const auto& x) {
    using T = scalar_of<decltype(x)>;
    std::vector<T> m(9, T(0.0));
    const std::size_t stride = terms->size();
    std::size_t pair = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = i; j < 3; ++j, ++pair) {
        const std::span<const double> c(h->data() + pair * stride, stride);
        m[i * 3 + j] = epsilon * eval_polynomial(x, *terms, c);
        if (i == j) m[i * 3 + j] = m[i * 3 + j] + 1.0;
      }
    }
    return m;
  });
  e.charts = {ChartDomain::box("perturbed-flat", 3, -1.0, 1.0)};

  for (const auto& p : sample_points(e.chart(), 200, seed)) {
    const auto v = e.metric(p);
    const Eigen::Map<const Eigen::Matrix3d> g(v.data());
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > LocalGeometry::kConditionLimit) {
      throw Error(ErrorCode::NotSPD, "perturbed metric is not positive definite at a sample point (epsilon " +
                                         std::to_string(epsilon) + ")");
    }
  }
  return e;
}

ScalarField random_polynomial(int dim, int degree, std::uint64_t seed, double scale) {
  if (dim < 1 || dim > kMaxJetDim || degree < 0) throw Error(ErrorCode::InvalidArgument, "bad polynomial shape");
  const auto terms = std::make_shared<const std::vector<Exponents>>(monomials(dim, degree));
  std::mt19937_64 rng(seed);
  const auto coeffs = std::make_shared<const std::vector<double>>(seeded_coefficients(*terms, rng, scale));
  return ScalarField([terms, coeffs](const auto& x) {
    using T = scalar_of<decltype(x)>;
    return eval_polynomial<T>(std::span<const T>(x.data(), x.size()), *terms, *coeffs);
  });
}

ChartPoint stereographic_transition(const ChartPoint& x) {
  double r2 = 0.0;
  for (double v : x.coords()) r2 += v * v;
  if (r2 == 0.0) throw Error(ErrorCode::InvalidArgument, "the chart origin has no image in the other chart");
  std::vector<double> y(x.coords().begin(), x.coords().end());
  for (double& v : y) v /= r2;
  return ChartPoint(std::move(y));
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    v.push_back(make_flat(3));
    v.push_back(make_flat(4));
    v.push_back(make_sphere(1.0));
    v.push_back(make_sphere(2.0));
    v.push_back(make_hyperbolic());
    v.push_back(make_s2xr());
    v.push_back(make_perturbed_flat(1e-2, 42));
    return v;
  }();
  return entries;
}

const CatalogEntry& find_entry(std::string_view name) {
  for (const auto& e : catalog_entries()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::UnknownCase, "unknown catalog entry '" + std::string(name) + "'");
}

const std::vector<CatalogCase>& catalog_cases() {
  static const std::vector<CatalogCase> cases = build_cases();
  return cases;
}

const CatalogCase& find_case(std::string_view name) {
  for (const auto& c : catalog_cases()) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::UnknownCase, "unknown case '" + std::string(name) + "'");
}

SolitonInstance make_instance(std::string_view case_name, const ParamOverrides& overrides) {
  return find_case(case_name).build(overrides);
}

}  // namespace rys
