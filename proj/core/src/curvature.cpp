#include "rys/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rys/error.hpp"

namespace rys {

Sym2Tensor::Sym2Tensor(const Eigen::MatrixXd& m) : m_(0.5 * (m + m.transpose())) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "Sym2Tensor needs a square matrix");
}

Sym2Tensor Sym2Tensor::zero(int dim) { return Sym2Tensor(Eigen::MatrixXd::Zero(dim, dim)); }

Sym2Tensor Sym2Tensor::outer(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return Sym2Tensor(a * b.transpose());
}

double Sym2Tensor::max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

double Sym2Tensor::trace(const Eigen::MatrixXd& metric_inverse) const {
  return (metric_inverse.cwiseProduct(m_)).sum();
}

double Sym2Tensor::norm(const Eigen::MatrixXd& metric_inverse) const {
  const Eigen::MatrixXd raised = metric_inverse * m_ * metric_inverse;
  return std::sqrt(std::max(0.0, raised.cwiseProduct(m_).sum()));
}

Sym2Tensor& Sym2Tensor::operator+=(const Sym2Tensor& o) {
  m_ += o.m_;
  return *this;
}

Sym2Tensor& Sym2Tensor::operator-=(const Sym2Tensor& o) {
  m_ -= o.m_;
  return *this;
}

Sym2Tensor& Sym2Tensor::operator*=(double s) {
  m_ *= s;
  return *this;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : v_) m = std::max(m, std::abs(v));
  return m;
}

Eigen::MatrixXd JetMatrix::values() const {
  Eigen::MatrixXd m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).value();
  }
  return m;
}

Eigen::VectorXd values(const JetVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

namespace {

void validate_metric_value(const Eigen::MatrixXd& g) {
  if (!g.allFinite()) throw Error(ErrorCode::MetricSingular, "metric has non-finite components");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (hi <= 0.0 || lo < -1e-14 * hi) {
    throw Error(ErrorCode::NotSPD, "metric is not positive definite (min eigenvalue " + std::to_string(lo) + ")");
  }
  if (lo <= 0.0 || hi / lo > LocalGeometry::kConditionLimit) {
    throw Error(ErrorCode::MetricSingular, "metric condition number exceeds 1e10");
  }
}

JetMatrix multiply(const JetMatrix& a, const JetMatrix& b) {
  const int n = a.dim();
  JetMatrix c(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet s = a(i, 0) * b(0, j);
      for (int k = 1; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace

LocalGeometry::LocalGeometry(const MetricField& metric, const ChartPoint& p, int order)
    : dim_(metric.dim()), order_(order), point_(p) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative geometry order");
  if (order > kMaxJetOrder) {
    throw Error(ErrorCode::OrderTooHigh, "metric derivatives beyond order 4 requested");
  }
  if (p.dim() != dim_) {
    throw Error(ErrorCode::InvalidArgument, "point dimension " + std::to_string(p.dim()) +
                                                " differs from metric dimension " + std::to_string(dim_));
  }
  const int n = dim_;
  const JetVector x = coordinates(order);
  const JetVector raw = metric(std::span<const Jet>(x));
  metric_ = JetMatrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) metric_(i, j) = raw[static_cast<std::size_t>(i * n + j)].shaped(n, order);
  }
  const Eigen::MatrixXd g0 = metric_.values();
  validate_metric_value(g0);
  const Eigen::MatrixXd g0_inv = g0.inverse();

  // (G0 + E)^-1 = sum_k (-G0^-1 E)^k G0^-1; E has no constant term so the
  // series terminates at k = order.
  JetMatrix term(n);
  JetMatrix a(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) term(i, j) = Jet::constant(n, order, g0_inv(i, j));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet s = Jet::constant(n, order, 0.0);
      for (int k = 0; k < n; ++k) {
        Jet e = metric_(k, j);
        e -= g0(k, j);
        s += -g0_inv(i, k) * e;
      }
      a(i, j) = s;
    }
  }
  inverse_ = term;
  for (int k = 1; k <= order; ++k) {
    term = multiply(a, term);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) inverse_(i, j) += term(i, j);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Jet s = inverse_(i, j) + inverse_(j, i);
      s *= 0.5;
      inverse_(i, j) = s;
      inverse_(j, i) = s;
    }
  }

  if (order < 1) return;

  // dg[(a * n + i) * n + j] = d_a g_ij
  std::vector<Jet> dg(static_cast<std::size_t>(n * n * n));
  for (int a_ = 0; a_ < n; ++a_) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const Jet d = metric_(i, j).derivative(a_);
        dg[static_cast<std::size_t>((a_ * n + i) * n + j)] = d;
        dg[static_cast<std::size_t>((a_ * n + j) * n + i)] = d;
      }
    }
  }
  auto dmetric = [&](int a_, int i, int j) -> const Jet& { return dg[static_cast<std::size_t>((a_ * n + i) * n + j)]; };

  christoffel_.assign(static_cast<std::size_t>(n * n * n), Jet());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // first-kind symbols [ij, l]
      JetVector first(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) {
        Jet s = dmetric(i, j, l) + dmetric(j, i, l) - dmetric(l, i, j);
        s *= 0.5;
        first[static_cast<std::size_t>(l)] = s;
      }
      for (int k = 0; k < n; ++k) {
        Jet s = inverse_(k, 0) * first[0];
        for (int l = 1; l < n; ++l) s += inverse_(k, l) * first[static_cast<std::size_t>(l)];
        christoffel_[static_cast<std::size_t>((k * n + i) * n + j)] = s;
        christoffel_[static_cast<std::size_t>((k * n + j) * n + i)] = s;
      }
    }
  }

  if (order < 2) return;

  // contracted symbols gamma_l = Gamma^k_kl
  JetVector gamma(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Jet s = christoffel(0, 0, l);
    for (int k = 1; k < n; ++k) s += christoffel(k, k, l);
    gamma[static_cast<std::size_t>(l)] = s;
  }
  ricci_ = JetMatrix(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // R_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik
      Jet s = christoffel(0, i, j).derivative(0);
      for (int k = 1; k < n; ++k) s += christoffel(k, i, j).derivative(k);
      s -= 0.5 * (gamma[static_cast<std::size_t>(i)].derivative(j) + gamma[static_cast<std::size_t>(j)].derivative(i));
      for (int l = 0; l < n; ++l) s += gamma[static_cast<std::size_t>(l)] * christoffel(l, i, j);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) s -= christoffel(k, j, l) * christoffel(l, i, k);
      }
      ricci_(i, j) = s;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ricci_(j, i) = ricci_(i, j);
    }
  }
  scalar_ = trace(ricci_);
}

void LocalGeometry::require_order(int needed, const char* what) const {
  if (order_ < needed) {
    throw Error(ErrorCode::OrderTooHigh, std::string(what) + " needs metric order " + std::to_string(needed) +
                                             ", geometry built with order " + std::to_string(order_));
  }
}

JetVector LocalGeometry::coordinates(int order) const {
  JetVector x;
  x.reserve(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) x.push_back(Jet::variable(dim_, order, i, point_[i]));
  return x;
}

Jet LocalGeometry::lift(const ScalarField& f, int order) const {
  const JetVector x = coordinates(order);
  return f(std::span<const Jet>(x)).shaped(dim_, order);
}

const Jet& LocalGeometry::christoffel(int k, int i, int j) const {
  require_order(1, "Christoffel symbols");
  return christoffel_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)];
}

const JetMatrix& LocalGeometry::ricci() const {
  require_order(2, "Ricci tensor");
  return ricci_;
}

const Jet& LocalGeometry::scalar() const {
  require_order(2, "scalar curvature");
  return scalar_;
}

JetVector LocalGeometry::differential(const Jet& u) const {
  JetVector d(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) d[static_cast<std::size_t>(i)] = u.shaped(dim_, u.order()).derivative(i);
  return d;
}

JetVector LocalGeometry::raise(const JetVector& w) const {
  JetVector v(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    Jet s = inverse_(i, 0) * w[0];
    for (int j = 1; j < dim_; ++j) s += inverse_(i, j) * w[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(i)] = s;
  }
  return v;
}

JetVector LocalGeometry::lower(const JetVector& v) const {
  JetVector w(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    Jet s = metric_(i, 0) * v[0];
    for (int j = 1; j < dim_; ++j) s += metric_(i, j) * v[static_cast<std::size_t>(j)];
    w[static_cast<std::size_t>(i)] = s;
  }
  return w;
}

Jet LocalGeometry::inner(const JetVector& a, const JetVector& b) const {
  const JetVector up = raise(b);
  Jet s = a[0] * up[0];
  for (int i = 1; i < dim_; ++i) s += a[static_cast<std::size_t>(i)] * up[static_cast<std::size_t>(i)];
  return s;
}

JetMatrix LocalGeometry::covariant_derivative(const JetVector& w) const {
  JetMatrix out(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      Jet s = w[static_cast<std::size_t>(j)].shaped(dim_, w[static_cast<std::size_t>(j)].order()).derivative(i);
      for (int k = 0; k < dim_; ++k) s -= christoffel(k, i, j) * w[static_cast<std::size_t>(k)];
      out(i, j) = s;
    }
  }
  return out;
}

JetMatrix LocalGeometry::covariant_derivative_vector(const JetVector& v) const {
  JetMatrix out(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      Jet s = v[static_cast<std::size_t>(i)].shaped(dim_, v[static_cast<std::size_t>(i)].order()).derivative(j);
      for (int k = 0; k < dim_; ++k) s += christoffel(i, j, k) * v[static_cast<std::size_t>(k)];
      out(i, j) = s;
    }
  }
  return out;
}

JetMatrix LocalGeometry::hessian(const Jet& u) const {
  const JetVector du = differential(u);
  JetMatrix h(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      Jet s = du[static_cast<std::size_t>(j)].derivative(i);
      for (int k = 0; k < dim_; ++k) s -= christoffel(k, i, j) * du[static_cast<std::size_t>(k)];
      h(i, j) = s;
      h(j, i) = s;
    }
  }
  return h;
}

Jet LocalGeometry::laplacian(const Jet& u) const { return trace(hessian(u)); }

Jet LocalGeometry::trace(const JetMatrix& a) const {
  Jet s = inverse_(0, 0) * a(0, 0);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      if (i == 0 && j == 0) continue;
      s += inverse_(i, j) * a(i, j);
    }
  }
  return s;
}

JetVector LocalGeometry::divergence(const JetMatrix& t) const {
  const int n = dim_;
  JetVector out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // (nabla_j T)_ki contracted with g^jk
    Jet total;
    bool first = true;
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet d = t(k, i).derivative(j);
        for (int m = 0; m < n; ++m) {
          d -= christoffel(m, j, k) * t(m, i);
          d -= christoffel(m, j, i) * t(k, m);
        }
        if (first) {
          total = inverse_(j, k) * d;
          first = false;
        } else {
          total += inverse_(j, k) * d;
        }
      }
    }
    out[static_cast<std::size_t>(i)] = total;
  }
  return out;
}

Jet LocalGeometry::contract(const JetMatrix& a, const JetMatrix& b) const {
  const int n = dim_;
  // raised = g^-1 B g^-1, then sum A_ij raised^ij
  JetMatrix left(n);
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      Jet s = inverse_(i, 0) * b(0, l);
      for (int k = 1; k < n; ++k) s += inverse_(i, k) * b(k, l);
      left(i, l) = s;
    }
  }
  Jet total;
  bool first = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Jet s = left(i, 0) * inverse_(0, j);
      for (int l = 1; l < n; ++l) s += left(i, l) * inverse_(l, j);
      if (first) {
        total = a(i, j) * s;
        first = false;
      } else {
        total += a(i, j) * s;
      }
    }
  }
  return total;
}

CurvatureBundle LocalGeometry::bundle() const {
  require_order(2, "curvature bundle");
  CurvatureBundle b;
  b.christoffel = Christoffel(dim_);
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) b.christoffel(k, i, j) = christoffel(k, i, j).value();
    }
  }
  b.ricci = Sym2Tensor(ricci_.values());
  b.scalar = scalar_.value();
  b.ricci_norm_sq = b.ricci.norm(inverse_value());
  b.ricci_norm_sq *= b.ricci_norm_sq;
  b.at = point_;
  return b;
}

Christoffel christoffel(const MetricField& g, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 1);
  Christoffel out(geo.dim());
  for (int k = 0; k < geo.dim(); ++k) {
    for (int i = 0; i < geo.dim(); ++i) {
      for (int j = 0; j < geo.dim(); ++j) out(k, i, j) = geo.christoffel(k, i, j).value();
    }
  }
  return out;
}

Sym2Tensor ricci(const MetricField& g, const ChartPoint& p) {
  return Sym2Tensor(LocalGeometry(g, p, 2).ricci().values());
}

double scalar_curvature(const MetricField& g, const ChartPoint& p) { return LocalGeometry(g, p, 2).scalar().value(); }

CurvatureBundle curvature_bundle(const MetricField& g, const ChartPoint& p) { return LocalGeometry(g, p, 2).bundle(); }

Sym2Tensor hessian(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 1);
  return Sym2Tensor(geo.hessian(geo.lift(f, 2)).values());
}

double laplacian(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 1);
  return geo.laplacian(geo.lift(f, 2)).value();
}

Eigen::VectorXd gradient(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 0);
  return values(geo.raise(geo.differential(geo.lift(f, 1))));
}

double grad_norm_sq(const MetricField& g, const ScalarField& f, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 0);
  const JetVector df = geo.differential(geo.lift(f, 1));
  return geo.inner(df, df).value();
}

Sym2Tensor lie_derivative_metric(const MetricField& g, const VectorField& x, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 1);
  const JetMatrix nabla = geo.covariant_derivative(geo.lower(geo.lift(x, 1)));
  const Eigen::MatrixXd m = nabla.values();
  return Sym2Tensor(m + m.transpose());
}

Eigen::MatrixXd covariant_derivative(const MetricField& g, const VectorField& x, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 1);
  return geo.covariant_derivative_vector(geo.lift(x, 1)).values();
}

Eigen::MatrixXd ricci_operator(const MetricField& g, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 2);
  return geo.inverse_value() * geo.ricci().values();
}

Eigen::VectorXd grad_scalar_curvature(const MetricField& g, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 3);
  return values(geo.differential(geo.scalar()));
}

double laplacian_scalar_curvature(const MetricField& g, const ChartPoint& p) {
  const LocalGeometry geo(g, p, 4);
  return geo.laplacian(geo.scalar()).value();
}

}  // namespace rys
