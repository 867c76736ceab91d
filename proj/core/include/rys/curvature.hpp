#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rys/chart.hpp"
#include "rys/field.hpp"
#include "rys/jet.hpp"

namespace rys {

/// Covariant symmetric 2-tensor at a point (Ric, Hessians, Lie derivatives,
/// eta x eta, df x df). The constructor symmetrizes its input.
class Sym2Tensor {
 public:
  Sym2Tensor() = default;
  explicit Sym2Tensor(const Eigen::MatrixXd& m);
  static Sym2Tensor zero(int dim);
  /// a (x) b for covectors a, b, symmetrized.
  static Sym2Tensor outer(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  double max_abs() const;
  /// g^ij T_ij
  double trace(const Eigen::MatrixXd& metric_inverse) const;
  /// sqrt(g^ik g^jl T_ij T_kl)
  double norm(const Eigen::MatrixXd& metric_inverse) const;

  Sym2Tensor& operator+=(const Sym2Tensor& o);
  Sym2Tensor& operator-=(const Sym2Tensor& o);
  Sym2Tensor& operator*=(double s);
  friend Sym2Tensor operator+(Sym2Tensor a, const Sym2Tensor& b) { return a += b; }
  friend Sym2Tensor operator-(Sym2Tensor a, const Sym2Tensor& b) { return a -= b; }
  friend Sym2Tensor operator*(double s, Sym2Tensor a) { return a *= s; }

 private:
  Eigen::MatrixXd m_;
};

/// Christoffel symbols Gamma^k_ij of the Levi-Civita connection at a point.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), v_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const noexcept { return dim_; }
  double operator()(int k, int i, int j) const { return v_[index(k, i, j)]; }
  double& operator()(int k, int i, int j) { return v_[index(k, i, j)]; }
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const { return static_cast<std::size_t>((k * dim_ + i) * dim_ + j); }
  int dim_ = 0;
  std::vector<double> v_;
};

struct CurvatureBundle {
  Christoffel christoffel;
  Sym2Tensor ricci;
  double scalar = 0.0;
  /// R_ij R^ij
  double ricci_norm_sq = 0.0;
  ChartPoint at;
};

using JetVector = std::vector<Jet>;

/// Dense n x n matrix of jets.
class JetMatrix {
 public:
  JetMatrix() = default;
  explicit JetMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim * dim)) {}

  int dim() const noexcept { return dim_; }
  Jet& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * dim_ + j)]; }
  const Jet& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * dim_ + j)]; }

  Eigen::MatrixXd values() const;

 private:
  int dim_ = 0;
  std::vector<Jet> a_;
};

Eigen::VectorXd values(const JetVector& v);

/// The metric and its curvature as Taylor jets about one point.
///
/// Built with metric order K (0..4): Christoffels carry order K-1, Ricci and
/// scalar curvature order K-2. Everything below is computed once at
/// construction; the calculus helpers combine jets of mixed order and return
/// the minimum order of their inputs.
class LocalGeometry {
 public:
  /// Throws NotSPD / MetricSingular (condition number > 1e10) on a bad g(p)
  /// and OrderTooHigh for order > 4.
  LocalGeometry(const MetricField& metric, const ChartPoint& p, int order);

  static constexpr double kConditionLimit = 1e10;

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  const ChartPoint& point() const noexcept { return point_; }

  /// Seeded coordinate jets x_i of the given order.
  JetVector coordinates(int order) const;
  Jet lift(const ScalarField& f, int order) const;
  template <class Tag>
  JetVector lift(const ComponentField<Tag>& field, int order) const {
    const JetVector x = coordinates(order);
    JetVector out = field(std::span<const Jet>(x));
    for (auto& c : out) c = c.shaped(dim_, order);
    return out;
  }

  const JetMatrix& metric() const noexcept { return metric_; }
  const JetMatrix& inverse() const noexcept { return inverse_; }
  const Jet& christoffel(int k, int i, int j) const;
  const JetMatrix& ricci() const;
  const Jet& scalar() const;

  Eigen::MatrixXd metric_value() const { return metric_.values(); }
  Eigen::MatrixXd inverse_value() const { return inverse_.values(); }

  /// d_i u
  JetVector differential(const Jet& u) const;
  /// g^ij w_j
  JetVector raise(const JetVector& covector) const;
  /// g_ij v^j
  JetVector lower(const JetVector& vector) const;
  /// g^ij a_i b_j
  Jet inner(const JetVector& a, const JetVector& b) const;
  /// (nabla w)_ij = d_i w_j - Gamma^k_ij w_k
  JetMatrix covariant_derivative(const JetVector& covector) const;
  /// (nabla X)^i_j = d_j X^i + Gamma^i_jk X^k
  JetMatrix covariant_derivative_vector(const JetVector& vector) const;
  /// d_i d_j u - Gamma^k_ij d_k u
  JetMatrix hessian(const Jet& u) const;
  Jet laplacian(const Jet& u) const;
  /// g^ij A_ij
  Jet trace(const JetMatrix& a) const;
  /// (div T)_i = g^jk nabla_j T_ki for a symmetric 2-tensor T
  JetVector divergence(const JetMatrix& t) const;
  /// g^ik g^jl A_ij B_kl
  Jet contract(const JetMatrix& a, const JetMatrix& b) const;

  CurvatureBundle bundle() const;

 private:
  void require_order(int needed, const char* what) const;

  int dim_;
  int order_;
  ChartPoint point_;
  JetMatrix metric_;
  JetMatrix inverse_;
  std::vector<Jet> christoffel_;
  JetMatrix ricci_;
  Jet scalar_;
};

Christoffel christoffel(const MetricField& g, const ChartPoint& p);
Sym2Tensor ricci(const MetricField& g, const ChartPoint& p);
double scalar_curvature(const MetricField& g, const ChartPoint& p);
CurvatureBundle curvature_bundle(const MetricField& g, const ChartPoint& p);

Sym2Tensor hessian(const MetricField& g, const ScalarField& f, const ChartPoint& p);
double laplacian(const MetricField& g, const ScalarField& f, const ChartPoint& p);
/// Contravariant gradient (nabla f)^i = g^ij d_j f.
Eigen::VectorXd gradient(const MetricField& g, const ScalarField& f, const ChartPoint& p);
double grad_norm_sq(const MetricField& g, const ScalarField& f, const ChartPoint& p);

/// (L_X g)_ij = nabla_i X_j + nabla_j X_i
Sym2Tensor lie_derivative_metric(const MetricField& g, const VectorField& x, const ChartPoint& p);
/// (nabla X)^i_j as a matrix with row i, column j.
Eigen::MatrixXd covariant_derivative(const MetricField& g, const VectorField& x, const ChartPoint& p);

/// Q^i_j = g^ik R_kj
Eigen::MatrixXd ricci_operator(const MetricField& g, const ChartPoint& p);

/// d_i R (needs metric order 3).
Eigen::VectorXd grad_scalar_curvature(const MetricField& g, const ChartPoint& p);
/// Delta R (needs metric order 4).
double laplacian_scalar_curvature(const MetricField& g, const ChartPoint& p);

}  // namespace rys
