#pragma once

#include <map>
#include <utility>

#include "nlsgraph/mesh.hpp"

namespace nlsgraph {

/// Frequency lambda > 0 and nonlinearity power p > 2.
class ProblemParams {
 public:
  ProblemParams(double lambda, double p);

  double lambda() const { return lambda_; }
  double p() const { return p_; }
  /// 1/2 - 1/p: the action on the Nehari manifold is kappa * ||u||_p^p.
  double kappa() const { return 0.5 - 1.0 / p_; }
  /// Exponent in s_lambda = s_1 * lambda^alpha.
  double alpha() const { return (p_ + 2.0) / (2.0 * (p_ - 2.0)); }

 private:
  double lambda_;
  double p_;
};

/// Closed-form positive even soliton on the real line,
///   phi_1(x) = (p/2)^{1/(p-2)} sech^{2/(p-2)}((p-2)x/2),
///   phi_lambda(x) = lambda^{1/(p-2)} phi_1(sqrt(lambda) x),
/// and its action level s_lambda.
class Soliton {
 public:
  explicit Soliton(const ProblemParams& pp);

  double operator()(double x) const;
  double derivative(double x) const;
  double peak() const { return (*this)(0.0); }
  /// s_lambda = s_1 lambda^alpha.
  double level() const { return level_; }
  const ProblemParams& params() const { return pp_; }

 private:
  ProblemParams pp_;
  double amplitude_;
  double rate_;
  double level_;
};

/// s_1 = kappa * ||phi_1||_p^p by adaptive quadrature (cached per p).
double unit_soliton_level(double p);
double soliton_level(const ProblemParams& pp);

/// Adaptive Simpson quadrature of f on [a, b] with absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

double action(const GridFunction& u, const ProblemParams& pp);
/// ||u'||^2 + lambda ||u||^2 - ||u||_p^p.
double nehari_residual(const GridFunction& u, const ProblemParams& pp);
/// Scaling factor pi_lambda(u) that maps u onto the Nehari manifold.
double nehari_factor(const GridFunction& u, const ProblemParams& pp);
GridFunction project_nehari(const GridFunction& u, const ProblemParams& pp);
/// (||u||_p^p - ||u'||^2) / ||u||_2^2; equals lambda exactly on the manifold.
double lagrange_estimate(const GridFunction& u, double p);
/// Scale-invariant action of the Nehari projection,
///   kappa [(||u'||^2 + lambda ||u||^2)^p / ||u||_p^{2p}]^{1/(p-2)}.
double reduced_level(const GridFunction& u, const ProblemParams& pp);

struct GnSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
/// Both sides of the Gagliardo-Nirenberg inequality for exponent q >= 2,
/// or of its L-infinity variant when q == kInfinity.
GnSides gn_check(const GridFunction& u, double q);

/// Load vector of the nonlinearity: entries  int |u|^{p-2} u phi_i.
Vector nonlinear_load(const GridFunction& u, double p);
/// Matrix  int |u|^{p-2} phi_i phi_j  (tridiagonal per edge).
SparseMatrix nonlinear_weight(const GridFunction& u, double p);

/// Discrete gradient of the action, (K + lambda M) u - g(u), zero on pinned DOFs.
GridFunction action_gradient(const GridFunction& u, const ProblemParams& pp);

struct KirchhoffReport {
  /// Sum of outgoing derivative estimates at each vertex.
  std::map<VertexId, double> vertex;
  /// Max over edge-interior nodes of the nodal equation residual.
  double interior_max = 0.0;
  double vertex_max = 0.0;
  double max() const { return std::max(interior_max, vertex_max); }
};

/// Outgoing derivatives are the second-order one-sided fluxes consistent with
/// the Galerkin equations: (u_1 - u_0)/h minus the element integral of
/// (lambda u - |u|^{p-2} u) against the vertex hat. Interior residuals are the
/// nodal equations divided by the hat mass, an O(h^2) approximation of
/// u'' + |u|^{p-2} u - lambda u.
KirchhoffReport kirchhoff_residual(const GridFunction& u, const ProblemParams& pp);

}  // namespace nlsgraph
