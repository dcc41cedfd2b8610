#pragma once

#include <iosfwd>
#include <vector>

#include "nlsgraph/functionals.hpp"
#include "nlsgraph/mesh.hpp"

namespace nlsgraph {

/// Uniform samples of a function of one variable, value k at origin + k*step.
/// Norms treat it as the piecewise-linear interpolant.
struct Profile1D {
  double origin = 0.0;
  double step = 0.0;
  Vector values;

  double length() const { return step * static_cast<double>(values.size() > 0 ? values.size() - 1 : 0); }
  double end() const { return origin + length(); }
  /// Linear interpolation; zero outside the domain.
  double at(double x) const;
};

double norm(const Profile1D& f, double q);
double grad_norm_sq(const Profile1D& f);

/// The exact decreasing rearrangement of a piecewise-linear u >= 0 is itself
/// piecewise linear in s: a polyline from (0, max u) to (|G|, min u) whose
/// knots sit at the nodal values of u.
struct LevelCurve {
  std::vector<double> s;
  std::vector<double> value;

  double at(double x) const;
};

/// |{x : u(x) > t}| for the piecewise-linear interpolant, by linear inversion
/// on each element. Throws std::invalid_argument if u has negative values.
double distribution(const GridFunction& u, double t);

LevelCurve rearrangement_curve(const GridFunction& u);

/// u* sampled on [0, |G|] with step close to the mesh's target step.
Profile1D decreasing_rearrangement(const GridFunction& u);
/// u^(x) = u*(2|x|) sampled on [-|G|/2, |G|/2]; x = 0 is always a sample.
Profile1D symmetric_rearrangement(const GridFunction& u);

struct PreimageCount {
  int count = 0;
  /// False when t is outside (min u, max u); count is then 0.
  bool in_range = false;
};

/// Transversal crossings of level t, counted as elements whose end values lie
/// on opposite sides of t. Callers keep t away from nodal values.
PreimageCount preimage_count(const GridFunction& u, double t);

/// Smallest preimage count over `samples` quasi-random levels in (min u, max u),
/// each nudged off nodal values.
int min_preimage_count(const GridFunction& u, int samples = 64);

/// u_K(x) = u*(Kx): the domain shrinks by K.
Profile1D kfold_compress(const Profile1D& profile, int K);

/// Integral of |u'|^2 over u^{-1}((lo, hi)), exact for piecewise-linear data.
double band_dirichlet(const GridFunction& u, double lo, double hi);
double band_dirichlet(const LevelCurve& c, double lo, double hi);

/// Outcome of the K-fold comparison J(u) >= K s_lambda / 2 for a nonnegative
/// Nehari element u with at least K preimages per level.
struct KFoldBound {
  int K = 0;
  double action = 0.0;
  /// K * J(pi(u_K) u_K) on the half-line; the chain of inequalities gives
  /// action >= half_line_bound >= K s_lambda / 2.
  double half_line_bound = 0.0;
  double soliton_bound = 0.0;
};

KFoldBound kfold_bound(const GridFunction& u, const ProblemParams& pp);

/// CSV rows `s,value`.
void write_csv(std::ostream& os, const Profile1D& f);

}  // namespace nlsgraph
