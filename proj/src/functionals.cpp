#include "nlsgraph/functionals.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace nlsgraph {

ProblemParams::ProblemParams(double lambda, double p) : lambda_(lambda), p_(p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!(p > 2.0) || !std::isfinite(p)) throw std::invalid_argument("p must be > 2");
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa, double m,
                    double fm, double b, double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double unit_profile(double p, double x) {
  double e = 2.0 / (p - 2.0);
  return std::pow(0.5 * p, 1.0 / (p - 2.0)) * std::pow(1.0 / std::cosh(0.5 * (p - 2.0) * x), e);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 50);
}

double unit_soliton_level(double p) {
  static std::mutex mu;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(p); it != cache.end()) return it->second;
  // phi_1^p decays like exp(-p x); beyond 750/p it underflows.
  const double cutoff = 750.0 / p;
  auto integrand = [p](double x) { return std::pow(unit_profile(p, x), p); };
  double half = 0.0;
  // Split so the peak region is resolved before the long tail.
  const double breaks[] = {0.0, 1.0, 4.0, 16.0, cutoff};
  for (int i = 0; i + 1 < 5; ++i) {
    if (breaks[i] >= cutoff) break;
    half += adaptive_simpson(integrand, breaks[i], std::min(breaks[i + 1], cutoff), 1e-15);
  }
  double s1 = (0.5 - 1.0 / p) * 2.0 * half;
  cache[p] = s1;
  return s1;
}

double soliton_level(const ProblemParams& pp) {
  return unit_soliton_level(pp.p()) * std::pow(pp.lambda(), pp.alpha());
}

Soliton::Soliton(const ProblemParams& pp)
    : pp_(pp),
      amplitude_(std::pow(pp.lambda(), 1.0 / (pp.p() - 2.0))),
      rate_(std::sqrt(pp.lambda())),
      level_(soliton_level(pp)) {}

double Soliton::operator()(double x) const { return amplitude_ * unit_profile(pp_.p(), rate_ * x); }

double Soliton::derivative(double x) const {
  // phi_1' = -phi_1 tanh((p-2)x/2)
  double y = rate_ * x;
  return -amplitude_ * rate_ * unit_profile(pp_.p(), y) * std::tanh(0.5 * (pp_.p() - 2.0) * y);
}

namespace {

struct Norms {
  double grad2;  // ||u'||^2
  double l2;     // ||u||_2^2
  double lp;     // ||u||_p^p
};

Norms norms_of(const GridFunction& u, double p) {
  return {grad_norm_sq(u), u.values.dot(u.mesh->mass() * u.values), power_integral(u, p)};
}

}  // namespace

double action(const GridFunction& u, const ProblemParams& pp) {
  Norms n = norms_of(u, pp.p());
  return 0.5 * n.grad2 + 0.5 * pp.lambda() * n.l2 - n.lp / pp.p();
}

double nehari_residual(const GridFunction& u, const ProblemParams& pp) {
  Norms n = norms_of(u, pp.p());
  return n.grad2 + pp.lambda() * n.l2 - n.lp;
}

double nehari_factor(const GridFunction& u, const ProblemParams& pp) {
  Norms n = norms_of(u, pp.p());
  if (!(n.lp > 0.0)) throw std::invalid_argument("Nehari projection of the zero function");
  return std::pow((n.grad2 + pp.lambda() * n.l2) / n.lp, 1.0 / (pp.p() - 2.0));
}

GridFunction project_nehari(const GridFunction& u, const ProblemParams& pp) {
  return nehari_factor(u, pp) * u;
}

double lagrange_estimate(const GridFunction& u, double p) {
  Norms n = norms_of(u, p);
  if (!(n.l2 > 0.0)) throw std::invalid_argument("L(u) undefined for zero L2 norm");
  return (n.lp - n.grad2) / n.l2;
}

double reduced_level(const GridFunction& u, const ProblemParams& pp) {
  Norms n = norms_of(u, pp.p());
  if (!(n.lp > 0.0)) throw std::invalid_argument("reduced level of the zero function");
  const double p = pp.p();
  double quad = n.grad2 + pp.lambda() * n.l2;
  return pp.kappa() * std::exp((p * std::log(quad) - 2.0 * std::log(n.lp)) / (p - 2.0));
}

GnSides gn_check(const GridFunction& u, double q) {
  double l2 = norm(u, 2.0);
  double d = std::sqrt(std::max(0.0, grad_norm_sq(u)));
  if (q == kInfinity) {
    double m = norm(u, kInfinity);
    return {m * m, 2.0 * l2 * d};
  }
  if (q < 2.0) throw std::invalid_argument("Gagliardo-Nirenberg check needs q >= 2");
  double lhs = power_integral(u, q);
  double rhs = std::pow(2.0, 0.5 * q - 1.0) * std::pow(l2, 0.5 * q + 1.0) * std::pow(d, 0.5 * q - 1.0);
  return {lhs, rhs};
}

Vector nonlinear_load(const GridFunction& u, double p) {
  Vector g = Vector::Zero(u.values.size());
  for (const auto& em : u.mesh->edges()) {
    const double h = em.step;
    for (int i = 0; i < em.intervals; ++i) {
      Index ia = em.nodes[static_cast<std::size_t>(i)];
      Index ib = em.nodes[static_cast<std::size_t>(i) + 1];
      double a = u.values[ia], b = u.values[ib];
      double ga = 0.0, gb = 0.0;
      for (int k = 0; k < quadrature::kPoints; ++k) {
        double x = quadrature::kNodes[k];
        double v = a + (b - a) * x;
        double f = std::pow(std::abs(v), p - 2.0) * v * quadrature::kWeights[k];
        ga += f * (1.0 - x);
        gb += f * x;
      }
      g[ia] += h * ga;
      g[ib] += h * gb;
    }
  }
  return g;
}

SparseMatrix nonlinear_weight(const GridFunction& u, double p) {
  const Index n = u.values.size();
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& em : u.mesh->edges()) {
    const double h = em.step;
    for (int i = 0; i < em.intervals; ++i) {
      Index ia = em.nodes[static_cast<std::size_t>(i)];
      Index ib = em.nodes[static_cast<std::size_t>(i) + 1];
      double a = u.values[ia], b = u.values[ib];
      double aa = 0.0, ab = 0.0, bb = 0.0;
      for (int k = 0; k < quadrature::kPoints; ++k) {
        double x = quadrature::kNodes[k];
        double w = std::pow(std::abs(a + (b - a) * x), p - 2.0) * quadrature::kWeights[k];
        aa += w * (1.0 - x) * (1.0 - x);
        ab += w * x * (1.0 - x);
        bb += w * x * x;
      }
      t.emplace_back(ia, ia, h * aa);
      t.emplace_back(ib, ib, h * bb);
      t.emplace_back(ia, ib, h * ab);
      t.emplace_back(ib, ia, h * ab);
    }
  }
  SparseMatrix w(n, n);
  w.setFromTriplets(t.begin(), t.end());
  return w;
}

GridFunction action_gradient(const GridFunction& u, const ProblemParams& pp) {
  const Mesh& mesh = *u.mesh;
  Vector g = mesh.stiffness() * u.values + pp.lambda() * (mesh.mass() * u.values) -
             nonlinear_load(u, pp.p());
  for (Index i = 0; i < g.size(); ++i) {
    if (mesh.is_pinned(i)) g[i] = 0.0;
  }
  return {u.mesh, std::move(g)};
}

KirchhoffReport kirchhoff_residual(const GridFunction& u, const ProblemParams& pp) {
  const Mesh& mesh = *u.mesh;
  const double lambda = pp.lambda(), p = pp.p();
  KirchhoffReport rep;
  for (auto v : mesh.graph().vertices()) rep.vertex[v] = 0.0;

  // Outgoing flux along the element [v, nb] of length h, v at local x = 0.
  auto flux = [&](double uv, double unb, double h) {
    double corr = 0.0;
    for (int k = 0; k < quadrature::kPoints; ++k) {
      double x = quadrature::kNodes[k];
      double w = uv + (unb - uv) * x;
      corr += quadrature::kWeights[k] * (lambda * w - std::pow(std::abs(w), p - 2.0) * w) * (1.0 - x);
    }
    return (unb - uv) / h - h * corr;
  };

  for (const auto& em : mesh.edges()) {
    const Edge& e = mesh.graph().edge(em.id);
    const auto& nd = em.nodes;
    rep.vertex[e.tail] += flux(u.values[nd[0]], u.values[nd[1]], em.step);
    if (!em.half_line) {
      std::size_t last = nd.size() - 1;
      rep.vertex[*e.head] += flux(u.values[nd[last]], u.values[nd[last - 1]], em.step);
    }
  }
  for (const auto& [v, r] : rep.vertex) rep.vertex_max = std::max(rep.vertex_max, std::abs(r));

  Vector res = action_gradient(u, pp).values;
  const Vector& m = mesh.lumped_mass();
  for (Index i = 0; i < res.size(); ++i) {
    if (mesh.is_pinned(i) || mesh.vertex_of(i)) continue;
    rep.interior_max = std::max(rep.interior_max, std::abs(res[i]) / m[i]);
  }
  return rep;
}

}  // namespace nlsgraph
