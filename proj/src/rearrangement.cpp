#include "nlsgraph/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <stdexcept>

namespace nlsgraph {

namespace {

void require_nonnegative(const GridFunction& u) {
  if (u.values.size() > 0 && u.values.minCoeff() < 0.0) {
    throw std::invalid_argument("rearrangement needs u >= 0 (pass |u|)");
  }
}

// Measure of {x in [0, h] : lo < a + (b - a) x / h < hi}.
double band_measure(double a, double b, double h, double lo, double hi) {
  if (a == b) return (a > lo && a < hi) ? h : 0.0;
  double x0 = (lo - a) / (b - a), x1 = (hi - a) / (b - a);
  if (x0 > x1) std::swap(x0, x1);
  x0 = std::clamp(x0, 0.0, 1.0);
  x1 = std::clamp(x1, 0.0, 1.0);
  return h * (x1 - x0);
}

template <typename Segments>
double polyline_power(const Segments& for_each_segment, double q) {
  double total = 0.0;
  for_each_segment([&](double a, double b, double h) {
    double s = 0.0;
    for (int k = 0; k < quadrature::kPoints; ++k) {
      s += quadrature::kWeights[k] * std::pow(std::abs(a + (b - a) * quadrature::kNodes[k]), q);
    }
    total += h * s;
  });
  return total;
}

double sample_curve(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  std::size_t j = static_cast<std::size_t>(it - xs.begin());
  if (j == 0) return ys.front();
  double x0 = xs[j - 1], x1 = xs[j];
  if (x1 == x0) return ys[j - 1];
  return ys[j - 1] + (ys[j] - ys[j - 1]) * (x - x0) / (x1 - x0);
}

}  // namespace

double Profile1D::at(double x) const {
  if (values.size() == 0 || x < origin || x > end()) return 0.0;
  double r = (x - origin) / step;
  auto k = static_cast<Index>(std::floor(r));
  if (k >= values.size() - 1) return values[values.size() - 1];
  double w = r - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

double norm(const Profile1D& f, double q) {
  if (q == kInfinity) return f.values.size() ? f.values.cwiseAbs().maxCoeff() : 0.0;
  auto segs = [&](auto&& visit) {
    for (Index i = 0; i + 1 < f.values.size(); ++i) visit(f.values[i], f.values[i + 1], f.step);
  };
  return std::pow(polyline_power(segs, q), 1.0 / q);
}

double grad_norm_sq(const Profile1D& f) {
  double s = 0.0;
  for (Index i = 0; i + 1 < f.values.size(); ++i) {
    double d = f.values[i + 1] - f.values[i];
    s += d * d / f.step;
  }
  return s;
}

double LevelCurve::at(double x) const { return sample_curve(s, value, x); }

double distribution(const GridFunction& u, double t) {
  require_nonnegative(u);
  double m = 0.0;
  for (const auto& em : u.mesh->edges()) {
    for (int i = 0; i < em.intervals; ++i) {
      double a = u.values[em.nodes[static_cast<std::size_t>(i)]];
      double b = u.values[em.nodes[static_cast<std::size_t>(i) + 1]];
      m += band_measure(a, b, em.step, t, kInfinity);
    }
  }
  return m;
}

LevelCurve rearrangement_curve(const GridFunction& u) {
  require_nonnegative(u);
  struct Event {
    double jump = 0.0;
    double dslope = 0.0;
  };
  // Keyed by level, visited from the top down. Between consecutive levels the
  // distribution function is linear with slope sum h / (max - min) over the
  // elements that straddle the band; flat elements make it jump.
  std::map<double, Event, std::greater<>> events;
  for (const auto& em : u.mesh->edges()) {
    for (int i = 0; i < em.intervals; ++i) {
      double a = u.values[em.nodes[static_cast<std::size_t>(i)]];
      double b = u.values[em.nodes[static_cast<std::size_t>(i) + 1]];
      if (a == b) {
        events[a].jump += em.step;
      } else {
        double w = em.step / std::abs(b - a);
        events[std::max(a, b)].dslope += w;
        events[std::min(a, b)].dslope -= w;
      }
    }
  }
  LevelCurve c;
  double mu = 0.0, slope = 0.0;
  double prev = events.empty() ? 0.0 : events.begin()->first;
  for (const auto& [level, ev] : events) {
    mu += slope * (prev - level);
    c.s.push_back(mu);
    c.value.push_back(level);
    if (ev.jump > 0.0) {
      mu += ev.jump;
      c.s.push_back(mu);
      c.value.push_back(level);
    }
    slope += ev.dslope;
    prev = level;
  }
  return c;
}

Profile1D decreasing_rearrangement(const GridFunction& u) {
  LevelCurve c = rearrangement_curve(u);
  const double total = u.mesh->total_length();
  auto n = std::max<Index>(2, static_cast<Index>(std::llround(total / u.mesh->h_target())));
  Profile1D f;
  f.origin = 0.0;
  f.step = total / static_cast<double>(n);
  f.values.resize(n + 1);
  for (Index j = 0; j <= n; ++j) f.values[j] = c.at(std::min(total, f.step * static_cast<double>(j)));
  // The curve may end a rounding error short of |G|; its last value is min u.
  f.values[n] = c.value.empty() ? 0.0 : c.value.back();
  return f;
}

Profile1D symmetric_rearrangement(const GridFunction& u) {
  LevelCurve c = rearrangement_curve(u);
  const double total = u.mesh->total_length();
  auto n = std::max<Index>(2, static_cast<Index>(std::llround(total / u.mesh->h_target())));
  if (n % 2 != 0) ++n;
  Profile1D f;
  f.step = total / static_cast<double>(n);
  f.origin = -0.5 * total;
  f.values.resize(n + 1);
  const double tail = c.value.empty() ? 0.0 : c.value.back();
  for (Index j = 0; j <= n; ++j) {
    double s = std::min(total, 2.0 * std::abs(f.step * static_cast<double>(j - n / 2)));
    f.values[j] = (j == 0 || j == n) ? tail : c.at(s);
  }
  return f;
}

PreimageCount preimage_count(const GridFunction& u, double t) {
  PreimageCount r;
  if (u.values.size() == 0) return r;
  if (!(t > u.values.minCoeff() && t < u.values.maxCoeff())) return r;
  r.in_range = true;
  for (const auto& em : u.mesh->edges()) {
    for (int i = 0; i < em.intervals; ++i) {
      double a = u.values[em.nodes[static_cast<std::size_t>(i)]];
      double b = u.values[em.nodes[static_cast<std::size_t>(i) + 1]];
      if ((a < t) != (b < t)) ++r.count;
    }
  }
  return r;
}

int min_preimage_count(const GridFunction& u, int samples) {
  const double lo = u.values.minCoeff(), hi = u.values.maxCoeff();
  if (!(hi > lo)) return 0;
  const double golden = 0.6180339887498949;
  int best = -1;
  double frac = 0.5;
  for (int k = 0; k < samples; ++k) {
    frac = std::fmod(frac + golden, 1.0);
    double t = lo + (hi - lo) * (0.001 + 0.998 * frac);
    while ((u.values.array() == t).any()) t += 1e-9 * (hi - lo);
    int c = preimage_count(u, t).count;
    best = best < 0 ? c : std::min(best, c);
  }
  return best;
}

Profile1D kfold_compress(const Profile1D& profile, int K) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  Profile1D f = profile;
  f.origin /= K;
  f.step /= K;
  return f;
}

double band_dirichlet(const GridFunction& u, double lo, double hi) {
  double s = 0.0;
  for (const auto& em : u.mesh->edges()) {
    for (int i = 0; i < em.intervals; ++i) {
      double a = u.values[em.nodes[static_cast<std::size_t>(i)]];
      double b = u.values[em.nodes[static_cast<std::size_t>(i) + 1]];
      double slope = (b - a) / em.step;
      s += slope * slope * band_measure(a, b, em.step, lo, hi);
    }
  }
  return s;
}

double band_dirichlet(const LevelCurve& c, double lo, double hi) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.s.size(); ++i) {
    double h = c.s[i + 1] - c.s[i];
    if (!(h > 0.0)) continue;
    double slope = (c.value[i + 1] - c.value[i]) / h;
    s += slope * slope * band_measure(c.value[i], c.value[i + 1], h, lo, hi);
  }
  return s;
}

KFoldBound kfold_bound(const GridFunction& u, const ProblemParams& pp) {
  KFoldBound r;
  r.K = min_preimage_count(u);
  r.action = action(u, pp);
  r.soliton_bound = r.K * 0.5 * soliton_level(pp);
  if (r.K < 1) return r;
  Profile1D uk = kfold_compress(decreasing_rearrangement(u), r.K);
  const double p = pp.p();
  double lp = std::pow(norm(uk, p), p);
  double l2 = norm(uk, 2.0);
  double quad = grad_norm_sq(uk) + pp.lambda() * l2 * l2;
  double level = pp.kappa() * std::exp((p * std::log(quad) - 2.0 * std::log(lp)) / (p - 2.0));
  r.half_line_bound = r.K * level;
  return r;
}

void write_csv(std::ostream& os, const Profile1D& f) {
  os << "s,value\n" << std::setprecision(12);
  for (Index i = 0; i < f.values.size(); ++i) {
    os << f.origin + f.step * static_cast<double>(i) << "," << f.values[i] << "\n";
  }
}

}  // namespace nlsgraph
