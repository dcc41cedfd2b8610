#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nlsgraph/functionals.hpp"
#include "nlsgraph/graph_zoo.hpp"
#include "nlsgraph/mesh.hpp"

using namespace nlsgraph;

namespace {

MetricGraph segment(double len) {
  MetricGraph g("segment");
  auto a = g.add_vertex(), b = g.add_vertex();
  g.add_edge(a, b, len);
  return g;
}

// phi_1 for p = 4 written out: sqrt(2) sech(x).
double sech_soliton(double x) { return std::sqrt(2.0) / std::cosh(x); }

// Symmetric soliton across the two half-lines of the line graph.
GridFunction line_soliton(double h) {
  MeshPtr m = discretize(line_graph(), h, 20.0);
  return interpolate(m, [](const Edge&, double x) { return sech_soliton(x); });
}

double slope(const std::vector<double>& hs, const std::vector<double>& errs) {
  // Least-squares slope of log err against log h.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("line graph mesh: two edges of 2001 nodes sharing the centre") {
  MeshPtr m = discretize(line_graph(), 0.01, 20.0);
  REQUIRE(m->edges().size() == 2);
  for (const auto& em : m->edges()) {
    CHECK(em.nodes.size() == 2001);
    CHECK(em.half_line);
    CHECK(m->is_pinned(em.nodes.back()));
  }
  CHECK(m->edges()[0].nodes.front() == m->edges()[1].nodes.front());
  CHECK(m->dof_count() == 2 * 2001 - 1);
}

TEST_CASE("star(3) DOF count") {
  MeshPtr m = discretize(star_graph(3), 0.01, 20.0);
  CHECK(m->dof_count() == 3 * 2001 - 2);
  int pinned = 0;
  for (Index i = 0; i < m->dof_count(); ++i) pinned += m->is_pinned(i);
  CHECK(pinned == 3);
}

TEST_CASE("edge intervals are rounded up to an even count") {
  MeshPtr m = discretize(segment(1.0), 0.3, 5.0);
  CHECK(m->edges()[0].intervals == 4);
  CHECK(m->edges()[0].step == doctest::Approx(0.25));
  MeshPtr m2 = discretize(segment(1.0), 0.4, 5.0);
  CHECK(m2->edges()[0].intervals == 4);
  CHECK(m2->max_step() <= 0.4);
}

TEST_CASE("discretize rejects bad parameters") {
  CHECK_THROWS_AS(discretize(star_graph(3), 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(discretize(star_graph(3), 0.01, 4.0), std::invalid_argument);
}

TEST_CASE("simple norms") {
  MeshPtr m = discretize(segment(2.0), 0.1, 5.0);
  GridFunction one = interpolate(m, [](const Edge&, double) { return 1.0; });
  CHECK(norm(one, 2.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(grad_norm_sq(one) == doctest::Approx(0.0));

  MeshPtr unit = discretize(segment(1.0), 0.1, 5.0);
  GridFunction ramp = interpolate(unit, [](const Edge&, double x) { return x; });
  CHECK(grad_norm_sq(ramp) == doctest::Approx(1.0));
  GridFunction hat = interpolate(unit, [](const Edge&, double x) { return 1.0 - std::abs(2.0 * x - 1.0); });
  CHECK(norm(hat, kInfinity) == doctest::Approx(1.0));
  // Exact for the piecewise-linear interpolant: int_0^1 hat^2 = 1/3.
  CHECK(norm(hat, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(norm(GridFunction(unit), 3.0) == 0.0);
}

TEST_CASE("soliton norms against closed forms") {
  GridFunction u = line_soliton(0.01);
  // int 2 sech^2 = 4, int 4 sech^4 = 16/3, int 2 sech^2 tanh^2 = 4/3.
  CHECK(std::pow(norm(u, 4.0), 4.0) == doctest::Approx(16.0 / 3.0).epsilon(1e-4));
  CHECK(grad_norm_sq(u) == doctest::Approx(4.0 / 3.0).epsilon(1e-3));
  CHECK(norm(u, 2.0) * norm(u, 2.0) == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(norm(u, kInfinity) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("norms converge at second order") {
  std::vector<double> hs = {0.08, 0.04, 0.02, 0.01};
  std::vector<double> e2, e4, ed;
  for (double h : hs) {
    GridFunction u = line_soliton(h);
    e2.push_back(std::abs(norm(u, 2.0) - 2.0));
    e4.push_back(std::abs(norm(u, 4.0) - std::pow(16.0 / 3.0, 0.25)));
    ed.push_back(std::abs(std::sqrt(grad_norm_sq(u)) - std::sqrt(4.0 / 3.0)));
  }
  CHECK(slope(hs, e2) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(slope(hs, e4) == doctest::Approx(2.0).epsilon(0.15));
  CHECK(slope(hs, ed) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("interpolate checks vertex continuity") {
  MeshPtr m = discretize(star_graph(3), 0.1, 10.0);
  GridFunction zero = interpolate(m, [](const Edge&, double) { return 0.0; });
  CHECK(zero.values.isZero());
  CHECK_THROWS_AS(interpolate(m, [](const Edge& e, double) { return e.id.value == 0 ? 1.0 : 0.0; }),
                  ContinuityError);
  // Pinned far ends are zero whatever f says there.
  GridFunction one = interpolate(m, [](const Edge&, double) { return 1.0; });
  for (const auto& em : m->edges()) CHECK(one.values[em.nodes.back()] == 0.0);
}

TEST_CASE("truncated soliton on a long edge vanishes off the edge") {
  MetricGraph g = loops_on_line(1, 20.0);
  MeshPtr m = discretize(g, 0.05, 10.0);
  EdgeId loop;
  for (const auto& e : g.edges())
    if (e.is_self_loop()) loop = e.id;
  Soliton phi({1.0, 4.0});
  const double cut = phi(10.0);
  GridFunction u = interpolate(m, [&](const Edge& e, double x) {
    return e.id == loop ? std::max(0.0, phi(x - 10.0) - cut) : 0.0;
  });
  CHECK(restrict_norm(u, {loop}, kInfinity) == doctest::Approx(phi(0.0) - cut));
  std::set<EdgeId> rest;
  for (const auto& e : g.edges())
    if (e.id != loop) rest.insert(e.id);
  CHECK(restrict_norm(u, rest, kInfinity) == 0.0);
}

TEST_CASE("restrict_norm over regions") {
  MetricGraph g = star_graph(3);
  MeshPtr m = discretize(g, 0.05, 10.0);
  // Two bumps, on edges 0 and 1, with different heights.
  GridFunction u = interpolate(m, [](const Edge& e, double x) {
    double bump = std::max(0.0, 1.0 - std::abs(x - 4.0));
    return e.id.value == 0 ? bump : e.id.value == 1 ? 2.0 * bump : 0.0;
  });
  std::set<EdgeId> all;
  for (const auto& e : g.edges()) all.insert(e.id);
  for (double q : {1.0, 2.0, 4.0, kInfinity}) CHECK(restrict_norm(u, all, q) == doctest::Approx(norm(u, q)));
  CHECK(restrict_norm(u, {}, 2.0) == 0.0);
  CHECK(restrict_norm(u, {EdgeId{0}}, 2.0) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(restrict_norm(u, {EdgeId{1}}, kInfinity) == doctest::Approx(2.0));
  double maxpart = 0.0;
  for (const auto& e : g.edges()) maxpart = std::max(maxpart, restrict_norm(u, {e.id}, kInfinity));
  CHECK(maxpart == norm(u, kInfinity));
}

TEST_CASE("grid function CSV dump") {
  MeshPtr m = discretize(segment(1.0), 0.5, 5.0);
  GridFunction u = interpolate(m, [](const Edge&, double x) { return x; });
  std::ostringstream os;
  write_csv(os, u);
  CHECK(os.str() == "edge_id,local_x,value\n0,0,0\n0,0.5,0.5\n0,1,1\n");
}
