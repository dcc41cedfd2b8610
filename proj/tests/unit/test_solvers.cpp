#include <doctest.h>

#include <cmath>

#include "nlsgraph/experiments.hpp"
#include "nlsgraph/graph_zoo.hpp"
#include "nlsgraph/solvers.hpp"

using namespace nlsgraph;

namespace {

const ProblemParams kP4{1.0, 4.0};
const double kS = 4.0 / 3.0;

// ||.||_p of the soliton restricted to a half-line; solver outputs stay above
// half of it.
double half_line_pnorm() { return std::pow(0.5 * 16.0 / 3.0, 0.25); }

void check_solution(const SolveReport& r, const ProblemParams& pp) {
  REQUIRE(r.status == SolveStatus::Converged);
  double b = power_integral(r.u, pp.p());
  CHECK(std::abs(r.nehari_res) <= 1e-8 * b);
  CHECK(std::abs(r.multiplier - pp.lambda()) <= 1e-6 * pp.lambda());
  CHECK(r.kirchhoff_max <= 1e-6);
  CHECK(norm(r.u, pp.p()) >= 0.5 * half_line_pnorm());
}

// (phi(x - c) - phi(c))^+ on one edge: vanishes at its tail.
GridFunction bump_on(const MeshPtr& m, EdgeId id, double centre) {
  Soliton phi(kP4);
  return interpolate(m, [&](const Edge& e, double x) {
    return e.id == id ? std::max(0.0, phi(x - centre) - phi(centre)) : 0.0;
  });
}

}  // namespace

TEST_CASE("ground state on the line") {
  MeshPtr m = discretize(line_graph(), 0.02, 20.0);
  SolverOptions opts;
  opts.keep_trace = true;
  SolveReport r = minimize_nehari(bump_on(m, EdgeId{1}, 1.0), kP4, opts);
  CHECK(r.level == doctest::Approx(kS).epsilon(0.01));
  CHECK(r.status == SolveStatus::Converged);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].level <= r.trace[i - 1].level + 1e-12);
  for (const auto& em : m->edges()) CHECK(r.u.values[em.nodes.back()] == 0.0);

  SolveReport n = refine_newton(r.u, kP4);
  check_solution(n, kP4);
  CHECK(n.level == doctest::Approx(kS).epsilon(1e-3));
}

TEST_CASE("ground state on the half-line") {
  MeshPtr m = discretize(half_line_graph(), 0.02, 20.0);
  SolveReport r = minimize_nehari(bump_on(m, EdgeId{0}, 1.0), kP4);
  CHECK(r.level == doctest::Approx(kS / 2).epsilon(0.01));
  CHECK(r.argmax_at_vertex);
}

TEST_CASE("restarts are seeded and keep the best run") {
  MeshPtr m = discretize(line_graph(), 0.05, 10.0);
  SolverOptions opts;
  opts.restarts = 3;
  opts.seed = 9;
  SolveReport a = minimize_nehari(bump_on(m, EdgeId{1}, 2.0), kP4, opts);
  SolveReport b = minimize_nehari(bump_on(m, EdgeId{1}, 2.0), kP4, opts);
  CHECK(a.level == b.level);
  CHECK(a.u.values == b.u.values);
  // The zero function cannot be projected; every run fails.
  CHECK(minimize_nehari(GridFunction(m), kP4).status == SolveStatus::MaxIters);
}

TEST_CASE("star(3): escaping minimizers stay above the soliton level") {
  MeshPtr m = discretize(star_graph(3), 0.02, 15.0);
  double prev = 1e9;
  for (double d : {1.0, 3.0, 7.0}) {
    SolveReport r = minimize_nehari(bump_on(m, EdgeId{0}, d), kP4);
    CHECK(r.level >= kS - 1e-4);
    CHECK(r.level <= prev + 1e-9);
    prev = r.level;
  }
  CHECK(prev < kS + 0.01);
}

TEST_CASE("constrained minimization on the longest loop of big_circles(8)") {
  MetricGraph g = big_circles(8);
  MeshPtr m = discretize(g, 0.02, 10.0);
  EdgeId loop = big_circles_loop(g, 8);
  SolveReport r = minimize_doubly_constrained(m, kP4, loop);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.argmax_edge == loop);
  CHECK(r.constraint_edge == loop);
  CHECK(r.margin > 0.0);
  CHECK(r.level > kS);
  CHECK(r.level < kS + 0.05);
  SolveReport n = refine_newton(r.u, kP4);
  check_solution(n, kP4);
  CHECK(n.multiplier == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(minimize_doubly_constrained(m, kP4, g.edges().front().id), std::invalid_argument);
}

TEST_CASE("constrained minimization on the unit loop is not attained cheaply") {
  MetricGraph g = big_circles(8);
  MeshPtr m = discretize(g, 0.02, 10.0);
  SolveReport r = minimize_doubly_constrained(m, kP4, big_circles_loop(g, 1));
  bool escaped = r.status == SolveStatus::EscapedConstraint || r.margin <= 0.0;
  CHECK((escaped || r.level > kS + 0.1));
}

TEST_CASE("Newton on the half-soliton of star(3)") {
  MeshPtr m = discretize(star_graph(3), 0.02, 15.0);
  SolveReport n = refine_newton(star_solution(3, 0.0, kP4, m), kP4);
  check_solution(n, kP4);
  CHECK(n.level == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_THROWS_AS(refine_newton(GridFunction(m), kP4), std::invalid_argument);
}

TEST_CASE("sign-changing solutions cost at least two solitons") {
  // Odd under the reflection of a loop of length 30: a positive Dirichlet
  // solution on each half of the loop, opposite signs, zero on the line.
  MetricGraph g = loops_on_line(1, 30.0);
  MeshPtr m = discretize(g, 0.02, 10.0);
  Soliton phi(kP4);
  const double c = phi(7.5) - phi(22.5);
  GridFunction u0 = interpolate(m, [&](const Edge& e, double x) {
    if (!e.is_self_loop()) return 0.0;
    return phi(x - 7.5) - phi(x - 22.5) - c * (1.0 - x / 15.0);
  });
  SolveReport n = refine_newton(u0, kP4);
  check_solution(n, kP4);
  CHECK(n.u.values.minCoeff() < -1e-6 * norm(n.u, kInfinity));
  CHECK(n.u.values.maxCoeff() > 1e-6 * norm(n.u, kInfinity));
  CHECK(n.level >= 2 * kS - 0.05);
}

TEST_CASE("multiplicity scan") {
  MeshPtr star = discretize(star_graph(3), 0.05, 10.0);
  CHECK(multiplicity_scan(star, kP4, 5.0).empty());

  MetricGraph g = loops_on_line(3, 10.0);
  MeshPtr m = discretize(g, 0.02, 10.0);
  auto sols = multiplicity_scan(m, kP4, 5.0);
  REQUIRE(sols.size() == 3);
  for (std::size_t i = 0; i < sols.size(); ++i) {
    check_solution(sols[i], kP4);
    CHECK(sols[i].u.values.minCoeff() >= 0.0);
    CHECK(sols[i].argmax_edge == *sols[i].constraint_edge);
    CHECK(g.edge(sols[i].argmax_edge).is_self_loop());
    CHECK(sols[i].margin > 0.0);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(relative_distance(sols[i].u, sols[j].u) > 0.1);
      CHECK(sols[i].argmax_edge != sols[j].argmax_edge);
    }
  }
}

TEST_CASE("multiplicity scan on big_circles(8): levels fall with loop length") {
  MetricGraph g = big_circles(8);
  MeshPtr m = discretize(g, 0.02, 10.0);
  auto sols = multiplicity_scan(m, kP4, 4.0);
  REQUIRE(sols.size() >= 5);
  for (std::size_t i = 1; i < sols.size(); ++i) {
    CHECK(g.edge(*sols[i].constraint_edge).length > g.edge(*sols[i - 1].constraint_edge).length);
    CHECK(sols[i].level < sols[i - 1].level);
    CHECK(sols[i].level >= kS - 0.01);
  }
}

TEST_CASE("classification by argmax") {
  PeriodicGraph pg = g_n(4, 1);
  MeshPtr m = discretize(pg.graph, 0.05, 10.0);
  EdgeId ray = pg.rays.at(1).front();
  GridFunction on_ray = bump_on(m, ray, 2.0);
  CHECK(classify_solution(on_ray, pg.partition) == std::set<Bucket>{Bucket::S1});
  GridFunction on_loop = bump_on(m, pg.loops.at(1), 2.0);
  CHECK(classify_solution(on_loop, pg.partition) == std::set<Bucket>{Bucket::S3});
  GridFunction tie = on_ray + on_loop;
  CHECK(classify_solution(tie, pg.partition) == std::set<Bucket>{Bucket::S1, Bucket::S3});
  // Peak on v_1: its rays, loop, line edge and tail all count.
  GridFunction vertex = vertex_bump(m, pg.line.at(1), kP4);
  CHECK(classify_solution(vertex, pg.partition).size() == 3);
}

TEST_CASE("report helpers") {
  MeshPtr m = discretize(line_graph(), 0.05, 10.0);
  GridFunction u = bump_on(m, EdgeId{1}, 3.0);
  CHECK(relative_distance(u, u) == 0.0);
  CHECK(relative_distance(u, 2.0 * u) == doctest::Approx(0.5));

  SolveReport r = evaluate(u, kP4);
  CHECK(r.argmax_edge == EdgeId{1});
  CHECK_FALSE(r.argmax_at_vertex);
  CHECK(r.margin > 0.0);
  CHECK(r.level == doctest::Approx(action(u, kP4)));

  auto j = to_json(r);
  CHECK(j.contains("level"));
  CHECK(j.contains("kirchhoff_max"));
  CHECK_FALSE(j.contains("trace"));
  auto jt = to_json(r, true);
  CHECK(jt["u"].size() == static_cast<std::size_t>(m->dof_count()));
  CHECK(to_string(SolveStatus::EscapedConstraint) == "EscapedConstraint");
}
