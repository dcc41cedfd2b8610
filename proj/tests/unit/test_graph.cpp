#include <doctest.h>

#include <algorithm>

#include "nlsgraph/graph.hpp"
#include "nlsgraph/graph_spec.hpp"
#include "nlsgraph/graph_zoo.hpp"

using namespace nlsgraph;

namespace {

bool has_violation(const std::vector<Violation>& vs, ViolationKind k) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("single bounded edge has no unbounded edge") {
  MetricGraph g("segment");
  auto a = g.add_vertex(), b = g.add_vertex();
  g.add_edge(a, b, 1.0);
  auto vs = validate_class_g(g);
  CHECK(has_violation(vs, ViolationKind::NoUnboundedEdge));
  CHECK_FALSE(has_violation(validate_class_g(g, false), ViolationKind::NoUnboundedEdge));
}

TEST_CASE("line junction is exempt from the degree rule") {
  CHECK(validate_class_g(line_graph()).empty());

  MetricGraph g("unflagged");
  auto v = g.add_vertex();
  g.add_half_line(v);
  g.add_half_line(v);
  CHECK(has_violation(validate_class_g(g), ViolationKind::DegreeTwo));
}

TEST_CASE("star graphs are admissible") {
  CHECK(validate_class_g(star_graph(3)).empty());
  CHECK(validate_class_g(star_graph(5)).empty());
}

TEST_CASE("disconnected and isolated vertices are reported") {
  MetricGraph g("two");
  auto a = g.add_vertex(), b = g.add_vertex();
  for (int i = 0; i < 3; ++i) g.add_half_line(a);
  for (int i = 0; i < 3; ++i) g.add_half_line(b);
  CHECK(has_violation(validate_class_g(g), ViolationKind::Disconnected));
  CHECK_FALSE(is_connected(g));

  MetricGraph h = star_graph(3);
  h.add_vertex();
  CHECK(has_violation(validate_class_g(h), ViolationKind::IsolatedVertex));
}

TEST_CASE("self-loops count twice in the degree") {
  MetricGraph g = compact_loop(3.0);
  CHECK(g.degree(g.vertices().front()) == 2);
  MetricGraph b = big_circles(2);
  EdgeId loop = big_circles_loop(b, 2);
  CHECK(b.degree(b.edge(loop).tail) == 4);
}

TEST_CASE("merge_degree_two concatenates edges") {
  MetricGraph g("path");
  auto a = g.add_vertex(), m = g.add_vertex(), b = g.add_vertex();
  g.add_edge(a, m, 1.5);
  g.add_edge(m, b, 2.0);
  for (int i = 0; i < 2; ++i) g.add_half_line(a);
  for (int i = 0; i < 2; ++i) g.add_half_line(b);
  CHECK(has_violation(validate_class_g(g), ViolationKind::DegreeTwo));
  MetricGraph merged = merge_degree_two(g);
  CHECK(validate_class_g(merged).empty());
  CHECK(merged.vertices().size() == 2);
  CHECK(total_bounded_length(merged) == doctest::Approx(3.5));
}

TEST_CASE("total bounded length") {
  CHECK(total_bounded_length(star_graph(3)) == 0.0);
  // Loops 1 + 2 + 3 and two unit line edges.
  CHECK(total_bounded_length(big_circles(3)) == doctest::Approx(8.0));
  // Two loops of length 4, the block of four unit edges, two line edges.
  CHECK(total_bounded_length(g_n(4, 1).graph) == doctest::Approx(14.0));
}

TEST_CASE("two-rays sufficient condition") {
  CHECK(check_assumption_h(star_graph(3)).status == HStatus::HoldsSufficient);
  CHECK(check_assumption_h(big_circles(4)).status == HStatus::HoldsSufficient);
  CHECK(check_assumption_h(g_n(4, 1).graph).status == HStatus::HoldsSufficient);
  CHECK(check_assumption_h(tilde_g_n(4, 1).graph).status == HStatus::HoldsSufficient);
  CHECK(check_assumption_h(line_graph()).status == HStatus::HoldsSufficient);

  // Compact tree hanging off a single half-line: one route to infinity only.
  MetricGraph t("tree");
  auto r = t.add_vertex(), a = t.add_vertex(), b = t.add_vertex(), c = t.add_vertex();
  t.add_edge(r, a, 1.0);
  t.add_edge(r, b, 1.0);
  t.add_edge(r, c, 1.0);
  t.add_half_line(a);
  CHECK(check_assumption_h(t).status == HStatus::Unknown);
}

TEST_CASE("a bridge into a compact pendant blocks the condition") {
  MetricGraph g = star_graph(3);
  VertexId centre = g.vertices().front();
  auto w = g.add_vertex();
  EdgeId bridge = g.add_edge(centre, w, 2.0);
  g.add_edge(w, w, 3.0);
  auto bs = bridges(g);
  CHECK(std::find(bs.begin(), bs.end(), bridge) != bs.end());
  CHECK(check_assumption_h(g).status == HStatus::Unknown);
}

TEST_CASE("witnesses are edge-disjoint and end on half-lines") {
  MetricGraph g = h_graph();
  HReport rep = check_assumption_h(g);
  REQUIRE(rep.status == HStatus::HoldsSufficient);
  for (const auto& w : rep.witnesses) {
    REQUIRE_FALSE(w.first.empty());
    REQUIRE_FALSE(w.second.empty());
    CHECK(g.edge(w.first.back()).is_half_line());
    CHECK(g.edge(w.second.back()).is_half_line());
    for (EdgeId e : w.first) CHECK(std::find(w.second.begin(), w.second.end(), e) == w.second.end());
  }
}

TEST_CASE("GraphSpec round trip keeps lengths bit for bit") {
  for (const char* expr : {"star(4)", "big_circles(5)", "g_n(4,1)", "tilde_g_n(6,2)", "h_graph",
                           "line", "loops_on_line(3,10)"}) {
    MetricGraph g = build_zoo(expr);
    std::string text = emit_graph_spec(g);
    MetricGraph back = parse_graph_spec(text);
    CHECK(emit_graph_spec(back) == text);
    CHECK(back.edges().size() == g.edges().size());
    for (const auto& e : g.edges()) CHECK(back.edge(e.id).length == e.length);
  }
  MetricGraph odd("odd lengths");
  auto v = odd.add_vertex();
  odd.add_edge(v, v, 0.1 + 0.2);
  odd.add_edge(v, v, 1.0 / 3.0);
  odd.add_half_line(v);
  MetricGraph back = parse_graph_spec(emit_graph_spec(odd));
  CHECK(back.edges()[0].length == 0.1 + 0.2);
  CHECK(back.edges()[1].length == 1.0 / 3.0);
  CHECK(back.name() == "odd lengths");
}

TEST_CASE("GraphSpec is order-insensitive and reports bad lines") {
  const char* shuffled =
      "# a star\n"
      "halfline 2 0\n"
      "halfline 0 0\n"
      "name=s\n"
      "vertex 0\n"
      "halfline 1 0\n";
  MetricGraph g = parse_graph_spec(shuffled);
  CHECK(isomorphic(g, star_graph(3)));

  try {
    parse_graph_spec("vertex 0\nedge 0 0 0 length=-1\n");
    FAIL("expected a parse error");
  } catch (const GraphSpecError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_graph_spec("vertex 0\nbogus 1\n"), GraphSpecError);
  CHECK_THROWS_AS(parse_graph_spec("halfline 0 0\nhalfline 0 0\n"), GraphSpecError);
  CHECK_THROWS_AS(parse_graph_spec("edge 0 0 1 length=abc\n"), GraphSpecError);
}

TEST_CASE("isomorphism distinguishes lengths") {
  CHECK(isomorphic(big_circles(3), parse_graph_spec(emit_graph_spec(big_circles(3)))));
  CHECK_FALSE(isomorphic(loops_on_line(1, 4.0), loops_on_line(1, 5.0)));
}
