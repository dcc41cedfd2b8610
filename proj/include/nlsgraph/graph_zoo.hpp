#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nlsgraph/functionals.hpp"
#include "nlsgraph/graph.hpp"
#include "nlsgraph/mesh.hpp"

namespace nlsgraph {

// Half-lines are kept unbounded in every builder; the truncation length is a
// discretization parameter (see discretize).

/// Two half-lines joined at a flagged junction vertex: the real line.
MetricGraph line_graph();
MetricGraph half_line_graph();
/// N >= 3 half-lines glued at a common origin. Throws for N < 3.
MetricGraph star_graph(int N);

/// u_{I,a} on a star mesh: phi(x + a) on the first N/2 half-lines (in edge
/// order) and phi(x - a) on the others, x measured from the center. For odd N
/// only a = 0 is a solution (half-soliton copies); other shifts throw.
GridFunction star_solution(int N, double a, const ProblemParams& pp, const MeshPtr& mesh);

/// One unit edge with two half-lines at each endpoint.
MetricGraph h_graph();
/// The single bounded edge of h_graph().
EdgeId h_graph_bridge(const MetricGraph& g);

/// Line through v_1..v_K at unit spacing with a self-loop of length k at v_k
/// and half-line tails beyond v_1 and v_K.
MetricGraph big_circles(int K);
/// Loop of length k in big_circles(K).
EdgeId big_circles_loop(const MetricGraph& g, int k);

/// `count` self-loops of length `loop_length` on a line segment of unit
/// spacing, with half-line tails at both ends.
MetricGraph loops_on_line(int count, double loop_length, double spacing = 1.0);

/// A single self-loop of the given length, no half-lines: a compact graph
/// whose vertex is flagged so the degree rule does not fire.
MetricGraph compact_loop(double length);

struct PeriodicGraph {
  MetricGraph graph;
  EdgePartition partition;
  /// Line vertices v_{-K}..v_K.
  std::map<int, VertexId> line;
  /// Self-loops by cell index (k = 0 present only in the tilde variant).
  std::map<int, EdgeId> loops;
  /// The N parallel unit edges between v_0 and the apex (empty in the tilde variant).
  std::vector<EdgeId> block;
  /// Unit edges v_k -> v_{k+1}, by k.
  std::map<int, EdgeId> line_edges;
  /// The two half-lines of the R-block at v_k, by k.
  std::map<int, std::vector<EdgeId>> rays;
};

/// Cells k = -K..K: v_k carries two half-lines; v_k, k != 0, a loop of
/// length N; v_0 the block of N parallel unit edges to an apex vertex. The
/// line continues beyond v_{-K} and v_K as half-lines (kept in S2).
PeriodicGraph g_n(int N, int K);
/// Same window with the block replaced by a loop of length N at v_0.
PeriodicGraph tilde_g_n(int N, int K);

/// Builds a zoo graph from an expression such as `star(3)`, `big_circles(8)`,
/// `g_n(6,2)`, `tilde_g_n(6,2)`, `h_graph`, `line`, `half_line`,
/// `loops_on_line(3,10)` or `compact_loop(2)`. Throws std::invalid_argument
/// on anything else.
MetricGraph build_zoo(const std::string& expr);
bool is_zoo_expression(const std::string& expr);

}  // namespace nlsgraph
