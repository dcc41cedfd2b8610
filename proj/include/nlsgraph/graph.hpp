#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace nlsgraph {

struct VertexId {
  std::int32_t value = -1;
  auto operator<=>(const VertexId&) const = default;
};

struct EdgeId {
  std::int32_t value = -1;
  auto operator<=>(const EdgeId&) const = default;
};

enum class EdgeKind { Bounded, HalfLine };

/// An edge of a metric graph. Bounded edges join `tail` to `head` (equal for
/// self-loops) and carry a positive length. Half-lines are attached at `tail`
/// only and have infinite length.
struct Edge {
  EdgeId id;
  VertexId tail;
  std::optional<VertexId> head;
  EdgeKind kind = EdgeKind::Bounded;
  double length = 0.0;

  bool is_half_line() const { return kind == EdgeKind::HalfLine; }
  bool is_self_loop() const { return head && *head == tail; }
};

/// Finite metric graph. Vertices listed in `junctions` are exempt from the
/// degree != 2 rule (the junction of two half-lines modelling the real line).
class MetricGraph {
 public:
  MetricGraph() = default;
  explicit MetricGraph(std::string name) : name_(std::move(name)) {}

  VertexId add_vertex();
  void add_vertex(VertexId v);
  EdgeId add_edge(VertexId a, VertexId b, double length);
  EdgeId add_half_line(VertexId v);
  // Explicit-id variants used by the GraphSpec parser.
  void add_edge(EdgeId id, VertexId a, VertexId b, double length);
  void add_half_line(EdgeId id, VertexId v);
  void flag_junction(VertexId v) { junctions_.insert(v); }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::set<VertexId>& junctions() const { return junctions_; }

  bool has_vertex(VertexId v) const;
  const Edge& edge(EdgeId id) const;
  std::size_t edge_index(EdgeId id) const;

  /// Self-loops contribute 2.
  int degree(VertexId v) const;
  std::vector<EdgeId> incident_edges(VertexId v) const;
  std::size_t half_line_count() const;

 private:
  std::string name_;
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::set<VertexId> junctions_;
  std::int32_t next_vertex_ = 0;
  std::int32_t next_edge_ = 0;
};

enum class ViolationKind {
  Empty,
  Disconnected,
  NoUnboundedEdge,
  IsolatedVertex,
  DegreeTwo,
  NonPositiveLength,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::string to_string(ViolationKind kind);

/// Checks the membership conditions for the class of noncompact metric graphs
/// (connected, finite degree, no degree-2 vertex, lengths bounded below, at
/// least one half-line). An empty result means the graph is admissible.
std::vector<Violation> validate_class_g(const MetricGraph& g,
                                        bool require_half_line = true);

bool is_connected(const MetricGraph& g);

/// Replaces every non-junction degree-2 vertex joining two distinct bounded
/// edges (or a bounded edge and a half-line) by a single concatenated edge.
MetricGraph merge_degree_two(const MetricGraph& g);

double total_bounded_length(const MetricGraph& g);

enum class HStatus { HoldsSufficient, Unknown };

struct HWitness {
  VertexId vertex;
  std::vector<EdgeId> first;
  std::vector<EdgeId> second;
};

struct HReport {
  HStatus status = HStatus::Unknown;
  std::vector<HWitness> witnesses;
  std::string reason;
};

/// Flow-based sufficient condition for the two-rays-to-infinity property:
/// every vertex has two edge-disjoint paths ending on half-lines and every
/// bounded edge lies on a cycle or on a path joining two half-lines. Never
/// claims that the property fails.
HReport check_assumption_h(const MetricGraph& g);

/// Three-way split of the edge set used to bucket solutions by where they
/// peak. On the periodic family: S1 the pairs of half-lines, S2 the unit
/// edges (line edges and the parallel block), S3 the self-loops.
struct EdgePartition {
  std::set<EdgeId> s1, s2, s3;
};

/// Bounded edges whose removal disconnects the graph.
std::vector<EdgeId> bridges(const MetricGraph& g);

}  // namespace nlsgraph
