#include "nlsgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>

namespace nlsgraph {

VertexId MetricGraph::add_vertex() {
  VertexId v{next_vertex_++};
  vertices_.push_back(v);  // ids increase, order is kept
  return v;
}

void MetricGraph::add_vertex(VertexId v) {
  if (v.value < 0) throw std::invalid_argument("negative vertex id");
  if (has_vertex(v)) return;
  vertices_.push_back(v);
  std::sort(vertices_.begin(), vertices_.end());
  next_vertex_ = std::max(next_vertex_, v.value + 1);
}

EdgeId MetricGraph::add_edge(VertexId a, VertexId b, double length) {
  EdgeId id{next_edge_};
  add_edge(id, a, b, length);
  return id;
}

EdgeId MetricGraph::add_half_line(VertexId v) {
  EdgeId id{next_edge_};
  add_half_line(id, v);
  return id;
}

void MetricGraph::add_edge(EdgeId id, VertexId a, VertexId b, double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("bounded edge length must be positive and finite");
  }
  if (id.value < 0) throw std::invalid_argument("negative edge id");
  for (const auto& e : edges_) {
    if (e.id == id) throw std::invalid_argument("duplicate edge id " + std::to_string(id.value));
  }
  add_vertex(a);
  add_vertex(b);
  edges_.push_back(Edge{id, a, b, EdgeKind::Bounded, length});
  next_edge_ = std::max(next_edge_, id.value + 1);
}

void MetricGraph::add_half_line(EdgeId id, VertexId v) {
  if (id.value < 0) throw std::invalid_argument("negative edge id");
  for (const auto& e : edges_) {
    if (e.id == id) throw std::invalid_argument("duplicate edge id " + std::to_string(id.value));
  }
  add_vertex(v);
  edges_.push_back(Edge{id, v, std::nullopt, EdgeKind::HalfLine,
                        std::numeric_limits<double>::infinity()});
  next_edge_ = std::max(next_edge_, id.value + 1);
}

bool MetricGraph::has_vertex(VertexId v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t MetricGraph::edge_index(EdgeId id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].id == id) return i;
  }
  throw std::out_of_range("unknown edge id " + std::to_string(id.value));
}

const Edge& MetricGraph::edge(EdgeId id) const { return edges_[edge_index(id)]; }

int MetricGraph::degree(VertexId v) const {
  int d = 0;
  for (const auto& e : edges_) {
    if (e.tail == v) ++d;
    if (e.head && *e.head == v) ++d;
  }
  return d;
}

std::vector<EdgeId> MetricGraph::incident_edges(VertexId v) const {
  std::vector<EdgeId> out;
  for (const auto& e : edges_) {
    if (e.tail == v || (e.head && *e.head == v)) out.push_back(e.id);
  }
  return out;
}

std::size_t MetricGraph::half_line_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_half_line(); }));
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Empty: return "empty graph";
    case ViolationKind::Disconnected: return "disconnected";
    case ViolationKind::NoUnboundedEdge: return "no unbounded edge";
    case ViolationKind::IsolatedVertex: return "isolated vertex";
    case ViolationKind::DegreeTwo: return "degree 2 vertex";
    case ViolationKind::NonPositiveLength: return "non-positive length";
  }
  return "unknown";
}

namespace {

std::map<VertexId, std::size_t> vertex_index(const MetricGraph& g) {
  std::map<VertexId, std::size_t> idx;
  for (std::size_t i = 0; i < g.vertices().size(); ++i) idx[g.vertices()[i]] = i;
  return idx;
}

// Connectivity ignoring the edges whose index is flagged in `skip`.
std::size_t component_count(const MetricGraph& g, const std::vector<bool>& skip) {
  auto idx = vertex_index(g);
  std::vector<std::size_t> parent(g.vertices().size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const auto& e = g.edges()[k];
    if (skip[k] || !e.head) continue;
    parent[find(idx[e.tail])] = find(idx[*e.head]);
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) count += (find(i) == i);
  return count;
}

}  // namespace

bool is_connected(const MetricGraph& g) {
  if (g.vertices().empty()) return false;
  return component_count(g, std::vector<bool>(g.edges().size(), false)) == 1;
}

std::vector<Violation> validate_class_g(const MetricGraph& g, bool require_half_line) {
  std::vector<Violation> out;
  if (g.vertices().empty()) {
    out.push_back({ViolationKind::Empty, "graph has no vertices"});
    return out;
  }
  if (!is_connected(g)) out.push_back({ViolationKind::Disconnected, "graph is not connected"});
  if (require_half_line && g.half_line_count() == 0) {
    out.push_back({ViolationKind::NoUnboundedEdge, "no unbounded edge"});
  }
  for (auto v : g.vertices()) {
    int d = g.degree(v);
    if (d == 0) {
      out.push_back({ViolationKind::IsolatedVertex, "vertex " + std::to_string(v.value)});
    } else if (d == 2 && !g.junctions().count(v)) {
      out.push_back({ViolationKind::DegreeTwo, "vertex " + std::to_string(v.value)});
    }
  }
  for (const auto& e : g.edges()) {
    if (!e.is_half_line() && !(e.length > 0.0)) {
      out.push_back({ViolationKind::NonPositiveLength, "edge " + std::to_string(e.id.value)});
    }
  }
  return out;
}

MetricGraph merge_degree_two(const MetricGraph& g) {
  MetricGraph cur = g;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto v : cur.vertices()) {
      if (cur.junctions().count(v) || cur.degree(v) != 2) continue;
      auto inc = cur.incident_edges(v);
      if (inc.size() != 2) continue;  // lone self-loop
      const Edge e1 = cur.edge(inc[0]);
      const Edge e2 = cur.edge(inc[1]);
      if (e1.is_half_line() && e2.is_half_line()) continue;
      auto other = [v](const Edge& e) { return e.tail == v ? *e.head : e.tail; };
      MetricGraph next(cur.name());
      for (auto w : cur.vertices()) {
        if (w != v) next.add_vertex(w);
      }
      for (auto j : cur.junctions()) next.flag_junction(j);
      for (const auto& e : cur.edges()) {
        if (e.id == e1.id || e.id == e2.id) continue;
        if (e.is_half_line()) {
          next.add_half_line(e.id, e.tail);
        } else {
          next.add_edge(e.id, e.tail, *e.head, e.length);
        }
      }
      const Edge& bounded = e1.is_half_line() ? e2 : e1;
      const Edge& rest = e1.is_half_line() ? e1 : e2;
      if (rest.is_half_line()) {
        next.add_half_line(bounded.id, other(bounded));
      } else {
        next.add_edge(e1.id, other(e1), other(e2), e1.length + e2.length);
      }
      cur = std::move(next);
      changed = true;
      break;
    }
  }
  return cur;
}

double total_bounded_length(const MetricGraph& g) {
  double total = 0.0;
  for (const auto& e : g.edges()) {
    if (!e.is_half_line()) total += e.length;
  }
  return total;
}

std::vector<EdgeId> bridges(const MetricGraph& g) {
  std::vector<EdgeId> out;
  std::vector<bool> skip(g.edges().size(), false);
  const std::size_t base = component_count(g, skip);
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const auto& e = g.edges()[k];
    if (e.is_half_line() || e.is_self_loop()) continue;
    skip[k] = true;
    if (component_count(g, skip) > base) out.push_back(e.id);
    skip[k] = false;
  }
  return out;
}

namespace {

// Unit-capacity undirected flow network with a virtual sink collecting all
// half-lines.
class InfinityFlow {
 public:
  explicit InfinityFlow(const MetricGraph& g) : g_(g), idx_(vertex_index(g)) {
    sink_ = g.vertices().size();
    adj_.resize(sink_ + 1);
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
      const auto& e = g.edges()[k];
      if (e.is_self_loop()) continue;
      std::size_t a = idx_.at(e.tail);
      std::size_t b = e.is_half_line() ? sink_ : idx_.at(*e.head);
      add_arc(a, b, k);
      add_arc(b, a, k);
    }
  }

  // Returns up to two edge-disjoint paths (as edge ids) from `source` to
  // infinity.
  std::vector<std::vector<EdgeId>> paths(VertexId source) {
    for (auto& arc : arcs_) arc.flow = 0;
    std::size_t s = idx_.at(source);
    int found = 0;
    while (found < 2 && augment(s)) ++found;
    // Net flow per graph edge: +1 along the arc direction recorded first.
    std::vector<std::vector<std::size_t>> out_arcs(adj_.size());
    for (std::size_t a = 0; a < arcs_.size(); a += 2) {
      int net = arcs_[a].flow - arcs_[a + 1].flow;
      if (net > 0) out_arcs[arcs_[a].from].push_back(a);
      if (net < 0) out_arcs[arcs_[a + 1].from].push_back(a + 1);
    }
    std::vector<std::vector<EdgeId>> result;
    for (int i = 0; i < found; ++i) {
      std::vector<EdgeId> path;
      std::vector<std::size_t> visited_at(adj_.size(), SIZE_MAX);
      std::size_t cur = s;
      visited_at[cur] = 0;
      while (cur != sink_ && !out_arcs[cur].empty()) {
        std::size_t a = out_arcs[cur].back();
        out_arcs[cur].pop_back();
        path.push_back(g_.edges()[arcs_[a].edge].id);
        cur = arcs_[a].to;
        if (cur != sink_ && visited_at[cur] != SIZE_MAX) {
          path.resize(visited_at[cur]);  // drop a circulation
        } else if (cur != sink_) {
          visited_at[cur] = path.size();
        }
      }
      result.push_back(std::move(path));
    }
    return result;
  }

 private:
  struct Arc {
    std::size_t from, to, edge;
    int flow = 0;
  };

  void add_arc(std::size_t a, std::size_t b, std::size_t edge) {
    adj_[a].push_back(arcs_.size());
    arcs_.push_back(Arc{a, b, edge, 0});
  }

  // Residual capacity of arc i (its reverse twin is i ^ 1).
  int residual(std::size_t i) const { return 1 - arcs_[i].flow + arcs_[i ^ 1].flow; }

  bool augment(std::size_t s) {
    std::vector<std::size_t> via(adj_.size(), SIZE_MAX);
    std::vector<bool> seen(adj_.size(), false);
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty() && !seen[sink_]) {
      std::size_t x = q.front();
      q.pop();
      for (std::size_t a : adj_[x]) {
        if (residual(a) <= 0 || seen[arcs_[a].to]) continue;
        seen[arcs_[a].to] = true;
        via[arcs_[a].to] = a;
        q.push(arcs_[a].to);
      }
    }
    if (!seen[sink_]) return false;
    for (std::size_t x = sink_; x != s; x = arcs_[via[x]].from) {
      std::size_t a = via[x];
      if (arcs_[a ^ 1].flow > 0) {
        --arcs_[a ^ 1].flow;
      } else {
        ++arcs_[a].flow;
      }
    }
    return true;
  }

  const MetricGraph& g_;
  std::map<VertexId, std::size_t> idx_;
  std::size_t sink_ = 0;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

}  // namespace

HReport check_assumption_h(const MetricGraph& g) {
  HReport report;
  if (g.half_line_count() == 0) {
    report.reason = "no half-lines";
    return report;
  }
  InfinityFlow flow(g);
  for (auto v : g.vertices()) {
    auto p = flow.paths(v);
    if (p.size() < 2) {
      report.reason = "vertex " + std::to_string(v.value) + " has flow < 2 to infinity";
      report.witnesses.clear();
      return report;
    }
    report.witnesses.push_back(HWitness{v, p[0], p[1]});
  }
  // A bridge must separate two sides that both reach infinity.
  auto idx = vertex_index(g);
  for (EdgeId b : bridges(g)) {
    std::vector<bool> skip(g.edges().size(), false);
    skip[g.edge_index(b)] = true;
    std::vector<std::size_t> parent(g.vertices().size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t k = 0; k < g.edges().size(); ++k) {
      const auto& e = g.edges()[k];
      if (skip[k] || !e.head) continue;
      parent[find(idx[e.tail])] = find(idx[*e.head]);
    }
    const Edge& be = g.edge(b);
    std::size_t ca = find(idx[be.tail]);
    std::size_t cb = find(idx[*be.head]);
    bool a_inf = false, b_inf = false;
    for (const auto& e : g.edges()) {
      if (!e.is_half_line()) continue;
      a_inf = a_inf || find(idx[e.tail]) == ca;
      b_inf = b_inf || find(idx[e.tail]) == cb;
    }
    if (!a_inf || !b_inf) {
      report.reason = "bridge " + std::to_string(b.value) + " cuts off a half-line-free component";
      report.witnesses.clear();
      return report;
    }
  }
  report.status = HStatus::HoldsSufficient;
  return report;
}

}  // namespace nlsgraph
