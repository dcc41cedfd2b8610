#include "nlsgraph/graph_zoo.hpp"

#include <cmath>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace nlsgraph {

MetricGraph line_graph() {
  MetricGraph g("line");
  VertexId o = g.add_vertex();
  g.add_half_line(o);
  g.add_half_line(o);
  g.flag_junction(o);
  return g;
}

MetricGraph half_line_graph() {
  MetricGraph g("half_line");
  g.add_half_line(g.add_vertex());
  return g;
}

MetricGraph star_graph(int N) {
  if (N < 3) throw std::invalid_argument("star graph needs N >= 3 half-lines");
  MetricGraph g("star(" + std::to_string(N) + ")");
  VertexId o = g.add_vertex();
  for (int i = 0; i < N; ++i) g.add_half_line(o);
  return g;
}

GridFunction star_solution(int N, double a, const ProblemParams& pp, const MeshPtr& mesh) {
  if (N % 2 != 0 && a != 0.0) {
    throw std::invalid_argument("odd stars only carry the half-soliton (a = 0)");
  }
  const auto& edges = mesh->graph().edges();
  if (static_cast<int>(edges.size()) != N || mesh->graph().half_line_count() != edges.size()) {
    throw std::invalid_argument("mesh is not a star with N half-lines");
  }
  std::map<EdgeId, double> shift;
  for (int i = 0; i < N; ++i) shift[edges[static_cast<std::size_t>(i)].id] = (2 * i < N) ? a : -a;
  Soliton phi(pp);
  return interpolate(mesh, [&](const Edge& e, double x) { return phi(x + shift.at(e.id)); });
}

MetricGraph h_graph() {
  MetricGraph g("h_graph");
  VertexId a = g.add_vertex(), b = g.add_vertex();
  g.add_edge(a, b, 1.0);
  for (VertexId v : {a, b}) {
    g.add_half_line(v);
    g.add_half_line(v);
  }
  return g;
}

EdgeId h_graph_bridge(const MetricGraph& g) {
  for (const auto& e : g.edges()) {
    if (!e.is_half_line()) return e.id;
  }
  throw std::invalid_argument("graph has no bounded edge");
}

MetricGraph big_circles(int K) {
  if (K < 1) throw std::invalid_argument("big_circles needs K >= 1");
  MetricGraph g("big_circles(" + std::to_string(K) + ")");
  std::vector<VertexId> v;
  for (int k = 1; k <= K; ++k) v.push_back(g.add_vertex());
  g.add_half_line(v.front());
  for (int k = 1; k <= K; ++k) {
    // Loops first so that the loop of length k carries a predictable id.
    g.add_edge(v[static_cast<std::size_t>(k - 1)], v[static_cast<std::size_t>(k - 1)], k);
  }
  for (int k = 1; k < K; ++k) {
    g.add_edge(v[static_cast<std::size_t>(k - 1)], v[static_cast<std::size_t>(k)], 1.0);
  }
  g.add_half_line(v.back());
  return g;
}

EdgeId big_circles_loop(const MetricGraph& g, int k) {
  for (const auto& e : g.edges()) {
    if (e.is_self_loop() && e.length == static_cast<double>(k)) return e.id;
  }
  throw std::invalid_argument("no loop of length " + std::to_string(k));
}

MetricGraph loops_on_line(int count, double loop_length, double spacing) {
  if (count < 1) throw std::invalid_argument("loops_on_line needs count >= 1");
  std::ostringstream name;
  name << "loops_on_line(" << count << "," << loop_length << ")";
  MetricGraph g(name.str());
  std::vector<VertexId> v;
  for (int k = 0; k < count; ++k) v.push_back(g.add_vertex());
  g.add_half_line(v.front());
  for (auto w : v) g.add_edge(w, w, loop_length);
  for (std::size_t k = 0; k + 1 < v.size(); ++k) g.add_edge(v[k], v[k + 1], spacing);
  g.add_half_line(v.back());
  return g;
}

MetricGraph compact_loop(double length) {
  std::ostringstream name;
  name << "compact_loop(" << length << ")";
  MetricGraph g(name.str());
  VertexId o = g.add_vertex();
  g.add_edge(o, o, length);
  g.flag_junction(o);
  return g;
}

namespace {

PeriodicGraph periodic(int N, int K, bool tilde) {
  if (N < 2 || K < 1) throw std::invalid_argument("g_n needs N >= 2 and K >= 1");
  PeriodicGraph out;
  MetricGraph& g = out.graph;
  g.set_name(std::string(tilde ? "tilde_g_n(" : "g_n(") + std::to_string(N) + "," +
             std::to_string(K) + ")");
  for (int k = -K; k <= K; ++k) out.line[k] = g.add_vertex();
  for (int k = -K; k <= K; ++k) {
    VertexId v = out.line[k];
    for (int r = 0; r < 2; ++r) {
      EdgeId h = g.add_half_line(v);
      out.rays[k].push_back(h);
      out.partition.s1.insert(h);
    }
    if (k != 0 || tilde) {
      EdgeId l = g.add_edge(v, v, N);
      out.loops[k] = l;
      out.partition.s3.insert(l);
    }
  }
  if (!tilde) {
    VertexId apex = g.add_vertex();
    for (int i = 0; i < N; ++i) {
      EdgeId b = g.add_edge(out.line[0], apex, 1.0);
      out.block.push_back(b);
      out.partition.s2.insert(b);
    }
    // With N = 2 the block is a loop of length 2 through the apex.
    if (N == 2) g.flag_junction(apex);
  }
  for (int k = -K; k < K; ++k) {
    EdgeId e = g.add_edge(out.line[k], out.line[k + 1], 1.0);
    out.line_edges[k] = e;
    out.partition.s2.insert(e);
  }
  out.partition.s2.insert(g.add_half_line(out.line[-K]));
  out.partition.s2.insert(g.add_half_line(out.line[K]));
  return out;
}

}  // namespace

PeriodicGraph g_n(int N, int K) { return periodic(N, K, false); }
PeriodicGraph tilde_g_n(int N, int K) { return periodic(N, K, true); }

namespace {

const std::regex& zoo_pattern() {
  static const std::regex re(R"(^\s*([a-z_]+)\s*(?:\(\s*([^)]*)\))?\s*$)");
  return re;
}

std::vector<double> parse_args(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    out.push_back(v);
  }
  return out;
}

int as_int(double v, const std::string& expr) {
  if (v != std::floor(v)) throw std::invalid_argument("integer argument expected in " + expr);
  return static_cast<int>(v);
}

}  // namespace

bool is_zoo_expression(const std::string& expr) {
  std::smatch m;
  if (!std::regex_match(expr, m, zoo_pattern())) return false;
  static const std::set<std::string> names = {"star",  "big_circles",   "g_n",          "tilde_g_n",
                                              "h_graph", "line",        "half_line",    "loops_on_line",
                                              "compact_loop"};
  return names.count(m[1].str()) > 0;
}

MetricGraph build_zoo(const std::string& expr) {
  std::smatch m;
  if (!std::regex_match(expr, m, zoo_pattern())) {
    throw std::invalid_argument("not a zoo expression: " + expr);
  }
  const std::string name = m[1].str();
  std::vector<double> a;
  try {
    a = m[2].matched ? parse_args(m[2].str()) : std::vector<double>{};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad arguments in " + expr);
  }
  auto need = [&](std::size_t n) {
    if (a.size() != n) {
      throw std::invalid_argument(name + " takes " + std::to_string(n) + " argument(s)");
    }
  };
  if (name == "line") {
    need(0);
    return line_graph();
  }
  if (name == "half_line") {
    need(0);
    return half_line_graph();
  }
  if (name == "h_graph") {
    need(0);
    return h_graph();
  }
  if (name == "star") {
    need(1);
    return star_graph(as_int(a[0], expr));
  }
  if (name == "big_circles") {
    need(1);
    return big_circles(as_int(a[0], expr));
  }
  if (name == "g_n") {
    need(2);
    return g_n(as_int(a[0], expr), as_int(a[1], expr)).graph;
  }
  if (name == "tilde_g_n") {
    need(2);
    return tilde_g_n(as_int(a[0], expr), as_int(a[1], expr)).graph;
  }
  if (name == "loops_on_line") {
    if (a.size() == 3) return loops_on_line(as_int(a[0], expr), a[1], a[2]);
    need(2);
    return loops_on_line(as_int(a[0], expr), a[1]);
  }
  if (name == "compact_loop") {
    need(1);
    return compact_loop(a[0]);
  }
  throw std::invalid_argument("unknown zoo graph: " + name);
}

}  // namespace nlsgraph
