#include "nlsgraph/graph_spec.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

namespace nlsgraph {

namespace {

std::string format_length(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::int32_t parse_id(const std::string& tok, int line) {
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (errno != 0 || end == tok.c_str() || *end != '\0' || v < 0 || v > INT32_MAX) {
    throw GraphSpecError(line, "bad id '" + tok + "'");
  }
  return static_cast<std::int32_t>(v);
}

double parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(tok.c_str(), &end);
  if (errno != 0 || end == tok.c_str() || *end != '\0') {
    throw GraphSpecError(line, "bad number '" + tok + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string emit_graph_spec(const MetricGraph& g) {
  std::ostringstream os;
  os << "# nlsgraph GraphSpec\n";
  os << "name=" << g.name() << "\n";
  for (auto v : g.vertices()) os << "vertex " << v.value << "\n";
  for (auto v : g.junctions()) os << "junction " << v.value << "\n";
  std::vector<Edge> edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (const auto& e : edges) {
    if (e.is_half_line()) {
      os << "halfline " << e.id.value << " " << e.tail.value << "\n";
    } else {
      os << "edge " << e.id.value << " " << e.tail.value << " " << e.head->value
         << " length=" << format_length(e.length) << "\n";
    }
  }
  return os.str();
}

MetricGraph parse_graph_spec(std::string_view text) {
  MetricGraph g;
  std::vector<VertexId> junctions;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    auto eq = line.find('=');
    auto toks = split_ws(line);
    const std::string& head = toks[0];
    if (head == "vertex") {
      if (toks.size() != 2) throw GraphSpecError(line_no, "expected 'vertex <id>'");
      g.add_vertex(VertexId{parse_id(toks[1], line_no)});
    } else if (head == "junction") {
      if (toks.size() != 2) throw GraphSpecError(line_no, "expected 'junction <id>'");
      junctions.push_back(VertexId{parse_id(toks[1], line_no)});
    } else if (head == "edge") {
      if (toks.size() != 5 || toks[4].rfind("length=", 0) != 0) {
        throw GraphSpecError(line_no, "expected 'edge <id> <v1> <v2> length=<x>'");
      }
      double len = parse_real(toks[4].substr(7), line_no);
      try {
        g.add_edge(EdgeId{parse_id(toks[1], line_no)}, VertexId{parse_id(toks[2], line_no)},
                   VertexId{parse_id(toks[3], line_no)}, len);
      } catch (const std::invalid_argument& err) {
        throw GraphSpecError(line_no, err.what());
      }
    } else if (head == "halfline") {
      if (toks.size() != 3) throw GraphSpecError(line_no, "expected 'halfline <id> <v>'");
      try {
        g.add_half_line(EdgeId{parse_id(toks[1], line_no)}, VertexId{parse_id(toks[2], line_no)});
      } catch (const std::invalid_argument& err) {
        throw GraphSpecError(line_no, err.what());
      }
    } else if (eq != std::string::npos) {
      std::string key = trim(std::string_view(line).substr(0, eq));
      std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key == "name") {
        g.set_name(value);
      } else {
        throw GraphSpecError(line_no, "unknown key '" + key + "'");
      }
    } else {
      throw GraphSpecError(line_no, "unrecognised record '" + head + "'");
    }
  }
  for (auto v : junctions) {
    if (!g.has_vertex(v)) throw GraphSpecError(0, "junction on unknown vertex");
    g.flag_junction(v);
  }
  return g;
}

MetricGraph load_graph_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_spec(ss.str());
}

void save_graph_spec(const MetricGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << emit_graph_spec(g);
}

namespace {

using EdgeKey = std::tuple<std::int32_t, std::int32_t, double>;  // (lo, hi, length); hi=-1 for half-lines

std::vector<EdgeKey> mapped_edges(const MetricGraph& g, const std::map<VertexId, std::int32_t>& f) {
  std::vector<EdgeKey> keys;
  for (const auto& e : g.edges()) {
    std::int32_t a = f.at(e.tail);
    if (e.is_half_line()) {
      keys.emplace_back(a, -1, 0.0);
    } else {
      std::int32_t b = f.at(*e.head);
      keys.emplace_back(std::min(a, b), std::max(a, b), e.length);
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::vector<double> signature(const MetricGraph& g, VertexId v) {
  std::vector<double> sig;
  for (const auto& e : g.edges()) {
    int mult = (e.tail == v) + (e.head && *e.head == v);
    for (int i = 0; i < mult; ++i) sig.push_back(e.is_half_line() ? -1.0 : e.length);
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace

bool isomorphic(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices().size() != b.vertices().size() || a.edges().size() != b.edges().size()) {
    return false;
  }
  std::map<VertexId, std::int32_t> ida;
  for (std::size_t i = 0; i < a.vertices().size(); ++i) {
    ida[a.vertices()[i]] = static_cast<std::int32_t>(i);
  }
  const auto target = mapped_edges(a, ida);
  std::vector<std::vector<double>> sig_a, sig_b;
  for (auto v : a.vertices()) sig_a.push_back(signature(a, v));
  for (auto v : b.vertices()) sig_b.push_back(signature(b, v));

  // Multiset of bounded-edge lengths between each vertex pair.
  auto pair_lengths = [](const MetricGraph& g) {
    std::map<std::pair<VertexId, VertexId>, std::vector<double>> m;
    for (const auto& e : g.edges()) {
      if (e.is_half_line()) continue;
      auto key = std::minmax(e.tail, *e.head);
      m[{key.first, key.second}].push_back(e.length);
    }
    for (auto& [k, v] : m) std::sort(v.begin(), v.end());
    return m;
  };
  const auto len_a = pair_lengths(a);
  const auto len_b = pair_lengths(b);
  auto lengths = [](const auto& m, VertexId x, VertexId y) {
    auto key = std::minmax(x, y);
    auto it = m.find({key.first, key.second});
    return it == m.end() ? std::vector<double>{} : it->second;
  };

  std::map<VertexId, std::int32_t> f;
  std::vector<bool> used(a.vertices().size(), false);
  std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
    if (k == b.vertices().size()) return mapped_edges(b, f) == target;
    const VertexId vb = b.vertices()[k];
    for (std::size_t i = 0; i < a.vertices().size(); ++i) {
      if (used[i] || sig_a[i] != sig_b[k]) continue;
      const VertexId va = a.vertices()[i];
      if (a.junctions().count(va) != b.junctions().count(vb)) continue;
      bool consistent = lengths(len_a, va, va) == lengths(len_b, vb, vb);
      for (std::size_t j = 0; consistent && j < k; ++j) {
        const VertexId wb = b.vertices()[j];
        const VertexId wa = a.vertices()[static_cast<std::size_t>(f.at(wb))];
        consistent = lengths(len_a, va, wa) == lengths(len_b, vb, wb);
      }
      if (!consistent) continue;
      used[i] = true;
      f[b.vertices()[k]] = static_cast<std::int32_t>(i);
      if (assign(k + 1)) return true;
      used[i] = false;
      f.erase(b.vertices()[k]);
    }
    return false;
  };
  return assign(0);
}

}  // namespace nlsgraph
