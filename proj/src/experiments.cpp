#include "nlsgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "nlsgraph/rearrangement.hpp"

namespace nlsgraph {

namespace {

template <typename T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& f) {
  std::vector<T> out(n);
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < n; start += width) {
    std::vector<std::future<T>> batch;
    std::size_t stop = std::min(n, start + width);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, f, i));
    }
    for (std::size_t i = start; i < stop; ++i) out[i] = batch[i - start].get();
  }
  return out;
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

ExperimentRecord record(const std::string& graph, const RunConfig& cfg, Tag tag, double value,
                        double tol, const std::string& status, const std::string& extra = "") {
  ExperimentRecord r;
  r.graph = graph;
  r.params = cfg.describe() + (extra.empty() ? "" : ";" + extra);
  r.lambda = cfg.lambda;
  r.p = cfg.p;
  r.tag = tag;
  r.value = value;
  r.tol = tol;
  r.status = status;
  return r;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string buckets_string(const std::set<Bucket>& b) {
  std::string s;
  for (Bucket x : b) s += (s.empty() ? "" : "|") + to_string(x);
  return s.empty() ? "none" : s;
}

// Distance from v along edge e at coordinate x, for edges incident to v.
double distance_from(const Edge& e, VertexId v, double x) {
  if (e.is_self_loop()) return std::min(x, e.length - x);
  if (e.tail == v) return x;
  return e.length - x;
}

bool incident(const Edge& e, VertexId v) { return e.tail == v || (e.head && *e.head == v); }

double reach(const Edge& e) {
  if (e.is_half_line()) return kInfinity;
  return e.is_self_loop() ? 0.5 * e.length : e.length;
}

}  // namespace

double RunConfig::truncation() const { return trunc.value_or(10.0 / std::sqrt(lambda)); }

std::string RunConfig::describe() const {
  return "h=" + num(h) + ";trunc=" + num(truncation()) + ";seed=" + std::to_string(seed);
}

double RunConfig::level_tol() const { return 1e-3 * soliton_level(params()); }

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.seed = seed;
  o.jobs = jobs;
  return o;
}

std::string to_string(Tag t) {
  switch (t) {
    case Tag::CEst: return "c_est";
    case Tag::SigmaUpper: return "sigma_upper";
    case Tag::LevelOfSolution: return "level_of_solution";
    case Tag::Gap: return "gap";
    case Tag::Delta: return "delta";
    case Tag::Attained: return "attained";
    case Tag::Verdict: return "verdict";
  }
  return "?";
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << "graph,params,lambda,p,tag,value,tol,status\n";
  for (const auto& r : records) {
    os << csv_field(r.graph) << "," << csv_field(r.params) << "," << num(r.lambda) << "," << num(r.p) << ","
       << to_string(r.tag) << "," << num(r.value) << "," << num(r.tol) << "," << r.status << "\n";
  }
}

nlohmann::json to_json(const std::vector<ExperimentRecord>& records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"graph", r.graph},
                   {"params", r.params},
                   {"lambda", r.lambda},
                   {"p", r.p},
                   {"tag", to_string(r.tag)},
                   {"value", r.value},
                   {"tol", r.tol},
                   {"status", r.status}});
  }
  return arr;
}

bool is_escaping(const SolveReport& r) {
  if (r.argmax_at_vertex || !r.u.mesh) return false;
  return r.u.mesh->graph().edge(r.argmax_edge).is_half_line();
}

bool is_graph_solution(const SolveReport& r) {
  return r.status == SolveStatus::Converged && norm(r.u, kInfinity) > 1e-6 && !is_escaping(r);
}

GridFunction vertex_bump(const MeshPtr& mesh, VertexId v, const ProblemParams& pp) {
  Soliton phi(pp);
  return interpolate(mesh, [&](const Edge& e, double x) {
    if (!incident(e, v)) return 0.0;
    double r = reach(e);
    double cut = std::isinf(r) ? 0.0 : phi(r);
    // Rescaled so every edge meets the vertex at phi(0).
    return phi(0.0) * std::max(0.0, phi(distance_from(e, v, x)) - cut) / (phi(0.0) - cut);
  });
}

GridFunction half_line_bump(const MeshPtr& mesh, EdgeId id, double d, const ProblemParams& pp) {
  const Edge& h = mesh->graph().edge(id);
  if (!h.is_half_line()) throw std::invalid_argument("half_line_bump needs a half-line");
  Soliton phi(pp);
  const VertexId v = h.tail;
  const double top = phi(d);
  return interpolate(mesh, [&](const Edge& e, double x) {
    if (e.id == id) return phi(x - d);
    if (!incident(e, v)) return 0.0;
    double ramp = std::min(1.0, reach(e));
    return top * std::max(0.0, 1.0 - distance_from(e, v, x) / ramp);
  });
}

std::vector<GridFunction> ground_state_inits(const MeshPtr& mesh, const ProblemParams& pp) {
  std::vector<GridFunction> inits;
  const auto& g = mesh->graph();
  for (const auto& e : g.edges()) {
    if (!e.is_half_line()) inits.push_back(edge_bump(mesh, e.id, pp));
  }
  for (VertexId v : g.vertices()) inits.push_back(vertex_bump(mesh, v, pp));
  const double t = mesh->truncation();
  for (const auto& e : g.edges()) {
    if (!e.is_half_line()) continue;
    for (double d : {0.25 * t, 0.5 * t}) inits.push_back(half_line_bump(mesh, e.id, d, pp));
  }
  return inits;
}

namespace {

bool is_star(const MetricGraph& g) {
  return g.vertices().size() == 1 && g.edges().size() >= 3 && g.half_line_count() == g.edges().size();
}

}  // namespace

LevelsResult cmd_levels(const MetricGraph& g, const RunConfig& cfg, double min_len) {
  const ProblemParams pp = cfg.params();
  const double tol = cfg.level_tol();
  MeshPtr mesh = discretize(g, cfg.h, cfg.truncation());
  SolverOptions opts = cfg.solver_options();
  LevelsResult out;

  auto inits = ground_state_inits(mesh, pp);
  auto runs = parallel_map<SolveReport>(inits.size(), cfg.jobs, [&](std::size_t i) {
    SolverOptions o = opts;
    o.seed = opts.seed + i;
    return minimize_nehari(inits[i], pp, o);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].level < runs[best].level) best = i;
  }
  out.c_est = runs[best].level;
  out.c_min = runs[best];
  // Prefer a non-escaping minimizer when it ties with the overall best.
  for (const auto& r : runs) {
    if (!is_escaping(r) && r.level <= out.c_est + 1e-9 * out.c_est) {
      out.c_min = r;
      out.c_attained = r.status == SolveStatus::Converged;
      break;
    }
  }
  out.records.push_back(record(g.name(), cfg, Tag::CEst, out.c_est, tol,
                               out.c_attained ? "attained" : "escaping"));

  // Sigma: every solution we can certify on the untruncated graph.
  std::vector<SolveReport> sols = multiplicity_scan(mesh, pp, min_len, opts);
  if (out.c_attained) {
    SolveReport nr = refine_newton(out.c_min.u, pp);
    if (is_graph_solution(nr)) sols.push_back(nr);
  }
  if (is_star(g)) {
    const int N = static_cast<int>(g.edges().size());
    GridFunction u = star_solution(N, 0.0, pp, mesh);
    SolveReport nr = refine_newton(u, pp);
    if (is_graph_solution(nr)) sols.push_back(nr);
  }
  for (const auto& s : sols) {
    if (!is_graph_solution(s)) continue;
    bool seen = std::any_of(out.solutions.begin(), out.solutions.end(),
                            [&](const SolveReport& t) { return relative_distance(s.u, t.u) < 1e-3; });
    if (seen) continue;
    out.solutions.push_back(s);
    out.records.push_back(record(g.name(), cfg, Tag::LevelOfSolution, s.level, tol, "converged",
                                 "edge=" + std::to_string(s.argmax_edge.value)));
    if (!out.sigma_upper || s.level < *out.sigma_upper) out.sigma_upper = s.level;
  }
  if (out.sigma_upper) {
    out.records.push_back(record(g.name(), cfg, Tag::SigmaUpper, *out.sigma_upper, tol, "upper_bound"));
    out.records.push_back(record(g.name(), cfg, Tag::Gap, *out.sigma_upper - out.c_est, 2.0 * tol,
                                 "sigma_upper-c_est"));
  } else {
    out.records.push_back(record(g.name(), cfg, Tag::SigmaUpper, kInfinity, tol, "no_solution_found"));
  }
  return out;
}

namespace {

SolveReport constrained_solution(const MeshPtr& mesh, const ProblemParams& pp, EdgeId e,
                                 const SolverOptions& opts) {
  SolveReport dc = minimize_doubly_constrained(mesh, pp, e, opts);
  if (dc.status == SolveStatus::EscapedConstraint) return dc;
  SolveReport nr = refine_newton(dc.u, pp);
  SolveReport r = evaluate(nr.u, pp, e);
  r.status = nr.status;
  return r;
}

std::vector<ExperimentRecord> classify_a1(const RunConfig& cfg, const ClassifySizes& sizes) {
  MetricGraph g = compact_loop(sizes.a1_length);
  LevelsResult lv = cmd_levels(g, cfg);
  auto recs = lv.records;
  const double tol = cfg.level_tol();
  bool pass = lv.c_attained && lv.sigma_upper && std::abs(*lv.sigma_upper - lv.c_est) <= 2.0 * tol;
  recs.push_back(record("A1", cfg, Tag::Verdict, lv.c_est, tol, pass ? "pass" : "fail",
                        "graph=" + g.name()));
  return recs;
}

std::vector<ExperimentRecord> classify_a2(const RunConfig& cfg, const ClassifySizes& sizes) {
  const ProblemParams pp = cfg.params();
  const double s = soliton_level(pp), tol = cfg.level_tol();
  std::vector<ExperimentRecord> recs;
  std::vector<double> levels;
  bool pass = true;
  for (int K : sizes.a2_K) {
    MetricGraph g = big_circles(K);
    MeshPtr mesh = discretize(g, cfg.h, cfg.truncation());
    SolveReport r = constrained_solution(mesh, pp, big_circles_loop(g, K), cfg.solver_options());
    bool ok = r.status == SolveStatus::Converged && r.margin > 0.0;
    pass = pass && ok && r.level > s && r.level < s + 0.1;
    levels.push_back(r.level);
    recs.push_back(record(g.name(), cfg, Tag::LevelOfSolution, r.level, tol,
                          ok ? "loop_solution" : "not_attained", "loop=" + std::to_string(K)));
  }
  for (std::size_t i = 1; i < levels.size(); ++i) pass = pass && levels[i] < levels[i - 1];
  const int K = *std::max_element(sizes.a2_K.begin(), sizes.a2_K.end());
  LevelsResult lv = cmd_levels(big_circles(K), cfg);
  recs.insert(recs.end(), lv.records.begin(), lv.records.end());
  // At finite K the loop minimizer is attained; only the trend toward s is asserted.
  pass = pass && std::abs(lv.c_est - s) <= 0.02 && lv.c_est > s;
  pass = pass && lv.sigma_upper && *lv.sigma_upper - lv.c_est < 0.02;
  recs.push_back(record("A2", cfg, Tag::Verdict, lv.c_est - s, 0.02, pass ? "pass" : "fail"));
  return recs;
}

std::vector<ExperimentRecord> classify_b1(const RunConfig& cfg, const ClassifySizes& sizes) {
  const ProblemParams pp = cfg.params();
  const double s = soliton_level(pp), tol = cfg.level_tol();
  std::vector<ExperimentRecord> recs;
  bool pass = true;
  for (int N : sizes.b1_N) {
    MetricGraph g = star_graph(N);
    MeshPtr mesh = discretize(g, cfg.h, cfg.truncation());
    LevelsResult lv = cmd_levels(g, cfg);
    recs.insert(recs.end(), lv.records.begin(), lv.records.end());
    double sigma = lv.sigma_upper.value_or(kInfinity);
    if (N % 2 == 0) {
      // The shifted family u_{I,a}; every member is a solution.
      double lo = kInfinity, hi = -kInfinity;
      for (double a : {0.0, 0.3, 0.7, 1.5}) {
        double level = action(star_solution(N, a, pp, mesh), pp);
        lo = std::min(lo, level);
        hi = std::max(hi, level);
        recs.push_back(record(g.name(), cfg, Tag::LevelOfSolution, level, tol, "closed_form",
                              "a=" + num(a)));
      }
      sigma = std::min(sigma, lo);
      pass = pass && (hi - lo) <= 1e-4 * lo;
    }
    // Bumps pushed along one half-line: the level keeps dropping.
    double prev = kInfinity;
    bool monotone = true;
    const double t = mesh->truncation();
    for (double d : {t / 16, t / 8, t / 4, t / 2}) {
      double level = reduced_level(half_line_bump(mesh, g.edges().front().id, d, pp), pp);
      monotone = monotone && level < prev;
      prev = level;
      recs.push_back(record(g.name(), cfg, Tag::CEst, level, tol, "bump_offset", "offset=" + num(d)));
    }
    double gap = sigma - lv.c_est;
    recs.push_back(record(g.name(), cfg, Tag::Gap, gap, 2.0 * tol, "closed_form_sigma-c_est"));
    pass = pass && monotone && !lv.c_attained && gap > 0.05 && std::abs(sigma - 0.5 * N * s) <= 0.01 * sigma;
  }
  recs.push_back(record("B1", cfg, Tag::Verdict, 0.0, 0.0, pass ? "pass" : "fail"));
  return recs;
}

std::vector<ExperimentRecord> classify_b2(const RunConfig& cfg, const ClassifySizes& sizes) {
  const ProblemParams pp = cfg.params();
  const double s = soliton_level(pp);
  std::vector<ExperimentRecord> recs;
  bool pass = true;
  std::vector<B2Cell> cells;
  for (int N : sizes.b2_N) {
    cells.push_back(b2_cell(N, sizes.b2_K, cfg));
    const B2Cell& c = cells.back();
    recs.insert(recs.end(), c.records.begin(), c.records.end());
    pass = pass && c.s12_count > 0 && c.min_s12_level >= s + 0.05;
    pass = pass && c.s3_level > c.s3_tilde_level && c.s3_level > s;
  }
  for (std::size_t i = 1; i < cells.size(); ++i) {
    pass = pass && cells[i].s3_level < cells[i - 1].s3_level;
  }
  double delta2 = h_graph_gap(cfg);
  recs.push_back(record("h_graph", cfg, Tag::Delta, delta2, cfg.level_tol(), "delta2"));
  pass = pass && delta2 > 0.05;
  // Non-attainment of sigma is a statement about N -> infinity.
  recs.push_back(record("B2", cfg, Tag::Verdict, 0.0, 0.0, pass ? "evidence" : "fail"));
  return recs;
}

}  // namespace

std::vector<ExperimentRecord> cmd_classify(const std::string& which, const RunConfig& cfg,
                                           const ClassifySizes& sizes) {
  if (which == "A1") return classify_a1(cfg, sizes);
  if (which == "A2") return classify_a2(cfg, sizes);
  if (which == "B1") return classify_b1(cfg, sizes);
  if (which == "B2") return classify_b2(cfg, sizes);
  throw std::invalid_argument("unknown case '" + which + "' (expected A1, A2, B1 or B2)");
}

B2Cell b2_cell(int N, int K, const RunConfig& cfg) {
  const ProblemParams pp = cfg.params();
  const double tol = cfg.level_tol();
  const SolverOptions opts = cfg.solver_options();
  B2Cell cell;
  cell.N = N;

  PeriodicGraph pg = g_n(N, K), tg = tilde_g_n(N, K);
  MeshPtr mesh = discretize(pg.graph, cfg.h, cfg.truncation());
  MeshPtr tmesh = discretize(tg.graph, cfg.h, cfg.truncation());

  SolveReport s3 = constrained_solution(mesh, pp, pg.loops.at(1), opts);
  SolveReport s3t = constrained_solution(tmesh, pp, tg.loops.at(1), opts);
  if (is_graph_solution(s3)) cell.s3_level = s3.level;
  if (is_graph_solution(s3t)) cell.s3_tilde_level = s3t.level;
  cell.records.push_back(record(pg.graph.name(), cfg, Tag::LevelOfSolution, s3.level, tol,
                                is_graph_solution(s3) ? "S3" : "not_attained", "loop=1"));
  cell.records.push_back(record(tg.graph.name(), cfg, Tag::LevelOfSolution, s3t.level, tol,
                                is_graph_solution(s3t) ? "S3" : "not_attained", "loop=1"));

  // Candidates for solutions peaking on the rays or the unit edges.
  Soliton phi(pp);
  std::vector<GridFunction> newton_inits;
  for (const auto& [k, v] : pg.line) {
    const auto& rays = pg.rays.at(k);
    newton_inits.push_back(interpolate(mesh, [&, v = v](const Edge& e, double x) {
      if (std::find(rays.begin(), rays.end(), e.id) != rays.end()) return phi(x);
      if (!incident(e, v)) return 0.0;
      return phi(0.0) * std::max(0.0, 1.0 - distance_from(e, v, x) / std::min(1.0, reach(e)));
    }));
    newton_inits.push_back(vertex_bump(mesh, v, pp));
  }
  std::vector<EdgeId> unit_edges;
  for (const auto& [k, e] : pg.line_edges) unit_edges.push_back(e);
  unit_edges.push_back(pg.block.front());

  auto from_newton = parallel_map<SolveReport>(newton_inits.size(), cfg.jobs, [&](std::size_t i) {
    return refine_newton(newton_inits[i], pp);
  });
  auto from_dc = parallel_map<SolveReport>(unit_edges.size(), cfg.jobs, [&](std::size_t i) {
    SolveReport dc = minimize_doubly_constrained(mesh, pp, unit_edges[i], opts);
    return refine_newton(dc.u, pp);
  });
  std::vector<SolveReport> all = std::move(from_newton);
  all.insert(all.end(), from_dc.begin(), from_dc.end());
  std::vector<const SolveReport*> kept;
  for (const auto& r : all) {
    if (!is_graph_solution(r)) continue;
    auto buckets = classify_solution(r.u, pg.partition);
    if (!buckets.count(Bucket::S1) && !buckets.count(Bucket::S2)) continue;
    bool seen = std::any_of(kept.begin(), kept.end(),
                            [&](const SolveReport* k) { return relative_distance(r.u, k->u) < 1e-3; });
    if (seen) continue;
    kept.push_back(&r);
    ++cell.s12_count;
    cell.min_s12_level = std::min(cell.min_s12_level, r.level);
    cell.records.push_back(record(pg.graph.name(), cfg, Tag::LevelOfSolution, r.level, tol,
                                  buckets_string(buckets)));
  }
  const double s = soliton_level(pp);
  cell.records.push_back(record(pg.graph.name(), cfg, Tag::Gap, cell.s3_level - s, 2.0 * tol,
                                "evidence"));
  return cell;
}

double h_graph_gap(const RunConfig& cfg) {
  const ProblemParams pp = cfg.params();
  MetricGraph g = h_graph();
  MeshPtr mesh = discretize(g, cfg.h, cfg.truncation());
  const EdgeId bridge = h_graph_bridge(g);
  const Edge& b = g.edge(bridge);
  Soliton phi(pp);
  std::vector<GridFunction> inits = {edge_bump(mesh, bridge, pp)};
  // Peaks shifted towards the tail vertex, down to the vertex itself.
  for (double c : {0.0, 0.25}) {
    inits.push_back(interpolate(mesh, [&](const Edge& e, double x) {
      if (e.id == bridge) return phi(x - c);
      return phi((e.tail == b.tail ? c : b.length - c) + x);
    }));
  }
  double best = kInfinity;
  for (const auto& u : inits) {
    best = std::min(best, minimize_doubly_constrained(u, pp, bridge, cfg.solver_options()).level);
  }
  return best - soliton_level(pp);
}

MultiplicityResult cmd_multiplicity(const MetricGraph& g, const RunConfig& cfg, double min_len,
                                    const std::string& out_dir) {
  const ProblemParams pp = cfg.params();
  MeshPtr mesh = discretize(g, cfg.h, cfg.truncation());
  MultiplicityResult out;
  out.solutions = multiplicity_scan(mesh, pp, min_len, cfg.solver_options());
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < out.solutions.size(); ++i) {
    const auto& s = out.solutions[i];
    std::string edge = std::to_string(s.constraint_edge ? s.constraint_edge->value : s.argmax_edge.value);
    out.records.push_back(record(g.name(), cfg, Tag::LevelOfSolution, s.level, cfg.level_tol(),
                                 "positive", "edge=" + edge + ";min_len=" + num(min_len)));
    if (out_dir.empty()) continue;
    std::string stem = out_dir + "/solution_" + std::to_string(i);
    std::ofstream csv(stem + ".csv");
    write_csv(csv, s.u);
    std::ofstream svg(stem + ".svg");
    write_svg(svg, s.u, g.name() + " edge " + edge + " level " + num(s.level));
  }
  out.records.push_back(record(g.name(), cfg, Tag::Attained, static_cast<double>(out.solutions.size()),
                               0.0, "solution_count", "min_len=" + num(min_len)));
  return out;
}

std::vector<SweepRow> cmd_sweep(const std::vector<double>& lengths,
                                const std::vector<double>& lambdas, const std::vector<double>& ps,
                                const RunConfig& cfg) {
  struct Job {
    double lambda, p, length;
  };
  std::vector<Job> jobs;
  for (double l : lambdas) {
    for (double p : ps) {
      for (double len : lengths) jobs.push_back({l, p, len});
    }
  }
  return parallel_map<SweepRow>(jobs.size(), cfg.jobs, [&](std::size_t i) {
    const Job& j = jobs[i];
    RunConfig c = cfg;
    c.lambda = j.lambda;
    c.p = j.p;
    const ProblemParams pp = c.params();
    MetricGraph g = loops_on_line(1, j.length);
    EdgeId loop;
    for (const auto& e : g.edges()) {
      if (e.is_self_loop()) loop = e.id;
    }
    MeshPtr mesh = discretize(g, c.h, c.truncation());
    SolveReport dc = minimize_doubly_constrained(mesh, pp, loop, c.solver_options());
    SweepRow row{j.lambda, j.p, j.length, false, dc.level, dc.margin, to_string(dc.status)};
    if (dc.status != SolveStatus::EscapedConstraint) {
      SolveReport nr = refine_newton(dc.u, pp);
      SolveReport r = evaluate(nr.u, pp, loop);
      if (nr.status == SolveStatus::Converged && r.margin > 0.0) {
        row.attained = true;
        row.level = r.level;
        row.margin = r.margin;
      }
    }
    return row;
  });
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "lambda,p,length,attained,level,margin,status\n";
  for (const auto& r : rows) {
    os << num(r.lambda) << "," << num(r.p) << "," << num(r.length) << "," << (r.attained ? 1 : 0) << ","
       << num(r.level) << "," << num(r.margin) << "," << r.status << "\n";
  }
}

std::optional<double> attainment_threshold(const std::vector<SweepRow>& rows, double lambda, double p) {
  std::vector<const SweepRow*> sel;
  for (const auto& r : rows) {
    if (r.lambda == lambda && r.p == p) sel.push_back(&r);
  }
  std::sort(sel.begin(), sel.end(), [](auto* a, auto* b) { return a->length < b->length; });
  std::optional<double> threshold;
  for (auto it = sel.rbegin(); it != sel.rend(); ++it) {
    if (!(*it)->attained) break;
    threshold = (*it)->length;
  }
  return threshold;
}

void write_svg(std::ostream& os, const GridFunction& u, const std::string& title) {
  const double width = 1000, height = 400, pad = 40;
  const Mesh& mesh = *u.mesh;
  std::vector<const EdgeMesh*> order;
  for (const auto& em : mesh.edges()) order.push_back(&em);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  double total = 0.0;
  for (auto* em : order) total += em->length;
  double lo = std::min(0.0, u.values.minCoeff()), hi = std::max(0.0, u.values.maxCoeff());
  if (hi - lo <= 0.0) hi = lo + 1.0;
  auto X = [&](double s) { return pad + (width - 2 * pad) * s / total; };
  auto Y = [&](double v) { return height - pad - (height - 2 * pad) * (v - lo) / (hi - lo); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

  os << std::fixed << std::setprecision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"400\" viewBox=\"0 0 1000 400\">\n";
  os << "<rect width=\"1000\" height=\"400\" fill=\"white\"/>\n";
  os << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">" << title
     << "</text>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << Y(0) << "\" x2=\"" << width - pad << "\" y2=\"" << Y(0)
     << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  double offset = 0.0;
  std::size_t c = 0;
  for (auto* em : order) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[c++ % 6] << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < em->nodes.size(); ++i) {
      os << X(offset + em->coordinate(i)) << "," << Y(u.values[em->nodes[i]]) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << X(offset + 0.5 * em->length) << "\" y=\"" << height - pad + 16
       << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">e" << em->id.value
       << "</text>\n";
    offset += em->length;
  }
  os << "</svg>\n";
}

}  // namespace nlsgraph
