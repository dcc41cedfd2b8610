#include "nlsgraph/solvers.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

namespace nlsgraph {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::EscapedConstraint: return "EscapedConstraint";
  }
  return "?";
}

std::string to_string(Bucket b) {
  switch (b) {
    case Bucket::S1: return "S1";
    case Bucket::S2: return "S2";
    case Bucket::S3: return "S3";
  }
  return "?";
}

namespace {

// Rows and columns of pinned DOFs replaced by the identity.
SparseMatrix pin(const SparseMatrix& a, const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (mesh.is_pinned(it.row()) || mesh.is_pinned(it.col())) continue;
      t.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Index i = 0; i < a.rows(); ++i) {
    if (mesh.is_pinned(i)) t.emplace_back(i, i, 1.0);
  }
  SparseMatrix out(a.rows(), a.cols());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

void zero_pinned(Vector& v, const Mesh& mesh) {
  for (Index i = 0; i < v.size(); ++i) {
    if (mesh.is_pinned(i)) v[i] = 0.0;
  }
}

// The H^1 inner product K + lambda M, factored once per solve.
class Preconditioner {
 public:
  Preconditioner(const Mesh& mesh, double lambda)
      : h_(pin(mesh.stiffness() + lambda * mesh.mass(), mesh)) {
    llt_.compute(h_);
    if (llt_.info() != Eigen::Success) throw std::runtime_error("H^1 factorization failed");
  }
  Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }
  const SparseMatrix& matrix() const { return h_; }

 private:
  SparseMatrix h_;
  Eigen::SimplicialLLT<SparseMatrix> llt_;
};

struct State {
  double quad = 0.0;   // ||u'||^2 + lambda ||u||^2
  double power = 0.0;  // ||u||_p^p
  double level = kInfinity;
};

State measure(const GridFunction& u, const Preconditioner& pre, const ProblemParams& pp) {
  State s;
  s.quad = u.values.dot(pre.matrix() * u.values);
  s.power = power_integral(u, pp.p());
  if (s.quad > 0.0 && s.power > 0.0) {
    const double p = pp.p();
    s.level = pp.kappa() * std::exp((p * std::log(s.quad) - 2.0 * std::log(s.power)) / (p - 2.0));
  }
  return s;
}

// Clips values off the constraint edge to the edge's own sup, so the result
// lies in X_e. Returns whether anything changed.
bool clip_to_edge(Vector& v, const std::vector<char>& on_edge) {
  double top = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (on_edge[static_cast<std::size_t>(i)]) top = std::max(top, std::abs(v[i]));
  }
  bool changed = false;
  for (Index i = 0; i < v.size(); ++i) {
    if (on_edge[static_cast<std::size_t>(i)] || std::abs(v[i]) <= top) continue;
    v[i] = std::copysign(top, v[i]);
    changed = true;
  }
  return changed;
}

struct Run {
  Vector u;
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
  double stationarity = kInfinity;
  std::vector<TraceEntry> trace;
};

Run descend(const GridFunction& init, const ProblemParams& pp, const Preconditioner& pre,
            const SolverOptions& opts, const std::vector<char>* on_edge) {
  const Mesh& mesh = *init.mesh;
  GridFunction u = init;
  zero_pinned(u.values, mesh);
  if (on_edge) clip_to_edge(u.values, *on_edge);
  if (!(norm(u, kInfinity) > 0.0)) throw std::invalid_argument("descent from the zero function");
  u = project_nehari(u, pp);

  const double p = pp.p();
  State st = measure(u, pre, pp);
  Run run;
  int flat_steps = 0;
  bool searching = true;
  for (int it = 0; it < opts.max_iters && searching; ++it) {
    run.iterations = it;
    Vector g = nonlinear_load(u, p);
    zero_pinned(g, mesh);
    Vector w = pre.solve(g);
    double r = std::max(0.0, st.quad * g.dot(w) / (st.power * st.power) - 1.0);
    run.stationarity = std::sqrt(r);
    if (opts.keep_trace) run.trace.push_back({it, st.level, 0.0, run.stationarity});
    if (run.stationarity <= opts.grad_tol) {
      run.status = SolveStatus::Converged;
      run.u = u.values;
      return run;
    }
    Vector d = (st.quad / st.power) * w - u.values;
    // Euclidean gradient of the level; the Armijo test uses the displacement
    // actually taken, which differs from alpha * d after clipping.
    const Vector grad = st.level * (2.0 * p / (p - 2.0)) *
                        (pre.matrix() * u.values / st.quad - g / st.power);

    double alpha = 1.0;
    bool accepted = false;
    bool clipped = false;
    State trial_state;
    GridFunction trial(u.mesh);
    while (alpha >= opts.min_step) {
      trial.values = u.values + alpha * d;
      clipped = on_edge && clip_to_edge(trial.values, *on_edge);
      trial_state = measure(trial, pre, pp);
      const double predicted = grad.dot(trial.values - u.values);
      if (predicted < 0.0 && trial_state.level <= st.level + opts.armijo * predicted) {
        accepted = true;
        break;
      }
      alpha *= opts.shrink;
    }
    if (!accepted) {
      searching = false;
      break;
    }
    if (opts.keep_trace) run.trace.back().step = alpha;
    double drop = st.level - trial_state.level;
    flat_steps = (clipped && drop <= 1e-14 * st.level) ? flat_steps + 1 : 0;
    u = project_nehari(trial, pp);
    st = measure(u, pre, pp);
    // Sliding along an active constraint without progress.
    if (flat_steps >= 50) searching = false;
  }
  run.u = u.values;
  // Line search stalled at roundoff level next to a critical point.
  if (run.stationarity <= 1e3 * opts.grad_tol) run.status = SolveStatus::Converged;
  return run;
}

GridFunction smooth_perturbation(const GridFunction& init, const Preconditioner& pre, double size,
                                 std::mt19937_64& rng) {
  const Mesh& mesh = *init.mesh;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector xi(init.values.size());
  for (Index i = 0; i < xi.size(); ++i) xi[i] = normal(rng);
  zero_pinned(xi, mesh);
  Vector s = pre.solve(mesh.mass() * xi);
  double top = s.cwiseAbs().maxCoeff();
  double peak = init.values.cwiseAbs().maxCoeff();
  if (top > 0.0) s *= size * peak / top;
  return {init.mesh, (init.values + s).cwiseAbs()};
}

std::vector<char> closed_edge_mask(const Mesh& mesh, EdgeId e) {
  std::vector<char> mask(static_cast<std::size_t>(mesh.dof_count()), 0);
  for (Index dof : mesh.edge_mesh(e).nodes) mask[static_cast<std::size_t>(dof)] = 1;
  return mask;
}

}  // namespace

SolveReport evaluate(const GridFunction& u, const ProblemParams& pp,
                     std::optional<EdgeId> reference_edge) {
  const Mesh& mesh = *u.mesh;
  SolveReport r;
  r.u = u;
  r.level = action(u, pp);
  r.nehari_res = nehari_residual(u, pp);
  r.multiplier = norm(u, 2.0) > 0.0 ? lagrange_estimate(u, pp.p()) : 0.0;
  r.kirchhoff_max = kirchhoff_residual(u, pp).max();
  r.constraint_edge = reference_edge;
  if (u.values.size() == 0) return r;

  Index arg = 0;
  u.values.cwiseAbs().maxCoeff(&arg);
  if (auto v = mesh.vertex_of(arg)) {
    r.argmax_at_vertex = true;
    // Attribute a vertex maximum to the incident edge that stays highest.
    double best = -1.0;
    for (const auto& em : mesh.edges()) {
      const auto& nd = em.nodes;
      for (std::size_t end : {std::size_t{0}, nd.size() - 1}) {
        if (nd[end] != arg) continue;
        std::size_t nb = end == 0 ? 1 : nd.size() - 2;
        double val = std::abs(u.values[nd[nb]]);
        if (val > best) {
          best = val;
          r.argmax_edge = em.id;
        }
      }
    }
  } else {
    r.argmax_edge = mesh.edges()[static_cast<std::size_t>(mesh.interior_edge_of(arg))].id;
  }

  EdgeId ref = reference_edge.value_or(r.argmax_edge);
  const EdgeMesh& em = mesh.edge_mesh(ref);
  std::vector<char> inside(static_cast<std::size_t>(mesh.dof_count()), 0);
  for (std::size_t i = 1; i + 1 < em.nodes.size(); ++i) inside[static_cast<std::size_t>(em.nodes[i])] = 1;
  double in_max = 0.0, out_max = 0.0;
  for (Index i = 0; i < u.values.size(); ++i) {
    double a = std::abs(u.values[i]);
    if (inside[static_cast<std::size_t>(i)]) {
      in_max = std::max(in_max, a);
    } else {
      out_max = std::max(out_max, a);
    }
  }
  r.margin = in_max - out_max;
  return r;
}

SolveReport minimize_nehari(const GridFunction& init, const ProblemParams& pp,
                            const SolverOptions& opts) {
  if (opts.max_iters < 1 || !(opts.grad_tol > 0.0)) throw std::invalid_argument("bad solver options");
  Preconditioner pre(*init.mesh, pp.lambda());
  std::mt19937_64 rng(opts.seed);
  std::optional<Run> best;
  double best_level = kInfinity;
  GridFunction base = init.abs();
  for (int k = 0; k < std::max(1, opts.restarts); ++k) {
    GridFunction start = k == 0 ? base : smooth_perturbation(base, pre, opts.perturbation, rng);
    Run run;
    try {
      run = descend(start, pp, pre, opts, nullptr);
    } catch (const std::invalid_argument&) {
      continue;  // collapsed to zero; try the next start
    }
    GridFunction u(init.mesh, run.u);
    double level = action(u, pp);
    if (!best || level < best_level) {
      best_level = level;
      best = std::move(run);
    }
  }
  if (!best) {
    SolveReport r = evaluate(base, pp);
    r.status = SolveStatus::MaxIters;
    return r;
  }
  SolveReport r = evaluate(GridFunction(init.mesh, best->u), pp);
  r.status = best->status;
  r.iterations = best->iterations;
  r.trace = std::move(best->trace);
  return r;
}

GridFunction edge_bump(const MeshPtr& mesh, EdgeId e, const ProblemParams& pp) {
  const Edge& edge = mesh->graph().edge(e);
  if (edge.is_half_line()) throw std::invalid_argument("constraint edge must be bounded");
  Soliton phi(pp);
  const double half = 0.5 * edge.length;
  const double cut = phi(half);
  return interpolate(mesh, [&](const Edge& f, double x) {
    return f.id == e ? std::max(0.0, phi(x - half) - cut) : 0.0;
  });
}

SolveReport minimize_doubly_constrained(const MeshPtr& mesh, const ProblemParams& pp, EdgeId e,
                                        const SolverOptions& opts) {
  return minimize_doubly_constrained(edge_bump(mesh, e, pp), pp, e, opts);
}

SolveReport minimize_doubly_constrained(const GridFunction& init, const ProblemParams& pp,
                                        EdgeId e, const SolverOptions& opts) {
  const Mesh& mesh = *init.mesh;
  if (mesh.graph().edge(e).is_half_line()) {
    throw std::invalid_argument("constraint edge must be bounded");
  }
  Preconditioner pre(mesh, pp.lambda());
  const auto mask = closed_edge_mask(mesh, e);
  Run run = descend(init.abs(), pp, pre, opts, &mask);
  SolveReport r = evaluate(GridFunction(init.mesh, run.u), pp, e);
  r.iterations = run.iterations;
  r.trace = std::move(run.trace);
  if (r.margin <= 0.0) {
    r.status = SolveStatus::EscapedConstraint;
  } else {
    r.status = run.status;
  }
  return r;
}

SolveReport refine_newton(const GridFunction& u0, const ProblemParams& pp,
                          const NewtonOptions& opts) {
  if (!(norm(u0, kInfinity) > 0.0)) {
    throw std::invalid_argument("Newton refinement from u0 = 0: only the trivial root is nearby");
  }
  const Mesh& mesh = *u0.mesh;
  const double p = pp.p();
  const SparseMatrix h = mesh.stiffness() + pp.lambda() * mesh.mass();
  const Vector& hat = mesh.lumped_mass();

  GridFunction u = u0;
  zero_pinned(u.values, mesh);
  auto residual = [&](const GridFunction& v, Vector& f) {
    f = h * v.values - nonlinear_load(v, p);
    zero_pinned(f, mesh);
    return f.cwiseQuotient(hat).cwiseAbs().maxCoeff();
  };

  Vector f;
  double res = residual(u, f);
  std::vector<TraceEntry> trace;
  SolveStatus status = SolveStatus::MaxIters;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (opts.keep_trace) trace.push_back({it, action(u, pp), 0.0, res});
    if (res <= opts.tol) {
      status = SolveStatus::Converged;
      break;
    }
    SparseMatrix jac = pin(h - (p - 1.0) * nonlinear_weight(u, p), mesh);
    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(jac);
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) break;
    Vector delta = lu.solve(f);
    double t = 1.0;
    bool moved = false;
    while (t >= 1.0 / 1024.0) {
      GridFunction trial(u.mesh, u.values - t * delta);
      Vector ft;
      double rt = residual(trial, ft);
      if (rt < res) {
        u = std::move(trial);
        f = std::move(ft);
        res = rt;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (opts.keep_trace) trace.back().step = moved ? t : 0.0;
    if (!moved) break;
  }
  SolveReport r = evaluate(u, pp);
  r.iterations = it;
  r.trace = std::move(trace);
  bool multiplier_ok = std::abs(r.multiplier - pp.lambda()) <= 1e-6 * pp.lambda();
  r.status = (status == SolveStatus::Converged && multiplier_ok) ? SolveStatus::Converged
                                                                 : SolveStatus::MaxIters;
  return r;
}

double relative_distance(const GridFunction& u, const GridFunction& v) {
  double scale = std::max(norm(u, 2.0), norm(v, 2.0));
  if (!(scale > 0.0)) return 0.0;
  return norm(u - v, 2.0) / scale;
}

std::vector<SolveReport> multiplicity_scan(const MeshPtr& mesh, const ProblemParams& pp,
                                           double min_len, const SolverOptions& opts) {
  std::vector<EdgeId> candidates;
  for (const auto& e : mesh->graph().edges()) {
    if (!e.is_half_line() && e.length >= min_len) candidates.push_back(e.id);
  }
  std::sort(candidates.begin(), candidates.end());

  auto solve_edge = [&](EdgeId e) -> std::optional<SolveReport> {
    SolveReport dc = minimize_doubly_constrained(mesh, pp, e, opts);
    if (dc.status == SolveStatus::EscapedConstraint) return std::nullopt;
    SolveReport nr = refine_newton(dc.u, pp);
    if (nr.status != SolveStatus::Converged) return std::nullopt;
    SolveReport r = evaluate(nr.u, pp, e);
    r.status = nr.status;
    r.iterations = dc.iterations + nr.iterations;
    double low = kInfinity;
    for (Index i = 0; i < r.u.values.size(); ++i) {
      if (!mesh->is_pinned(i)) low = std::min(low, r.u.values[i]);
    }
    if (!(low > 0.0) || !(r.margin > 0.0)) return std::nullopt;
    return r;
  };

  // Solves are independent; the merge below runs in edge order whatever the
  // number of workers, so the result is deterministic.
  std::vector<std::optional<SolveReport>> solved(candidates.size());
  const int jobs = std::max(1, opts.jobs);
  for (std::size_t start = 0; start < candidates.size(); start += static_cast<std::size_t>(jobs)) {
    std::vector<std::future<std::optional<SolveReport>>> batch;
    std::size_t stop = std::min(candidates.size(), start + static_cast<std::size_t>(jobs));
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, solve_edge,
                                 candidates[i]));
    }
    for (std::size_t i = start; i < stop; ++i) solved[i] = batch[i - start].get();
  }

  std::vector<SolveReport> kept;
  for (auto& s : solved) {
    if (!s) continue;
    bool fresh = std::all_of(kept.begin(), kept.end(), [&](const SolveReport& k) {
      return relative_distance(k.u, s->u) > 1e-3;
    });
    if (fresh) kept.push_back(std::move(*s));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const SolveReport& a, const SolveReport& b) {
    if (a.constraint_edge != b.constraint_edge) return a.constraint_edge < b.constraint_edge;
    return a.level < b.level;
  });
  return kept;
}

std::set<Bucket> classify_solution(const GridFunction& u, const EdgePartition& partition) {
  const Mesh& mesh = *u.mesh;
  std::set<Bucket> out;
  if (u.values.size() == 0) return out;
  const double top = u.values.cwiseAbs().maxCoeff();
  auto bucket_of = [&](EdgeId e) {
    if (partition.s1.count(e)) out.insert(Bucket::S1);
    if (partition.s2.count(e)) out.insert(Bucket::S2);
    if (partition.s3.count(e)) out.insert(Bucket::S3);
  };
  for (Index i = 0; i < u.values.size(); ++i) {
    if (std::abs(u.values[i]) < top - 1e-12 * top) continue;
    if (auto v = mesh.vertex_of(i)) {
      for (EdgeId e : mesh.graph().incident_edges(*v)) bucket_of(e);
    } else if (mesh.interior_edge_of(i) >= 0) {
      bucket_of(mesh.edges()[static_cast<std::size_t>(mesh.interior_edge_of(i))].id);
    }
  }
  return out;
}

nlohmann::json to_json(const SolveReport& r, bool with_trace) {
  nlohmann::json j;
  j["level"] = r.level;
  j["multiplier"] = r.multiplier;
  j["nehari_res"] = r.nehari_res;
  j["kirchhoff_max"] = r.kirchhoff_max;
  j["argmax_edge"] = r.argmax_edge.value;
  j["argmax_at_vertex"] = r.argmax_at_vertex;
  j["margin"] = r.margin;
  j["constraint_edge"] = r.constraint_edge ? nlohmann::json(r.constraint_edge->value) : nlohmann::json();
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["dofs"] = r.u.values.size();
  if (with_trace) {
    auto& t = j["trace"] = nlohmann::json::array();
    for (const auto& e : r.trace) {
      t.push_back({{"iter", e.iter}, {"level", e.level}, {"step", e.step},
                   {"stationarity", e.stationarity}});
    }
    j["u"] = std::vector<double>(r.u.values.data(), r.u.values.data() + r.u.values.size());
  }
  return j;
}

}  // namespace nlsgraph
