#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsgraph/functionals.hpp"
#include "nlsgraph/mesh.hpp"

namespace nlsgraph {

struct SolverOptions {
  int max_iters = 4000;
  /// Stop when the preconditioned gradient ||d||_H / ||u||_H drops below this.
  double grad_tol = 1e-7;
  double armijo = 1e-4;
  double shrink = 0.5;
  double min_step = 1e-10;
  /// Runs of minimize_nehari; run 0 uses the init as given, the others a
  /// smooth seeded perturbation of it.
  int restarts = 1;
  std::uint64_t seed = 0;
  double perturbation = 0.1;
  bool keep_trace = false;
  /// Workers for independent per-edge solves.
  int jobs = 1;
};

struct NewtonOptions {
  int max_iters = 60;
  /// Max over free nodes of |residual_i| / (hat mass)_i.
  double tol = 1e-8;
  bool keep_trace = false;
};

enum class SolveStatus { Converged, MaxIters, EscapedConstraint };
std::string to_string(SolveStatus s);

struct TraceEntry {
  int iter = 0;
  double level = 0.0;
  double step = 0.0;
  double stationarity = 0.0;
};

struct SolveReport {
  GridFunction u;
  double level = 0.0;
  double multiplier = 0.0;
  double nehari_res = 0.0;
  double kirchhoff_max = 0.0;
  EdgeId argmax_edge;
  /// True when the maximum of |u| sits on a vertex node.
  bool argmax_at_vertex = false;
  /// Max of |u| over interior nodes of the reference edge (the constraint edge
  /// when there is one, else argmax_edge) minus the max over all other nodes.
  double margin = 0.0;
  std::optional<EdgeId> constraint_edge;
  SolveStatus status = SolveStatus::MaxIters;
  int iterations = 0;
  std::vector<TraceEntry> trace;
};

/// Fills every diagnostic field of a report for the given function.
SolveReport evaluate(const GridFunction& u, const ProblemParams& pp,
                     std::optional<EdgeId> reference_edge = std::nullopt);

/// Minimizes the reduced level over the Nehari manifold by descent along the
/// H^1-preconditioned gradient with Armijo backtracking, renormalizing onto
/// the manifold after each accepted step. Returns the best run.
SolveReport minimize_nehari(const GridFunction& init, const ProblemParams& pp,
                            const SolverOptions& opts = {});

/// (phi(x - |e|/2) - phi(|e|/2))^+ on e, zero elsewhere.
GridFunction edge_bump(const MeshPtr& mesh, EdgeId e, const ProblemParams& pp);

/// Same descent restricted to functions whose sup is attained on the closed
/// edge e. Trial points outside the set are clipped back onto it and then
/// subjected to the usual sufficient-decrease test.
SolveReport minimize_doubly_constrained(const MeshPtr& mesh, const ProblemParams& pp, EdgeId e,
                                        const SolverOptions& opts = {});
SolveReport minimize_doubly_constrained(const GridFunction& init, const ProblemParams& pp,
                                        EdgeId e, const SolverOptions& opts = {});

/// Damped Newton iteration on the discrete Euler-Lagrange system
/// (K + lambda M) u = g(u). Throws std::invalid_argument for u0 = 0.
SolveReport refine_newton(const GridFunction& u0, const ProblemParams& pp,
                          const NewtonOptions& opts = {});

/// Positive solutions localized on each bounded edge of length >= min_len:
/// doubly-constrained descent, Newton polish, then positivity, strict margin
/// and relative L2 deduplication (threshold 1e-3). Sorted by edge id, then level.
std::vector<SolveReport> multiplicity_scan(const MeshPtr& mesh, const ProblemParams& pp,
                                           double min_len, const SolverOptions& opts = {});

enum class Bucket { S1, S2, S3 };
std::string to_string(Bucket b);

/// Buckets containing the argmax of |u|. Nodes within 1e-12 (relative) of
/// the max all count; a vertex counts for every incident edge.
std::set<Bucket> classify_solution(const GridFunction& u, const EdgePartition& partition);

/// Relative L2 distance ||u - v|| / max(||u||, ||v||).
double relative_distance(const GridFunction& u, const GridFunction& v);

nlohmann::json to_json(const SolveReport& r, bool with_trace = false);

}  // namespace nlsgraph
