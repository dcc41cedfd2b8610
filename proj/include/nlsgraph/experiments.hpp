#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlsgraph/functionals.hpp"
#include "nlsgraph/graph_zoo.hpp"
#include "nlsgraph/solvers.hpp"

namespace nlsgraph {

struct RunConfig {
  double lambda = 1.0;
  double p = 4.0;
  double h = 0.01;
  /// Half-line truncation; defaults to 10 / sqrt(lambda).
  std::optional<double> trunc;
  std::uint64_t seed = 0;
  int jobs = 1;

  double truncation() const;
  ProblemParams params() const { return {lambda, p}; }
  /// `h=...;trunc=...;seed=...` for the params column.
  std::string describe() const;
  /// Level tolerance used in records: 1e-3 s_lambda.
  double level_tol() const;
  SolverOptions solver_options() const;
};

enum class Tag { CEst, SigmaUpper, LevelOfSolution, Gap, Delta, Attained, Verdict };
std::string to_string(Tag t);

struct ExperimentRecord {
  std::string graph;
  std::string params;
  double lambda = 0.0;
  double p = 0.0;
  Tag tag = Tag::Verdict;
  double value = 0.0;
  double tol = 0.0;
  std::string status;
};

/// `graph,params,lambda,p,tag,value,tol,status`, values with 12 significant digits.
void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
nlohmann::json to_json(const std::vector<ExperimentRecord>& records);

/// A c-minimizer whose maximum sits inside a truncated half-line is a bump
/// running off to infinity on the untruncated graph, not a ground state.
bool is_escaping(const SolveReport& r);

/// Nontrivial, Newton-converged and not escaping.
bool is_graph_solution(const SolveReport& r);

/// Starting points for the ground-state search: a bump on every bounded edge,
/// a bump centred on every vertex, and bumps at offsets trunc/4 and trunc/2
/// along every half-line.
std::vector<GridFunction> ground_state_inits(const MeshPtr& mesh, const ProblemParams& pp);

/// phi(dist(v, .)) on the edges at v, cut off so it vanishes at the far ends.
GridFunction vertex_bump(const MeshPtr& mesh, VertexId v, const ProblemParams& pp);

/// phi(x - d) along half-line e, ramped down to zero on the other edges at its vertex.
GridFunction half_line_bump(const MeshPtr& mesh, EdgeId e, double d, const ProblemParams& pp);

struct LevelsResult {
  std::vector<ExperimentRecord> records;
  double c_est = kInfinity;
  bool c_attained = false;
  SolveReport c_min;
  std::optional<double> sigma_upper;
  /// Solutions entering sigma_upper.
  std::vector<SolveReport> solutions;
};

/// c estimate from minimize_nehari over ground_state_inits; sigma upper bound
/// from multiplicity_scan, the Newton-polished c-minimizer when it is not
/// escaping, and the closed-form solutions when g is a star.
LevelsResult cmd_levels(const MetricGraph& g, const RunConfig& cfg, double min_len = 0.0);

struct ClassifySizes {
  std::vector<int> a2_K = {4, 6, 8};
  std::vector<int> b1_N = {3, 4};
  std::vector<int> b2_N = {6, 10, 14};
  int b2_K = 2;
  double a1_length = 2.0;
};

/// Runs the family for case A1, A2, B1 or B2 and records the measured
/// signature; the last record is the verdict (`pass`, `fail`, or `evidence`
/// for B2, whose defining property is asymptotic in N).
std::vector<ExperimentRecord> cmd_classify(const std::string& which, const RunConfig& cfg,
                                           const ClassifySizes& sizes = {});

/// Measured quantities behind the B2 signature for one N.
struct B2Cell {
  int N = 0;
  double s3_level = kInfinity;        // loop L_1 solution on g_n
  double s3_tilde_level = kInfinity;  // loop L_1 solution on tilde_g_n
  double min_s12_level = kInfinity;   // lowest S1/S2-classified solution
  int s12_count = 0;
  std::vector<ExperimentRecord> records;
};
B2Cell b2_cell(int N, int K, const RunConfig& cfg);

/// Lowest constrained level on the bridge of the H-shaped graph over several
/// starting points, minus s_lambda.
double h_graph_gap(const RunConfig& cfg);

struct MultiplicityResult {
  std::vector<ExperimentRecord> records;
  std::vector<SolveReport> solutions;
};

/// multiplicity_scan plus, when out_dir is non-empty, one `solution_<i>.csv`
/// and `solution_<i>.svg` per solution.
MultiplicityResult cmd_multiplicity(const MetricGraph& g, const RunConfig& cfg, double min_len,
                                    const std::string& out_dir = "");

struct SweepRow {
  double lambda = 0.0;
  double p = 0.0;
  double length = 0.0;
  bool attained = false;
  double level = 0.0;
  double margin = 0.0;
  std::string status;
};

/// Doubly-constrained solve on the loop of loops_on_line(1, length) for every
/// (lambda, p, length); attained means the constrained minimizer has its
/// maximum strictly inside the loop and Newton polishes it to a solution.
std::vector<SweepRow> cmd_sweep(const std::vector<double>& lengths,
                                const std::vector<double>& lambdas, const std::vector<double>& ps,
                                const RunConfig& cfg);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
/// Smallest swept length from which every longer length is attained.
std::optional<double> attainment_threshold(const std::vector<SweepRow>& rows, double lambda, double p);

/// 1000x400 SVG: the edges laid end to end in id order, one polyline each,
/// labelled with the edge id.
void write_svg(std::ostream& os, const GridFunction& u, const std::string& title);

}  // namespace nlsgraph
