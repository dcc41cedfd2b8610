#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "nlsgraph/graph.hpp"

namespace nlsgraph {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Uniform grid on one edge. `nodes[0]` sits on the tail vertex; for bounded
/// edges `nodes.back()` sits on the head vertex, for half-lines it is the
/// pinned far end of the truncated segment.
struct EdgeMesh {
  EdgeId id;
  bool half_line = false;
  double length = 0.0;
  double step = 0.0;
  int intervals = 0;
  std::vector<Index> nodes;

  double coordinate(std::size_t local) const { return step * static_cast<double>(local); }
};

/// Continuous piecewise-linear space on a metric graph: one DOF per vertex,
/// interior nodes per edge, half-lines truncated with a DOF pinned to zero.
class Mesh {
 public:
  Mesh(MetricGraph graph, double h_target, double truncation);

  const MetricGraph& graph() const { return graph_; }
  double h_target() const { return h_target_; }
  double truncation() const { return truncation_; }

  const std::vector<EdgeMesh>& edges() const { return edges_; }
  const EdgeMesh& edge_mesh(EdgeId id) const { return edges_[graph_.edge_index(id)]; }

  Index dof_count() const { return static_cast<Index>(pinned_.size()); }
  bool is_pinned(Index dof) const { return pinned_[static_cast<std::size_t>(dof)]; }
  /// Vertex owning `dof`, or nullopt for edge-interior and pinned DOFs.
  std::optional<VertexId> vertex_of(Index dof) const;
  Index vertex_dof(VertexId v) const;
  /// Index into edges() of the edge whose interior contains `dof`, -1 at vertices.
  int interior_edge_of(Index dof) const { return interior_edge_[static_cast<std::size_t>(dof)]; }

  /// Measure of the truncated graph (bounded lengths plus truncated half-lines).
  double total_length() const;
  double max_step() const;

  /// Exact P1 stiffness and consistent mass matrices over all DOFs.
  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& mass() const { return mass_; }
  /// Integral of each hat function (row sums of the mass matrix).
  const Vector& lumped_mass() const { return lumped_; }

 private:
  MetricGraph graph_;
  double h_target_;
  double truncation_;
  std::vector<EdgeMesh> edges_;
  std::vector<bool> pinned_;
  std::vector<int> interior_edge_;
  std::vector<std::optional<VertexId>> vertex_of_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  Vector lumped_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Builds the mesh. Bounded edges get ceil(|e|/h) intervals rounded up to an
/// even count; half-lines become segments of length `truncation`.
/// Throws std::invalid_argument if h_target <= 0 or truncation < 5.
MeshPtr discretize(const MetricGraph& g, double h_target, double truncation);

/// Value type: a mesh handle plus one value per DOF (pinned DOFs hold 0).
struct GridFunction {
  MeshPtr mesh;
  Vector values;

  GridFunction() = default;
  explicit GridFunction(MeshPtr m) : mesh(std::move(m)), values(Vector::Zero(mesh->dof_count())) {}
  GridFunction(MeshPtr m, Vector v);

  GridFunction abs() const { return {mesh, values.cwiseAbs()}; }
};

GridFunction operator*(double c, const GridFunction& u);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);

class ContinuityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using EdgeFunction = std::function<double(const Edge&, double)>;

/// Nodal sampling of f(edge, x), x measured from the edge tail. Values at a
/// shared vertex must agree within 1e-9; pinned far ends are set to zero.
GridFunction interpolate(const MeshPtr& mesh, const EdgeFunction& f);

/// L^q norm of the piecewise-linear interpolant; q = kInfinity gives the
/// maximum nodal magnitude.
double norm(const GridFunction& u, double q);
double grad_norm_sq(const GridFunction& u);

/// Norm over the sub-multigraph formed by `region` (closed edges).
double restrict_norm(const GridFunction& u, const std::set<EdgeId>& region, double q);

/// Integral of |u|^q, the power sum the functionals use.
double power_integral(const GridFunction& u, double q);

/// CSV rows `edge_id,local_x,value` ordered by (edge id, node index).
void write_csv(std::ostream& os, const GridFunction& u);

namespace quadrature {
/// Gauss-Legendre points and weights on [0, 1].
inline constexpr int kPoints = 4;
extern const double kNodes[kPoints];
extern const double kWeights[kPoints];
}  // namespace quadrature

}  // namespace nlsgraph
