#include "nlsgraph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>

namespace nlsgraph {

namespace quadrature {
// 4-point Gauss-Legendre mapped to [0, 1]; exact for polynomials of degree 7.
const double kNodes[kPoints] = {
    0.5 - 0.5 * 0.8611363115940526, 0.5 - 0.5 * 0.3399810435848563,
    0.5 + 0.5 * 0.3399810435848563, 0.5 + 0.5 * 0.8611363115940526};
const double kWeights[kPoints] = {0.5 * 0.3478548451374538, 0.5 * 0.6521451548625461,
                                  0.5 * 0.6521451548625461, 0.5 * 0.3478548451374538};
}  // namespace quadrature

namespace {

int even_intervals(double length, double h_target) {
  // Small slack so 20 / 0.01 does not round up to 2001.
  int n = static_cast<int>(std::ceil(length / h_target - 1e-9));
  n = std::max(n, 2);
  if (n % 2 != 0) ++n;
  return n;
}

}  // namespace

Mesh::Mesh(MetricGraph graph, double h_target, double truncation)
    : graph_(std::move(graph)), h_target_(h_target), truncation_(truncation) {
  std::map<VertexId, Index> vdof;
  for (auto v : graph_.vertices()) {
    vdof[v] = static_cast<Index>(pinned_.size());
    pinned_.push_back(false);
    interior_edge_.push_back(-1);
    vertex_of_.push_back(v);
  }
  edges_.reserve(graph_.edges().size());
  for (std::size_t k = 0; k < graph_.edges().size(); ++k) {
    const Edge& e = graph_.edges()[k];
    EdgeMesh em;
    em.id = e.id;
    em.half_line = e.is_half_line();
    em.length = em.half_line ? truncation : e.length;
    em.intervals = even_intervals(em.length, h_target);
    em.step = em.length / em.intervals;
    em.nodes.resize(static_cast<std::size_t>(em.intervals) + 1);
    em.nodes.front() = vdof.at(e.tail);
    for (int i = 1; i < em.intervals; ++i) {
      em.nodes[static_cast<std::size_t>(i)] = static_cast<Index>(pinned_.size());
      pinned_.push_back(false);
      interior_edge_.push_back(static_cast<int>(k));
      vertex_of_.push_back(std::nullopt);
    }
    if (em.half_line) {
      em.nodes.back() = static_cast<Index>(pinned_.size());
      pinned_.push_back(true);
      interior_edge_.push_back(static_cast<int>(k));
      vertex_of_.push_back(std::nullopt);
    } else {
      em.nodes.back() = vdof.at(*e.head);
    }
    edges_.push_back(std::move(em));
  }

  const Index n = dof_count();
  std::vector<Eigen::Triplet<double>> kt, mt;
  for (const auto& em : edges_) {
    const double h = em.step;
    for (int i = 0; i < em.intervals; ++i) {
      Index a = em.nodes[static_cast<std::size_t>(i)];
      Index b = em.nodes[static_cast<std::size_t>(i) + 1];
      kt.emplace_back(a, a, 1.0 / h);
      kt.emplace_back(b, b, 1.0 / h);
      kt.emplace_back(a, b, -1.0 / h);
      kt.emplace_back(b, a, -1.0 / h);
      mt.emplace_back(a, a, h / 3.0);
      mt.emplace_back(b, b, h / 3.0);
      mt.emplace_back(a, b, h / 6.0);
      mt.emplace_back(b, a, h / 6.0);
    }
  }
  stiffness_.resize(n, n);
  mass_.resize(n, n);
  stiffness_.setFromTriplets(kt.begin(), kt.end());
  mass_.setFromTriplets(mt.begin(), mt.end());
  lumped_ = mass_ * Vector::Ones(n);
}

std::optional<VertexId> Mesh::vertex_of(Index dof) const {
  return vertex_of_[static_cast<std::size_t>(dof)];
}

Index Mesh::vertex_dof(VertexId v) const {
  for (std::size_t i = 0; i < graph_.vertices().size(); ++i) {
    if (graph_.vertices()[i] == v) return static_cast<Index>(i);
  }
  throw std::out_of_range("unknown vertex");
}

double Mesh::total_length() const {
  double s = 0.0;
  for (const auto& em : edges_) s += em.length;
  return s;
}

double Mesh::max_step() const {
  double s = 0.0;
  for (const auto& em : edges_) s = std::max(s, em.step);
  return s;
}

MeshPtr discretize(const MetricGraph& g, double h_target, double truncation) {
  if (!(h_target > 0.0)) throw std::invalid_argument("h_target must be positive");
  if (!(truncation >= 5.0)) {
    throw std::invalid_argument("half-line truncation below 5: truncation error would dominate");
  }
  return std::make_shared<const Mesh>(g, h_target, truncation);
}

GridFunction::GridFunction(MeshPtr m, Vector v) : mesh(std::move(m)), values(std::move(v)) {
  if (values.size() != mesh->dof_count()) throw std::invalid_argument("DOF count mismatch");
}

GridFunction operator*(double c, const GridFunction& u) { return {u.mesh, c * u.values}; }

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  return {a.mesh, a.values + b.values};
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  return {a.mesh, a.values - b.values};
}

GridFunction interpolate(const MeshPtr& mesh, const EdgeFunction& f) {
  GridFunction u(mesh);
  std::vector<bool> set(static_cast<std::size_t>(mesh->dof_count()), false);
  const auto& g = mesh->graph();
  for (const auto& em : mesh->edges()) {
    const Edge& e = g.edge(em.id);
    for (std::size_t i = 0; i < em.nodes.size(); ++i) {
      Index dof = em.nodes[i];
      if (mesh->is_pinned(dof)) continue;
      double val = f(e, em.coordinate(i));
      if (set[static_cast<std::size_t>(dof)]) {
        if (std::abs(u.values[dof] - val) > 1e-9) {
          throw ContinuityError("interpolated function is discontinuous at vertex " +
                                std::to_string(mesh->vertex_of(dof)->value));
        }
      } else {
        u.values[dof] = val;
        set[static_cast<std::size_t>(dof)] = true;
      }
    }
  }
  return u;
}

namespace {

template <typename EdgeFilter>
double power_sum(const GridFunction& u, double q, EdgeFilter keep) {
  double total = 0.0;
  for (const auto& em : u.mesh->edges()) {
    if (!keep(em)) continue;
    const double h = em.step;
    for (int i = 0; i < em.intervals; ++i) {
      double a = u.values[em.nodes[static_cast<std::size_t>(i)]];
      double b = u.values[em.nodes[static_cast<std::size_t>(i) + 1]];
      double s = 0.0;
      for (int g = 0; g < quadrature::kPoints; ++g) {
        double x = quadrature::kNodes[g];
        s += quadrature::kWeights[g] * std::pow(std::abs(a + (b - a) * x), q);
      }
      total += h * s;
    }
  }
  return total;
}

}  // namespace

double power_integral(const GridFunction& u, double q) {
  return power_sum(u, q, [](const EdgeMesh&) { return true; });
}

double norm(const GridFunction& u, double q) {
  if (q == kInfinity) return u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
  if (q < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
  if (q == 2.0) return std::sqrt(std::max(0.0, u.values.dot(u.mesh->mass() * u.values)));
  return std::pow(power_integral(u, q), 1.0 / q);
}

double grad_norm_sq(const GridFunction& u) { return u.values.dot(u.mesh->stiffness() * u.values); }

double restrict_norm(const GridFunction& u, const std::set<EdgeId>& region, double q) {
  if (region.empty()) {
    std::cerr << "warning: restrict_norm called with an empty region\n";
    return 0.0;
  }
  if (q == kInfinity) {
    double m = 0.0;
    for (const auto& em : u.mesh->edges()) {
      if (!region.count(em.id)) continue;
      for (Index dof : em.nodes) m = std::max(m, std::abs(u.values[dof]));
    }
    return m;
  }
  if (q < 1.0) throw std::invalid_argument("norm exponent must be >= 1");
  return std::pow(power_sum(u, q, [&](const EdgeMesh& em) { return region.count(em.id) > 0; }),
                  1.0 / q);
}

void write_csv(std::ostream& os, const GridFunction& u) {
  os << "edge_id,local_x,value\n";
  std::vector<const EdgeMesh*> order;
  for (const auto& em : u.mesh->edges()) order.push_back(&em);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
  os << std::setprecision(12);
  for (const auto* em : order) {
    for (std::size_t i = 0; i < em->nodes.size(); ++i) {
      os << em->id.value << "," << em->coordinate(i) << "," << u.values[em->nodes[i]] << "\n";
    }
  }
}

}  // namespace nlsgraph
