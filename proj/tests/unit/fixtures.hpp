#pragma once

#include <array>
#include <cmath>
#include <map>
#include <random>

#include "nlsgraph/mesh.hpp"

namespace fixtures {

using namespace nlsgraph;

// Random continuous function: vertex values, three sine modes per edge, and a
// linear taper to zero along half-lines.
inline GridFunction random_function(const MeshPtr& m, std::mt19937& rng, bool nonneg) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::map<VertexId, double> vv;
  for (VertexId v : m->graph().vertices()) vv[v] = U(rng);
  std::map<EdgeId, std::array<double, 3>> modes;
  for (const auto& e : m->graph().edges()) modes[e.id] = {U(rng), U(rng), U(rng)};
  const double T = m->truncation();
  GridFunction u = interpolate(m, [&](const Edge& e, double x) {
    const auto& b = modes[e.id];
    double L = e.is_half_line() ? T : e.length;
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += b[k] * std::sin((k + 1) * M_PI * x / L);
    if (e.is_half_line()) return (vv[e.tail] + s) * (1.0 - x / T);
    return vv[e.tail] + (vv[*e.head] - vv[e.tail]) * x / L + s;
  });
  return nonneg ? u.abs() : u;
}

}  // namespace fixtures
