#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "radcon/core.hpp"

namespace radcon {

// Measure of the direction space: 4*pi (3-D sphere), 2*pi (2-D circle),
// 2 (1-D two-beam).
inline double direction_space_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw std::invalid_argument("quadrature: dim must be 1, 2 or 3");
  }
}

struct AngularQuadrature {
  int dim = 0;
  int order = 0;
  std::vector<Vec3> directions;  // unit vectors, zero-padded beyond dim
  std::vector<double> weights;   // positive, sum to direction_space_measure(dim)

  std::size_t size() const { return directions.size(); }

  double total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] via Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace detail

// Discrete-ordinates set. Families:
//   1-D: two beams {+1,-1}, weights {1,1}; order must be 2.
//   2-D: `order` equally spaced directions on the circle, weights 2*pi/order,
//        half-panel offset; order must be a positive multiple of 4 so no
//        direction lies on a coordinate axis.
//   3-D: product of `order` Gauss-Legendre polar nodes with 2*order uniform
//        azimuthal angles (half-panel offset); order must be even so no
//        direction has a zero component.
inline AngularQuadrature build_quadrature(int dim, int order) {
  AngularQuadrature q;
  q.dim = dim;
  q.order = order;
  const double measure = direction_space_measure(dim);

  if (dim == 1) {
    if (order != 2) throw std::invalid_argument("quadrature: 1-D order must be 2");
    q.directions = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    q.weights = {1.0, 1.0};
  } else if (dim == 2) {
    if (order < 4 || order % 4 != 0)
      throw std::invalid_argument("quadrature: 2-D order must be a multiple of 4");
    const double w = 2.0 * std::numbers::pi / order;
    for (int m = 0; m < order; ++m) {
      const double phi = (m + 0.5) * 2.0 * std::numbers::pi / order;
      q.directions.push_back({std::cos(phi), std::sin(phi), 0.0});
      q.weights.push_back(w);
    }
  } else if (dim == 3) {
    if (order < 2 || order % 2 != 0)
      throw std::invalid_argument("quadrature: 3-D order must be even");
    std::vector<double> mu, wmu;
    detail::gauss_legendre(order, mu, wmu);
    const int nazi = 2 * order;
    const double wazi = 2.0 * std::numbers::pi / nazi;
    for (int i = 0; i < order; ++i) {
      const double s = std::sqrt(1.0 - mu[i] * mu[i]);
      for (int k = 0; k < nazi; ++k) {
        const double phi = (k + 0.5) * 2.0 * std::numbers::pi / nazi;
        q.directions.push_back({s * std::cos(phi), s * std::sin(phi), mu[i]});
        q.weights.push_back(wmu[i] * wazi);
      }
    }
  } else {
    throw std::invalid_argument("quadrature: dim must be 1, 2 or 3");
  }

  // Renormalize so the weights sum to the direction-space measure to the
  // last rounding.
  const double scale = measure / q.total_weight();
  for (double& w : q.weights) w *= scale;

  for (const auto& d : q.directions) {
    if (std::abs(norm(d) - 1.0) > 1e-12)
      throw std::runtime_error("quadrature: direction not unit");
    for (int a = 0; a < dim; ++a)
      if (d[a] == 0.0)
        throw std::runtime_error("quadrature: direction has zero component");
  }
  Vec3 first_moment{0.0, 0.0, 0.0};
  for (std::size_t m = 0; m < q.size(); ++m)
    for (int a = 0; a < 3; ++a) first_moment[a] += q.weights[m] * q.directions[m][a];
  if (norm(first_moment) > 1e-10)
    throw std::runtime_error("quadrature: first moment not zero");
  return q;
}

// Weighted sum over ordinates, ascending index. `field` is ordinate-major:
// field[m * cells + c].
inline std::vector<double> angular_integrate(const std::vector<double>& field,
                                             std::size_t cells,
                                             const AngularQuadrature& quad) {
  if (field.size() != cells * quad.size())
    throw std::invalid_argument("angular_integrate: field size mismatch");
  std::vector<double> out(cells, 0.0);
  for (std::size_t m = 0; m < quad.size(); ++m) {
    const double w = quad.weights[m];
    const double* slice = field.data() + m * cells;
    for (std::size_t c = 0; c < cells; ++c) out[c] += w * slice[c];
  }
  return out;
}

}  // namespace radcon
