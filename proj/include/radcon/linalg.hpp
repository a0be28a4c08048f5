#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "radcon/core.hpp"

namespace radcon {

// Serial ascending-index dot product; the reduction order is part of the
// reproducibility contract.
inline double dot_product(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct CgResult {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

// Conjugate gradient for a symmetric positive-definite operator given as
// apply(x, out). Relative tolerance against the initial residual.
template <typename Apply>
CgResult conjugate_gradient(const Apply& apply, const std::vector<double>& rhs,
                            std::vector<double>& x, double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), p(n), q(n);

  apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
  p = r;

  double rho = dot_product(r, r);
  const double r0 = std::sqrt(rho);
  CgResult res;
  if (r0 == 0.0) return res;

  if (!std::isfinite(r0)) {
    res.converged = false;
    res.residual = r0;
    return res;
  }

  for (int it = 1; it <= max_iter; ++it) {
    apply(p, q);
    const double alpha = rho / dot_product(p, q);
    if (!std::isfinite(alpha)) {
      res.converged = false;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
    const double rho_new = dot_product(r, r);
    res.iterations = it;
    res.residual = std::sqrt(rho_new);
    if (res.residual <= rel_tol * r0) return res;
    const double beta = rho_new / rho;
    rho = rho_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  res.converged = false;
  return res;
}

}  // namespace radcon
