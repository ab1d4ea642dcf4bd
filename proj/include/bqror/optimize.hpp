#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "bqror/distributions.hpp"

namespace bqror::optimize {

struct Options {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;
  double divergence_bound = 1e3;  // any |x_j| beyond this counts as divergence
};

struct Result {
  Vector x;
  double value = -kInf;
  bool converged = false;
  int iterations = 0;
};

using Objective = std::function<double(const Vector&)>;

/// Central-difference gradient with step 1e-6 max(1, |x_j|).
inline Vector numeric_gradient(const Objective& f, const Vector& x) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + h;
    const double up = f(probe);
    probe[j] = x[j] - h;
    const double down = f(probe);
    probe[j] = x[j];
    g[j] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Central-difference Hessian with step 1e-4 max(1, |x_j|).
inline Matrix numeric_hessian(const Objective& f, const Vector& x) {
  const Eigen::Index d = x.size();
  Vector h(d);
  for (Eigen::Index j = 0; j < d; ++j) h[j] = 1e-4 * std::max(1.0, std::abs(x[j]));
  Matrix H(d, d);
  const double f0 = f(x);
  Vector probe = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    probe[i] = x[i] + h[i];
    const double up = f(probe);
    probe[i] = x[i] - h[i];
    const double down = f(probe);
    probe[i] = x[i];
    H(i, i) = (up - 2.0 * f0 + down) / (h[i] * h[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      auto at = [&](double si, double sj) {
        probe[i] = x[i] + si * h[i];
        probe[j] = x[j] + sj * h[j];
        const double v = f(probe);
        probe[i] = x[i];
        probe[j] = x[j];
        return v;
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h[i] * h[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

/// Maximises f by BFGS with numeric gradients and a backtracking Armijo line search.
inline Result maximize_bfgs(const Objective& f, Vector x0, const Options& opts = {}) {
  Result res;
  res.x = std::move(x0);
  res.value = f(res.x);
  if (!std::isfinite(res.value)) return res;

  const Eigen::Index d = res.x.size();
  Matrix Hinv = Matrix::Identity(d, d);  // inverse Hessian of -f
  Vector g = -numeric_gradient(f, res.x);
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    if (g.lpNorm<Eigen::Infinity>() < opts.gradient_tolerance * (1.0 + std::abs(res.value))) {
      res.converged = true;
      return res;
    }
    Vector dir = -Hinv * g;
    if (dir.dot(g) >= 0.0) {
      Hinv.setIdentity();
      dir = -g;
    }
    double step = 1.0;
    Vector next;
    double next_value = -kInf;
    bool improved = false;
    for (int halvings = 0; halvings < 60; ++halvings, step *= 0.5) {
      next = res.x + step * dir;
      next_value = f(next);
      if (std::isfinite(next_value) && next_value >= res.value - 1e-4 * step * g.dot(dir)) {
        improved = true;
        break;
      }
    }
    if (!improved) {
      // No ascent possible along the search direction: treat as stationary
      // when the gradient is already small relative to the objective scale.
      res.converged = g.lpNorm<Eigen::Infinity>() < 1e-3 * (1.0 + std::abs(res.value));
      return res;
    }
    const Vector s = next - res.x;
    const Vector g_next = -numeric_gradient(f, next);
    const Vector yv = g_next - g;
    res.x = std::move(next);
    res.value = next_value;
    g = g_next;
    if (res.x.cwiseAbs().maxCoeff() > opts.divergence_bound) return res;
    const double sy = s.dot(yv);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Matrix I = Matrix::Identity(d, d);
      Hinv = (I - rho * s * yv.transpose()) * Hinv * (I - rho * yv * s.transpose()) +
             rho * s * s.transpose();
    }
  }
  return res;
}

}  // namespace bqror::optimize
