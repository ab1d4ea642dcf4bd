#pragma once

#include <Eigen/Cholesky>
#include <cmath>
#include <vector>

#include "bqror/model.hpp"
#include "bqror/rng.hpp"

namespace bqror::testing {

// Intercept plus k-1 standard normal covariates; labels drawn uniformly but
// with every category present.
inline OrdinalDataset random_dataset(Eigen::Index n, Eigen::Index k, int J, Rng& rng) {
  Matrix x(n, k);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (Eigen::Index c = 1; c < k; ++c) x(i, c) = rng.normal();
    y[static_cast<std::size_t>(i)] =
        i < J ? static_cast<int>(i) + 1 : 1 + static_cast<int>(rng.uniform() * J);
  }
  return OrdinalDataset(x, y, J);
}

inline Vector random_vector(Eigen::Index n, double scale, Rng& rng) {
  Vector v(n);
  for (auto& e : v) e = scale * rng.normal();
  return v;
}

inline Vector random_positive(Eigen::Index n, Rng& rng) {
  Vector v(n);
  for (auto& e : v) e = 0.05 + 3.0 * rng.uniform();
  return v;
}

// A random SPD matrix A A' + I.
inline Matrix random_spd(Eigen::Index n, Rng& rng) {
  Matrix a(n, n);
  for (auto& e : a.reshaped()) e = rng.normal();
  return a * a.transpose() + Matrix::Identity(n, n);
}

// Gaussian log density up to a constant.
inline double mvn_log_kernel(const Vector& x, const Vector& mean, const Matrix& cov) {
  const Vector d = x - mean;
  return -0.5 * d.dot(Eigen::LLT<Matrix>(cov).solve(d));
}

// log of GIG(1/2, lambda, eta) density up to a constant.
inline double gig_half_log_kernel(double x, double lambda, double eta) {
  return -0.5 * std::log(x) - 0.5 * (lambda / x + eta * x);
}

// Uniform draw inside (lo, hi], with open ends replaced by a window of width 3.
inline double inside(double lo, double hi, Rng& rng) {
  if (lo == -INFINITY) lo = hi - 3.0;
  if (hi == INFINITY) hi = lo + 3.0;
  return lo + (hi - lo) * rng.uniform();
}

}  // namespace bqror::testing
