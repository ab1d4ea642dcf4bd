#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "bqror/distributions.hpp"
#include "bqror/model.hpp"

namespace bqror {

enum class ErrorFamily { kLogistic, kGaussian };

/// One mixture component, parameterised by location and variance.
struct MixtureComponent {
  ErrorFamily family;
  double location;
  double variance;
  double weight;
};

enum class CovariateLaw {
  kInterceptUniforms,            // ones column plus k-1 iid U(0, 1) columns
  kInterceptCorrelatedNormals,   // ones column plus bivariate standard normal
};

struct SimRecipe {
  std::size_t n = 300;
  Vector beta_true;
  std::vector<MixtureComponent> error_mixture;
  std::vector<double> gamma_true;  // interior cut-points
  CovariateLaw covariates = CovariateLaw::kInterceptUniforms;
  double correlation = 0.0;        // kInterceptCorrelatedNormals only

  void validate() const {
    double total = 0.0;
    for (const auto& c : error_mixture) {
      if (!(c.variance > 0.0) || !(c.weight >= 0.0)) {
        throw ParameterError("sim recipe: mixture variances must be positive, weights nonnegative");
      }
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ParameterError("sim recipe: weights must sum to 1");
    for (std::size_t j = 1; j < gamma_true.size(); ++j) {
      if (!(gamma_true[j] > gamma_true[j - 1])) {
        throw ParameterError("sim recipe: cut-points must be increasing");
      }
    }
    if (covariates == CovariateLaw::kInterceptCorrelatedNormals && beta_true.size() != 3) {
      throw ParameterError("sim recipe: intercept plus two normals needs three coefficients");
    }
    if (!(std::abs(correlation) < 1.0)) throw ParameterError("sim recipe: |correlation| must be < 1");
    if (n < 50) throw ParameterError("sim recipe: n must be at least 50");
  }
};

struct SimulatedData {
  OrdinalDataset data;
  Vector latent;  // z = x'beta + error before discretisation
};

/// Study 1: n draws, z = x'(-2, 3, 4) + e with x = (1, u1, u2), u iid U(0, 1),
/// and e a 0.3/0.7 mixture of unit-scale logistics at -5 and 2 (variance
/// pi^2/3 each); y from cut-points (0, 2, 3), so J = 4.
inline SimRecipe study1_recipe(std::size_t n) {
  SimRecipe r;
  r.n = n;
  r.beta_true = Vector{{-2.0, 3.0, 4.0}};
  const double v = std::numbers::pi * std::numbers::pi / 3.0;
  r.error_mixture = {{ErrorFamily::kLogistic, -5.0, v, 0.3}, {ErrorFamily::kLogistic, 2.0, v, 0.7}};
  r.gamma_true = {0.0, 2.0, 3.0};
  r.covariates = CovariateLaw::kInterceptUniforms;
  return r;
}

/// Study 2: intercept plus two standard normals with correlation 0.25,
/// beta = (2, 2, 1), errors 0.3 N(-6, 4) + 0.7 N(5, 1), cut-points (0, 4), J = 3.
inline SimRecipe study2_recipe(std::size_t n) {
  SimRecipe r;
  r.n = n;
  r.beta_true = Vector{{2.0, 2.0, 1.0}};
  r.error_mixture = {{ErrorFamily::kGaussian, -6.0, 4.0, 0.3},
                     {ErrorFamily::kGaussian, 5.0, 1.0, 0.7}};
  r.gamma_true = {0.0, 4.0};
  r.covariates = CovariateLaw::kInterceptCorrelatedNormals;
  r.correlation = 0.25;
  return r;
}

namespace detail {

inline double draw_component(const MixtureComponent& c, Rng& rng) {
  if (c.family == ErrorFamily::kGaussian) return c.location + std::sqrt(c.variance) * rng.normal();
  // logistic variance = s^2 pi^2 / 3
  const double s = std::sqrt(3.0 * c.variance) / std::numbers::pi;
  const double u = rng.uniform();
  return c.location + s * std::log(u / (1.0 - u));
}

inline double draw_mixture(const std::vector<MixtureComponent>& mix, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (const auto& c : mix) {
    acc += c.weight;
    if (u < acc) return draw_component(c, rng);
  }
  return draw_component(mix.back(), rng);
}

}  // namespace detail

inline SimulatedData simulate(const SimRecipe& recipe, Rng& rng) {
  recipe.validate();
  const auto n = static_cast<Eigen::Index>(recipe.n);
  const Eigen::Index k = recipe.beta_true.size();
  Matrix X(n, k);
  std::vector<std::string> names;
  if (recipe.covariates == CovariateLaw::kInterceptUniforms) {
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 1.0;
      for (Eigen::Index c = 1; c < k; ++c) X(i, c) = rng.uniform();
    }
    names.emplace_back("intercept");
    for (Eigen::Index c = 1; c < k; ++c) names.push_back("x" + std::to_string(c));
  } else {
    const double rho = recipe.correlation;
    const double tail = std::sqrt(1.0 - rho * rho);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u1 = rng.normal();
      const double u2 = rng.normal();
      X(i, 0) = 1.0;
      X(i, 1) = u1;
      X(i, 2) = rho * u1 + tail * u2;
    }
    names = {"intercept", "x1", "x2"};
  }
  Vector z(n);
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    z[i] = X.row(i).dot(recipe.beta_true) + detail::draw_mixture(recipe.error_mixture, rng);
    int label = 1;
    for (double g : recipe.gamma_true) {
      if (z[i] > g) ++label;
    }
    y[static_cast<std::size_t>(i)] = label;
  }
  const int J = static_cast<int>(recipe.gamma_true.size()) + 1;
  return {OrdinalDataset(std::move(X), std::move(y), J, std::move(names)), std::move(z)};
}

inline OrdinalDataset gen_study1(std::size_t n, Rng& rng) {
  return simulate(study1_recipe(n), rng).data;
}

inline OrdinalDataset gen_study2(std::size_t n, Rng& rng) {
  return simulate(study2_recipe(n), rng).data;
}

}  // namespace bqror
