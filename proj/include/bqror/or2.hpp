#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "bqror/chain.hpp"
#include "bqror/distributions.hpp"
#include "bqror/model.hpp"
#include "bqror/or1.hpp"

namespace bqror::or2 {

/// nu_i = sigma * w_i removes sigma from the latent conditional mean.
struct State {
  Vector beta;
  double sigma = 1.0;
  Vector nu;
  Vector z;
};

struct InvGammaParams {
  double shape;  // n~ / 2
  double rate;   // d~ / 2
};

using SweepObserver = std::function<void(std::size_t sweep, const State&)>;

inline GaussianMoments beta_conditional(const State& state, const OrdinalDataset& data,
                                        const PriorSpec& prior, const QuantileSpec& spec) {
  const Vector offset = spec.theta() * state.nu;
  const Vector variance = spec.tau2() * state.sigma * state.nu;
  return detail::weighted_beta_conditional(data, prior, state.z, offset, variance);
}

inline Vector step_beta2(const State& state, const OrdinalDataset& data, const PriorSpec& prior,
                         const QuantileSpec& spec, Rng& rng) {
  const GaussianMoments m = beta_conditional(state, data, prior, spec);
  return sample_mvn(m.mean, m.cov, rng);
}

/// sigma | z, beta, nu ~ IG(n~/2, d~/2) with n~ = n0 + 3n and
/// d~ = sum (z - x'b - theta nu)^2 / (tau^2 nu) + d0 + 2 sum nu.
inline InvGammaParams sigma_conditional(const State& state, const OrdinalDataset& data,
                                        const PriorSpec& prior, const QuantileSpec& spec) {
  const Vector resid = state.z - data.x() * state.beta - spec.theta() * state.nu;
  const double quad = (resid.array().square() / (spec.tau2() * state.nu.array())).sum();
  const double n_tilde = prior.sigma_shape_n0 + 3.0 * static_cast<double>(data.n());
  const double d_tilde = quad + prior.sigma_rate_d0 + 2.0 * state.nu.sum();
  if (!(d_tilde > 0.0)) throw NumericalError("sigma_conditional: nonpositive d~");
  return {0.5 * n_tilde, 0.5 * d_tilde};
}

inline double step_sigma(const State& state, const OrdinalDataset& data, const PriorSpec& prior,
                         const QuantileSpec& spec, Rng& rng) {
  const InvGammaParams ig = sigma_conditional(state, data, prior, spec);
  return sample_invgamma(ig.shape, ig.rate, rng);
}

/// lambda_i = (z_i - x_i'b)^2 / (tau^2 sigma), eta = theta^2 / (tau^2 sigma) + 2 / sigma.
inline GigParams nu_conditional(const State& state, const OrdinalDataset& data,
                                const QuantileSpec& spec) {
  const Vector resid = state.z - data.x() * state.beta;
  GigParams g;
  g.lambda = resid.array().square() / (spec.tau2() * state.sigma);
  g.eta = spec.theta() * spec.theta() / (spec.tau2() * state.sigma) + 2.0 / state.sigma;
  return g;
}

inline Vector step_nu(const State& state, const OrdinalDataset& data, const QuantileSpec& spec,
                      Rng& rng) {
  const GigParams g = nu_conditional(state, data, spec);
  Vector nu(g.lambda.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) nu[i] = sample_gig_half(g.lambda[i], g.eta, rng);
  return nu;
}

/// z_i ~ N(x_i'b + theta nu_i, tau^2 sigma nu_i) restricted to the fixed interval of y_i.
inline TruncatedNormals z_conditional(const State& state, const OrdinalDataset& data,
                                      const QuantileSpec& spec, const CutpointVector& fixed_cuts) {
  return detail::latent_conditional(data, fixed_cuts,
                                    data.x() * state.beta + spec.theta() * state.nu,
                                    spec.tau2() * state.sigma * state.nu);
}

inline Vector step_z2(const State& state, const OrdinalDataset& data, const QuantileSpec& spec,
                      const CutpointVector& fixed_cuts, Rng& rng) {
  return detail::sample_latent(z_conditional(state, data, spec, fixed_cuts), rng);
}

/// beta = 0, sigma = 1, nu = 1, z at the midpoint of its interval.
inline State initial_state(const OrdinalDataset& data, const CutpointVector& fixed_cuts) {
  State s;
  s.beta = Vector::Zero(data.k());
  s.sigma = 1.0;
  s.nu = Vector::Ones(data.n());
  s.z.resize(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    s.z[i] = detail::midpoint_in(fixed_cuts.bracket(data.y()[static_cast<std::size_t>(i)]));
  }
  return s;
}

/// Pure Gibbs sampler for three categories with both cut-points fixed.
/// Sweep order: beta, sigma, nu, z.
inline Chain run_or2(const OrdinalDataset& data, const PriorSpec& prior, const QuantileSpec& spec,
                     const CutpointVector& fixed_cuts, const McmcConfig& config,
                     const SweepObserver& observer = {}) {
  config.validate();
  if (data.categories() != 3) throw DomainError("run_or2: OR_II requires exactly three categories");
  if (fixed_cuts.categories() != 3) {
    throw DomainError("run_or2: OR_II requires exactly two fixed cut-points");
  }
  prior.validate(data.k(), 0);

  Rng rng(config.seed, config.stream);
  State state = initial_state(data, fixed_cuts);

  Chain chain;
  chain.meta.model = ModelKind::kOr2;
  chain.meta.p = spec.p();
  chain.meta.config = config;
  chain.meta.categories = 3;
  chain.meta.k = data.k();
  chain.meta.fixed_cuts = fixed_cuts.interior();
  chain.names = parameter_names(chain.meta, data.covariate_names());

  const auto stored = static_cast<Eigen::Index>(config.stored_draws());
  chain.draws.resize(stored, data.k() + 1);
  chain.loglik_trace.resize(stored);

  Eigen::Index row = 0;
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    try {
      state.beta = step_beta2(state, data, prior, spec, rng);
      state.sigma = step_sigma(state, data, prior, spec, rng);
      state.nu = step_nu(state, data, spec, rng);
      state.z = step_z2(state, data, spec, fixed_cuts, rng);
    } catch (const NumericalError& e) {
      throw NumericalError("run_or2: sweep " + std::to_string(sweep) + ": " + e.what());
    }
    if (observer) observer(sweep, state);
    if (sweep >= config.burn_in && (sweep - config.burn_in) % config.thin == 0) {
      chain.draws.row(row).head(data.k()) = state.beta.transpose();
      chain.draws(row, data.k()) = state.sigma;
      chain.loglik_trace[row] = ordinal_loglik(state.beta, fixed_cuts, state.sigma, spec, data);
      ++row;
    }
  }
  return chain;
}

}  // namespace bqror::or2
