#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "bqror/chain.hpp"
#include "bqror/distributions.hpp"
#include "bqror/model.hpp"
#include "bqror/optimize.hpp"

namespace bqror {

struct GaussianMoments {
  Vector mean;
  Matrix cov;
};

/// Per-observation normals N(mean_i, var_i) restricted to (lo_i, hi_i].
struct TruncatedNormals {
  Vector mean;
  Vector var;
  Vector lo;
  Vector hi;
};

/// Per-observation GIG(1/2, lambda_i, eta) parameters.
struct GigParams {
  Vector lambda;
  double eta;
};

namespace detail {

inline Matrix spd_inverse(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

/// N(mean, cov) for beta given per-observation latent variances and means
/// offsets: B^-1 = sum x x' / v_i + B0^-1, b = B (sum x (z - m_i) / v_i + B0^-1 b0).
inline GaussianMoments weighted_beta_conditional(const OrdinalDataset& data, const PriorSpec& prior,
                                                 const Vector& z, const Vector& offset,
                                                 const Vector& variance) {
  const Matrix prior_precision = spd_inverse(prior.beta_cov, "prior beta covariance");
  Matrix precision = prior_precision;
  Vector rhs = prior_precision * prior.beta_mean;
  const Matrix& X = data.x();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto xi = X.row(i).transpose();
    precision.noalias() += xi * xi.transpose() / variance[i];
    rhs.noalias() += xi * ((z[i] - offset[i]) / variance[i]);
  }
  GaussianMoments m;
  m.cov = spd_inverse(precision, "beta full-conditional precision");
  m.mean = m.cov * rhs;
  return m;
}

inline double gaussian_log_kernel(const Vector& x, const Vector& mean, const Matrix& precision) {
  const Vector d = x - mean;
  return -0.5 * d.dot(precision * d);
}

inline TruncatedNormals latent_conditional(const OrdinalDataset& data, const CutpointVector& cuts,
                                           const Vector& mean, const Vector& var) {
  TruncatedNormals t{mean, var, Vector(data.n()), Vector(data.n())};
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    std::tie(t.lo[i], t.hi[i]) = cuts.bracket(data.y()[static_cast<std::size_t>(i)]);
  }
  return t;
}

inline Vector sample_latent(const TruncatedNormals& t, Rng& rng) {
  Vector z(t.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z[i] = sample_truncnorm(t.lo[i], t.hi[i], t.mean[i], t.var[i], rng);
  }
  return z;
}

inline double midpoint_in(std::pair<double, double> interval) {
  const auto [lo, hi] = interval;
  if (lo == -kInf) return hi - 1.0;
  if (hi == kInf) return lo + 1.0;
  return 0.5 * (lo + hi);
}

}  // namespace detail

namespace or1 {

struct State {
  Vector beta;
  Vector delta;
  Vector w;
  Vector z;
};

/// Random-walk proposal u ~ N(0, iota^2 dhat).
struct MhProposal {
  double iota = std::sqrt(3.0);
  Matrix dhat;
  bool fallback = false;
  std::string note;
};

struct MhStep {
  Vector delta;
  bool accepted;
};

using SweepObserver = std::function<void(std::size_t sweep, const State&)>;

inline CutpointVector cutpoints(const State& state, int J, double anchor = 0.0) {
  return gamma_from_delta({state.delta}, J, anchor);
}

inline GaussianMoments beta_conditional(const State& state, const OrdinalDataset& data,
                                        const PriorSpec& prior, const QuantileSpec& spec) {
  const Vector offset = spec.theta() * state.w;
  const Vector variance = spec.tau2() * state.w;
  return detail::weighted_beta_conditional(data, prior, state.z, offset, variance);
}

inline Vector step_beta(const State& state, const OrdinalDataset& data, const PriorSpec& prior,
                        const QuantileSpec& spec, Rng& rng) {
  const GaussianMoments m = beta_conditional(state, data, prior, spec);
  return sample_mvn(m.mean, m.cov, rng);
}

inline GigParams w_conditional(const State& state, const OrdinalDataset& data,
                               const QuantileSpec& spec) {
  const Vector resid = state.z - data.x() * state.beta;
  GigParams g;
  g.lambda = (resid / spec.tau()).array().square();
  g.eta = spec.theta() * spec.theta() / spec.tau2() + 2.0;
  return g;
}

inline Vector step_w(const State& state, const OrdinalDataset& data, const QuantileSpec& spec,
                     Rng& rng) {
  const GigParams g = w_conditional(state, data, spec);
  Vector w(g.lambda.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = sample_gig_half(g.lambda[i], g.eta, rng);
  return w;
}

/// log f(y | beta, delta) + log N(delta | delta0, D0) up to a constant;
/// -inf when delta implies an empty category interval for some observation.
inline double mh_log_target(const Vector& beta, const Vector& delta, const OrdinalDataset& data,
                            const PriorSpec& prior, const QuantileSpec& spec, double anchor = 0.0) {
  std::optional<CutpointVector> cuts;
  try {
    cuts = gamma_from_delta({delta}, data.categories(), anchor);
  } catch (const DomainError&) {
    return -kInf;
  }
  const double ll = ordinal_loglik(beta, *cuts, 1.0, spec, data);
  if (ll == -kInf) return -kInf;
  const Matrix precision = detail::spd_inverse(prior.delta_cov, "prior delta covariance");
  return ll + detail::gaussian_log_kernel(delta, prior.delta_mean, precision);
}

inline double mh_accept_probability(const Vector& beta, const Vector& current,
                                    const Vector& proposed, const OrdinalDataset& data,
                                    const PriorSpec& prior, const QuantileSpec& spec,
                                    double anchor = 0.0) {
  const double next = mh_log_target(beta, proposed, data, prior, spec, anchor);
  if (next == -kInf) return 0.0;
  const double now = mh_log_target(beta, current, data, prior, spec, anchor);
  if (now == -kInf) return 1.0;
  return std::min(1.0, std::exp(next - now));
}

inline constexpr double kProposalDeltaBound = 15.0;

/// Maximises the ordinal log-likelihood jointly over (beta, delta) from
/// (beta_init, 0) and returns dhat = (-H_dd)^-1, the inverse negative Hessian
/// with respect to delta at the mode. Falls back to 0.01 I when the optimiser does not converge, diverges in delta,
/// or the curvature there is not negative definite.
inline MhProposal compute_proposal(const OrdinalDataset& data, const QuantileSpec& spec,
                                   const Vector& beta_init, double iota = std::sqrt(3.0),
                                   double anchor = 0.0) {
  const Eigen::Index k = data.k();
  const Eigen::Index m = data.categories() - 2;
  if (m < 2) throw DomainError("compute_proposal: OR_I needs at least four categories");
  if (beta_init.size() != k) throw DomainError("compute_proposal: beta_init dimension mismatch");

  const optimize::Objective objective = [&](const Vector& theta) {
    std::optional<CutpointVector> cuts;
    try {
      cuts = gamma_from_delta({theta.tail(m)}, data.categories(), anchor);
    } catch (const DomainError&) {
      return -kInf;
    }
    return ordinal_loglik(theta.head(k), *cuts, 1.0, spec, data);
  };

  MhProposal proposal;
  proposal.iota = iota;
  auto fallback = [&](std::string why) {
    proposal.dhat = 0.01 * Matrix::Identity(m, m);
    proposal.fallback = true;
    proposal.note = "proposal fallback to 0.01*I: " + std::move(why);
    return proposal;
  };

  Vector start(k + m);
  start << beta_init, Vector::Zero(m);
  const optimize::Result opt = optimize::maximize_bfgs(objective, start);
  if (!opt.converged) return fallback("optimiser did not converge");
  // A bin width of exp(+-15) means the mode ran off to a boundary (e.g. an empty category).
  if (opt.x.tail(m).cwiseAbs().maxCoeff() > kProposalDeltaBound) return fallback("optimiser diverged in delta");

  const Matrix H = optimize::numeric_hessian(objective, opt.x);
  if (!H.allFinite()) return fallback("non-finite Hessian");
  const Matrix joint = -0.5 * (H + H.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> joint_eig(joint, Eigen::EigenvaluesOnly);
  if (joint_eig.info() != Eigen::Success || joint_eig.eigenvalues().minCoeff() <= 0.0) {
    return fallback("Hessian not negative definite at the mode");
  }
  // Curvature in delta at the modal beta.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(joint.bottomRightCorner(m, m));
  Vector ev = eig.eigenvalues().cwiseInverse();
  const double floor = 1e-12 * ev.maxCoeff();
  ev = ev.cwiseMax(floor);
  proposal.dhat = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
  return proposal;
}

/// Random-walk MH update of delta at the current beta, marginal of (z, w).
inline MhStep step_delta_mh(const State& state, const OrdinalDataset& data, const PriorSpec& prior,
                            const QuantileSpec& spec, const MhProposal& proposal, Rng& rng,
                            double anchor = 0.0) {
  const Matrix cov = proposal.iota * proposal.iota * proposal.dhat;
  const Vector proposed = sample_mvn(state.delta, cov, rng);
  const double alpha =
      mh_accept_probability(state.beta, state.delta, proposed, data, prior, spec, anchor);
  if (rng.uniform() < alpha) return {proposed, true};
  return {state.delta, false};
}

/// z_i ~ N(x_i'b + theta w_i, tau^2 w_i) restricted to the interval of y_i.
inline TruncatedNormals z_conditional(const State& state, const OrdinalDataset& data,
                                      const QuantileSpec& spec, double anchor = 0.0) {
  return detail::latent_conditional(data, cutpoints(state, data.categories(), anchor),
                                    data.x() * state.beta + spec.theta() * state.w,
                                    spec.tau2() * state.w);
}

inline Vector step_z(const State& state, const OrdinalDataset& data, const QuantileSpec& spec,
                     Rng& rng, double anchor = 0.0) {
  return detail::sample_latent(z_conditional(state, data, spec, anchor), rng);
}

/// beta = 0, delta = 0 (unit gaps), w = 1, z at the midpoint of its interval.
inline State initial_state(const OrdinalDataset& data, double anchor = 0.0) {
  State s;
  s.beta = Vector::Zero(data.k());
  s.delta = Vector::Zero(data.categories() - 2);
  s.w = Vector::Ones(data.n());
  const CutpointVector cuts = cutpoints(s, data.categories(), anchor);
  s.z.resize(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    s.z[i] = detail::midpoint_in(cuts.bracket(data.y()[static_cast<std::size_t>(i)]));
  }
  return s;
}

/// Gibbs sampler with a random-walk MH block for the transformed cut-points.
/// Sweep order: beta, w, delta, z. The proposal is tuned once before sampling.
inline Chain run_or1(const OrdinalDataset& data, const PriorSpec& prior, const QuantileSpec& spec,
                     const McmcConfig& config, const SweepObserver& observer = {},
                     double anchor = 0.0) {
  config.validate();
  const int J = data.categories();
  if (J < 4) throw DomainError("run_or1: OR_I requires at least four categories");
  prior.validate(data.k(), J - 2);

  Rng rng(config.seed, config.stream);
  State state = initial_state(data, anchor);
  const MhProposal proposal = compute_proposal(data, spec, state.beta, config.iota, anchor);

  Chain chain;
  chain.meta.model = ModelKind::kOr1;
  chain.meta.p = spec.p();
  chain.meta.config = config;
  chain.meta.categories = J;
  chain.meta.k = data.k();
  chain.meta.anchor = anchor;
  chain.meta.proposal_fallback = proposal.fallback;
  chain.meta.notes.push_back("MH proposal covariance computed once before sampling");
  if (proposal.fallback) chain.meta.notes.push_back(proposal.note);
  chain.names = parameter_names(chain.meta, data.covariate_names());

  const Eigen::Index d = data.k() + (J - 2);
  const auto stored = static_cast<Eigen::Index>(config.stored_draws());
  chain.draws.resize(stored, d);
  chain.loglik_trace.resize(stored);

  std::size_t accepted = 0;
  Eigen::Index row = 0;
  for (std::size_t sweep = 0; sweep < config.iterations; ++sweep) {
    try {
      state.beta = step_beta(state, data, prior, spec, rng);
      state.w = step_w(state, data, spec, rng);
      MhStep mh = step_delta_mh(state, data, prior, spec, proposal, rng, anchor);
      state.delta = std::move(mh.delta);
      if (mh.accepted) ++accepted;
      state.z = step_z(state, data, spec, rng, anchor);
    } catch (const NumericalError& e) {
      throw NumericalError("run_or1: sweep " + std::to_string(sweep) + ": " + e.what());
    }
    if (observer) observer(sweep, state);
    if (sweep >= config.burn_in && (sweep - config.burn_in) % config.thin == 0) {
      chain.draws.row(row).head(data.k()) = state.beta.transpose();
      chain.draws.row(row).tail(J - 2) = state.delta.transpose();
      chain.loglik_trace[row] =
          ordinal_loglik(state.beta, cutpoints(state, J, anchor), 1.0, spec, data);
      ++row;
    }
  }
  chain.accept_rate = static_cast<double>(accepted) / static_cast<double>(config.iterations);
  return chain;
}

}  // namespace or1
}  // namespace bqror
