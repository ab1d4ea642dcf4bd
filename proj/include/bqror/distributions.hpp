#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "bqror/errors.hpp"
#include "bqror/rng.hpp"

namespace bqror {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Quantile level p together with the constants of the normal-exponential
/// mixture representation of AL(0, 1, p):
///   theta = (1 - 2p) / (p (1 - p)),  tau = sqrt(2 / (p (1 - p))).
class QuantileSpec {
 public:
  explicit QuantileSpec(double p) : p_(p) {
    if (!(p > 0.0 && p < 1.0)) {
      throw ParameterError("quantile level must lie strictly inside (0, 1), got " +
                           std::to_string(p));
    }
  }

  double p() const noexcept { return p_; }
  double theta() const noexcept { return (1.0 - 2.0 * p_) / (p_ * (1.0 - p_)); }
  double tau() const noexcept { return std::sqrt(2.0 / (p_ * (1.0 - p_))); }
  double tau2() const noexcept { return 2.0 / (p_ * (1.0 - p_)); }

 private:
  double p_;
};

// ---------------------------------------------------------------------------
// Asymmetric Laplace AL(0, scale, p)

inline double al_pdf(double x, const QuantileSpec& spec) {
  const double p = spec.p();
  const double k = p * (1.0 - p);
  return x < 0.0 ? k * std::exp(-x * (p - 1.0)) : k * std::exp(-x * p);
}

inline double al_cdf(double x, const QuantileSpec& spec, double scale = 1.0) {
  if (!(scale > 0.0)) throw ParameterError("al_cdf: scale must be positive");
  const double p = spec.p();
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  const double s = x / scale;
  return s < 0.0 ? p * std::exp((1.0 - p) * s) : 1.0 - (1.0 - p) * std::exp(-p * s);
}

/// log P(lo < e <= hi) for e ~ AL(0, scale, p), evaluated on whichever tail
/// avoids cancellation. Returns -inf when the interval carries no mass.
inline double al_log_interval_prob(double lo, double hi, const QuantileSpec& spec,
                                   double scale = 1.0) {
  if (!(hi > lo)) return -kInf;
  const double p = spec.p();
  const double a = lo / scale;
  const double b = hi / scale;
  if (a >= 0.0) {
    // (1-p) [exp(-p a) - exp(-p b)]
    const double tail = (b == kInf) ? 0.0 : std::exp(-p * (b - a));
    if (tail >= 1.0) return -kInf;
    return std::log(1.0 - p) - p * a + std::log1p(-tail);
  }
  if (b <= 0.0) {
    // p [exp((1-p) b) - exp((1-p) a)]
    const double head = (a == -kInf) ? 0.0 : std::exp((1.0 - p) * (a - b));
    if (head >= 1.0) return -kInf;
    return std::log(p) + (1.0 - p) * b + std::log1p(-head);
  }
  const double mass = al_cdf(hi, spec, scale) - al_cdf(lo, spec, scale);
  return mass > 0.0 ? std::log(mass) : -kInf;
}

struct Moments {
  double mean;
  double variance;
};

inline Moments al_moments(const QuantileSpec& spec) {
  const double p = spec.p();
  const double q = p * (1.0 - p);
  return {(1.0 - 2.0 * p) / q, (1.0 - 2.0 * p + 2.0 * p * p) / (q * q)};
}

// ---------------------------------------------------------------------------
// Random variates

/// Gamma(shape, rate) by Marsaglia and Tsang; shape < 1 uses the U^(1/a) boost.
inline double sample_gamma(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw ParameterError("sample_gamma: shape and rate must be positive and finite");
  }
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rate, rng);
    return g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

/// Inverse gamma with density proportional to x^-(shape+1) exp(-rate_like / x).
inline double sample_invgamma(double shape, double rate_like, Rng& rng) {
  if (!(shape > 0.0) || !(rate_like > 0.0)) {
    throw ParameterError("sample_invgamma: shape and rate must be positive");
  }
  return 1.0 / sample_gamma(shape, rate_like, rng);
}

/// Lambda values below this are treated as exactly zero by sample_gig_half.
inline constexpr double kGigZeroLambda = 1e-300;

/// GIG(1/2, lambda, eta): density proportional to
/// x^(-1/2) exp(-(lambda / x + eta x) / 2) on (0, inf).
///
/// The reciprocal of such a draw is inverse Gaussian with mean sqrt(eta/lambda)
/// and shape eta, which is sampled with the Michael-Schucany-Haas transform.
/// Both roots are formed relative to the mean so that tiny lambda (huge mean)
/// does not cancel. lambda == 0 degenerates to Gamma(1/2, rate eta/2).
inline double sample_gig_half(double lambda, double eta, Rng& rng) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ParameterError("sample_gig_half: eta must be positive and finite");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("sample_gig_half: lambda must be nonnegative and finite");
  }
  if (lambda < kGigZeroLambda) return sample_gamma(0.5, 0.5 * eta, rng);

  const double mu = std::sqrt(eta / lambda);
  const double nu = rng.normal();
  const double r = mu * nu * nu / (2.0 * eta);
  const double t = 1.0 + r + std::sqrt(r * (r + 2.0));  // larger root / mu
  // smaller root is mu / t; keep it with probability mu / (mu + mu / t)
  if (rng.uniform() * (1.0 + t) <= t) return t / mu;
  return 1.0 / (mu * t);
}

namespace detail {

// Standard normal restricted to (a, b] with 0 <= a < b.
inline double truncnorm_positive(double a, double b, Rng& rng) {
  const double root = std::sqrt(a * a + 4.0);
  const bool narrow =
      std::isfinite(b) &&
      (b - a) < 2.0 * std::sqrt(std::numbers::e) / (a + root) * std::exp((a * a - a * root) / 4.0);
  if (narrow) {
    for (;;) {
      const double x = a + (b - a) * rng.uniform();
      if (std::log(rng.uniform()) <= 0.5 * (a * a - x * x)) return x;
    }
  }
  if (a < 0.47) {
    for (;;) {
      const double x = std::abs(rng.normal());
      if (x > a && x <= b) return x;
    }
  }
  const double alpha = 0.5 * (a + root);
  for (;;) {
    const double x = a + rng.exponential() / alpha;
    if (x > b) continue;
    const double d = x - alpha;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return x;
  }
}

// Standard normal restricted to (a, b].
inline double truncnorm_standard(double a, double b, Rng& rng) {
  if (a == -kInf && b == kInf) return rng.normal();
  if (a >= 0.0) return truncnorm_positive(a, b, rng);
  if (b <= 0.0) return -truncnorm_positive(-b, -a, rng);
  // a < 0 < b
  if (b - a < std::sqrt(2.0 * std::numbers::pi)) {
    for (;;) {
      const double x = a + (b - a) * rng.uniform();
      if (std::log(rng.uniform()) <= -0.5 * x * x) return x;
    }
  }
  for (;;) {
    const double x = rng.normal();
    if (x > a && x <= b) return x;
  }
}

}  // namespace detail

/// Normal(mean, var) restricted to (lo, hi]; either bound may be infinite.
///
/// Regimes: unrestricted normal, two-sided uniform rejection for narrow
/// intervals, half-normal rejection near the mode, and exponential rejection
/// for tails beyond 0.47 standard deviations. Each regime has bounded expected
/// iterations, including intervals many standard deviations from the mean.
inline double sample_truncnorm(double lo, double hi, double mean, double var, Rng& rng) {
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    throw ParameterError("sample_truncnorm: require lo < hi");
  }
  if (!(var > 0.0) || !std::isfinite(var) || !std::isfinite(mean)) {
    throw ParameterError("sample_truncnorm: variance must be positive and mean finite");
  }
  const double sd = std::sqrt(var);
  const double a = (lo - mean) / sd;
  const double b = (hi - mean) / sd;
  double value = mean;
  for (int attempt = 0; attempt < 16; ++attempt) {
    value = mean + sd * detail::truncnorm_standard(a, b, rng);
    if (value > lo && value <= hi) return value;
  }
  // Interval narrower than the floating-point grid around it.
  if (value <= lo) value = std::nextafter(lo, kInf);
  if (value > hi) value = hi;
  return value;
}

/// mean + L u with L the lower Cholesky factor of cov.
inline Vector sample_mvn(const Vector& mean, const Matrix& cov, Rng& rng) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw DomainError("sample_mvn: covariance dimension does not match mean");
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sample_mvn: Cholesky factorisation failed (matrix not positive definite); "
        << "dim=" << cov.rows() << " min_diag=" << cov.diagonal().minCoeff()
        << " asymmetry=" << (cov - cov.transpose()).cwiseAbs().maxCoeff() << " matrix=[";
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
      msg << (i ? "; " : "");
      for (Eigen::Index j = 0; j < cov.cols(); ++j) msg << (j ? " " : "") << cov(i, j);
    }
    msg << "]";
    throw NumericalError(msg.str());
  }
  Vector u(mean.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
  return mean + llt.matrixL() * u;
}

}  // namespace bqror
