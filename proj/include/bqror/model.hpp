#pragma once

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bqror/distributions.hpp"
#include "bqror/errors.hpp"

namespace bqror {

/// Covariates and ordinal responses. Labels are 1-based, y[i] in {1, ..., J}.
class OrdinalDataset {
 public:
  OrdinalDataset(Matrix x, std::vector<int> y, int categories,
                 std::vector<std::string> covariate_names = {})
      : x_(std::move(x)), y_(std::move(y)), J_(categories), names_(std::move(covariate_names)) {
    if (J_ < 2) throw DomainError("dataset needs at least two categories");
    if (static_cast<Eigen::Index>(y_.size()) != x_.rows()) {
      throw DomainError("dataset: X has " + std::to_string(x_.rows()) + " rows but y has " +
                        std::to_string(y_.size()) + " entries");
    }
    if (x_.rows() < x_.cols()) throw DomainError("dataset: fewer observations than covariates");
    if (!x_.allFinite()) throw DomainError("dataset: X contains non-finite entries");
    std::vector<int> counts(J_, 0);
    for (std::size_t i = 0; i < y_.size(); ++i) {
      if (y_[i] < 1 || y_[i] > J_) {
        throw DomainError("dataset: label " + std::to_string(y_[i]) + " at row " +
                          std::to_string(i) + " outside 1.." + std::to_string(J_));
      }
      ++counts[y_[i] - 1];
    }
    for (int j = 0; j < J_; ++j) {
      if (counts[j] == 0) warnings_.push_back("category " + std::to_string(j + 1) + " is empty");
    }
    if (names_.empty()) {
      for (Eigen::Index c = 0; c < x_.cols(); ++c) names_.push_back("x" + std::to_string(c + 1));
    }
    if (static_cast<Eigen::Index>(names_.size()) != x_.cols()) {
      throw DomainError("dataset: covariate name count does not match X columns");
    }
  }

  const Matrix& x() const noexcept { return x_; }
  const std::vector<int>& y() const noexcept { return y_; }
  int categories() const noexcept { return J_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index k() const noexcept { return x_.cols(); }
  const std::vector<std::string>& covariate_names() const noexcept { return names_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::vector<int> category_counts() const {
    std::vector<int> counts(J_, 0);
    for (int label : y_) ++counts[label - 1];
    return counts;
  }

 private:
  Matrix x_;
  std::vector<int> y_;
  int J_;
  std::vector<std::string> names_;
  std::vector<std::string> warnings_;
};

/// Cut-points gamma[0] = -inf < gamma[1] < ... < gamma[J-1] < gamma[J] = +inf.
class CutpointVector {
 public:
  /// Builds from the J-1 finite interior cut-points.
  static CutpointVector from_interior(const std::vector<double>& interior, int free_count = 0) {
    if (interior.empty()) throw DomainError("cut-points: need at least one interior value");
    std::vector<double> g;
    g.reserve(interior.size() + 2);
    g.push_back(-kInf);
    for (double v : interior) {
      if (!std::isfinite(v)) throw DomainError("cut-points: interior values must be finite");
      if (v <= g.back()) throw DomainError("cut-points must be strictly increasing");
      g.push_back(v);
    }
    g.push_back(kInf);
    return CutpointVector(std::move(g), free_count);
  }

  int categories() const noexcept { return static_cast<int>(gamma_.size()) - 1; }
  /// gamma[j] for j in 0..J.
  double operator[](int j) const { return gamma_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& values() const noexcept { return gamma_; }
  std::vector<double> interior() const { return {gamma_.begin() + 1, gamma_.end() - 1}; }
  int free_count() const noexcept { return free_count_; }

  /// Interval (lower, upper] of category label (1-based).
  std::pair<double, double> bracket(int label) const {
    return {gamma_[static_cast<std::size_t>(label - 1)], gamma_[static_cast<std::size_t>(label)]};
  }

 private:
  CutpointVector(std::vector<double> g, int free_count)
      : gamma_(std::move(g)), free_count_(free_count) {}

  std::vector<double> gamma_;
  int free_count_;
};

/// delta_j = ln(gamma_j - gamma_{j-1}) for j = 2..J-1, stored 0-based.
struct TransformedCutpoints {
  Vector delta;
};

inline constexpr double kMaxDeltaExponent = 300.0;

inline TransformedCutpoints delta_from_gamma(const CutpointVector& cuts) {
  const int J = cuts.categories();
  if (J < 3) throw DomainError("delta_from_gamma: need at least three categories");
  Vector delta(J - 2);
  for (int j = 2; j <= J - 1; ++j) {
    const double gap = cuts[j] - cuts[j - 1];
    if (!(gap > 0.0)) throw DomainError("delta_from_gamma: cut-points not strictly increasing");
    delta[j - 2] = std::log(gap);
  }
  return {delta};
}

/// Inverse of delta_from_gamma with gamma[1] = anchor.
inline CutpointVector gamma_from_delta(const TransformedCutpoints& t, int J, double anchor = 0.0) {
  if (t.delta.size() != J - 2) {
    throw DomainError("gamma_from_delta: expected " + std::to_string(J - 2) + " deltas, got " +
                      std::to_string(t.delta.size()));
  }
  std::vector<double> interior;
  interior.reserve(static_cast<std::size_t>(J - 1));
  interior.push_back(anchor);
  for (Eigen::Index j = 0; j < t.delta.size(); ++j) {
    const double d = t.delta[j];
    if (!std::isfinite(d)) throw DomainError("gamma_from_delta: non-finite delta");
    if (d > kMaxDeltaExponent) throw DomainError("gamma_from_delta: delta exceeds overflow guard");
    const double next = interior.back() + std::exp(d);
    if (!(next > interior.back())) {
      // gap below the floating-point resolution at this cut-point
      throw DomainError("gamma_from_delta: cut-point gap underflows");
    }
    interior.push_back(next);
  }
  return CutpointVector::from_interior(interior, static_cast<int>(t.delta.size()));
}

/// Gaussian priors on beta and delta plus IG(n0/2, d0/2) on the OR_II scale.
struct PriorSpec {
  Vector beta_mean;
  Matrix beta_cov;
  Vector delta_mean;
  Matrix delta_cov;
  double sigma_shape_n0 = 5.0;
  double sigma_rate_d0 = 8.0;

  /// beta ~ N(0, I_k), delta ~ N(0, 0.25 I_{J-2}), sigma ~ IG(5/2, 8/2).
  static PriorSpec defaults(Eigen::Index k, int J) {
    PriorSpec prior;
    prior.beta_mean = Vector::Zero(k);
    prior.beta_cov = Matrix::Identity(k, k);
    const Eigen::Index free = std::max(0, J - 2);
    prior.delta_mean = Vector::Zero(free);
    prior.delta_cov = 0.25 * Matrix::Identity(free, free);
    return prior;
  }

  void validate(Eigen::Index k, Eigen::Index delta_dim) const {
    if (beta_mean.size() != k || beta_cov.rows() != k || beta_cov.cols() != k) {
      throw DomainError("prior: beta block must have dimension " + std::to_string(k));
    }
    if (delta_dim > 0 && (delta_mean.size() != delta_dim || delta_cov.rows() != delta_dim ||
                          delta_cov.cols() != delta_dim)) {
      throw DomainError("prior: delta block must have dimension " + std::to_string(delta_dim));
    }
    auto spd = [](const Matrix& m) {
      if (m.size() == 0) return true;
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff())) {
        return false;
      }
      return Eigen::LLT<Matrix>(m).info() == Eigen::Success;
    };
    if (!spd(beta_cov)) throw DomainError("prior: beta covariance is not SPD");
    if (delta_dim > 0 && !spd(delta_cov)) throw DomainError("prior: delta covariance is not SPD");
    if (!(sigma_shape_n0 > 0.0) || !(sigma_rate_d0 > 0.0)) {
      throw DomainError("prior: n0 and d0 must be positive");
    }
  }
};

/// Log of the ordinal AL likelihood: sum_i log[F(g_{y_i} - x_i'b) - F(g_{y_i - 1} - x_i'b)]
/// with F the AL(0, scale, p) cdf. Returns -inf if any observation has zero probability.
inline double ordinal_loglik(const Vector& beta, const CutpointVector& cuts, double scale,
                             const QuantileSpec& spec, const OrdinalDataset& data) {
  if (beta.size() != data.k()) throw DomainError("ordinal_loglik: beta dimension mismatch");
  if (cuts.categories() != data.categories()) {
    throw DomainError("ordinal_loglik: cut-points imply " + std::to_string(cuts.categories()) +
                      " categories, data has " + std::to_string(data.categories()));
  }
  if (!(scale > 0.0)) throw DomainError("ordinal_loglik: scale must be positive");
  const Vector eta = data.x() * beta;
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto [lo, hi] = cuts.bracket(data.y()[static_cast<std::size_t>(i)]);
    const double lp = al_log_interval_prob(lo - eta[i], hi - eta[i], spec, scale);
    if (lp == -kInf) return -kInf;
    total += lp;
  }
  return total;
}

/// P(y = j | x, beta, cuts) for j = 1..J as a J-vector.
inline Vector outcome_probs(const Vector& x, const Vector& beta, const CutpointVector& cuts,
                            double scale, const QuantileSpec& spec) {
  if (x.size() != beta.size()) throw DomainError("outcome_probs: x and beta dimension mismatch");
  if (!(scale > 0.0)) throw DomainError("outcome_probs: scale must be positive");
  const double eta = x.dot(beta);
  const int J = cuts.categories();
  Vector probs(J);
  double prev = 0.0;
  for (int j = 1; j <= J; ++j) {
    const double cdf = (j == J) ? 1.0 : al_cdf(cuts[j] - eta, spec, scale);
    probs[j - 1] = std::max(0.0, cdf - prev);
    prev = cdf;
  }
  return probs;
}

/// Quantile check loss rho_p(u) = u (p - I(u < 0)).
inline double check_loss(double u, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("check_loss: p must lie in (0, 1)");
  return u >= 0.0 ? u * p : u * (p - 1.0);
}

}  // namespace bqror
