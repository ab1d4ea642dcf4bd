#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bqror/chain.hpp"
#include "bqror/errors.hpp"
#include "bqror/model.hpp"

namespace bqror {

namespace detail {

inline double sample_mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline std::vector<double> column(const Matrix& m, Eigen::Index c) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) out[static_cast<std::size_t>(r)] = m(r, c);
  return out;
}

}  // namespace detail

/// Batch-means inefficiency factor m * Var(batch means) / Var(series).
/// Default batch size is floor(sqrt(M)).
inline double inefficiency_factor(std::span<const double> series,
                                  std::optional<std::size_t> batch_size = std::nullopt) {
  const std::size_t M = series.size();
  const std::size_t m =
      batch_size.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(M)))));
  if (m < 1 || M < 4 * m) {
    throw ParameterError("inefficiency_factor: need at least four batches of size >= 1");
  }
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi) throw DegenerateSeries();
  const double var = detail::sample_variance(series);
  const std::size_t batches = M / m;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    means[b] = detail::sample_mean(series.subspan(b * m, m));
  }
  return static_cast<double>(m) * detail::sample_variance(means) / var;
}

/// Empirical quantile with linear interpolation between order statistics.
inline double empirical_quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

struct DicResult {
  double dic;
  double p_d;
  double dbar;
  double d_at_mean;
  std::size_t excluded_sentinels = 0;
  std::vector<std::string> warnings;
};

/// Deviance information criterion DIC = D(theta_bar) + 2 p_D with
/// D = -2 loglik, p_D = Dbar - D(theta_bar) and theta_bar the posterior mean of
/// (beta, delta) for OR_I or (beta, sigma) for OR_II. Draws whose stored
/// log-likelihood is the -inf sentinel are dropped; more than 0.1% is an error.
inline DicResult dic(const Chain& chain, const OrdinalDataset& data) {
  if (chain.size() < 1) throw DomainError("dic: empty chain");
  const QuantileSpec spec(chain.meta.p);
  DicResult r{};
  double sum = 0.0;
  std::size_t used = 0;
  for (Eigen::Index g = 0; g < chain.loglik_trace.size(); ++g) {
    const double ll = chain.loglik_trace[g];
    if (ll == -kInf) {
      ++r.excluded_sentinels;
      continue;
    }
    sum += -2.0 * ll;
    ++used;
  }
  if (static_cast<double>(r.excluded_sentinels) > 0.001 * static_cast<double>(chain.size())) {
    throw NumericalError("dic: " + std::to_string(r.excluded_sentinels) +
                         " draws have zero likelihood (more than 0.1%)");
  }
  if (r.excluded_sentinels > 0) {
    r.warnings.push_back("excluded " + std::to_string(r.excluded_sentinels) +
                         " zero-likelihood draws");
  }
  r.dbar = sum / static_cast<double>(used);
  const LikelihoodParams mean = params_at_mean(chain);
  r.d_at_mean = -2.0 * ordinal_loglik(mean.beta, mean.cuts, mean.scale, spec, data);
  r.p_d = r.dbar - r.d_at_mean;
  r.dic = r.d_at_mean + 2.0 * r.p_d;
  return r;
}

/// Set the covariate to `from` and then to `to` for every observation.
struct SetCovariate {
  double from;
  double to;
};

/// Compare observed covariate values against the values shifted by `delta`.
struct ShiftCovariate {
  double delta;
};

using CovariateChange = std::variant<SetCovariate, ShiftCovariate>;

/// Average change in category probabilities induced by a covariate change,
/// averaged over every stored draw and every observed covariate profile.
inline Vector covariate_effect(const Chain& chain, const OrdinalDataset& data,
                               Eigen::Index covariate, const CovariateChange& change) {
  if (covariate < 0 || covariate >= data.k()) {
    throw DomainError("covariate_effect: covariate index out of range");
  }
  if (chain.meta.k != data.k() || chain.meta.categories != data.categories()) {
    throw DomainError("covariate_effect: chain and dataset dimensions differ");
  }
  const QuantileSpec spec(chain.meta.p);
  const int J = data.categories();
  Vector total = Vector::Zero(J);
  Vector before(data.k());
  Vector after(data.k());
  for (Eigen::Index g = 0; g < chain.size(); ++g) {
    const LikelihoodParams par = params_at(chain, g);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      before = data.x().row(i).transpose();
      after = before;
      if (const auto* set = std::get_if<SetCovariate>(&change)) {
        before[covariate] = set->from;
        after[covariate] = set->to;
      } else {
        after[covariate] += std::get<ShiftCovariate>(change).delta;
      }
      total += outcome_probs(after, par.beta, par.cuts, par.scale, spec) -
               outcome_probs(before, par.beta, par.cuts, par.scale, spec);
    }
  }
  return total / static_cast<double>(chain.size() * data.n());
}

struct SummaryRow {
  std::string name;
  double mean;
  double std;
  std::optional<double> if_factor;  // empty for a degenerate (constant) column
  double q025;
  double q500;
  double q975;
};

inline std::vector<SummaryRow> summarize(const Matrix& draws, const std::vector<std::string>& names) {
  if (draws.rows() < 2) throw DomainError("summarize: need at least two draws");
  if (static_cast<Eigen::Index>(names.size()) != draws.cols()) {
    throw DomainError("summarize: name count does not match draw columns");
  }
  std::vector<SummaryRow> rows;
  for (Eigen::Index c = 0; c < draws.cols(); ++c) {
    const std::vector<double> col = detail::column(draws, c);
    SummaryRow row;
    row.name = names[static_cast<std::size_t>(c)];
    row.mean = detail::sample_mean(col);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    row.std = (*lo == *hi) ? 0.0 : std::sqrt(detail::sample_variance(col));
    if (col.size() >= 4) {
      try {
        row.if_factor = inefficiency_factor(col);
      } catch (const DegenerateSeries&) {
        row.if_factor.reset();
      }
    }
    row.q025 = empirical_quantile(col, 0.025);
    row.q500 = empirical_quantile(col, 0.5);
    row.q975 = empirical_quantile(col, 0.975);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<SummaryRow> summarize(const Chain& chain) {
  return summarize(chain.draws, chain.names);
}

}  // namespace bqror
