#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bqror/distributions.hpp"
#include "bqror/errors.hpp"
#include "bqror/model.hpp"

namespace bqror {

enum class ModelKind { kOr1, kOr2 };

inline std::string to_string(ModelKind kind) { return kind == ModelKind::kOr1 ? "or1" : "or2"; }

struct McmcConfig {
  std::size_t iterations = 12000;
  std::size_t burn_in = 3000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double iota = std::sqrt(3.0);
  std::size_t thin = 1;

  void validate() const {
    if (!(burn_in < iterations)) throw ConfigError("mcmc config: burn-in must be below iterations");
    if (thin < 1) throw ConfigError("mcmc config: thin must be at least 1");
    if (!(iota > 0.0) || !std::isfinite(iota)) throw ConfigError("mcmc config: iota must be positive");
  }

  /// Number of draws a run with this configuration stores.
  std::size_t stored_draws() const { return (iterations - burn_in + thin - 1) / thin; }
};

struct ChainMeta {
  ModelKind model = ModelKind::kOr1;
  double p = 0.5;
  McmcConfig config;
  int categories = 0;
  Eigen::Index k = 0;
  double anchor = 0.0;                  // gamma[1] for OR_I
  std::vector<double> fixed_cuts;       // interior cut-points for OR_II
  bool proposal_fallback = false;       // OR_I only
  std::vector<std::string> notes;
};

/// Post burn-in draws. Columns are beta (k entries) followed by delta (J-2) for
/// OR_I or sigma for OR_II.
struct Chain {
  Matrix draws;
  std::vector<std::string> names;
  Vector loglik_trace;
  std::optional<double> accept_rate;
  ChainMeta meta;

  Eigen::Index size() const noexcept { return draws.rows(); }
};

/// The parameters that enter the ordinal likelihood.
struct LikelihoodParams {
  Vector beta;
  CutpointVector cuts;
  double scale;
};

/// Decodes a parameter row (beta then delta or sigma) into likelihood inputs.
inline LikelihoodParams decode_params(const ChainMeta& meta, const Vector& row) {
  const Eigen::Index k = meta.k;
  Vector beta = row.head(k);
  if (meta.model == ModelKind::kOr1) {
    TransformedCutpoints t{row.segment(k, meta.categories - 2)};
    return {std::move(beta), gamma_from_delta(t, meta.categories, meta.anchor), 1.0};
  }
  return {std::move(beta), CutpointVector::from_interior(meta.fixed_cuts), row[k]};
}

inline LikelihoodParams params_at(const Chain& chain, Eigen::Index g) {
  return decode_params(chain.meta, chain.draws.row(g).transpose());
}

/// Parameters at the posterior mean. For OR_I the mean is taken over delta,
/// then mapped to cut-points.
inline LikelihoodParams params_at_mean(const Chain& chain) {
  return decode_params(chain.meta, chain.draws.colwise().mean().transpose());
}

inline std::vector<std::string> parameter_names(const ChainMeta& meta,
                                                const std::vector<std::string>& covariates) {
  std::vector<std::string> names;
  for (const auto& c : covariates) names.push_back("beta_" + c);
  if (meta.model == ModelKind::kOr1) {
    for (int j = 1; j <= meta.categories - 2; ++j) names.push_back("delta_" + std::to_string(j));
  } else {
    names.emplace_back("sigma");
  }
  return names;
}

}  // namespace bqror
