#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "bqror/errors.hpp"
#include "bqror/model.hpp"

namespace bqror::tools {

namespace detail {

inline Vector read_vector(const nlohmann::json& j, Eigen::Index dim, const std::string& key) {
  if (j.is_number()) return Vector::Constant(dim, j.get<double>());
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    throw ConfigError("prior '" + key + "' must be a number or an array of length " + std::to_string(dim));
  }
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError("prior '" + key + "' has a non-numeric entry");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

// A scalar s means s * I.
inline Matrix read_matrix(const nlohmann::json& j, Eigen::Index dim, const std::string& key) {
  if (j.is_number()) return j.get<double>() * Matrix::Identity(dim, dim);
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    throw ConfigError("prior '" + key + "' must be a number or a " + std::to_string(dim) + "x" +
                      std::to_string(dim) + " nested array");
  }
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ConfigError("prior '" + key + "' row " + std::to_string(r + 1) + " must have " +
                        std::to_string(dim) + " entries");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number()) throw ConfigError("prior '" + key + "' has a non-numeric entry");
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

}  // namespace detail

/// Parses a prior document over the defaults for (k, J). Absent keys keep
/// their default; unknown keys are rejected.
inline PriorSpec parse_prior(const nlohmann::json& doc, Eigen::Index k, int J) {
  if (!doc.is_object()) throw ConfigError("prior file must hold a JSON object");
  static const std::set<std::string> known = {"beta_mean", "beta_cov", "delta_mean", "delta_cov", "n0", "d0"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw ConfigError("prior file: unknown key '" + key + "'");
  }
  PriorSpec prior = PriorSpec::defaults(k, J);
  const Eigen::Index m = std::max(0, J - 2);
  if (doc.contains("beta_mean")) prior.beta_mean = detail::read_vector(doc["beta_mean"], k, "beta_mean");
  if (doc.contains("beta_cov")) prior.beta_cov = detail::read_matrix(doc["beta_cov"], k, "beta_cov");
  if (doc.contains("delta_mean")) prior.delta_mean = detail::read_vector(doc["delta_mean"], m, "delta_mean");
  if (doc.contains("delta_cov")) prior.delta_cov = detail::read_matrix(doc["delta_cov"], m, "delta_cov");
  for (const char* key : {"n0", "d0"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_number()) throw ConfigError(std::string("prior '") + key + "' must be a number");
    (key[0] == 'n' ? prior.sigma_shape_n0 : prior.sigma_rate_d0) = doc[key].get<double>();
  }
  try {
    prior.validate(k, J >= 4 ? m : 0);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return prior;
}

inline PriorSpec load_prior(const std::string& path, Eigen::Index k, int J) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prior file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("prior file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_prior(doc, k, J);
}

inline nlohmann::ordered_json prior_to_json(const PriorSpec& prior) {
  auto vec = [](const Vector& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
  };
  auto mat = [&](const Matrix& m) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec(m.row(r).transpose()));
    return a;
  };
  nlohmann::ordered_json j;
  j["beta_mean"] = vec(prior.beta_mean);
  j["beta_cov"] = mat(prior.beta_cov);
  j["delta_mean"] = vec(prior.delta_mean);
  j["delta_cov"] = mat(prior.delta_cov);
  j["n0"] = prior.sigma_shape_n0;
  j["d0"] = prior.sigma_rate_d0;
  return j;
}

}  // namespace bqror::tools
