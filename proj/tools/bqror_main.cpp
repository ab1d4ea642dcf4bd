// bqror: Bayesian quantile regression for ordinal outcomes.
//
//   bqror fit       --data F --response y --model or1|or2 --out DIR [...]
//   bqror simulate  --study 1|2 --n 300 --seed S --out FILE
//   bqror effect    --fit DIR --covariate NAME (--from A --to B | --shift D)
//   bqror summarize --draws FILE [--out FILE]
//
// Exit codes: 0 ok, 2 configuration, 3 data, 4 numerical failure, 1 other.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bqror/bqror.hpp"
#include "bqror/csv.hpp"
#include "prior_file.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bqror;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

void note(const std::string& msg) { std::cerr << "bqror: " << msg << '\n'; }

// Six significant digits, kept numeric in JSON.
double short_number(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(csv::format_short(v));
}

std::string quantile_dir(double p) { return "p" + csv::format_short(p); }

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = csv::trim(item);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw ConfigError(flag + ": '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError(flag + ": empty list");
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = csv::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "parameter,mean,std,if,q2.5,q50,q97.5\n";
  for (const auto& r : rows) {
    out << r.name << ',' << csv::format_short(r.mean) << ',' << csv::format_short(r.std) << ','
        << (r.if_factor ? csv::format_short(*r.if_factor) : std::string("degenerate")) << ','
        << csv::format_short(r.q025) << ',' << csv::format_short(r.q500) << ','
        << csv::format_short(r.q975) << '\n';
  }
  return out.str();
}

std::string draws_csv(const Matrix& draws, const std::vector<std::string>& names) {
  std::ostringstream out;
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  for (Eigen::Index r = 0; r < draws.rows(); ++r) {
    for (Eigen::Index c = 0; c < draws.cols(); ++c) out << (c ? "," : "") << csv::format_full(draws(r, c));
    out << '\n';
  }
  return out.str();
}

struct DrawsFile {
  std::vector<std::string> names;
  Matrix draws;
};

DrawsFile read_draws(const fs::path& path) {
  const csv::Table t = csv::read_table(path.string());
  DrawsFile d;
  d.names = t.header;
  d.draws.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      d.draws(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          csv::parse_real(t.rows[r][c], r + 1, t.header[c]);
    }
  }
  if (d.draws.rows() < 2) throw DataError("'" + path.string() + "' holds fewer than two draws");
  return d;
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
  std::string data;
  std::string response = "y";
  std::string covariates;
  bool no_intercept = false;
  std::string model;
  std::string quantiles = "0.25,0.5,0.75";
  std::string cutpoints;
  std::size_t iterations = 12000;
  std::size_t burnin = 3000;
  std::uint64_t seed = 0;
  double iota = std::sqrt(3.0);
  std::string priors;
  std::string out;
  bool keep_draws = false;
  bool record_timing = false;
};

struct QuantileRun {
  double p;
  Chain chain;
  DicResult dic;
  double seconds;
};

int cmd_fit(const FitOptions& o) {
  if (o.model != "or1" && o.model != "or2") throw ConfigError("--model must be or1 or or2");
  const ModelKind model = o.model == "or1" ? ModelKind::kOr1 : ModelKind::kOr2;
  const std::vector<double> ps = parse_list(o.quantiles, "--quantiles");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i] > 0.0 && ps[i] < 1.0)) throw ConfigError("--quantiles: each p must lie in (0, 1)");
    for (std::size_t j = 0; j < i; ++j) {
      if (ps[j] == ps[i]) throw ConfigError("--quantiles: duplicate level " + csv::format_short(ps[i]));
    }
  }
  std::vector<double> cut_values{0.0, 1.0};
  if (!o.cutpoints.empty()) {
    if (model == ModelKind::kOr1) throw ConfigError("--cutpoints applies to --model or2 only");
    cut_values = parse_list(o.cutpoints, "--cutpoints");
    if (cut_values.size() != 2) throw ConfigError("--cutpoints: or2 needs exactly two fixed cut-points");
    if (!(cut_values[0] < cut_values[1])) throw ConfigError("--cutpoints must be strictly increasing");
  }
  McmcConfig base;
  base.iterations = o.iterations;
  base.burn_in = o.burnin;
  base.seed = o.seed;
  base.iota = o.iota;
  base.validate();
  if (base.stored_draws() < 4) throw ConfigError("need at least four post burn-in iterations");

  const csv::LoadedDataset loaded = csv::load_dataset(o.data, o.response, parse_names(o.covariates), !o.no_intercept);
  for (const auto& line : loaded.log) note(line);
  const OrdinalDataset& data = loaded.data;
  const int J = data.categories();
  if (model == ModelKind::kOr2 && J != 3) {
    throw ConfigError("or2 requires exactly three response categories; data has " + std::to_string(J));
  }
  if (model == ModelKind::kOr1 && J < 4) {
    throw ConfigError("or1 requires at least four response categories; data has " + std::to_string(J));
  }
  const PriorSpec prior = o.priors.empty() ? PriorSpec::defaults(data.k(), J) : tools::load_prior(o.priors, data.k(), J);
  prior.validate(data.k(), model == ModelKind::kOr1 ? J - 2 : 0);
  const CutpointVector fixed = CutpointVector::from_interior(cut_values);

  const fs::path out(o.out);
  fs::create_directories(out);

  std::vector<QuantileRun> runs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    McmcConfig cfg = base;
    cfg.stream = i;
    const QuantileSpec spec(ps[i]);
    const auto t0 = std::chrono::steady_clock::now();
    Chain chain = model == ModelKind::kOr1 ? or1::run_or1(data, prior, spec, cfg)
                                           : or2::run_or2(data, prior, spec, fixed, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    DicResult d = dic(chain, data);
    note("p=" + csv::format_short(ps[i]) + " done in " + csv::format_short(seconds) + " s");
    runs.push_back({ps[i], std::move(chain), std::move(d), seconds});
  }

  json run;
  run["command"] = "fit";
  run["model"] = o.model;
  run["data"] = fs::absolute(o.data).lexically_normal().string();
  run["response"] = o.response;
  run["covariates"] = data.covariate_names();
  run["intercept"] = !o.no_intercept;
  run["categories"] = J;
  json labels = json::array();
  for (const auto& [value, label] : loaded.label_map) labels.push_back(json{{"value", value}, {"label", label}});
  run["label_map"] = labels;
  run["quantiles"] = ps;
  if (model == ModelKind::kOr2) run["cutpoints"] = cut_values;
  run["iterations"] = o.iterations;
  run["burn_in"] = o.burnin;
  run["seed"] = o.seed;
  if (model == ModelKind::kOr1) run["iota"] = o.iota;
  run["priors_file"] = o.priors.empty() ? json(nullptr) : json(o.priors);
  run["priors"] = tools::prior_to_json(prior);
  run["keep_draws"] = o.keep_draws;
  json dirs = json::array();
  for (const auto& r : runs) dirs.push_back(quantile_dir(r.p));
  run["quantile_dirs"] = dirs;
  write_text(out / "run.json", run.dump(2) + "\n");

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const fs::path dir = out / quantile_dir(r.p);
    fs::create_directories(dir);
    write_text(dir / "summary.csv", summary_csv(summarize(r.chain)));
    json diag;
    diag["model"] = o.model;
    diag["p"] = r.p;
    diag["DIC"] = short_number(r.dic.dic);
    diag["p_D"] = short_number(r.dic.p_d);
    diag["D_bar"] = short_number(r.dic.dbar);
    diag["D_at_posterior_mean"] = short_number(r.dic.d_at_mean);
    if (model == ModelKind::kOr1) diag["acceptance_rate"] = short_number(*r.chain.accept_rate);
    diag["iterations"] = o.iterations;
    diag["burn_in"] = o.burnin;
    diag["seed"] = o.seed;
    diag["stream"] = i;
    diag["stored_draws"] = r.chain.size();
    diag["wall_time_seconds"] = o.record_timing ? json(short_number(r.seconds)) : json(nullptr);
    if (model == ModelKind::kOr1) diag["proposal_fallback"] = r.chain.meta.proposal_fallback;
    diag["excluded_zero_likelihood_draws"] = r.dic.excluded_sentinels;
    std::vector<std::string> notes = r.chain.meta.notes;
    notes.insert(notes.end(), r.dic.warnings.begin(), r.dic.warnings.end());
    notes.insert(notes.end(), loaded.log.begin(), loaded.log.end());
    diag["notes"] = notes;
    write_text(dir / "diagnostics.json", diag.dump(2) + "\n");
    if (o.keep_draws) write_text(dir / "draws.csv", draws_csv(r.chain.draws, r.chain.names));
  }

  std::vector<const QuantileRun*> order;
  for (const auto& r : runs) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const QuantileRun* a, const QuantileRun* b) { return a->dic.dic < b->dic.dic; });
  std::ostringstream cmp;
  cmp << "p,DIC,p_D,D_bar\n";
  for (const auto* r : order) {
    cmp << csv::format_short(r->p) << ',' << csv::format_short(r->dic.dic) << ',' << csv::format_short(r->dic.p_d)
        << ',' << csv::format_short(r->dic.dbar) << '\n';
  }
  write_text(out / "dic_comparison.csv", cmp.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(int study, std::size_t n, std::uint64_t seed, const std::string& out) {
  if (study != 1 && study != 2) throw ConfigError("--study must be 1 or 2");
  if (n < 50) throw ConfigError("--n must be at least 50");
  Rng rng(seed);
  const OrdinalDataset data = study == 1 ? gen_study1(n, rng) : gen_study2(n, rng);
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  csv::write_dataset(out, data, true);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// effect

struct EffectOptions {
  std::string fit;
  std::string covariate;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<double> shift;
  std::string out;
};

int cmd_effect(const EffectOptions& o) {
  const bool set = o.from.has_value() || o.to.has_value();
  if (set == o.shift.has_value()) throw ConfigError("give either --from and --to, or --shift");
  if (set && !(o.from && o.to)) throw ConfigError("--from and --to must be given together");
  const fs::path dir(o.fit);
  const json run = read_json(dir / "run.json");
  const std::string model = run.at("model").get<std::string>();
  std::vector<std::string> covariates = run.at("covariates").get<std::vector<std::string>>();
  const bool intercept = run.at("intercept").get<bool>();
  if (intercept) covariates.erase(covariates.begin());
  const csv::LoadedDataset loaded = csv::load_dataset(run.at("data").get<std::string>(),
                                                     run.at("response").get<std::string>(), covariates, intercept);
  const OrdinalDataset& data = loaded.data;
  const auto& names = data.covariate_names();
  const auto it = std::find(names.begin(), names.end(), o.covariate);
  if (it == names.end()) throw ConfigError("--covariate '" + o.covariate + "' is not a fitted covariate");
  const auto index = static_cast<Eigen::Index>(it - names.begin());
  const CovariateChange change =
      set ? CovariateChange(SetCovariate{*o.from, *o.to}) : CovariateChange(ShiftCovariate{*o.shift});

  const auto ps = run.at("quantiles").get<std::vector<double>>();
  const auto dirs = run.at("quantile_dirs").get<std::vector<std::string>>();
  std::vector<Vector> columns;
  for (std::size_t q = 0; q < ps.size(); ++q) {
    const fs::path draws_path = dir / dirs[q] / "draws.csv";
    if (!fs::exists(draws_path)) {
      throw ConfigError("no draws at '" + draws_path.string() + "'; re-run fit with --keep-draws to enable effects");
    }
    const DrawsFile draws = read_draws(draws_path);
    Chain chain;
    chain.meta.model = model == "or1" ? ModelKind::kOr1 : ModelKind::kOr2;
    chain.meta.p = ps[q];
    chain.meta.categories = data.categories();
    chain.meta.k = data.k();
    if (chain.meta.model == ModelKind::kOr2) chain.meta.fixed_cuts = run.at("cutpoints").get<std::vector<double>>();
    chain.names = parameter_names(chain.meta, names);
    if (draws.names != chain.names) throw DataError("'" + draws_path.string() + "' columns do not match the fit");
    chain.draws = draws.draws;
    columns.push_back(covariate_effect(chain, data, index, change));
  }

  std::ostringstream body;
  body << "category";
  for (double p : ps) body << ',' << quantile_dir(p);
  body << '\n';
  std::vector<double> values(loaded.label_map.size());
  for (const auto& [value, label] : loaded.label_map) values[static_cast<std::size_t>(label - 1)] = value;
  for (int j = 0; j < data.categories(); ++j) {
    body << csv::format_short(values[static_cast<std::size_t>(j)]);
    for (const auto& col : columns) body << ',' << csv::format_full(col[j]);
    body << '\n';
  }
  write_text(o.out.empty() ? dir / "effects.csv" : fs::path(o.out), body.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// summarize

int cmd_summarize(const std::string& draws_path, const std::string& out) {
  const DrawsFile d = read_draws(draws_path);
  const std::string body = summary_csv(summarize(d.draws, d.names));
  if (out.empty()) {
    std::cout << body;
  } else {
    write_text(out, body);
  }
  return kExitOk;
}

int fail(int code, const std::string& kind, const std::string& message) {
  json err;
  err["error"] = kind;
  err["message"] = message;
  err["exit_code"] = code;
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian quantile regression for ordinal outcomes"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Run the OR_I or OR_II sampler at each quantile level");
  fit_cmd->add_option("--data", fit.data, "Input CSV")->required();
  fit_cmd->add_option("--response", fit.response, "Response column")->capture_default_str();
  fit_cmd->add_option("--covariates", fit.covariates, "Comma-separated covariate columns (default: all others)");
  fit_cmd->add_flag("--no-intercept", fit.no_intercept, "Do not prepend a column of ones");
  fit_cmd->add_option("--model", fit.model, "or1 (J >= 4) or or2 (J = 3)")->required();
  fit_cmd->add_option("--quantiles", fit.quantiles, "Comma-separated quantile levels")->capture_default_str();
  fit_cmd->add_option("--cutpoints", fit.cutpoints, "Two fixed cut-points for or2 (default 0,1)");
  fit_cmd->add_option("--iterations", fit.iterations, "Total MCMC sweeps")->capture_default_str();
  fit_cmd->add_option("--burnin", fit.burnin, "Discarded initial sweeps")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "RNG seed")->capture_default_str();
  fit_cmd->add_option("--iota", fit.iota, "MH proposal scale for or1")->capture_default_str();
  fit_cmd->add_option("--priors", fit.priors, "Prior JSON file");
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  fit_cmd->add_flag("--keep-draws", fit.keep_draws, "Write draws.csv for each quantile");
  fit_cmd->add_flag("--record-timing", fit.record_timing, "Record wall time in diagnostics.json");

  int study = 1;
  std::size_t n = 300;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a simulation-study dataset");
  sim_cmd->add_option("--study", study, "1 (four categories) or 2 (three categories)")->required();
  sim_cmd->add_option("--n", n, "Observations")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "Output CSV")->required();

  EffectOptions eff;
  auto* eff_cmd = app.add_subcommand("effect", "Average change in category probabilities");
  eff_cmd->add_option("--fit", eff.fit, "Directory written by fit --keep-draws")->required();
  eff_cmd->add_option("--covariate", eff.covariate, "Covariate name")->required();
  eff_cmd->add_option("--from", eff.from, "Baseline value");
  eff_cmd->add_option("--to", eff.to, "Changed value");
  eff_cmd->add_option("--shift", eff.shift, "Additive change to observed values");
  eff_cmd->add_option("--out", eff.out, "Output CSV (default FIT/effects.csv)");

  std::string sum_draws, sum_out;
  auto* sum_cmd = app.add_subcommand("summarize", "Summarize a draws.csv file");
  sum_cmd->add_option("--draws", sum_draws, "draws.csv written by fit")->required();
  sum_cmd->add_option("--out", sum_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitConfig, "config", e.what());
  }

  try {
    if (*fit_cmd) return cmd_fit(fit);
    if (*sim_cmd) return cmd_simulate(study, n, sim_seed, sim_out);
    if (*eff_cmd) return cmd_effect(eff);
    if (*sum_cmd) return cmd_summarize(sum_draws, sum_out);
  } catch (const ConfigError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const DataError& e) {
    return fail(kExitData, "data", e.what());
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, "numerical", e.what());
  } catch (const ParameterError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const DomainError& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const json::exception& e) {
    return fail(kExitConfig, "config", std::string("malformed run.json: ") + e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(kExitData, "data", e.what());
  } catch (const std::exception& e) {
    return fail(kExitOther, "internal", e.what());
  }
  return kExitOther;
}
