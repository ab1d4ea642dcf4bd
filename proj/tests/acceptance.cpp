// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Seeds are fixed at 1..5.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bqror/bqror.hpp"
#include "bqror/csv.hpp"
#include "kernels.hpp"
#include "support.hpp"

using namespace bqror;
using namespace bqror::testing;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};
constexpr double kLevels[] = {0.25, 0.5, 0.75};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const Verdict& v) {
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << " |"
            << v.detail.str() << std::endl;
  if (!v.pass) ++failures;
}

std::string fmt(double v) { return csv::format_short(v); }

// ---------------------------------------------------------------------------
// 1. distribution oracles

template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

Verdict criterion_distributions() {
  Verdict v;
  double quad = 0.0;
  for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const QuantileSpec s(p);
    auto f = [&](double t) { return al_pdf(t, s); };
    const double below = simpson(f, -400.0, 0.0, 400'000);
    for (double x = -10.0; x <= 10.0; x += 0.5) {
      const double integral = x <= 0.0 ? simpson(f, -400.0, x, 400'000) : below + simpson(f, 0.0, x, 100'000);
      quad = std::max(quad, std::abs(integral - al_cdf(x, s)));
    }
  }
  v.require(quad < 1e-8, "quadrature");
  v.detail << " quadrature max err " << fmt(quad);

  constexpr int kDraws = 1'000'000;
  double ks = 0.0;
  for (double p : kLevels) {
    const QuantileSpec s(p);
    Rng rng(100 + static_cast<std::uint64_t>(p * 100));
    std::vector<double> e(kDraws);
    for (auto& x : e) {
      const double w = rng.exponential();
      x = s.theta() * w + s.tau() * std::sqrt(w) * rng.normal();
    }
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double F = al_cdf(e[i], s);
      ks = std::max({ks, std::abs(F - static_cast<double>(i) / kDraws), std::abs(F - static_cast<double>(i + 1) / kDraws)});
    }
  }
  v.require(ks < 0.005, "mixture KS");
  v.detail << "; mixture KS " << fmt(ks);

  double gig = 0.0;
  std::uint64_t seed = 40;
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (double eta : {0.1, 1.0, 10.0}) {
      Rng rng(seed++);
      double sum = 0;
      for (int i = 0; i < kDraws; ++i) sum += sample_gig_half(lambda, eta, rng);
      const double mean = std::sqrt(lambda / eta) + 1.0 / eta;
      gig = std::max(gig, std::abs(sum / kDraws - mean) / mean);
    }
  }
  v.require(gig < 0.01, "GIG means");
  v.detail << "; GIG max rel err " << fmt(gig);

  Rng rng(9);
  double half = 0;
  for (int i = 0; i < kDraws; ++i) half += sample_truncnorm(0.0, kInf, 0.0, 1.0, rng);
  half /= kDraws;
  v.require(std::abs(half - 0.79788) <= 0.005, "half-normal mean");
  v.detail << "; half-normal mean " << fmt(half);
  return v;
}

// ---------------------------------------------------------------------------
// 2. full conditionals against the complete-data kernels

double sum_gig(const Vector& a, const Vector& b, const GigParams& g) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    s += gig_half_log_kernel(a[i], g.lambda[i], g.eta) - gig_half_log_kernel(b[i], g.lambda[i], g.eta);
  }
  return s;
}

template <class State>
double z_ratio(State& a, State& b, const TruncatedNormals& tn, Rng& rng) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.z.size(); ++i) {
    a.z[i] = inside(tn.lo[i], tn.hi[i], rng);
    b.z[i] = inside(tn.lo[i], tn.hi[i], rng);
    const double da = a.z[i] - tn.mean[i], db = b.z[i] - tn.mean[i];
    s += -(da * da - db * db) / (2 * tn.var[i]);
  }
  return s;
}

Verdict criterion_kernels() {
  Verdict v;
  constexpr int kPoints = 100;
  double worst1 = 0.0, worst2 = 0.0;
  bool brackets = true;
  {
    using namespace or1_oracle;
    Rng rng(2024);
    for (int t = 0; t < kPoints; ++t) {
      Fixture f = random_fixture(rng);
      auto K = [&](const or1::State& s) { return complete_kernel(s, f.data, f.prior, f.spec); };
      or1::State a = f.state, b = f.state;

      const auto m = or1::beta_conditional(f.state, f.data, f.prior, f.spec);
      a.beta = random_vector(3, 2.0, rng);
      b.beta = random_vector(3, 2.0, rng);
      worst1 = std::max(worst1, std::abs(mvn_log_kernel(a.beta, m.mean, m.cov) - mvn_log_kernel(b.beta, m.mean, m.cov) -
                                         (K(a) - K(b))));

      a = b = f.state;
      const GigParams g = or1::w_conditional(f.state, f.data, f.spec);
      a.w = random_positive(f.data.n(), rng);
      b.w = random_positive(f.data.n(), rng);
      worst1 = std::max(worst1, std::abs(sum_gig(a.w, b.w, g) - (K(a) - K(b))));

      a = b = f.state;
      const TruncatedNormals tn = or1::z_conditional(f.state, f.data, f.spec);
      const auto cuts = or1::cutpoints(f.state, f.data.categories());
      for (Eigen::Index i = 0; i < f.data.n(); ++i) {
        const auto [lo, hi] = cuts.bracket(f.data.y()[static_cast<std::size_t>(i)]);
        brackets = brackets && tn.lo[i] == lo && tn.hi[i] == hi;
      }
      const double zr = z_ratio(a, b, tn, rng);
      worst1 = std::max(worst1, std::abs(zr - (K(a) - K(b))));

      const Vector da = random_vector(f.state.delta.size(), 0.5, rng);
      const Vector db = random_vector(f.state.delta.size(), 0.5, rng);
      const double impl = or1::mh_log_target(f.state.beta, da, f.data, f.prior, f.spec) -
                          or1::mh_log_target(f.state.beta, db, f.data, f.prior, f.spec);
      const double ref = oracle_loglik(f.state.beta, da, f.data, f.spec.p()) +
                         mvn_log_kernel(da, f.prior.delta_mean, f.prior.delta_cov) -
                         oracle_loglik(f.state.beta, db, f.data, f.spec.p()) -
                         mvn_log_kernel(db, f.prior.delta_mean, f.prior.delta_cov);
      worst1 = std::max(worst1, std::abs(impl - ref));
    }
  }
  {
    using namespace or2_oracle;
    Rng rng(2025);
    for (int t = 0; t < kPoints; ++t) {
      Fixture f = random_fixture(rng);
      auto K = [&](const or2::State& s) { return kernel(f, s); };
      or2::State a = f.state, b = f.state;

      const auto m = or2::beta_conditional(f.state, f.data, f.prior, f.spec);
      a.beta = random_vector(3, 2.0, rng);
      b.beta = random_vector(3, 2.0, rng);
      worst2 = std::max(worst2, std::abs(mvn_log_kernel(a.beta, m.mean, m.cov) - mvn_log_kernel(b.beta, m.mean, m.cov) -
                                         (K(a) - K(b))));

      a = b = f.state;
      const auto ig = or2::sigma_conditional(f.state, f.data, f.prior, f.spec);
      a.sigma = 0.2 + 4.0 * rng.uniform();
      b.sigma = 0.2 + 4.0 * rng.uniform();
      worst2 = std::max(worst2, std::abs(invgamma_log_kernel(a.sigma, ig.shape, ig.rate) -
                                         invgamma_log_kernel(b.sigma, ig.shape, ig.rate) - (K(a) - K(b))));

      a = b = f.state;
      const GigParams g = or2::nu_conditional(f.state, f.data, f.spec);
      a.nu = random_positive(f.data.n(), rng);
      b.nu = random_positive(f.data.n(), rng);
      worst2 = std::max(worst2, std::abs(sum_gig(a.nu, b.nu, g) - (K(a) - K(b))));

      a = b = f.state;
      const TruncatedNormals tn = or2::z_conditional(f.state, f.data, f.spec, f.cuts);
      for (Eigen::Index i = 0; i < f.data.n(); ++i) {
        const int y = f.data.y()[static_cast<std::size_t>(i)];
        brackets = brackets && tn.lo[i] == f.gamma[y - 1] && tn.hi[i] == f.gamma[y];
      }
      const double zr = z_ratio(a, b, tn, rng);
      worst2 = std::max(worst2, std::abs(zr - (K(a) - K(b))));
    }
  }
  v.require(worst1 < 1e-8, "OR_I kernel");
  v.require(worst2 < 1e-8, "OR_II kernel");
  v.require(brackets, "z truncation intervals");
  v.detail << " max |log ratio diff| OR_I (beta, w, z, delta target) " << fmt(worst1) << "; OR_II (beta, sigma, nu, z) "
           << fmt(worst2) << "; " << kPoints << " points per block";
  return v;
}

// ---------------------------------------------------------------------------
// 3-6. simulation studies

struct InvariantLog {
  std::size_t sweeps = 0;
  std::size_t violations = 0;
};

struct LevelResult {
  double p = 0;
  double dic = 0;
  double accept = -1;
  double max_if = 0;
  std::string max_if_name;
  Vector mean;
  Vector sd;
};

struct StudyResult {
  std::uint64_t seed = 0;
  std::vector<LevelResult> levels;
  InvariantLog inv;
  Chain median_chain;
  OrdinalDataset data;
};

LevelResult digest(const Chain& chain, const OrdinalDataset& data) {
  LevelResult r;
  r.p = chain.meta.p;
  r.dic = dic(chain, data).dic;
  if (chain.accept_rate) r.accept = *chain.accept_rate;
  r.mean.resize(chain.draws.cols());
  r.sd.resize(chain.draws.cols());
  const auto rows = summarize(chain);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    r.mean[static_cast<Eigen::Index>(c)] = rows[c].mean;
    r.sd[static_cast<Eigen::Index>(c)] = rows[c].std;
    const double f = rows[c].if_factor.value_or(kInf);  // a constant column counts as a failure
    if (f > r.max_if) {
      r.max_if = f;
      r.max_if_name = rows[c].name;
    }
  }
  return r;
}

bool brackets_hold(const Vector& z, const CutpointVector& cuts, const OrdinalDataset& data) {
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const auto [lo, hi] = cuts.bracket(data.y()[static_cast<std::size_t>(i)]);
    if (!(z[i] > lo && z[i] <= hi)) return false;
  }
  return true;
}

OrdinalDataset study_data(int study, std::uint64_t seed) {
  Rng rng(seed, study == 1 ? 1000 : 2000);
  return study == 1 ? gen_study1(300, rng) : gen_study2(300, rng);
}

McmcConfig config_for(std::uint64_t seed, std::size_t level) {
  McmcConfig cfg;  // 12000 sweeps, 3000 burn-in, iota = sqrt(3)
  cfg.seed = seed;
  cfg.stream = level;
  return cfg;
}

const CutpointVector kStudy2Cuts = CutpointVector::from_interior({0.0, 4.0});

StudyResult run_study1(std::uint64_t seed) {
  StudyResult r{seed, {}, {}, {}, study_data(1, seed)};
  const OrdinalDataset& data = r.data;
  const PriorSpec prior = PriorSpec::defaults(data.k(), 4);
  auto observer = [&](std::size_t, const or1::State& s) {
    ++r.inv.sweeps;
    const auto cuts = or1::cutpoints(s, 4);
    bool ok = s.w.minCoeff() > 0.0 && brackets_hold(s.z, cuts, data);
    for (int j = 1; j <= 4; ++j) ok = ok && cuts[j - 1] < cuts[j];
    if (!ok) ++r.inv.violations;
  };
  for (std::size_t l = 0; l < 3; ++l) {
    Chain c = or1::run_or1(data, prior, QuantileSpec(kLevels[l]), config_for(seed, l), observer);
    r.levels.push_back(digest(c, data));
    if (l == 1) r.median_chain = std::move(c);
  }
  return r;
}

StudyResult run_study2(std::uint64_t seed) {
  StudyResult r{seed, {}, {}, {}, study_data(2, seed)};
  const OrdinalDataset& data = r.data;
  const PriorSpec prior = PriorSpec::defaults(data.k(), 3);
  auto observer = [&](std::size_t, const or2::State& s) {
    ++r.inv.sweeps;
    const bool ok = s.sigma > 0.0 && s.nu.minCoeff() > 0.0 && brackets_hold(s.z, kStudy2Cuts, data);
    if (!ok) ++r.inv.violations;
  };
  for (std::size_t l = 0; l < 3; ++l) {
    Chain c = or2::run_or2(data, prior, QuantileSpec(kLevels[l]), kStudy2Cuts, config_for(seed, l), observer);
    r.levels.push_back(digest(c, data));
    if (l == 1) r.median_chain = std::move(c);
  }
  return r;
}

Verdict criterion_or1(const std::vector<StudyResult>& runs) {
  Verdict v;
  double amin = 1, amax = 0, worst_if = 0;
  std::string worst_name;
  int ordered = 0;
  for (const auto& r : runs) {
    for (const auto& l : r.levels) {
      amin = std::min(amin, l.accept);
      amax = std::max(amax, l.accept);
      if (l.max_if > worst_if) {
        worst_if = l.max_if;
        worst_name = l.max_if_name + " at p=" + fmt(l.p) + " seed " + std::to_string(r.seed);
      }
    }
    const bool ok = r.levels[2].dic < r.levels[1].dic && r.levels[1].dic < r.levels[0].dic;
    ordered += ok;
    v.detail << " seed " << r.seed << " DIC(0.25,0.5,0.75)=(" << fmt(r.levels[0].dic) << ", " << fmt(r.levels[1].dic)
             << ", " << fmt(r.levels[2].dic) << ")" << (ok ? "" : "*") << ";";
  }
  v.detail << " acceptance in [" << fmt(amin) << ", " << fmt(amax) << "]; max IF " << fmt(worst_if) << " ("
           << worst_name << "); ordering " << ordered << "/5";
  v.require(amin >= 0.20 && amax <= 0.40, "acceptance in [0.20, 0.40]");
  v.require(worst_if < 10.0, "all IF < 10");
  v.require(ordered >= 4, "DIC ordering in >= 4 of 5 seeds");
  return v;
}

Verdict criterion_or2(const std::vector<StudyResult>& runs) {
  Verdict v;
  int dic_ok = 0, sigma_ok = 0;
  double worst_if = 0;
  std::string worst_name;
  for (const auto& r : runs) {
    const auto& lo = r.levels[0];
    const auto& hi = r.levels[2];
    const Eigen::Index s = lo.mean.size() - 1;
    dic_ok += hi.dic < lo.dic;
    sigma_ok += hi.mean[s] < lo.mean[s];
    for (const auto& l : r.levels) {
      if (l.max_if > worst_if) {
        worst_if = l.max_if;
        worst_name = l.max_if_name + " at p=" + fmt(l.p) + " seed " + std::to_string(r.seed);
      }
    }
    v.detail << " seed " << r.seed << " DIC(0.25,0.75)=(" << fmt(lo.dic) << ", " << fmt(hi.dic) << ")"
             << (hi.dic < lo.dic ? "" : "*") << " sigma=(" << fmt(lo.mean[s]) << ", " << fmt(hi.mean[s]) << ");";
  }
  v.detail << " DIC ordering " << dic_ok << "/5; sigma ordering " << sigma_ok << "/5; max IF " << fmt(worst_if) << " ("
           << worst_name << ")";
  v.require(dic_ok >= 4, "DIC(0.75) < DIC(0.25) in >= 4 of 5 seeds");
  v.require(sigma_ok == 5, "sigma(0.75) < sigma(0.25) in every seed");
  v.require(worst_if < 10.0, "all IF < 10");
  return v;
}

Verdict criterion_recovery(const std::vector<StudyResult>& runs) {
  Verdict v;
  const double target[2] = {1.63, 0.64};
  int pattern = 0, within = 0;
  for (const auto& r : runs) {
    const auto& m = r.levels[1];
    const double b1 = m.mean[1], b2 = m.mean[2];
    const bool pat = b1 > 0 && b2 > 0 && b1 > b2;
    const bool near = std::abs(b1 - target[0]) < 3 * m.sd[1] && std::abs(b2 - target[1]) < 3 * m.sd[2];
    pattern += pat;
    within += near;
    v.detail << " seed " << r.seed << " slopes=(" << fmt(b1) << " sd " << fmt(m.sd[1]) << ", " << fmt(b2) << " sd "
             << fmt(m.sd[2]) << ")" << (pat && near ? "" : "*") << ";";
  }
  v.detail << " pattern " << pattern << "/5; within 3 sd " << within << "/5";
  v.require(pattern == 5, "both slopes positive with the first larger in every seed");
  v.require(within == 5, "within 3 posterior sd of (1.63, 0.64) in every seed");
  return v;
}

bool same_bytes(const Chain& a, const Chain& b) {
  return a.draws.size() == b.draws.size() && a.loglik_trace.size() == b.loglik_trace.size() &&
         std::memcmp(a.draws.data(), b.draws.data(), sizeof(double) * a.draws.size()) == 0 &&
         std::memcmp(a.loglik_trace.data(), b.loglik_trace.data(), sizeof(double) * a.loglik_trace.size()) == 0;
}

Verdict criterion_invariants(const std::vector<StudyResult>& s1, const std::vector<StudyResult>& s2) {
  Verdict v;
  std::size_t sweeps = 0, bad = 0;
  for (const auto* runs : {&s1, &s2}) {
    for (const auto& r : *runs) {
      sweeps += r.inv.sweeps;
      bad += r.inv.violations;
    }
  }
  const std::size_t expected = 2 * 5 * 3 * McmcConfig{}.iterations;
  v.require(sweeps == expected, "every sweep observed");
  v.require(bad == 0, "no invariant violations");
  v.detail << " " << bad << " violating sweeps of " << sweeps << " observed";

  const auto& r1 = s1.front();
  const Chain c1 = or1::run_or1(r1.data, PriorSpec::defaults(3, 4), QuantileSpec(0.5), config_for(r1.seed, 1));
  const auto& r2 = s2.front();
  const Chain c2 =
      or2::run_or2(r2.data, PriorSpec::defaults(3, 3), QuantileSpec(0.5), kStudy2Cuts, config_for(r2.seed, 1));
  const bool det = same_bytes(c1, r1.median_chain) && same_bytes(c2, r2.median_chain);
  v.require(det, "seed determinism");
  v.detail << "; re-run of seed " << r1.seed << " p=0.5 byte-exact for OR_I and OR_II: " << (det ? "yes" : "no");
  return v;
}

// ---------------------------------------------------------------------------
// 7. diagnostics

Chain single_draw(const Chain& chain, const OrdinalDataset& data) {
  Chain one;
  one.meta = chain.meta;
  one.names = chain.names;
  one.draws = chain.draws.topRows(1);
  const LikelihoodParams par = params_at(one, 0);
  one.loglik_trace = Vector::Constant(1, ordinal_loglik(par.beta, par.cuts, par.scale, QuantileSpec(one.meta.p), data));
  return one;
}

Verdict criterion_diagnostics(const StudyResult& s1, const StudyResult& s2) {
  Verdict v;
  constexpr std::size_t M = 100'000;
  Rng rng(77);
  std::vector<double> iid(M), ar(M);
  for (auto& x : iid) x = rng.normal();
  double prev = rng.normal() / std::sqrt(1 - 0.25);
  for (auto& x : ar) prev = x = 0.5 * prev + rng.normal();
  const double f_iid = inefficiency_factor(iid);
  const double f_ar = inefficiency_factor(ar);
  v.require(std::abs(f_iid - 1.0) <= 0.1, "IF iid");
  v.require(std::abs(f_ar - 3.0) <= 0.45, "IF AR(1) 0.5");
  v.detail << " IF iid " << fmt(f_iid) << "; IF AR(1) 0.5 " << fmt(f_ar);

  double row_sum = 0.0;
  for (const auto* s : {&s1, &s2}) {
    for (Eigen::Index c = 1; c < s->data.k(); ++c) {
      const Vector e1 = covariate_effect(s->median_chain, s->data, c, ShiftCovariate{0.1});
      const Vector e2 = covariate_effect(s->median_chain, s->data, c, SetCovariate{0.2, 0.8});
      row_sum = std::max({row_sum, std::abs(e1.sum()), std::abs(e2.sum())});
    }
  }
  v.require(row_sum <= 1e-10, "effect rows sum to zero");
  v.detail << "; max |effect sum| " << fmt(row_sum);

  bool exact = true;
  for (const auto* s : {&s1, &s2}) {
    const Chain one = single_draw(s->median_chain, s->data);
    const DicResult d = dic(one, s->data);
    exact = exact && d.dic == -2.0 * one.loglik_trace[0] && d.p_d == 0.0;
  }
  v.require(exact, "single-draw DIC equals D(theta)");
  v.detail << "; single-draw DIC exact for OR_I and OR_II: " << (exact ? "yes" : "no");
  return v;
}

// ---------------------------------------------------------------------------
// 8. CLI round trip

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(BQROR_CLI_PATH) + " " + args + " >>" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  }
  return files;
}

// Runs the same pipeline twice with identical command lines and compares every output byte.
Verdict criterion_cli() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / "bqror_acceptance";
  const fs::path dir = root / "run";
  const fs::path log = root / "cli.log";
  const std::string data = (dir / "study1.csv").string();
  std::map<std::string, std::string> first;
  fs::remove_all(root);
  for (int pass = 1; pass <= 2; ++pass) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const int s = run_cli("simulate --study 1 --n 300 --seed 7 --out " + data, log);
    const int f = s ? -1 : run_cli("fit --data " + data + " --model or1 --keep-draws --seed 7 --out " + (dir / "fit").string(), log);
    const int e = f ? -1 : run_cli("effect --fit " + (dir / "fit").string() + " --covariate x1 --shift 0.1", log);
    v.require(s == 0 && f == 0 && e == 0, "pipeline exit codes in pass " + std::to_string(pass));
    v.detail << " pass " << pass << " exits (simulate, fit, effect)=(" << s << ", " << f << ", " << e << ");";
    if (pass == 1) first = snapshot(dir);
  }
  const auto second = snapshot(dir);
  std::size_t differing = 0;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) ++differing;
  }
  v.require(!first.empty() && first.size() == second.size() && differing == 0, "byte-identical outputs");
  v.detail << " " << first.size() << " files compared, " << differing << " differ";
  if (v.pass) fs::remove_all(root);
  return v;
}

}  // namespace

int main() {
  std::cout << "acceptance: seeds 1-5, n = 300, 12000 sweeps, 3000 burn-in" << std::endl;
  report(1, "distribution oracles", criterion_distributions());
  report(2, "Gibbs-kernel equivalence", criterion_kernels());

  std::vector<std::future<StudyResult>> f1, f2;
  for (std::uint64_t s : kSeeds) {
    f1.push_back(std::async(std::launch::async, run_study1, s));
    f2.push_back(std::async(std::launch::async, run_study2, s));
  }
  std::vector<StudyResult> s1, s2;
  for (auto& f : f1) s1.push_back(f.get());
  for (auto& f : f2) s2.push_back(f.get());

  report(3, "OR_I end-to-end on study 1", criterion_or1(s1));
  report(4, "OR_II end-to-end on study 2", criterion_or2(s2));
  report(5, "parameter recovery at p = 0.5 on study 2", criterion_recovery(s2));
  report(6, "structural invariants and determinism", criterion_invariants(s1, s2));
  report(7, "diagnostics", criterion_diagnostics(s1.front(), s2.front()));
  report(8, "CLI round trip", criterion_cli());

  std::cout << "acceptance: " << (8 - failures) << "/8 criteria pass" << std::endl;
  return failures == 0 ? 0 : 1;
}
