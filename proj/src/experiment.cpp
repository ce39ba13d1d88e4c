#include "dnnlab/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dnnlab/approx.hpp"
#include "dnnlab/calculus.hpp"
#include "dnnlab/rng.hpp"
#include "dnnlab/stats.hpp"

namespace dnnlab {

Mode mode_from_string(const std::string& name) {
  if (name == "overall") return Mode::Overall;
  if (name == "optimization") return Mode::Optimization;
  if (name == "generalization") return Mode::Generalization;
  if (name == "hoeffding") return Mode::Hoeffding;
  if (name == "approximation") return Mode::Approximation;
  if (name == "bias_variance") return Mode::BiasVariance;
  throw DomainError("unknown mode: " + name);
}

std::string mode_to_string(Mode mode) {
  switch (mode) {
    case Mode::Overall: return "overall";
    case Mode::Optimization: return "optimization";
    case Mode::Generalization: return "generalization";
    case Mode::Hoeffding: return "hoeffding";
    case Mode::Approximation: return "approximation";
    case Mode::BiasVariance: return "bias_variance";
  }
  return "overall";
}

TargetFn make_target(const std::string& name, std::uint64_t d, double a, double b, double u,
                     double v) {
  if (!(b > a) || !(v > u)) throw DomainError("make_target: need b > a, v > u");
  const double mid_u = 0.5 * (u + v);
  if (name == "coordinate-mean") {
    // u + (v-u) * mean_i (x_i - a)/(b - a); Euclidean constant (v-u)/((b-a) sqrt(d)).
    return [d, a, b, u, v](std::span<const double> x) {
      double s = 0.0;
      for (double t : x) s += (t - a) / (b - a);
      return u + (v - u) * s / static_cast<double>(d);
    };
  }
  if (name == "distance-to-center") {
    // u + min{v-u, (v-u)/(b-a) * ||x - c||_2}; constant (v-u)/(b-a).
    return [a, b, u, v](std::span<const double> x) {
      const double c = 0.5 * (a + b);
      double s = 0.0;
      for (double t : x) s += (t - c) * (t - c);
      const double r = (v - u) / (b - a) * std::sqrt(s);
      return u + std::min(v - u, r);
    };
  }
  if (name == "constant-mid") {
    return [mid_u](std::span<const double>) { return mid_u; };
  }
  throw DomainError("unknown target: " + name);
}

Architecture overall_architecture(const ProblemConfig& problem) {
  if (problem.tau < 3) {
    throw ContractError("tau >= 3 required for the (d,tau,...,tau,1) architecture");
  }
  std::vector<std::size_t> dims(problem.tau, static_cast<std::size_t>(problem.tau));
  dims.front() = static_cast<std::size_t>(problem.d);
  dims.back() = 1;
  return Architecture(std::move(dims));
}

namespace {

ProblemConfig problem_from_json(const nlohmann::json& j) {
  ProblemConfig p;
  p.d = j.at("d").get<std::uint64_t>();
  p.dfrak = j.at("dfrak").get<std::uint64_t>();
  p.k = j.at("K").get<std::uint64_t>();
  p.m = j.at("M").get<std::uint64_t>();
  p.tau = j.at("tau").get<std::uint64_t>();
  p.eps = j.at("eps").get<double>();
  p.lip = j.at("L").get<double>();
  p.a = j.at("a").get<double>();
  p.b = j.at("b").get<double>();
  p.u = j.at("u").get<double>();
  p.v = j.at("v").get<double>();
  p.big_r = j.at("R").get<double>();
  if (p.d == 0 || p.dfrak == 0 || p.k == 0 || p.m == 0) {
    throw DomainError("problem: d, dfrak, K, M must be positive");
  }
  if (!(p.eps > 0.0)) throw DomainError("problem: eps > 0 required");
  if (!(p.b > p.a)) throw DomainError("problem: b > a required");
  if (!(p.v > p.u)) throw DomainError("problem: v > u required");
  return p;
}

nlohmann::ordered_json problem_to_json(const ProblemConfig& p) {
  nlohmann::ordered_json j;
  j["d"] = p.d;
  j["dfrak"] = p.dfrak;
  j["K"] = p.k;
  j["M"] = p.m;
  j["tau"] = p.tau;
  j["eps"] = p.eps;
  j["L"] = p.lip;
  j["a"] = p.a;
  j["b"] = p.b;
  j["u"] = p.u;
  j["v"] = p.v;
  j["R"] = p.big_r;
  return j;
}

struct TrialOutcome {
  double statistic = 0.0;
  double event_value = 0.0;
  bool exceeds = false;
};

class TrialRunner {
 public:
  TrialRunner(const ExperimentConfig& cfg) : cfg_(cfg) {
    const ProblemConfig& p = cfg.problem;
    switch (cfg.mode) {
      case Mode::Overall:
      case Mode::Generalization:
        target_ = make_target(cfg.target, p.d, p.a, p.b, p.u, p.v);
        arch_.emplace(overall_architecture(p));
        break;
      case Mode::Approximation: {
        target_ = make_target(cfg.target, p.d, p.a, p.b, p.u, p.v);
        Grid grid(std::vector<double>(p.d, p.a), std::vector<double>(p.d, p.b),
                  cfg.grid_subdivisions);
        approximant_.emplace(build_grid_approximant(target_, grid, p.lip, p.u, p.v));
        break;
      }
      case Mode::BiasVariance: {
        target_ = make_target(cfg.target, p.d, p.a, p.b, p.u, p.v);
        arch_.emplace(overall_architecture(p));
        break;
      }
      case Mode::Optimization:
      case Mode::Hoeffding:
        break;
    }
  }

  TrialOutcome run(std::uint64_t t) const {
    switch (cfg_.mode) {
      case Mode::Overall: return overall_trial(t);
      case Mode::Optimization: return optimization_trial(t);
      case Mode::Generalization: return generalization_trial(t);
      case Mode::Hoeffding: return hoeffding_trial(t);
      case Mode::Approximation: return approximation_trial(t);
      case Mode::BiasVariance: return bias_variance_trial(t);
    }
    throw DomainError("unreachable mode");
  }

 private:
  TrialOutcome overall_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    Dataset data = generate_dataset(target_, p.d, p.a, p.b, p.u, p.v, p.m, seed);
    CandidatePool pool = sample_candidates(p.dfrak, p.big_r, p.k, seed);
    SelectionResult sel = select_min(pool, *arch_, p.u, p.v, data);
    VectorizedParams chosen(sel.xi, *arch_);
    TrialOutcome out;
    out.statistic = sel.risks[sel.index - 1];
    if (cfg_.error_norm == "l1") {
      out.event_value = l1_error(chosen, p.u, p.v, target_, p.d, p.a, p.b, cfg_.n_mc, seed).estimate;
      out.exceeds = out.event_value > p.eps;
    } else {
      out.event_value = l2_error(chosen, p.u, p.v, target_, p.d, p.a, p.b, cfg_.n_mc, seed).estimate;
      out.exceeds = out.event_value > p.eps * p.eps;
    }
    return out;
  }

  // E(theta) = L ||theta - center||_inf on [a,b]^dfrak; the reference point
  // attains E = 0, so the failure event is L * min_k ||Theta_k - c||_inf > eps.
  TrialOutcome optimization_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    const double center = 0.5 * (p.a + p.b);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < p.k; ++k) {
      rng::Stream stream(seed, rng::kStreamCandidates, k);
      double dist = 0.0;
      for (std::uint64_t j = 0; j < p.dfrak; ++j) {
        dist = std::max(dist, std::fabs(stream.uniform(p.a, p.b) - center));
      }
      best = std::min(best, p.lip * dist);
    }
    TrialOutcome out;
    out.statistic = best;
    out.event_value = best;
    out.exceeds = best > p.eps;
    return out;
  }

  // Finite-pool proxy for the sup event of the uniform generalization bound:
  // max over the K sampled candidates of |empirical risk - MC true risk|.
  TrialOutcome generalization_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    Dataset data = generate_dataset(target_, p.d, p.a, p.b, p.u, p.v, p.m, seed);
    CandidatePool pool = sample_candidates(p.dfrak, p.big_r, p.k, seed);
    double worst = 0.0;
    double worst_risk = 0.0;
    for (const std::vector<double>& theta : pool.thetas) {
      VectorizedParams params(theta, *arch_);
      const double emp = empirical_risk(params, p.u, p.v, data);
      const double truth =
          l2_error(params, p.u, p.v, target_, p.d, p.a, p.b, cfg_.n_mc, seed).estimate;
      const double dev = std::fabs(emp - truth);
      if (dev > worst) {
        worst = dev;
        worst_risk = emp;
      }
    }
    TrialOutcome out;
    out.statistic = worst_risk;
    out.event_value = worst;
    out.exceeds = worst >= p.eps;
    return out;
  }

  TrialOutcome hoeffding_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    rng::Stream stream(seed, rng::kStreamData, 0);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < p.m; ++i) ones += stream.next_u64() >> 63;
    const double mean = static_cast<double>(ones) / static_cast<double>(p.m);
    TrialOutcome out;
    out.statistic = mean;
    out.event_value = std::fabs(mean - 0.5);
    out.exceeds = out.event_value >= p.eps;
    return out;
  }

  TrialOutcome approximation_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    std::vector<double> x(p.d);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < cfg_.n_mc; ++i) {
      rng::Stream stream(seed, rng::kStreamEvaluation, i);
      for (std::uint64_t j = 0; j < p.d; ++j) x[j] = stream.uniform(p.a, p.b);
      const double net = realize_clipped(approximant_->params, approximant_->clip_lo,
                                         approximant_->clip_hi, x)[0];
      worst = std::max(worst, std::fabs(net - target_(x)));
    }
    TrialOutcome out;
    out.statistic = approximant_->sup_error_bound;
    out.event_value = worst;
    out.exceeds = worst > approximant_->sup_error_bound;
    return out;
  }

  TrialOutcome bias_variance_trial(std::uint64_t t) const {
    const ProblemConfig& p = cfg_.problem;
    const std::uint64_t seed = rng::derive_seed(cfg_.master_seed, rng::kStreamTrial, t);
    CandidatePool pool = sample_candidates(p.dfrak, p.big_r, 1, seed);
    VectorizedParams f_params(pool.thetas.front(), *arch_);
    const NoiseSpec noise = cfg_.noise_half_width > 0.0
                                ? NoiseSpec::uniform(cfg_.noise_half_width)
                                : NoiseSpec::none();
    const BiasVarianceResult r = bias_variance_check(f_params, p.u, p.v, target_, noise, p.d,
                                                     p.a, p.b, cfg_.n_mc, seed);
    TrialOutcome out;
    out.statistic = r.lhs;
    out.event_value = std::fabs(r.gap);
    out.exceeds = std::fabs(r.gap) > 3.0 * r.gap_std_error;
    return out;
  }

  const ExperimentConfig& cfg_;
  TargetFn target_;
  std::optional<Architecture> arch_;
  std::optional<GridApproximant> approximant_;
};

// min{1, RHS} of the mode's inequality, plus the raw log total.
void paper_bound_for_mode(const ExperimentConfig& cfg, double* bound, double* bound_log,
                          bool* vacuous) {
  const ProblemConfig& p = cfg.problem;
  switch (cfg.mode) {
    case Mode::Overall: {
      const BoundReport report = overall_bound(p);
      *bound = report.clamped_total;
      *vacuous = report.vacuous;
      const double hi = std::max(report.log_optimization_term, report.log_generalization_term);
      const double lo = std::min(report.log_optimization_term, report.log_generalization_term);
      *bound_log = hi + std::log1p(std::exp(lo - hi));
      return;
    }
    case Mode::Optimization:
      *bound_log = optimization_bound_log(p.dfrak, p.k, p.a, p.b, p.lip, p.eps);
      break;
    case Mode::Generalization:
      *bound_log = generalization_bound_log(overall_architecture(p), p.dfrak, p.m, p.big_r, p.u,
                                            p.v, std::max(std::fabs(p.a), std::fabs(p.b)), p.eps);
      break;
    case Mode::Hoeffding: {
      std::vector<std::pair<double, double>> ranges(p.m, {0.0, 1.0});
      *bound_log = hoeffding_bound_log(p.eps, p.m, ranges);
      break;
    }
    case Mode::Approximation:
      // Deterministic inequality; failures are never acceptable.
      *bound = 0.0;
      *bound_log = -std::numeric_limits<double>::infinity();
      *vacuous = false;
      return;
    case Mode::BiasVariance:
      // No paper probability bound: allowance for |gap| > 3 SE exceedances.
      *bound = 0.01;
      *bound_log = std::log(0.01);
      *vacuous = false;
      return;
  }
  *vacuous = *bound_log >= 0.0;
  *bound = *vacuous ? 1.0 : std::exp(*bound_log);
  if (*bound > 1.0) *bound = 1.0;
}

void informative_regime(const ProblemConfig& p, ExperimentSummary* summary) {
  // Smallest M with gen term < 1/2 and smallest K with opt term < 1/2.
  const double tau = static_cast<double>(p.tau);
  const double vu = p.v - p.u;
  const double ln_c2 = std::log(128.0) + tau * std::log(tau + 1.0) +
                       tau * std::log(p.big_r) + std::log(vu) - 2.0 * std::log(p.eps);
  const double eps2 = p.eps * p.eps;
  const double vu2 = vu * vu;
  const double m_needed = (std::log(4.0) + static_cast<double>(p.dfrak) * std::max(0.0, ln_c2)) *
                          32.0 * vu2 * vu2 / (eps2 * eps2);
  if (m_needed < 9.2e18) {
    summary->informative_m = static_cast<std::uint64_t>(std::ceil(m_needed)) + 1;
  }
  const double ln_c1 = std::log(16.0) + std::log(vu) + tau * std::log(tau + 1.0) +
                       tau * std::log(p.big_r);
  const double ln_ratio =
      2.0 * static_cast<double>(p.dfrak) * std::log(p.eps) - static_cast<double>(p.dfrak) * ln_c1;
  const double k_needed = std::log(2.0) / std::exp(std::min(0.0, ln_ratio));
  if (k_needed < 9.2e18) {
    summary->informative_k = static_cast<std::uint64_t>(std::ceil(k_needed)) + 1;
  }
}

}  // namespace

bool verdict_pass(double wilson_lo, double bound) {
  return wilson_lo <= std::min(1.0, bound);
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  cfg.mode = mode_from_string(j.at("mode").get<std::string>());
  cfg.problem = problem_from_json(j.at("problem"));
  cfg.target = j.value("target", std::string("coordinate-mean"));
  cfg.trials = j.at("trials").get<std::uint64_t>();
  cfg.n_mc = j.value("n_mc", std::uint64_t{1000});
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  cfg.out = j.value("out", std::string("report"));
  cfg.error_norm = j.value("error_norm", std::string("l2"));
  cfg.threads = j.value("threads", 1u);
  cfg.grid_subdivisions = j.value("grid_N", std::uint64_t{4});
  cfg.noise_half_width = j.value("noise_half_width", 0.0);
  if (cfg.trials == 0) throw DomainError("config: trials >= 1 required");
  if (cfg.n_mc < 2) throw DomainError("config: n_mc >= 2 required");
  if (cfg.error_norm != "l2" && cfg.error_norm != "l1") {
    throw DomainError("config: error_norm must be \"l2\" or \"l1\"");
  }
  if (cfg.threads == 0) cfg.threads = 1;

  // Every hypothesis of the referenced result is checked up front; the
  // exact-arithmetic verdict names the violated inequality.
  if (cfg.mode == Mode::Overall) {
    const HypothesisCheck hyp = check_hypotheses(cfg.problem);
    if (!hyp.violation.empty()) throw ContractError("config: " + hyp.violation);
  } else if (cfg.mode == Mode::Generalization) {
    const std::uint64_t need = overall_architecture(cfg.problem).param_count();
    if (cfg.problem.dfrak < need) {
      throw ContractError(
          "config: dfrak >= tau(d+1) + (tau-3)tau(tau+1) + tau + 1 violated: dfrak = " +
          std::to_string(cfg.problem.dfrak) + ", required >= " + std::to_string(need));
    }
    if (!(cfg.problem.big_r >= 1.0)) {
      throw ContractError("config: R >= 1 violated: R = " + std::to_string(cfg.problem.big_r));
    }
  }
  if (cfg.mode == Mode::Approximation) {
    // (grid_N+1)^d lattice points; keep the interpolation net at desk scale
    const ParamBudget budget = param_budget_grid(cfg.problem.d, cfg.grid_subdivisions);
    if (budget.exact > 100000000) {
      throw ContractError("config: grid interpolation needs " + budget.exact.get_str() +
                          " parameters; reduce d or grid_N");
    }
  }
  if (cfg.mode == Mode::Overall || cfg.mode == Mode::Generalization ||
      cfg.mode == Mode::Approximation || cfg.mode == Mode::BiasVariance) {
    make_target(cfg.target, cfg.problem.d, cfg.problem.a, cfg.problem.b, cfg.problem.u,
                cfg.problem.v);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["mode"] = mode_to_string(cfg.mode);
  j["problem"] = problem_to_json(cfg.problem);
  j["target"] = cfg.target;
  j["trials"] = cfg.trials;
  j["n_mc"] = cfg.n_mc;
  j["master_seed"] = cfg.master_seed;
  j["out"] = cfg.out;
  j["error_norm"] = cfg.error_norm;
  j["threads"] = cfg.threads;
  j["grid_N"] = cfg.grid_subdivisions;
  j["noise_half_width"] = cfg.noise_half_width;
  return j.dump(2) + "\n";
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::vector<TrialRecord>* records) {
  TrialRunner runner(cfg);
  std::vector<TrialRecord> local(cfg.trials);

  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      const auto start = std::chrono::steady_clock::now();
      const TrialOutcome outcome = runner.run(t);
      const auto stop = std::chrono::steady_clock::now();
      TrialRecord& rec = local[t];
      rec.index = t;
      rec.selected_risk = outcome.statistic;
      rec.l2_estimate = outcome.event_value;
      rec.exceeds = outcome.exceeds;
      rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    }
  };

  const unsigned n_threads = std::min<std::uint64_t>(cfg.threads, cfg.trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  ExperimentSummary summary;
  summary.mode = mode_to_string(cfg.mode);
  summary.trials = cfg.trials;
  summary.master_seed = cfg.master_seed;
  for (const TrialRecord& rec : local) summary.failures += rec.exceeds ? 1 : 0;
  summary.freq = static_cast<double>(summary.failures) / static_cast<double>(cfg.trials);
  const WilsonInterval wilson = wilson95(summary.failures, cfg.trials);
  summary.wilson_lo = wilson.lo;
  summary.wilson_hi = wilson.hi;
  paper_bound_for_mode(cfg, &summary.paper_bound, &summary.paper_bound_log, &summary.vacuous);
  summary.verdict = verdict_pass(summary.wilson_lo, summary.paper_bound) ? "PASS" : "FAIL";
  if (cfg.mode == Mode::Overall && summary.vacuous) informative_regime(cfg.problem, &summary);

  if (records) *records = std::move(local);
  return summary;
}

void emit_report(const std::vector<TrialRecord>& records, const ExperimentSummary& summary,
                 const std::filesystem::path& out_prefix) {
  std::filesystem::path csv_path = out_prefix;
  csv_path += ".csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw DomainError("cannot open " + csv_path.string() + " for writing");
  csv << "trial,selected_risk,event_statistic,indicator\n";
  char buf[64];
  for (const TrialRecord& rec : records) {
    csv << rec.index << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", rec.selected_risk);
    csv << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", rec.l2_estimate);
    csv << buf << ',' << (rec.exceeds ? 1 : 0) << '\n';
  }
  if (!csv.good()) throw DomainError("write failed: " + csv_path.string());

  nlohmann::ordered_json j;
  j["mode"] = summary.mode;
  j["trials"] = summary.trials;
  j["failures"] = summary.failures;
  j["freq"] = summary.freq;
  j["wilson_lo"] = summary.wilson_lo;
  j["wilson_hi"] = summary.wilson_hi;
  j["paper_bound"] = summary.paper_bound;
  j["paper_bound_log"] = summary.paper_bound_log;
  j["vacuous"] = summary.vacuous;
  j["verdict"] = summary.verdict;
  j["seeds"] = {{"master", summary.master_seed}};
  if (summary.informative_m) j["informative_regime"]["min_M"] = *summary.informative_m;
  if (summary.informative_k) j["informative_regime"]["min_K"] = *summary.informative_k;

  std::filesystem::path json_path = out_prefix;
  json_path += ".json";
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw DomainError("cannot open " + json_path.string() + " for writing");
  js << j.dump(2) << "\n";
  if (!js.good()) throw DomainError("write failed: " + json_path.string());
}

}  // namespace dnnlab
