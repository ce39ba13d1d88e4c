#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnnlab/approx.hpp"
#include "dnnlab/bounds.hpp"
#include "dnnlab/experiment.hpp"
#include "dnnlab/net_io.hpp"
#include "dnnlab/rng.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitFail = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dnnlab::DomainError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return nlohmann::json::parse(ss.str());
}

int cmd_experiment(const std::string& config_path, std::optional<std::uint64_t> seed,
                   std::optional<std::string> out, std::optional<unsigned> threads) {
  dnnlab::ExperimentConfig cfg = dnnlab::load_config(config_path);
  if (seed) cfg.master_seed = *seed;
  if (out) cfg.out = *out;
  if (threads) cfg.threads = *threads == 0 ? 1 : *threads;

  std::vector<dnnlab::TrialRecord> records;
  const dnnlab::ExperimentSummary summary = dnnlab::run_experiment(cfg, &records);
  dnnlab::emit_report(records, summary, cfg.out);

  double wall = 0.0;
  for (const dnnlab::TrialRecord& r : records) wall += r.wall_ms;
  std::fprintf(stderr, "%s: %llu trials, %.1f ms total trial time\n", summary.mode.c_str(),
               static_cast<unsigned long long>(summary.trials), wall);
  std::printf("mode=%s freq=%.6g wilson=[%.6g,%.6g] bound=%.6g%s verdict=%s\n",
              summary.mode.c_str(), summary.freq, summary.wilson_lo, summary.wilson_hi,
              summary.paper_bound, summary.vacuous ? " (vacuous)" : "", summary.verdict.c_str());
  return summary.verdict == "PASS" ? kExitPass : kExitFail;
}

int cmd_verify_bounds(const std::string& config_path) {
  const nlohmann::json doc = read_json(config_path);
  const nlohmann::json& pj = doc.contains("problem") ? doc.at("problem") : doc;
  dnnlab::ProblemConfig p;
  p.d = pj.at("d").get<std::uint64_t>();
  p.dfrak = pj.at("dfrak").get<std::uint64_t>();
  p.k = pj.at("K").get<std::uint64_t>();
  p.m = pj.at("M").get<std::uint64_t>();
  p.tau = pj.at("tau").get<std::uint64_t>();
  p.eps = pj.at("eps").get<double>();
  p.lip = pj.at("L").get<double>();
  p.a = pj.at("a").get<double>();
  p.b = pj.at("b").get<double>();
  p.u = pj.at("u").get<double>();
  p.v = pj.at("v").get<double>();
  p.big_r = pj.at("R").get<double>();

  const dnnlab::HypothesisCheck hyp = dnnlab::check_hypotheses(p);
  nlohmann::ordered_json out;
  out["hypotheses"] = {{"tau_ok", hyp.tau_ok}, {"dfrak_ok", hyp.dfrak_ok}, {"r_ok", hyp.r_ok}};
  if (!hyp.violation.empty()) {
    out["error"] = hyp.violation;
    std::cout << out.dump(2) << "\n";
    return kExitConfigError;
  }
  const dnnlab::BoundReport report = dnnlab::overall_bound(p);
  out["log_opt"] = report.log_optimization_term;
  out["log_gen"] = report.log_generalization_term;
  out["total"] = report.clamped_total;
  out["vacuous"] = report.vacuous;
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::string> out) {
  dnnlab::ExperimentConfig cfg = dnnlab::load_config(config_path);
  if (seed) cfg.master_seed = *seed;
  const dnnlab::ProblemConfig& p = cfg.problem;
  const dnnlab::Architecture arch = dnnlab::overall_architecture(p);

  const dnnlab::TargetFn phi = dnnlab::make_target(cfg.target, p.d, p.a, p.b, p.u, p.v);
  const std::uint64_t seed0 = dnnlab::rng::derive_seed(cfg.master_seed, dnnlab::rng::kStreamTrial, 0);
  const dnnlab::Dataset data =
      dnnlab::generate_dataset(phi, p.d, p.a, p.b, p.u, p.v, p.m, seed0);
  const dnnlab::CandidatePool pool = dnnlab::sample_candidates(p.dfrak, p.big_r, p.k, seed0);
  const dnnlab::SelectionResult sel = dnnlab::select_min(pool, arch, p.u, p.v, data);
  const dnnlab::VectorizedParams chosen(sel.xi, arch);
  const dnnlab::MonteCarloEstimate err =
      dnnlab::l2_error(chosen, p.u, p.v, phi, p.d, p.a, p.b, cfg.n_mc, seed0);

  nlohmann::ordered_json j;
  j["index"] = sel.index;
  j["empirical_risk"] = sel.risks[sel.index - 1];
  j["l2_error"] = err.estimate;
  j["l2_error_std_error"] = err.std_error;
  j["seed"] = cfg.master_seed;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (out) {
    std::ofstream f(*out, std::ios::binary);
    if (!f) throw dnnlab::DomainError("cannot open " + *out + " for writing");
    f << text;
  }
  return kExitPass;
}

int cmd_build_approx(const std::string& config_path, std::optional<std::string> out) {
  const nlohmann::json doc = read_json(config_path);
  const std::uint64_t d = doc.at("d").get<std::uint64_t>();
  std::vector<double> p = doc.at("p").get<std::vector<double>>();
  std::vector<double> q = doc.at("q").get<std::vector<double>>();
  if (p.size() != d || q.size() != d) throw dnnlab::ShapeError("build-approx: p/q must have d entries");
  const std::uint64_t n = doc.at("grid_N").get<std::uint64_t>();
  const double lip = doc.at("L").get<double>();
  const double u = doc.at("u").get<double>();
  const double v = doc.at("v").get<double>();
  const std::string target = doc.value("target", std::string("coordinate-mean"));
  const std::uint64_t check_samples = doc.value("check_samples", std::uint64_t{0});
  const std::uint64_t seed = doc.value("master_seed", std::uint64_t{0});

  double box_a = p.front(), box_b = q.front();
  for (std::size_t i = 0; i < d; ++i) {
    box_a = std::min(box_a, p[i]);
    box_b = std::max(box_b, q[i]);
  }
  const dnnlab::TargetFn f = dnnlab::make_target(target, d, box_a, box_b, u, v);
  const dnnlab::Grid grid(p, q, n);
  const dnnlab::GridApproximant approx = dnnlab::build_grid_approximant(f, grid, lip, u, v);

  const std::string net_path = out ? *out : "approximant.json";
  dnnlab::save_network({approx.params, {{approx.clip_lo, approx.clip_hi}}}, net_path);

  nlohmann::ordered_json j;
  j["network"] = net_path;
  j["dims"] = approx.params.arch.dims();
  j["param_count"] = approx.params.arch.param_count();
  j["sup_error_bound"] = approx.sup_error_bound;
  if (check_samples > 0) {
    double worst = 0.0;
    std::vector<double> x(d);
    for (std::uint64_t i = 0; i < check_samples; ++i) {
      dnnlab::rng::Stream stream(seed, dnnlab::rng::kStreamEvaluation, i);
      for (std::uint64_t t = 0; t < d; ++t) x[t] = stream.uniform(grid.p[t], grid.q[t]);
      const double net = dnnlab::realize_clipped(approx.params, approx.clip_lo, approx.clip_hi, x)[0];
      worst = std::max(worst, std::fabs(net - f(x)));
    }
    j["measured_sup_error"] = worst;
  }
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    CLI::App app{"DNN error-analysis lab: constructive ReLU calculus, closed-form error "
                 "bounds, and a minimum Monte Carlo training harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;

    auto add_common = [&](CLI::App* sub, bool with_threads) {
      sub->add_option("--config", config_path, "JSON config path")->required();
      sub->add_option("--seed", seed, "master seed override");
      sub->add_option("--out", out, "output path (prefix for experiment reports)");
      if (with_threads) sub->add_option("--threads", threads, "worker threads");
    };

    CLI::App* experiment = app.add_subcommand("experiment", "run seeded trials against a bound");
    add_common(experiment, true);
    CLI::App* verify = app.add_subcommand("verify-bounds", "evaluate the overall bound as JSON");
    verify->add_option("--config", config_path, "JSON config path")->required();
    CLI::App* train = app.add_subcommand("train", "one minimum Monte Carlo selection run");
    add_common(train, false);
    CLI::App* build = app.add_subcommand("build-approx", "build a grid interpolation network");
    add_common(build, false);

    CLI11_PARSE(app, argc, argv);

    if (experiment->parsed()) return cmd_experiment(config_path, seed, out, threads);
    if (verify->parsed()) return cmd_verify_bounds(config_path);
    if (train->parsed()) return cmd_train(config_path, seed, out);
    if (build->parsed()) return cmd_build_approx(config_path, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}
