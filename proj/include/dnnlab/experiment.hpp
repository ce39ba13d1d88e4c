#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dnnlab/bounds.hpp"
#include "dnnlab/train.hpp"

namespace dnnlab {

enum class Mode {
  Overall,
  Optimization,
  Generalization,
  Hoeffding,
  Approximation,
  BiasVariance,
};

Mode mode_from_string(const std::string& name);
std::string mode_to_string(Mode mode);

struct ExperimentConfig {
  Mode mode = Mode::Overall;
  ProblemConfig problem;
  std::string target = "coordinate-mean";
  std::uint64_t trials = 1;
  std::uint64_t n_mc = 1000;
  std::uint64_t master_seed = 0;
  std::string out = "report";
  std::string error_norm = "l2";  // "l2" (Thm-4.4 event) or "l1"
  unsigned threads = 1;
  std::uint64_t grid_subdivisions = 4;  // approximation mode
  double noise_half_width = 0.0;        // bias_variance mode
};

// Parses and validates a JSON config; hypothesis inequalities are checked
// with exact arithmetic and violations name the inequality with both sides.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct TrialRecord {
  std::uint64_t index = 0;
  double selected_risk = 0.0;  // per-mode statistic, see README
  double l2_estimate = 0.0;    // per-mode event statistic
  bool exceeds = false;        // the failure-event indicator
  double wall_ms = 0.0;        // not serialized: reports must be reproducible
};

struct ExperimentSummary {
  std::string mode;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double freq = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double paper_bound = 1.0;      // min{1, RHS}
  double paper_bound_log = 0.0;  // raw log of the RHS total
  bool vacuous = false;
  std::string verdict;  // "PASS" or "FAIL"
  std::uint64_t master_seed = 0;
  // Smallest M/K that make the bound informative at the configured eps
  // (overall mode, reported when the bound is vacuous).
  std::optional<std::uint64_t> informative_m;
  std::optional<std::uint64_t> informative_k;
};

// PASS iff the Wilson lower confidence bound does not exceed min{1, bound}.
bool verdict_pass(double wilson_lo, double bound);

// Runs `trials` seeded independent trials of the configured mode, fills
// records (ordered by index regardless of scheduling) and the summary.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::vector<TrialRecord>* records);

// CSV of the trial records plus a JSON summary; both byte-reproducible for a
// fixed config and master seed.
void emit_report(const std::vector<TrialRecord>& records, const ExperimentSummary& summary,
                 const std::filesystem::path& out_prefix);

// Named built-in targets; every target maps [a,b]^d into [u,v] and is
// Lipschitz with the declared constant for the Euclidean norm.
TargetFn make_target(const std::string& name, std::uint64_t d, double a, double b, double u,
                     double v);

// The (d, tau, ..., tau, 1) architecture with tau entries; requires tau >= 3.
Architecture overall_architecture(const ProblemConfig& problem);

}  // namespace dnnlab
