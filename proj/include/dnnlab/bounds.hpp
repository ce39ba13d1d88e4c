#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dnnlab/net.hpp"

namespace dnnlab {

// All probability bounds are carried as natural logs; exponents in these
// formulas overflow doubles already at tiny configurations.

// log of the covering-number bound for the radius-R sup-norm ball:
// 0 if r >= R, else dim * log(4R/r).
double covering_number_ball_log(std::uint64_t dim, double big_r, double r);

struct CubeCover {
  std::uint64_t subdivisions;  // smallest N with mesh d(b-a)/(2N) <= r
  mpz_class count;             // (N+1)^d
  double log_count;
};

// Grid-based r-cover of [a,b]^d in the l1 metric; an upper bound on the
// covering number matching the derivation of the overall bound.
CubeCover covering_number_cube_l1(std::uint64_t d, double a, double b, double r);

// log(2) - 2 eps^2 N^2 / sum (b_n - a_n)^2.
double hoeffding_bound_log(double eps, std::uint64_t n,
                           std::span<const std::pair<double, double>> ranges);

// log of 2 max{1, [32 L max{1,b} (||l||_inf + 1)^L R^L (v-u) / eps]^dfrak}
//        * exp(-eps^2 M / (2 (v-u)^4)),  L = depth(arch).
double generalization_bound_log(const Architecture& arch, std::uint64_t dfrak, std::uint64_t m,
                                double big_r, double u, double v, double box_b, double eps);

// -K min{1, (eps / (Lip (b-a)))^dfrak}, the log of the minimum Monte Carlo
// failure bound for uniform samples on [a,b]^dfrak.
double optimization_bound_log(std::uint64_t dfrak, std::uint64_t k, double a, double b,
                              double lip, double eps);

// L max{1,|a|,|b|} (||l||_inf + 1)^L max{1,R}^{L-1}: the sup-norm distance of
// two realizations over [a,b]^{l0} is at most this times ||theta-vartheta||_inf
// for parameters in [-R,R]^dfrak (clipped or not).
double lipschitz_coefficient(const Architecture& arch, double a, double b, double big_r);

struct ProblemConfig {
  std::uint64_t d = 1;
  std::uint64_t dfrak = 1;
  std::uint64_t k = 1;
  std::uint64_t m = 1;
  std::uint64_t tau = 3;
  double eps = 1.0;
  double lip = 1.0;
  double a = 0.0;
  double b = 1.0;
  double u = 0.0;
  double v = 1.0;
  double big_r = 1.0;
};

struct HypothesisCheck {
  bool tau_ok = false;    // tau >= 2d (2dL(b-a)/eps + 2)^d, exact rationals
  bool dfrak_ok = false;  // dfrak >= tau(d+1) + (tau-3)tau(tau+1) + tau + 1
  bool r_ok = false;      // R >= max{1, L, |a|, |b|, 2|u|, 2|v|}
  std::string violation;  // first violated inequality, with both sides
};

// Exact-arithmetic check of the overall bound's hypotheses; float rounding
// never flips a verdict.
HypothesisCheck check_hypotheses(const ProblemConfig& cfg);

struct BoundReport {
  double log_optimization_term = 0.0;
  double log_generalization_term = 0.0;
  bool approx_threshold_ok = false;
  double clamped_total = 1.0;  // min{1, exp(log_opt) + exp(log_gen)}
  bool vacuous = true;         // raw sum >= 1
};

// The overall probability bound with explicit constants:
//   exp(-K min{1, eps^{2 dfrak} / (16 (v-u) (tau+1)^tau R^tau)^dfrak})
// + 2 exp(dfrak ln(max{1, 128 (tau+1)^tau R^tau (v-u) / eps^2})
//         - eps^4 M / (32 (v-u)^4)).
// Throws ContractError naming the violated hypothesis if the config fails.
BoundReport overall_bound(const ProblemConfig& cfg);

// Generic-constant form of the overall bound, for eps in (0, sqrt(v-u)]:
//   exp(-K (c tau)^{-tau dfrak} eps^{2 dfrak})
// + 2 exp(dfrak ln((c tau)^tau eps^-2) - eps^4 M / c)
// with c = max{32 (v-u)^4, 256 (v-u+1) R}. This is the explicit witness for
// the existential constant of the headline statement; it is derived from the
// explicit form by enlarging both constants, so it never undercuts
// overall_bound and the default evaluation path stays with overall_bound.
BoundReport overall_bound_generic_c(const ProblemConfig& cfg);

// (v-u) * total^{1/p} + eps for the L^p distance, p >= 1, eps <= sqrt(v-u).
double lp_error_bound(const ProblemConfig& cfg, double p);

// The same map with the probability total supplied directly.
double lp_error_from_total(double total, double v_minus_u, double eps, double p);

// Stable min{1, e^a + e^b} and the raw-sum >= 1 test, shared with reports.
double clamped_exp_sum(double log_a, double log_b, bool* vacuous);

}  // namespace dnnlab
