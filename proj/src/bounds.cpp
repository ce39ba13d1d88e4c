#include "dnnlab/bounds.hpp"

#include <cmath>
#include <sstream>

namespace dnnlab {

double covering_number_ball_log(std::uint64_t dim, double big_r, double r) {
  if (!(big_r > 0.0) || !(r > 0.0)) throw DomainError("covering_number_ball: R, r > 0");
  if (r >= big_r) return 0.0;
  return static_cast<double>(dim) * std::log(4.0 * big_r / r);
}

CubeCover covering_number_cube_l1(std::uint64_t d, double a, double b, double r) {
  if (!(b > a)) throw DomainError("covering_number_cube_l1: b > a");
  if (!(r > 0.0)) throw DomainError("covering_number_cube_l1: r > 0");
  if (d == 0) throw DomainError("covering_number_cube_l1: d >= 1");
  // Smallest N with d(b-a)/(2N) <= r, i.e. N = ceil(d(b-a)/(2r)), at least 1.
  mpq_class q = mpq_class(d) * (mpq_class(b) - mpq_class(a)) / (2 * mpq_class(r));
  mpz_class n_z;
  mpz_cdiv_q(n_z.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (n_z < 1) n_z = 1;
  if (!n_z.fits_ulong_p()) throw DomainError("covering_number_cube_l1: N overflows");
  const std::uint64_t n = n_z.get_ui();
  mpz_class count;
  mpz_ui_pow_ui(count.get_mpz_t(), static_cast<unsigned long>(n + 1),
                static_cast<unsigned long>(d));
  const double log_count = static_cast<double>(d) * std::log(static_cast<double>(n) + 1.0);
  return CubeCover{n, std::move(count), log_count};
}

double hoeffding_bound_log(double eps, std::uint64_t n,
                           std::span<const std::pair<double, double>> ranges) {
  if (n == 0 || ranges.size() != n) throw ShapeError("hoeffding_bound: need N ranges");
  double denom = 0.0;
  for (const auto& [lo, hi] : ranges) {
    if (!(hi >= lo)) throw DomainError("hoeffding_bound: b_n >= a_n required");
    denom += (hi - lo) * (hi - lo);
  }
  if (denom == 0.0) throw ContractError("hoeffding_bound: all ranges degenerate");
  const double nn = static_cast<double>(n);
  return std::log(2.0) - 2.0 * eps * eps * nn * nn / denom;
}

double generalization_bound_log(const Architecture& arch, std::uint64_t dfrak, std::uint64_t m,
                                double big_r, double u, double v, double box_b, double eps) {
  if (!(big_r >= 1.0)) throw ContractError("generalization_bound: R >= 1 required");
  if (arch.out_dim() != 1) throw ContractError("generalization_bound: out_dim must be 1");
  if (arch.param_count() > dfrak) {
    throw ContractError("generalization_bound: param_count(arch) <= dfrak required");
  }
  if (!(v > u) || !(eps > 0.0) || !(box_b > 0.0)) {
    throw DomainError("generalization_bound: need v > u, eps > 0, b > 0");
  }
  const double depth = static_cast<double>(arch.depth());
  const double bracket_log = std::log(32.0) + std::log(depth) + std::log(std::max(1.0, box_b)) +
                             depth * std::log(static_cast<double>(arch.max_width()) + 1.0) +
                             depth * std::log(big_r) + std::log(v - u) - std::log(eps);
  const double vu2 = (v - u) * (v - u);
  return std::log(2.0) + static_cast<double>(dfrak) * std::max(0.0, bracket_log) -
         eps * eps * static_cast<double>(m) / (2.0 * vu2 * vu2);
}

double optimization_bound_log(std::uint64_t dfrak, std::uint64_t k, double a, double b,
                              double lip, double eps) {
  if (k == 0) throw ContractError("optimization_bound: K >= 1 required");
  if (!(b > a)) throw DomainError("optimization_bound: b > a required");
  if (!(lip > 0.0) || !(eps > 0.0)) throw DomainError("optimization_bound: Lip, eps > 0");
  const double log_ratio = std::log(eps) - std::log(lip) - std::log(b - a);
  const double kk = static_cast<double>(k);
  if (log_ratio >= 0.0) return -kk;
  return -kk * std::exp(static_cast<double>(dfrak) * log_ratio);
}

double lipschitz_coefficient(const Architecture& arch, double a, double b, double big_r) {
  if (!(b >= a)) throw DomainError("lipschitz_coefficient: b >= a required");
  if (!(big_r > 0.0)) throw DomainError("lipschitz_coefficient: R > 0 required");
  const double depth = static_cast<double>(arch.depth());
  const double box = std::max({1.0, std::fabs(a), std::fabs(b)});
  const double width = static_cast<double>(arch.max_width()) + 1.0;
  return depth * box * std::pow(width, depth) * std::pow(std::max(1.0, big_r), depth - 1.0);
}

namespace {

std::string rational_str(const mpq_class& q) {
  std::ostringstream os;
  os << q.get_d();
  return os.str();
}

}  // namespace

HypothesisCheck check_hypotheses(const ProblemConfig& cfg) {
  HypothesisCheck out;
  if (!(cfg.b > cfg.a) || !(cfg.v > cfg.u) || !(cfg.eps > 0.0) || cfg.lip < 0.0) {
    throw DomainError("check_hypotheses: need b > a, v > u, eps > 0, L >= 0");
  }
  if (cfg.tau < 3) throw DomainError("check_hypotheses: tau >= 3 required");

  // tau >= 2d (2dL(b-a)/eps + 2)^d with exact rational arithmetic.
  mpq_class base = 2 * mpq_class(cfg.d) * mpq_class(cfg.lip) *
                       (mpq_class(cfg.b) - mpq_class(cfg.a)) / mpq_class(cfg.eps) +
                   2;
  mpq_class tau_rhs;
  mpz_pow_ui(tau_rhs.get_num().get_mpz_t(), base.get_num().get_mpz_t(),
             static_cast<unsigned long>(cfg.d));
  mpz_pow_ui(tau_rhs.get_den().get_mpz_t(), base.get_den().get_mpz_t(),
             static_cast<unsigned long>(cfg.d));
  tau_rhs *= 2 * mpq_class(cfg.d);
  tau_rhs.canonicalize();
  out.tau_ok = mpq_class(cfg.tau) >= tau_rhs;

  // dfrak >= tau(d+1) + (tau-3)tau(tau+1) + tau + 1, integers.
  const mpz_class tz(static_cast<unsigned long>(cfg.tau));
  const mpz_class dz(static_cast<unsigned long>(cfg.d));
  const mpz_class dfrak_rhs = tz * (dz + 1) + (tz - 3) * tz * (tz + 1) + tz + 1;
  out.dfrak_ok = mpz_class(static_cast<unsigned long>(cfg.dfrak)) >= dfrak_rhs;

  const double r_min = std::max({1.0, cfg.lip, std::fabs(cfg.a), std::fabs(cfg.b),
                                 2.0 * std::fabs(cfg.u), 2.0 * std::fabs(cfg.v)});
  out.r_ok = cfg.big_r >= r_min;

  if (!out.tau_ok) {
    out.violation = "tau >= 2d(2dL(b-a)/eps + 2)^d violated: tau = " + std::to_string(cfg.tau) +
                    ", required >= " + rational_str(tau_rhs);
  } else if (!out.dfrak_ok) {
    out.violation = "dfrak >= tau(d+1) + (tau-3)tau(tau+1) + tau + 1 violated: dfrak = " +
                    std::to_string(cfg.dfrak) + ", required >= " + dfrak_rhs.get_str();
  } else if (!out.r_ok) {
    out.violation = "R >= max{1, L, |a|, |b|, 2|u|, 2|v|} violated: R = " +
                    std::to_string(cfg.big_r) + ", required >= " + std::to_string(r_min);
  }
  return out;
}

double clamped_exp_sum(double log_a, double log_b, bool* vacuous) {
  const double hi = std::max(log_a, log_b);
  double total;
  if (hi >= 0.0) {
    total = 1.0;
    if (vacuous) *vacuous = true;
  } else {
    total = std::exp(log_a) + std::exp(log_b);
    if (vacuous) *vacuous = total >= 1.0;
    if (total > 1.0) total = 1.0;
  }
  return total;
}

BoundReport overall_bound(const ProblemConfig& cfg) {
  HypothesisCheck hyp = check_hypotheses(cfg);
  if (!hyp.violation.empty()) throw ContractError("overall_bound: " + hyp.violation);

  const double dfrak = static_cast<double>(cfg.dfrak);
  const double tau = static_cast<double>(cfg.tau);
  const double vu = cfg.v - cfg.u;

  // ln of 16 (v-u) (tau+1)^tau R^tau
  const double ln_c1 =
      std::log(16.0) + std::log(vu) + tau * std::log(tau + 1.0) + tau * std::log(cfg.big_r);
  const double ln_ratio = 2.0 * dfrak * std::log(cfg.eps) - dfrak * ln_c1;
  const double kk = static_cast<double>(cfg.k);
  const double log_opt = ln_ratio >= 0.0 ? -kk : -kk * std::exp(ln_ratio);

  // ln of 128 (tau+1)^tau R^tau (v-u) / eps^2
  const double ln_c2 = std::log(128.0) + tau * std::log(tau + 1.0) + tau * std::log(cfg.big_r) +
                       std::log(vu) - 2.0 * std::log(cfg.eps);
  const double eps2 = cfg.eps * cfg.eps;
  const double vu2 = vu * vu;
  const double log_gen = std::log(2.0) + dfrak * std::max(0.0, ln_c2) -
                         eps2 * eps2 * static_cast<double>(cfg.m) / (32.0 * vu2 * vu2);

  BoundReport report;
  report.log_optimization_term = log_opt;
  report.log_generalization_term = log_gen;
  report.approx_threshold_ok = hyp.tau_ok;
  report.clamped_total = clamped_exp_sum(log_opt, log_gen, &report.vacuous);
  return report;
}

BoundReport overall_bound_generic_c(const ProblemConfig& cfg) {
  HypothesisCheck hyp = check_hypotheses(cfg);
  if (!hyp.violation.empty()) throw ContractError("overall_bound_generic_c: " + hyp.violation);
  const double vu = cfg.v - cfg.u;
  if (!(cfg.eps <= std::sqrt(vu))) {
    throw ContractError("overall_bound_generic_c: eps in (0, sqrt(v-u)] required");
  }
  const double vu2 = vu * vu;
  const double c = std::max(32.0 * vu2 * vu2, 256.0 * (vu + 1.0) * cfg.big_r);
  const double tau = static_cast<double>(cfg.tau);
  const double dfrak = static_cast<double>(cfg.dfrak);

  // -K (c tau)^{-tau dfrak} eps^{2 dfrak}, assembled in log space
  const double ln_ratio = 2.0 * dfrak * std::log(cfg.eps) - tau * dfrak * std::log(c * tau);
  const double log_opt = -static_cast<double>(cfg.k) * std::exp(ln_ratio);

  const double eps2 = cfg.eps * cfg.eps;
  const double log_gen = std::log(2.0) + dfrak * (tau * std::log(c * tau) - std::log(eps2)) -
                         eps2 * eps2 * static_cast<double>(cfg.m) / c;

  BoundReport report;
  report.log_optimization_term = log_opt;
  report.log_generalization_term = log_gen;
  report.approx_threshold_ok = hyp.tau_ok;
  report.clamped_total = clamped_exp_sum(log_opt, log_gen, &report.vacuous);
  return report;
}

double lp_error_from_total(double total, double v_minus_u, double eps, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_error_from_total: p >= 1 required");
  if (!(total >= 0.0 && total <= 1.0)) throw DomainError("lp_error_from_total: total in [0,1]");
  return v_minus_u * std::pow(total, 1.0 / p) + eps;
}

double lp_error_bound(const ProblemConfig& cfg, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_error_bound: p >= 1 required");
  if (!(cfg.eps > 0.0) || !(cfg.eps <= std::sqrt(cfg.v - cfg.u))) {
    throw ContractError("lp_error_bound: eps in (0, sqrt(v-u)] required");
  }
  const BoundReport report = overall_bound(cfg);
  return lp_error_from_total(report.clamped_total, cfg.v - cfg.u, cfg.eps, p);
}

}  // namespace dnnlab
