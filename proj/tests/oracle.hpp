#pragma once

// High-precision direct evaluation of the probability-bound formulas, used
// as an independent oracle for the log-space implementations. Each function
// evaluates the closed form with 256-bit MPFR arithmetic along a different
// route (direct products and max/min, no log-space rearrangement) and only
// takes the log at the end.

#include <mpfr.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

class Real {
 public:
  Real() { mpfr_init2(v_, 256); }
  explicit Real(double x) : Real() { mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit Real(std::uint64_t x) : Real() { mpfr_set_ui(v_, x, MPFR_RNDN); }
  Real(const Real& o) : Real() { mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real& operator=(const Real& o) {
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend Real operator+(const Real& a, const Real& b) {
    Real r;
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r;
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r;
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r;
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const Real& a, const Real& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }

 private:
  mpfr_t v_;
};

inline Real log(const Real& a) {
  Real r;
  mpfr_log(r.get(), a.get(), MPFR_RNDN);
  return r;
}

inline Real exp(const Real& a) {
  Real r;
  mpfr_exp(r.get(), a.get(), MPFR_RNDN);
  return r;
}

inline Real pow_ui(const Real& a, std::uint64_t n) {
  Real r;
  mpfr_pow_ui(r.get(), a.get(), n, MPFR_RNDN);
  return r;
}

inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

// log of 2 exp(-2 eps^2 N^2 / sum (b_n-a_n)^2)
inline double hoeffding_log(double eps, std::uint64_t n,
                            const std::vector<std::pair<double, double>>& ranges) {
  Real denom(0.0);
  for (const auto& [lo, hi] : ranges) {
    denom = denom + (Real(hi) - Real(lo)) * (Real(hi) - Real(lo));
  }
  const Real nn((std::uint64_t)n);
  const Real expo = Real(0.0) - Real(2.0) * Real(eps) * Real(eps) * nn * nn / denom;
  return (log(Real(2.0)) + expo).to_double();
}

// log of the ball covering bound max{1, (4R/r)^dim} for r < R, 1 otherwise
inline double covering_ball_log(std::uint64_t dim, double big_r, double r) {
  if (r >= big_r) return 0.0;
  return log(pow_ui(Real(4.0) * Real(big_r) / Real(r), dim)).to_double();
}

// log of 2 max{1, [32 depth max{1,b} (w+1)^depth R^depth (v-u)/eps]^dfrak}
//        exp(-eps^2 M / (2 (v-u)^4))
inline double generalization_log(std::uint64_t depth, std::uint64_t max_width,
                                 std::uint64_t dfrak, std::uint64_t m, double big_r, double u,
                                 double v, double b, double eps) {
  const Real vu = Real(v) - Real(u);
  Real bracket = Real(32.0) * Real(depth) * max(Real(1.0), Real(b)) *
                 pow_ui(Real(max_width) + Real(1.0), depth) * pow_ui(Real(big_r), depth) * vu /
                 Real(eps);
  Real factor = max(Real(1.0), pow_ui(bracket, dfrak));
  Real expo = Real(0.0) - Real(eps) * Real(eps) * Real(m) / (Real(2.0) * pow_ui(vu, 4));
  return (log(Real(2.0) * factor) + expo).to_double();
}

// -K min{1, (eps/(L(b-a)))^dfrak}
inline double optimization_log(std::uint64_t dfrak, std::uint64_t k, double a, double b,
                               double lip, double eps) {
  const Real ratio = Real(eps) / (Real(lip) * (Real(b) - Real(a)));
  const Real inner = min(Real(1.0), pow_ui(ratio, dfrak));
  return (Real(0.0) - Real(k) * inner).to_double();
}

struct OverallLogs {
  double log_opt;
  double log_gen;
};

// Direct evaluation of both explicit-constant terms of the overall bound.
inline OverallLogs overall_logs(std::uint64_t d_unused, std::uint64_t dfrak, std::uint64_t k,
                                std::uint64_t m, std::uint64_t tau, double eps, double u,
                                double v, double big_r) {
  (void)d_unused;
  const Real vu = Real(v) - Real(u);
  const Real c1 = Real(16.0) * vu * pow_ui(Real(tau) + Real(1.0), tau) * pow_ui(Real(big_r), tau);
  const Real ratio = min(Real(1.0), pow_ui(Real(eps) * Real(eps) / c1, dfrak));
  const double log_opt = (Real(0.0) - Real(k) * ratio).to_double();

  const Real c2 =
      Real(128.0) * pow_ui(Real(tau) + Real(1.0), tau) * pow_ui(Real(big_r), tau) * vu /
      (Real(eps) * Real(eps));
  const Real eps4 = pow_ui(Real(eps), 4);
  const Real log_gen = log(Real(2.0)) + Real(dfrak) * log(max(Real(1.0), c2)) -
                       eps4 * Real(m) / (Real(32.0) * pow_ui(vu, 4));
  return {log_opt, log_gen.to_double()};
}

}  // namespace oracle
