#pragma once

#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "dnnlab/net.hpp"

namespace dnnlab {

// Finite set of distinct points with values consistent with an l1-Lipschitz
// constant: |f_i - f_j| <= L * sum_t |x_it - x_jt| for every pair.
class SampleSet {
 public:
  SampleSet(std::vector<std::vector<double>> points, std::vector<double> values,
            double lipschitz_l);

  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  double lipschitz_l() const { return lipschitz_l_; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().size(); }

 private:
  std::vector<std::vector<double>> points_;
  std::vector<double> values_;
  double lipschitz_l_;
};

// Regular lattice with N subdivisions per axis over the box [p,q].
struct Grid {
  std::vector<double> p;
  std::vector<double> q;
  std::size_t subdivisions;  // N >= 1

  Grid(std::vector<double> p_in, std::vector<double> q_in, std::size_t n);
  std::size_t dim() const { return p.size(); }
};

// Maximal L-Lipschitz minorant interpolating the samples:
// F(x) = max_y [f(y) - L * sum_i |x_i - y_i|].
double lipschitz_extension_eval(const SampleSet& samples, std::span<const double> x);

// ReLU net of dims (d, 2d*m, 2m-1, ..., 3, 1) whose realization equals the
// Lipschitz extension everywhere; m = number of samples.
// ||T(net)||_inf <= max{1, L, sup||z||_inf, 2 sup|f|}.
StructuredNetwork interpolation_net(const SampleSet& samples);

// All (N+1)^d lattice points, ordered lexicographically by multi-index
// (k_1,...,k_d); coincident points of a degenerate axis are collapsed.
std::vector<std::vector<double>> grid_points(const Grid& grid);

struct GridApproximant {
  VectorizedParams params;
  double clip_lo;
  double clip_hi;
  double sup_error_bound;  // (L/N) * sum_i (q_i - p_i)
};

// Samples f on the grid and builds the clipped interpolation network. f must
// map the box into [u,v] and be L-Lipschitz for the Euclidean norm.
GridApproximant build_grid_approximant(
    const std::function<double(std::span<const double>)>& f, const Grid& grid, double lipschitz_l,
    double u, double v);

struct ParamBudget {
  mpz_class exact;       // P for dims (d, 2d*m, 2m-1, ..., 3, 1), m = (N+1)^d
  mpq_class upper_bound;  // 2 d^2 m + 5 d m^2 + (4/3) m^3
};

// Exact parameter count of the grid interpolation architecture; the counts
// exceed 64 bits already at moderate d*log(N+1).
ParamBudget param_budget_grid(std::size_t d, std::size_t n_subdivisions);

}  // namespace dnnlab
