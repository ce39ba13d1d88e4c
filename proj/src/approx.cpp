#include "dnnlab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "dnnlab/calculus.hpp"

namespace dnnlab {

namespace {

double l1_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

}  // namespace

SampleSet::SampleSet(std::vector<std::vector<double>> points, std::vector<double> values,
                     double lipschitz_l)
    : points_(std::move(points)), values_(std::move(values)), lipschitz_l_(lipschitz_l) {
  if (points_.size() < 2) throw ContractError("SampleSet: need at least 2 points");
  if (points_.size() != values_.size()) throw ShapeError("SampleSet: points/values mismatch");
  if (lipschitz_l_ < 0.0) throw DomainError("SampleSet: negative Lipschitz constant");
  const std::size_t d = points_.front().size();
  if (d == 0) throw DomainError("SampleSet: zero-dimensional points");
  for (const auto& p : points_) {
    if (p.size() != d) throw ShapeError("SampleSet: inconsistent point dimensions");
  }
  // Distinctness and Lipschitz consistency. The 1e-9 slack covers rounding
  // in the caller's evaluation of an exactly-Lipschitz f.
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double dist = l1_dist(points_[i], points_[j]);
      if (dist == 0.0) throw ContractError("SampleSet: duplicate points");
      const double gap = std::fabs(values_[i] - values_[j]);
      if (gap > lipschitz_l_ * dist * (1.0 + 1e-9)) {
        throw ContractError("SampleSet: values violate the Lipschitz constant at pair (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
}

Grid::Grid(std::vector<double> p_in, std::vector<double> q_in, std::size_t n)
    : p(std::move(p_in)), q(std::move(q_in)), subdivisions(n) {
  if (p.empty() || p.size() != q.size()) throw ShapeError("Grid: p/q dimension mismatch");
  if (n == 0) throw DomainError("Grid: N >= 1 required");
  double max_side = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] <= q[i])) throw DomainError("Grid: p_i <= q_i required");
    max_side = std::max(max_side, q[i] - p[i]);
  }
  if (!(max_side > 0.0)) throw ContractError("Grid: degenerate box, max(q_i - p_i) = 0");
}

double lipschitz_extension_eval(const SampleSet& samples, std::span<const double> x) {
  if (x.size() != samples.dim()) throw ShapeError("lipschitz_extension_eval: dim mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cand = samples.values()[i] - samples.lipschitz_l() * l1_dist(samples.points()[i], x);
    if (cand > best) best = cand;
  }
  return best;
}

StructuredNetwork interpolation_net(const SampleSet& samples) {
  const std::size_t m = samples.size();
  const std::size_t d = samples.dim();
  const double lip = samples.lipschitz_l();

  // First layer: per sample z, rows (+e_j, -z_j) and (-e_j, +z_j) so the
  // rectified pair sums to |x_j - z_j|.
  Matrix w1(2 * d * m, d);
  std::vector<double> b1(2 * d * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double>& z = samples.points()[i];
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t r = 2 * d * i + 2 * j;
      w1(r, j) = 1.0;
      b1[r] = -z[j];
      w1(r + 1, j) = -1.0;
      b1[r + 1] = z[j];
    }
  }

  // Second layer: coordinate i carries f(z_i) - L * l1dist(x, z_i).
  Matrix w2(m, 2 * d * m);
  std::vector<double> b2(samples.values());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < 2 * d; ++j) w2(i, 2 * d * i + j) = -lip;
  }

  StructuredNetwork body({{std::move(w1), std::move(b1)}, {std::move(w2), std::move(b2)}});
  return compose(max_net(m), body);
}

std::vector<std::vector<double>> grid_points(const Grid& grid) {
  const std::size_t d = grid.dim();
  const std::size_t n = grid.subdivisions;
  std::vector<std::vector<double>> pts;
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> k(d, 0);
  while (true) {
    std::vector<double> pt(d);
    for (std::size_t i = 0; i < d; ++i) {
      pt[i] = grid.p[i] + (static_cast<double>(k[i]) / static_cast<double>(n)) *
                              (grid.q[i] - grid.p[i]);
    }
    if (seen.insert(pt).second) pts.push_back(std::move(pt));
    // advance multi-index, last coordinate fastest
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (k[i] < n) {
        ++k[i];
        std::fill(k.begin() + i + 1, k.end(), 0);
        break;
      }
      if (i == 0) return pts;
    }
  }
}

GridApproximant build_grid_approximant(
    const std::function<double(std::span<const double>)>& f, const Grid& grid, double lipschitz_l,
    double u, double v) {
  if (!(v > u)) throw DomainError("build_grid_approximant: requires v > u");
  std::vector<std::vector<double>> pts = grid_points(grid);
  std::vector<double> vals;
  vals.reserve(pts.size());
  for (const auto& pt : pts) {
    const double y = f(pt);
    if (!(y >= u && y <= v)) {
      throw ContractError("build_grid_approximant: sampled value outside [u,v]");
    }
    vals.push_back(y);
  }
  SampleSet samples(std::move(pts), std::move(vals), lipschitz_l);
  VectorizedParams params = to_vector(interpolation_net(samples));

  double side_sum = 0.0;
  for (std::size_t i = 0; i < grid.dim(); ++i) side_sum += grid.q[i] - grid.p[i];
  const double bound = lipschitz_l / static_cast<double>(grid.subdivisions) * side_sum;
  return GridApproximant{std::move(params), u, v, bound};
}

ParamBudget param_budget_grid(std::size_t d, std::size_t n_subdivisions) {
  if (d == 0) throw DomainError("param_budget_grid: d >= 1 required");
  if (n_subdivisions == 0) {
    throw ContractError("param_budget_grid: N = 0 gives a single grid point, need >= 2");
  }
  const mpz_class dz(static_cast<unsigned long>(d));
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(n_subdivisions + 1),
                static_cast<unsigned long>(d));

  // dims (d, 2dm, 2m-1, 2m-3, ..., 3, 1):
  //   first layer 2dm(d+1), second (2m-1)(2dm+1), then the max chain
  //   sum_{j=1}^{m-1} (2j-1)(2j+2) = (2/3)(m-1)m(2m-1) + m(m-1) - 2(m-1).
  mpz_class exact = 2 * dz * m * (dz + 1);
  exact += (2 * m - 1) * (2 * dz * m + 1);
  mpz_class chain = 2 * (m - 1) * m * (2 * m - 1);
  mpz_divexact_ui(chain.get_mpz_t(), chain.get_mpz_t(), 3);
  exact += chain + m * (m - 1) - 2 * (m - 1);

  mpq_class upper = mpq_class(2 * dz * dz * m) + mpq_class(5 * dz * m * m) +
                    mpq_class(4 * m * m * m, 3);
  upper.canonicalize();
  return ParamBudget{std::move(exact), std::move(upper)};
}

}  // namespace dnnlab
