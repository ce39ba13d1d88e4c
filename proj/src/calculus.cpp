#include "dnnlab/calculus.hpp"

#include <string>
#include <utility>

namespace dnnlab {

StructuredNetwork compose(const StructuredNetwork& phi1, const StructuredNetwork& phi2) {
  if (phi1.in_dim() != phi2.out_dim()) {
    throw ShapeError("compose: in_dim(phi1) != out_dim(phi2)");
  }
  const auto& outer = phi1.layers();
  const auto& inner = phi2.layers();

  std::vector<StructuredNetwork::Layer> layers(inner.begin(), inner.end() - 1);

  // Seam: (W1 * Wfrak_L, W1 * Bfrak_L + B1).
  const Matrix& w1 = outer.front().weight;
  const StructuredNetwork::Layer& last = inner.back();
  std::vector<double> seam_bias = w1.apply(last.bias);
  for (std::size_t i = 0; i < seam_bias.size(); ++i) seam_bias[i] += outer.front().bias[i];
  layers.push_back({w1.mul(last.weight), std::move(seam_bias)});

  layers.insert(layers.end(), outer.begin() + 1, outer.end());
  return StructuredNetwork(std::move(layers));
}

StructuredNetwork parallelize(std::span<const StructuredNetwork> nets) {
  if (nets.empty()) throw ContractError("parallelize: empty list");
  const std::size_t depth = nets.front().depth();
  for (const StructuredNetwork& n : nets) {
    if (n.depth() != depth) throw ContractError("parallelize: depths differ");
  }

  std::vector<StructuredNetwork::Layer> layers;
  layers.reserve(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    std::size_t rows = 0, cols = 0;
    for (const StructuredNetwork& n : nets) {
      rows += n.layers()[k].weight.rows();
      cols += n.layers()[k].weight.cols();
    }
    Matrix w(rows, cols);
    std::vector<double> b;
    b.reserve(rows);
    std::size_t row0 = 0, col0 = 0;
    for (const StructuredNetwork& n : nets) {
      const StructuredNetwork::Layer& l = n.layers()[k];
      for (std::size_t i = 0; i < l.weight.rows(); ++i) {
        for (std::size_t j = 0; j < l.weight.cols(); ++j) {
          w(row0 + i, col0 + j) = l.weight(i, j);
        }
      }
      b.insert(b.end(), l.bias.begin(), l.bias.end());
      row0 += l.weight.rows();
      col0 += l.weight.cols();
    }
    layers.push_back({std::move(w), std::move(b)});
  }
  return StructuredNetwork(std::move(layers));
}

StructuredNetwork matrix_net(const Matrix& w) {
  return StructuredNetwork({{w, std::vector<double>(w.rows(), 0.0)}});
}

StructuredNetwork identity_net(std::size_t d) {
  if (d == 0) throw DomainError("identity_net: d >= 1 required");
  Matrix w1(2 * d, d);
  Matrix w2(d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    w1(2 * i, i) = 1.0;
    w1(2 * i + 1, i) = -1.0;
    w2(i, 2 * i) = 1.0;
    w2(i, 2 * i + 1) = -1.0;
  }
  return StructuredNetwork({{std::move(w1), std::vector<double>(2 * d, 0.0)},
                            {std::move(w2), std::vector<double>(d, 0.0)}});
}

StructuredNetwork power(const StructuredNetwork& net, std::size_t n) {
  if (net.in_dim() != net.out_dim()) throw ContractError("power: in_dim != out_dim");
  if (n == 0) return matrix_net(Matrix::identity(net.out_dim()));
  StructuredNetwork result = power(net, n - 1);
  return compose(net, result);
}

StructuredNetwork extend(std::size_t target_depth, const StructuredNetwork& psi,
                         const StructuredNetwork& net) {
  if (net.depth() > target_depth) throw ContractError("extend: net deeper than target");
  if (psi.in_dim() != psi.out_dim() || net.out_dim() != psi.in_dim()) {
    throw ContractError("extend: out_dim(net) = in_dim(psi) = out_dim(psi) required");
  }
  return compose(power(psi, target_depth - net.depth()), net);
}

VectorizedParams embed(const VectorizedParams& params, const Architecture& target, double u,
                       double v) {
  if (!(v > u)) throw DomainError("embed: requires v > u");
  const std::vector<std::size_t>& l = params.arch.dims();
  const std::vector<std::size_t>& lt = target.dims();
  const std::size_t depth = params.arch.depth();
  const std::size_t tdepth = target.depth();
  const std::size_t out = params.arch.out_dim();

  if (tdepth < depth) throw ContractError("embed: target depth below source depth");
  if (lt.front() != l.front()) throw ContractError("embed: input dims differ");
  if (lt.back() != l.back()) throw ContractError("embed: output dims differ");
  for (std::size_t i = 1; i < depth; ++i) {
    if (lt[i] < l[i]) {
      throw ContractError("embed: target width " + std::to_string(lt[i]) +
                          " below source width at layer " + std::to_string(i));
    }
  }
  for (std::size_t i = depth; i < tdepth; ++i) {
    if (lt[i] < 2 * out) {
      throw ContractError("embed: target width below 2*out_dim at padded layer " +
                          std::to_string(i));
    }
  }

  StructuredNetwork grown = from_vector(params);
  if (tdepth > depth) grown = extend(tdepth, identity_net(out), grown);

  // Widen every layer by zero-padding into the target block sizes.
  std::vector<StructuredNetwork::Layer> widened;
  widened.reserve(tdepth);
  for (std::size_t k = 0; k < tdepth; ++k) {
    const StructuredNetwork::Layer& src = grown.layers()[k];
    Matrix w(lt[k + 1], lt[k]);
    std::vector<double> b(lt[k + 1], 0.0);
    for (std::size_t i = 0; i < src.weight.rows(); ++i) {
      for (std::size_t j = 0; j < src.weight.cols(); ++j) w(i, j) = src.weight(i, j);
      b[i] = src.bias[i];
    }
    widened.push_back({std::move(w), std::move(b)});
  }

  VectorizedParams flat = to_vector(StructuredNetwork(std::move(widened)));
  return VectorizedParams(std::move(flat.theta), target);
}

StructuredNetwork max_net(std::size_t k) {
  if (k < 2) throw ContractError("max_net: k >= 2 required");
  StructuredNetwork phi2(
      {{Matrix(3, 2, {1.0, -1.0, 0.0, 1.0, 0.0, -1.0}), {0.0, 0.0, 0.0}},
       {Matrix(1, 3, {1.0, 1.0, -1.0}), {0.0}}});
  StructuredNetwork phi = phi2;
  for (std::size_t j = 2; j < k; ++j) {
    const StructuredNetwork parts[] = {phi2, identity_net(j - 1)};
    phi = compose(phi, parallelize(parts));
  }
  return phi;
}

}  // namespace dnnlab
