#include "dnnlab/net.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dnnlab {

namespace {

std::uint64_t checked_param_count(const std::vector<std::size_t>& dims) {
  std::uint64_t total = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    const std::uint64_t lk = dims[k];
    const std::uint64_t prev = dims[k - 1];
    if (lk != 0 && prev + 1 > (std::numeric_limits<std::uint64_t>::max() - total) / lk) {
      throw DomainError("Architecture: parameter count overflows 64 bits");
    }
    total += lk * (prev + 1);
  }
  return total;
}

}  // namespace

Architecture::Architecture(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw DomainError("Architecture: need at least (l0, l1)");
  for (std::size_t d : dims_) {
    if (d == 0) throw DomainError("Architecture: zero-width layer");
  }
  checked_param_count(dims_);
}

std::size_t Architecture::max_width() const {
  std::size_t m = 0;
  for (std::size_t d : dims_) m = d > m ? d : m;
  return m;
}

std::uint64_t Architecture::param_count() const { return checked_param_count(dims_); }

ActivationSpec ActivationSpec::clip(double lo, double hi) {
  if (!(hi > lo)) throw DomainError("ActivationSpec::clip: requires hi > lo");
  return {Kind::Clip, lo, hi};
}

double ActivationSpec::apply(double x) const {
  switch (kind) {
    case Kind::Rect:
      return x > 0.0 ? x : 0.0;
    case Kind::Clip: {
      const double t = x < hi ? x : hi;
      return t > lo ? t : lo;
    }
    case Kind::Identity:
      return x;
  }
  return x;
}

StructuredNetwork::StructuredNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw DomainError("StructuredNetwork: no layers");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const Layer& l = layers_[k];
    if (l.weight.rows() == 0 || l.weight.cols() == 0) {
      throw DomainError("StructuredNetwork: zero-dimension layer");
    }
    if (l.bias.size() != l.weight.rows()) {
      throw ShapeError("StructuredNetwork: bias length != weight rows");
    }
    if (k > 0 && l.weight.cols() != layers_[k - 1].weight.rows()) {
      throw ShapeError("StructuredNetwork: layer shapes do not chain");
    }
  }
}

Architecture StructuredNetwork::architecture() const {
  std::vector<std::size_t> dims;
  dims.reserve(layers_.size() + 1);
  dims.push_back(in_dim());
  for (const Layer& l : layers_) dims.push_back(l.weight.rows());
  return Architecture(dims);
}

VectorizedParams::VectorizedParams(std::vector<double> theta_in, Architecture arch_in)
    : theta(std::move(theta_in)), arch(std::move(arch_in)) {
  if (theta.size() < arch.param_count()) {
    throw ShapeError("VectorizedParams: theta shorter than parameter count " +
                     std::to_string(arch.param_count()));
  }
}

std::vector<double> affine_apply(std::span<const double> theta, std::size_t offset,
                                 std::size_t out_dim, std::size_t in_dim,
                                 std::span<const double> x) {
  if (x.size() != in_dim) throw ShapeError("affine_apply: input length != in_dim");
  if (theta.size() < offset + out_dim * in_dim + out_dim) {
    throw ShapeError("affine_apply: theta too short for requested block");
  }
  std::vector<double> y(out_dim);
  const double* w = theta.data() + offset;
  const double* b = theta.data() + offset + out_dim * in_dim;
  for (std::size_t i = 0; i < out_dim; ++i) {
    double acc = 0.0;
    const double* row = w + i * in_dim;
    for (std::size_t j = 0; j < in_dim; ++j) acc += row[j] * x[j];
    y[i] = acc + b[i];
  }
  return y;
}

std::vector<double> activation_apply(const ActivationSpec& spec, std::span<const double> x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = spec.apply(x[i]);
  return y;
}

std::vector<double> realize_vectorized(const VectorizedParams& params,
                                       std::span<const ActivationSpec> activations,
                                       std::span<const double> x) {
  const std::vector<std::size_t>& dims = params.arch.dims();
  if (activations.size() != params.arch.depth()) {
    throw ShapeError("realize_vectorized: need one activation per layer");
  }
  std::vector<double> cur(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    cur = affine_apply(params.theta, offset, dims[k], dims[k - 1], cur);
    cur = activation_apply(activations[k - 1], cur);
    offset += dims[k] * (dims[k - 1] + 1);
  }
  return cur;
}

std::vector<double> realize_clipped(const VectorizedParams& params, double u, double v,
                                    std::span<const double> x) {
  if (!(v > u)) throw DomainError("realize_clipped: requires v > u");
  std::vector<ActivationSpec> acts(params.arch.depth(), ActivationSpec::rect());
  acts.back() = ActivationSpec::clip(u, v);
  return realize_vectorized(params, acts, x);
}

std::vector<double> realize_structured(const StructuredNetwork& net,
                                       const ActivationSpec& activation,
                                       std::span<const double> x) {
  if (x.size() != net.in_dim()) throw ShapeError("realize_structured: input length != in_dim");
  std::vector<double> cur(x.begin(), x.end());
  const std::vector<StructuredNetwork::Layer>& layers = net.layers();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    std::vector<double> z = layers[k].weight.apply(cur);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += layers[k].bias[i];
    if (k + 1 < layers.size()) {
      for (double& t : z) t = activation.apply(t);
    }
    cur = std::move(z);
  }
  return cur;
}

VectorizedParams to_vector(const StructuredNetwork& net) {
  std::vector<double> theta;
  theta.reserve(net.architecture().param_count());
  for (const StructuredNetwork::Layer& l : net.layers()) {
    theta.insert(theta.end(), l.weight.data().begin(), l.weight.data().end());
    theta.insert(theta.end(), l.bias.begin(), l.bias.end());
  }
  return VectorizedParams(std::move(theta), net.architecture());
}

StructuredNetwork from_vector(const VectorizedParams& params) {
  const std::vector<std::size_t>& dims = params.arch.dims();
  std::vector<StructuredNetwork::Layer> layers;
  layers.reserve(dims.size() - 1);
  std::size_t offset = 0;
  for (std::size_t k = 1; k < dims.size(); ++k) {
    const std::size_t r = dims[k];
    const std::size_t s = dims[k - 1];
    std::vector<double> entries(params.theta.begin() + offset,
                                params.theta.begin() + offset + r * s);
    std::vector<double> bias(params.theta.begin() + offset + r * s,
                             params.theta.begin() + offset + r * s + r);
    layers.push_back({Matrix(r, s, std::move(entries)), std::move(bias)});
    offset += r * (s + 1);
  }
  return StructuredNetwork(std::move(layers));
}

double inf_norm(std::span<const double> x) {
  if (x.empty()) throw DomainError("inf_norm: empty vector");
  double m = 0.0;
  for (double t : x) {
    const double a = std::fabs(t);
    if (a > m) m = a;
  }
  return m;
}

double matrix_inf_operator_norm(const Matrix& w) {
  double m = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < w.cols(); ++j) row += std::fabs(w(i, j));
    if (row > m) m = row;
  }
  return m;
}

}  // namespace dnnlab
