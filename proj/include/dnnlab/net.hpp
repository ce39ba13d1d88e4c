#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dnnlab/errors.hpp"
#include "dnnlab/matrix.hpp"

namespace dnnlab {

// Layer-dimension tuple (l0,...,lL). Every width is >= 1 and there is at
// least one affine layer (L >= 1).
class Architecture {
 public:
  explicit Architecture(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t depth() const { return dims_.size() - 1; }  // L
  std::size_t hidden_count() const { return depth() - 1; }
  std::size_t in_dim() const { return dims_.front(); }
  std::size_t out_dim() const { return dims_.back(); }
  std::size_t max_width() const;  // ||l||_inf

  // P = sum_k l_k (l_{k-1} + 1)
  std::uint64_t param_count() const;

  bool operator==(const Architecture&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

// Componentwise activation: rectifier, clipping to [lo,hi] (extended
// endpoints permitted), or identity.
struct ActivationSpec {
  enum class Kind { Rect, Clip, Identity };

  Kind kind = Kind::Identity;
  double lo = 0.0;
  double hi = 0.0;

  static ActivationSpec rect() { return {Kind::Rect, 0.0, 0.0}; }
  static ActivationSpec identity() { return {Kind::Identity, 0.0, 0.0}; }
  static ActivationSpec clip(double lo, double hi);

  double apply(double x) const;

  bool operator==(const ActivationSpec&) const = default;
};

// Ordered (weight, bias) layer pairs; the structured network description.
class StructuredNetwork {
 public:
  struct Layer {
    Matrix weight;
    std::vector<double> bias;
    bool operator==(const Layer&) const = default;
  };

  explicit StructuredNetwork(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t in_dim() const { return layers_.front().weight.cols(); }
  std::size_t out_dim() const { return layers_.back().weight.rows(); }
  Architecture architecture() const;

  bool operator==(const StructuredNetwork&) const = default;

 private:
  std::vector<Layer> layers_;
};

// Flat parameter vector theta in the T-ordering, possibly longer than the
// architecture's parameter count; trailing entries are inert padding.
struct VectorizedParams {
  std::vector<double> theta;
  Architecture arch;

  VectorizedParams(std::vector<double> theta_in, Architecture arch_in);
};

// W x + b with W read row-major from theta[offset .. offset+out_dim*in_dim)
// and b from the following out_dim entries.
std::vector<double> affine_apply(std::span<const double> theta, std::size_t offset,
                                 std::size_t out_dim, std::size_t in_dim,
                                 std::span<const double> x);

std::vector<double> activation_apply(const ActivationSpec& spec, std::span<const double> x);

// Alternates affine maps (at cumulative offsets) and the given per-layer
// activations; exactly one activation per affine layer.
std::vector<double> realize_vectorized(const VectorizedParams& params,
                                       std::span<const ActivationSpec> activations,
                                       std::span<const double> x);

// Rectifier on hidden layers, clip to [u,v] on the output layer; a single
// layer gets only the clip.
std::vector<double> realize_clipped(const VectorizedParams& params, double u, double v,
                                    std::span<const double> x);

// Activation on hidden layers, no activation on the output layer.
std::vector<double> realize_structured(const StructuredNetwork& net,
                                       const ActivationSpec& activation,
                                       std::span<const double> x);

// Translation map T: per layer, weights row-major then biases.
VectorizedParams to_vector(const StructuredNetwork& net);

// Inverse of T on the active prefix of theta; padding is ignored.
StructuredNetwork from_vector(const VectorizedParams& params);

// max_i |x_i|; rejects the empty vector.
double inf_norm(std::span<const double> x);

// Operator norm induced by the maximum norm: the largest row absolute sum.
double matrix_inf_operator_norm(const Matrix& w);

}  // namespace dnnlab
