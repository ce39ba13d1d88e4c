#pragma once

#include <span>

#include "dnnlab/net.hpp"

namespace dnnlab {

// phi1 after phi2. The seam layer is (W1*Wfrak_L, W1*Bfrak_L + B1), so
// depth(result) = depth(phi1) + depth(phi2) - 1.
StructuredNetwork compose(const StructuredNetwork& phi1, const StructuredNetwork& phi2);

// Block-diagonal stacking of equal-depth networks; computes the product map.
StructuredNetwork parallelize(std::span<const StructuredNetwork> nets);

// Single layer (W, 0).
StructuredNetwork matrix_net(const Matrix& w);

// Depth-2 net of dims (d, 2d, d) whose rectified realization is the identity
// via x = max{x,0} - max{-x,0}.
StructuredNetwork identity_net(std::size_t d);

// n-fold composition; n = 0 is the single identity-matrix layer.
StructuredNetwork power(const StructuredNetwork& net, std::size_t n);

// Pads net to the target depth by composing powers of psi in front; with
// psi = identity_net(out_dim) the realization is unchanged.
StructuredNetwork extend(std::size_t target_depth, const StructuredNetwork& psi,
                         const StructuredNetwork& net);

// Re-expresses theta inside the larger architecture without changing the
// [u,v]-clipped realization: extend depth with identity nets, widen layers
// with zero blocks, zero-fill the rest. The construction works uniformly in
// (u, v); they are part of the contract being preserved.
// ||result||_inf <= max{1, ||theta||_inf}.
VectorizedParams embed(const VectorizedParams& params, const Architecture& target, double u,
                       double v);

// The depth-k net of dims (k, 2k-1, 2k-3, ..., 3, 1) whose rectified
// realization is the k-ary maximum; all parameters lie in {-1, 0, 1}.
StructuredNetwork max_net(std::size_t k);

}  // namespace dnnlab
