#include <doctest.h>

#include <cmath>

#include "dnnlab/calculus.hpp"
#include "test_support.hpp"

using namespace dnnlab;
using testsupport::rel_diff;

namespace {

const ActivationSpec kRect = ActivationSpec::rect();

std::vector<std::size_t> dims_of(const StructuredNetwork& net) {
  return net.architecture().dims();
}

}  // namespace

TEST_CASE("compose merges the seam layer") {
  StructuredNetwork a({{Matrix(1, 1, {2.0}), {1.0}}});
  StructuredNetwork b({{Matrix(1, 1, {3.0}), {4.0}}});
  StructuredNetwork c = compose(a, b);
  CHECK(c.depth() == 1);
  CHECK(c.layers()[0].weight == Matrix(1, 1, {6.0}));
  CHECK(c.layers()[0].bias == std::vector<double>{9.0});

  CHECK_THROWS_AS(compose(StructuredNetwork({{Matrix(1, 2, {1, 1}), {0.0}}}),
                          StructuredNetwork({{Matrix(1, 1, {1.0}), {0.0}}})),
                  ShapeError);
}

TEST_CASE("compose realization law on random pairs") {
  rng::Stream s(41, 80);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t mid = 1 + s.next_u64() % 4;
    StructuredNetwork a = testsupport::random_network(s, {mid, 1 + s.next_u64() % 4, 2});
    StructuredNetwork b = testsupport::random_network(s, {2, 1 + s.next_u64() % 4, mid});
    StructuredNetwork ab = compose(a, b);
    CHECK(ab.depth() == a.depth() + b.depth() - 1);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x = testsupport::uniform_vector(s, 2, -2.0, 2.0);
      const auto inner = realize_structured(b, kRect, x);
      const auto want = realize_structured(a, kRect, inner);
      const auto got = realize_structured(ab, kRect, x);
      for (std::size_t j = 0; j < want.size(); ++j) CHECK(rel_diff(got[j], want[j]) <= 1e-12);
    }
  }
}

TEST_CASE("max_net recursion depth") {
  // phi_3 = phi_2 after P_2(phi_2, I_1)
  const StructuredNetwork parts[] = {max_net(2), identity_net(1)};
  CHECK(compose(max_net(2), parallelize(parts)).depth() == 3);
}

TEST_CASE("parallelize stacks block-diagonally") {
  const StructuredNetwork ones[] = {identity_net(1), identity_net(1)};
  CHECK(parallelize(ones) == identity_net(2));

  const StructuredNetwork mixed[] = {max_net(2), identity_net(1)};
  CHECK(dims_of(parallelize(mixed)) == std::vector<std::size_t>{3, 5, 2});

  rng::Stream s(43, 81);
  for (int rep = 0; rep < 50; ++rep) {
    StructuredNetwork a = testsupport::random_network(s, {2, 3, 2});
    StructuredNetwork b = testsupport::random_network(s, {1, 2, 3});
    const StructuredNetwork parts[] = {a, b};
    StructuredNetwork both = parallelize(parts);
    std::vector<double> x = testsupport::uniform_vector(s, 2, -2.0, 2.0);
    std::vector<double> y = testsupport::uniform_vector(s, 1, -2.0, 2.0);
    std::vector<double> xy(x);
    xy.insert(xy.end(), y.begin(), y.end());
    const auto ra = realize_structured(a, kRect, x);
    const auto rb = realize_structured(b, kRect, y);
    const auto rboth = realize_structured(both, kRect, xy);
    REQUIRE(rboth.size() == ra.size() + rb.size());
    for (std::size_t j = 0; j < ra.size(); ++j) CHECK(rel_diff(rboth[j], ra[j]) <= 1e-12);
    for (std::size_t j = 0; j < rb.size(); ++j)
      CHECK(rel_diff(rboth[ra.size() + j], rb[j]) <= 1e-12);
  }

  const StructuredNetwork unequal[] = {identity_net(1), max_net(3)};
  CHECK_THROWS_AS(parallelize(unequal), ContractError);
}

TEST_CASE("matrix_net wraps a single linear layer") {
  CHECK(realize_structured(matrix_net(Matrix::identity(2)), kRect, std::vector<double>{3, 4}) ==
        std::vector<double>{3, 4});
  CHECK(realize_structured(matrix_net(Matrix(1, 2, {1, 1})), kRect, std::vector<double>{2, 5}) ==
        std::vector<double>{7});
  CHECK(to_vector(matrix_net(Matrix(2, 2, {1, 2, 3, 4}))).theta ==
        std::vector<double>{1, 2, 3, 4, 0, 0});
}

TEST_CASE("identity_net realizes the identity under rect") {
  CHECK(realize_structured(identity_net(3), kRect, std::vector<double>{-1, 0, 2}) ==
        std::vector<double>{-1, 0, 2});
  CHECK(dims_of(identity_net(4)) == std::vector<std::size_t>{4, 8, 4});
  CHECK(inf_norm(to_vector(identity_net(2)).theta) == 1.0);
}

TEST_CASE("power composes a net with itself") {
  for (double c : {-2.5, 0.0, 1.25}) {
    CHECK(realize_structured(power(identity_net(1), 0), kRect, std::vector<double>{c}) ==
          std::vector<double>{c});
  }
  CHECK(power(identity_net(1), 2).depth() == 3);

  rng::Stream s(47, 82);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x = testsupport::dyadic_vector(s, 2);
    CHECK(realize_structured(power(identity_net(2), 3), kRect, x) == x);
  }

  CHECK_THROWS_AS(power(max_net(2), 1), ContractError);
}

TEST_CASE("extend pads depth without changing the realization") {
  rng::Stream s(53, 83);
  StructuredNetwork net = testsupport::random_network(s, {2, 3, 1});
  StructuredNetwork same = extend(net.depth(), identity_net(1), net);
  CHECK(same.depth() == net.depth());
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x = testsupport::uniform_vector(s, 2, -2.0, 2.0);
    const auto a = realize_structured(net, kRect, x);
    const auto b = realize_structured(same, kRect, x);
    CHECK(rel_diff(b[0], a[0]) <= 1e-12);
  }

  CHECK(dims_of(extend(4, identity_net(1), max_net(2))) ==
        std::vector<std::size_t>{2, 3, 2, 2, 1});

  const double norm5 = inf_norm(to_vector(extend(5, identity_net(1), max_net(2))).theta);
  CHECK(norm5 <= std::max(1.0, inf_norm(to_vector(max_net(2)).theta)));
  CHECK(norm5 == 1.0);

  CHECK_THROWS_AS(extend(1, identity_net(1), max_net(2)), ContractError);
}

TEST_CASE("extension norm law on random nets (exact)") {
  rng::Stream s(59, 84);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t out = 1 + s.next_u64() % 3;
    StructuredNetwork net =
        testsupport::random_network(s, {1 + s.next_u64() % 3, 1 + s.next_u64() % 4, out}, 2.0);
    const std::size_t target = net.depth() + s.next_u64() % 3;
    const double before = inf_norm(to_vector(net).theta);
    const double after = inf_norm(to_vector(extend(target, identity_net(out), net)).theta);
    CHECK(after <= std::max(1.0, before));
  }
}

TEST_CASE("extended net keeps its realization under rect") {
  rng::Stream s(61, 85);
  for (int rep = 0; rep < 30; ++rep) {
    StructuredNetwork net = testsupport::random_network(s, {2, 4, 2});
    StructuredNetwork longer = extend(5, identity_net(2), net);
    CHECK(dims_of(longer) == std::vector<std::size_t>{2, 4, 4, 4, 4, 2});
    for (int i = 0; i < 30; ++i) {
      std::vector<double> x = testsupport::uniform_vector(s, 2, -2.0, 2.0);
      const auto a = realize_structured(net, kRect, x);
      const auto b = realize_structured(longer, kRect, x);
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(rel_diff(b[j], a[j]) <= 1e-12);
    }
  }
}

TEST_CASE("embed preserves the clipped realization") {
  rng::Stream s(67, 86);

  // no-op embedding into the same architecture
  {
    StructuredNetwork net = testsupport::random_network(s, {2, 3, 1});
    VectorizedParams params = to_vector(net);
    VectorizedParams same = embed(params, params.arch, 0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x = testsupport::uniform_vector(s, 2, -2.0, 2.0);
      CHECK(realize_clipped(params, 0, 1, x) == realize_clipped(same, 0, 1, x));
    }
  }

  // the 2-ary max net re-expressed in (2,5,4,1)
  {
    VectorizedParams params = to_vector(max_net(2));
    VectorizedParams bigger = embed(params, Architecture({2, 5, 4, 1}), -10.0, 10.0);
    CHECK(inf_norm(bigger.theta) <= std::max(1.0, inf_norm(params.theta)));
    for (int i = 0; i < 100; ++i) {
      std::vector<double> x = testsupport::uniform_vector(s, 2, -5.0, 5.0);
      const double want = std::max(x[0], x[1]);
      const double got = realize_clipped(bigger, -10, 10, x)[0];
      CHECK(rel_diff(got, want) <= 1e-12);
    }
  }

  CHECK_THROWS_AS(embed(to_vector(max_net(2)), Architecture({2, 2, 1}), 0, 1), ContractError);
  // padded hidden layer must be at least twice the output width
  CHECK_THROWS_AS(embed(to_vector(max_net(2)), Architecture({2, 3, 1, 1}), 0, 1), ContractError);
}

TEST_CASE("embedding invariance and norm bound on random nets") {
  rng::Stream s(71, 87);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<std::size_t> dims{1 + s.next_u64() % 3, 1 + s.next_u64() % 4, 1 + s.next_u64() % 3};
    StructuredNetwork net = testsupport::random_network(s, dims, 2.0);
    VectorizedParams params = to_vector(net);

    std::vector<std::size_t> target = dims;
    target[1] += s.next_u64() % 3;
    const std::size_t extra = s.next_u64() % 3;
    for (std::size_t i = 0; i < extra; ++i) {
      target.insert(target.end() - 1, 2 * dims.back() + s.next_u64() % 2);
    }
    VectorizedParams emb = embed(params, Architecture(target), 0.0, 1.0);
    CHECK(inf_norm(emb.theta) <= std::max(1.0, inf_norm(params.theta)));

    for (int i = 0; i < 100; ++i) {
      std::vector<double> x = testsupport::uniform_vector(s, dims.front(), -2.0, 2.0);
      const auto a = realize_clipped(params, 0, 1, x);
      const auto b = realize_clipped(emb, 0, 1, x);
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(rel_diff(b[j], a[j]) <= 1e-12);
    }
  }
}

TEST_CASE("max_net dims, parameter set, and exactness") {
  CHECK(dims_of(max_net(4)) == std::vector<std::size_t>{4, 7, 5, 3, 1});
  CHECK(realize_structured(max_net(3), kRect, std::vector<double>{-5, -1, -9}) ==
        std::vector<double>{-1});

  for (std::size_t k = 2; k <= 8; ++k) {
    const VectorizedParams params = to_vector(max_net(k));
    for (double t : params.theta) {
      CHECK((t == -1.0 || t == 0.0 || t == 1.0));
    }
    CHECK(inf_norm(params.theta) == 1.0);
  }

  // dyadic inputs keep every intermediate sum exact, so the realization
  // bit-equals the true maximum
  rng::Stream s(73, 88);
  for (std::size_t k = 2; k <= 10; ++k) {
    StructuredNetwork net = max_net(k);
    std::vector<std::size_t> want_dims{k};
    for (std::size_t w = 2 * k - 1; w >= 3; w -= 2) want_dims.push_back(w);
    want_dims.push_back(1);
    CHECK(dims_of(net) == want_dims);

    for (int rep = 0; rep < 1000; ++rep) {
      std::vector<double> x = testsupport::dyadic_vector(s, k);
      if (rep % 3 == 0) x[s.next_u64() % k] = x[(s.next_u64() % k)];  // force ties
      if (rep % 5 == 0) {
        for (double& t : x) t = -std::fabs(t);  // all-negative
      }
      double want = x[0];
      for (double t : x) want = std::max(want, t);
      CHECK(realize_structured(net, kRect, x) == std::vector<double>{want});
    }
  }
}

TEST_CASE("max_net on dense doubles is within 1e-12 relative") {
  rng::Stream s(79, 89);
  for (std::size_t k = 2; k <= 6; ++k) {
    StructuredNetwork net = max_net(k);
    for (int rep = 0; rep < 2000; ++rep) {
      std::vector<double> x = testsupport::uniform_vector(s, k, -10.0, 10.0);
      double want = x[0];
      for (double t : x) want = std::max(want, t);
      CHECK(rel_diff(realize_structured(net, kRect, x)[0], want) <= 1e-12);
    }
  }
}

TEST_CASE("max_net internal weight structure") {
  // W_{k,1} = A_k, all biases zero, (W_{k+1,l}, B_{k+1,l}) = (W_{k,l-1}, B_{k,l-1})
  // for l >= 3, and W_{k+1,2} = W_{k,1} C_{k+1}.
  auto a_mat = [](std::size_t k) {
    Matrix a(2 * k - 1, k);
    a(0, 0) = 1.0;
    a(0, 1) = -1.0;
    for (std::size_t j = 1; j < k; ++j) {
      a(2 * j - 1, j) = 1.0;
      a(2 * j, j) = -1.0;
    }
    return a;
  };
  auto c_mat = [](std::size_t k) {
    Matrix c(k - 1, 2 * k - 1);
    c(0, 0) = 1.0;
    c(0, 1) = 1.0;
    c(0, 2) = -1.0;
    for (std::size_t j = 1; j + 1 < k; ++j) {
      c(j, 2 * j + 1) = 1.0;
      c(j, 2 * j + 2) = -1.0;
    }
    return c;
  };

  for (std::size_t k = 2; k <= 7; ++k) {
    StructuredNetwork phik = max_net(k);
    CHECK(phik.layers()[0].weight == a_mat(k));
    for (const auto& layer : phik.layers()) {
      for (double t : layer.bias) CHECK(t == 0.0);
    }
    StructuredNetwork phik1 = max_net(k + 1);
    for (std::size_t l = 2; l < phik1.layers().size(); ++l) {
      CHECK(phik1.layers()[l] == phik.layers()[l - 1]);
    }
    CHECK(phik1.layers()[1].weight == phik.layers()[0].weight.mul(c_mat(k + 1)));
  }
}
