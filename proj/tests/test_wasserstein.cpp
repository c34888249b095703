#include <gtest/gtest.h>

#include "qstein/wasserstein.hpp"

using namespace qstein;

TEST(Wasserstein, SingleSiteIsTraceDistance) {
  SiteStructure s({3});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(3, 3, seed), b = random_density(3, 2, seed + 9);
    EXPECT_NEAR(w1_distance(a, b, s).value, trace_distance(a, b), 1e-7);
  }
}

TEST(Wasserstein, OrthogonalProductStatesCountFlippedSites) {
  SiteStructure s = SiteStructure::uniform(2, 3);
  Matrix zero = projector(basis_vector(2, 0)), one = projector(basis_vector(2, 1));
  Matrix a = tensor({zero, zero, zero}), b = tensor({one, zero, one});
  EXPECT_NEAR(w1_distance(a, b, s).value, 2.0, 1e-7);
}

TEST(Wasserstein, BoundedByScaledTraceDistance) {
  SiteStructure s({2, 2, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(8, 3, seed), b = random_density(8, 8, seed + 1);
    const double w = w1_distance(a, b, s).value;
    EXPECT_LE(w / 3.0, trace_distance(a, b) + 1e-7);
    EXPECT_GE(w, -1e-9);
    EXPECT_LE(w, 3.0 + 1e-9);
  }
}

TEST(Wasserstein, SymmetryAndTriangle) {
  SiteStructure s({2, 3});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(6, 2, seed), b = random_density(6, 6, seed + 1), c = random_density(6, 1, seed + 2);
    const double ab = w1_distance(a, b, s).value, ba = w1_distance(b, a, s).value;
    EXPECT_NEAR(ab, ba, 1e-7);
    EXPECT_LE(w1_distance(a, c, s).value, ab + w1_distance(b, c, s).value + 1e-6);
  }
}

TEST(Wasserstein, ContractionUnderPartialTrace) {
  SiteStructure s({2, 2, 2});
  SiteStructure s2({2, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(8, 4, seed), b = random_density(8, 8, seed + 3);
    const double full = w1_distance(a, b, s).value;
    const double marg = w1_distance(partial_trace(a, s, {2}), partial_trace(b, s, {2}), s2).value;
    EXPECT_LE(marg, full + 1e-7);
  }
}

TEST(Wasserstein, WitnessCertifiesValue) {
  SiteStructure s({2, 2});
  Matrix a = random_density(4, 2, 5), b = random_density(4, 4, 6);
  auto cert = w1_distance(a, b, s);
  ASSERT_EQ(cert.witness.size(), 2u);
  Matrix sum = cert.witness[0] + cert.witness[1];
  EXPECT_LE((sum - (a - b)).norm(), 1e-9);
  for (int i = 0; i < 2; ++i) EXPECT_LE(partial_trace(cert.witness[static_cast<std::size_t>(i)], s, {i}).norm(), 1e-9);
  EXPECT_GE(cert.witness_cost, cert.value - 1e-7);
  EXPECT_NEAR(cert.witness_cost, cert.value, 1e-6);
  EXPECT_LE(lipschitz_constant(cert.observable, s), 1.0 + 1e-6);
}

TEST(Wasserstein, SymmetricReductionMatchesGeneric) {
  SiteStructure s = SiteStructure::uniform(2, 3);
  Matrix a = tensor_power(random_density(2, 2, 1), 3), b = tensor_power(random_density(2, 2, 2), 3);
  auto sym = w1_distance(a, b, s);
  EXPECT_TRUE(sym.symmetric);
  EXPECT_NEAR(sym.value, w1_distance_generic(a, b, s).value, 1e-6);
}

TEST(Wasserstein, BracketContainsExactValue) {
  SiteStructure s({2, 2, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(8, 2, seed);
    Matrix b = tensor({random_density(2, 2, seed + 1), random_density(2, 2, seed + 2), random_density(2, 2, seed + 3)});
    const double w = w1_distance(a, b, s).value;
    auto br = w1_bracket(a, b, s);
    EXPECT_LE(br.lo, w + 1e-7);
    EXPECT_GE(br.hi, w - 1e-7);
  }
}

TEST(Wasserstein, LipschitzOfLocalObservable) {
  SiteStructure s({2, 2});
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  // Z (x) 1 changes by 2 when site 0 is replaced.
  EXPECT_NEAR(lipschitz_constant(kron(z, Matrix::Identity(2, 2)), s), 2.0, 1e-6);
  EXPECT_NEAR(lipschitz_constant(kron(z, z), s), 2.0, 1e-6);
}

TEST(Wasserstein, DualPairingWeakDuality) {
  SiteStructure s({2, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix a = random_density(4, 2, seed), b = random_density(4, 4, seed + 1);
    auto r = w1_dual_pairing_check(a, b, random_hermitian(4, seed + 2), s);
    EXPECT_TRUE(r.pass) << r.slack;
  }
}
