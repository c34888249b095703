#include <gtest/gtest.h>

#include "qstein/divergences.hpp"

using namespace qstein;

namespace {

Matrix random_unitary(int d, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(d, d, seed));
  return qr.householderQ() * Matrix::Identity(d, d);
}

// X -> tr_2[U (X (x) phi) U*] for a fixed ancilla state phi.
Matrix apply_channel(const Matrix& x, const Matrix& u, const Matrix& phi) {
  const int d = static_cast<int>(x.rows()), a = static_cast<int>(phi.rows());
  Matrix y = u * kron(x, phi) * u.adjoint();
  return partial_trace(y, SiteStructure({d, a}), {1});
}

}  // namespace

TEST(Divergences, EntropyOfSimpleStates) {
  EXPECT_NEAR(von_neumann_entropy(maximally_mixed(4)), std::log(4.0), 1e-12);
  EXPECT_NEAR(von_neumann_entropy(projector(random_pure(3, 1))), 0.0, 1e-10);
  EXPECT_NEAR(binary_entropy(0.5), std::log(2.0), 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
}

TEST(Divergences, RelativeEntropyDiagonal) {
  Matrix p = Matrix::Zero(2, 2), q = Matrix::Zero(2, 2);
  p(0, 0) = 0.7;
  p(1, 1) = 0.3;
  q(0, 0) = 0.4;
  q(1, 1) = 0.6;
  const double expect = 0.7 * std::log(0.7 / 0.4) + 0.3 * std::log(0.3 / 0.6);
  EXPECT_NEAR(rel_entropy(p, q), expect, 1e-12);
  EXPECT_NEAR(expect, 0.18381, 1e-4);
}

TEST(Divergences, InfiniteOutsideSupport) {
  Matrix rho = maximally_mixed(2);
  Matrix sigma = projector(basis_vector(2, 0));
  EXPECT_TRUE(is_inf(rel_entropy(rho, sigma)));
  EXPECT_TRUE(is_inf(dmax(rho, sigma)));
  EXPECT_FALSE(support_contained(rho, sigma));
  EXPECT_NEAR(weight_outside_support(rho, sigma), 0.5, 1e-12);
}

TEST(Divergences, DataProcessingUnderPartialTrace) {
  SiteStructure s({2, 3});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Matrix rho = random_density(6, 6, seed), sigma = random_density(6, 6, seed + 1000);
    Matrix r1 = partial_trace(rho, s, {1}), s1 = partial_trace(sigma, s, {1});
    EXPECT_LE(rel_entropy(r1, s1), rel_entropy(rho, sigma) + 1e-7);
    EXPECT_LE(dmax(r1, s1), dmax(rho, sigma) + 1e-7);
    EXPECT_LE(renyi_sandwiched(r1, s1, 2.0), renyi_sandwiched(rho, sigma, 2.0) + 1e-7);
  }
}

TEST(Divergences, DataProcessingUnderRandomChannels) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Matrix rho = random_density(3, 3, seed), sigma = random_density(3, 3, seed + 1000);
    Matrix u = random_unitary(6, seed + 2000);
    Matrix phi = random_density(2, 1, seed + 3000);
    Matrix r1 = apply_channel(rho, u, phi), s1 = apply_channel(sigma, u, phi);
    EXPECT_LE(rel_entropy(r1, s1), rel_entropy(rho, sigma) + 1e-7) << seed;
    EXPECT_LE(dmax(r1, s1), dmax(rho, sigma) + 1e-7) << seed;
    EXPECT_LE(renyi_sandwiched(r1, s1, 1.5), renyi_sandwiched(rho, sigma, 1.5) + 1e-7) << seed;
  }
}

TEST(Divergences, SandwichedRenyiMonotoneInAlpha) {
  const std::vector<double> grid = {0.5, 0.9, 1.5, 2.0, 5.0, 50.0};
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Matrix rho = random_density(3, 3, seed), sigma = random_density(3, 3, seed + 500);
    double prev = -1e300;
    for (double a : grid) {
      const double v = renyi_sandwiched(rho, sigma, a);
      EXPECT_GE(v, prev - 1e-9) << "alpha " << a;
      prev = v;
    }
  }
}

TEST(Divergences, SandwichedRenyiApproachesMaxAtLargeAlpha) {
  // 0 <= D_max - D_alpha <= (log(1/lambda_min(sigma)) - D_max) / (alpha - 1) for full-rank sigma.
  const double alpha = 50.0;
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int d = 2 + static_cast<int>(seed % 2);
    Matrix rho = random_density(d, d, seed), sigma = random_density(d, d, seed + 500);
    const double dm = dmax(rho, sigma);
    const double gap = dm - renyi_sandwiched(rho, sigma, alpha);
    const double bound = (std::log(1.0 / min_eigenvalue(sigma)) - dm) / (alpha - 1.0);
    EXPECT_GE(gap, -1e-9) << seed;
    EXPECT_LE(gap, bound + 1e-9) << seed;
    if (bound <= 0.02) {
      EXPECT_LE(gap, 0.02) << seed;
      ++within;
    }
  }
  EXPECT_GT(within, 0);
}

TEST(Divergences, RenyiNearOneIsRelativeEntropy) {
  Matrix rho = random_density(3, 3, 1), sigma = random_density(3, 3, 2);
  const double d = rel_entropy(rho, sigma);
  EXPECT_NEAR(renyi_sandwiched(rho, sigma, 1.0 - 1e-5), d, 1e-3);
  EXPECT_NEAR(renyi_sandwiched(rho, sigma, 1.0 + 1e-5), d, 1e-3);
  EXPECT_THROW(renyi_sandwiched(rho, sigma, 1.0), std::invalid_argument);
  EXPECT_THROW(renyi_sandwiched(rho, sigma, 0.3), std::invalid_argument);
}

TEST(Divergences, OrderingOfMinRelativeMax) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Matrix rho = random_density(4, 4, seed), sigma = random_density(4, 4, seed + 77);
    EXPECT_LE(dmin(rho, sigma), rel_entropy(rho, sigma) + 1e-7);
    EXPECT_LE(rel_entropy(rho, sigma), dmax(rho, sigma) + 1e-7);
  }
}

TEST(Divergences, PurifiedDistanceTriangle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Matrix a = random_density(3, 2, seed), b = random_density(3, 3, seed + 1), c = random_density(3, 1, seed + 2);
    EXPECT_LE(purified_distance(a, c), purified_distance(a, b) + purified_distance(b, c) + 1e-9);
    EXPECT_LE(trace_distance(a, c), purified_distance(a, c) + 1e-9);
  }
}

TEST(Divergences, FidelityOfPureStates) {
  Vector u = random_pure(4, 1), v = random_pure(4, 2);
  EXPECT_NEAR(fidelity(projector(u), projector(v)), std::norm(u.dot(v)), 1e-9);
  EXPECT_NEAR(fidelity(projector(u), projector(u)), 1.0, 1e-9);
}

TEST(Divergences, UhlmannExtensionHasRequestedMarginal) {
  Matrix rho_ab = random_density(6, 6, 5);
  Matrix sigma_a = random_density(2, 2, 6);
  Matrix ext = uhlmann_extension(rho_ab, sigma_a, 2, 3);
  EXPECT_TRUE(is_density(ext));
  EXPECT_LE((partial_trace(ext, SiteStructure({2, 3}), {1}) - sigma_a).norm(), 1e-9);
  const double fa = fidelity(partial_trace(rho_ab, SiteStructure({2, 3}), {1}), sigma_a);
  EXPECT_NEAR(fidelity(rho_ab, ext), fa, 1e-7);
}
