#include <gtest/gtest.h>

#include <array>

#include "qstein/almost_iid.hpp"
#include "qstein/wasserstein.hpp"

using namespace qstein;

namespace {

double binomial_sum(int n, int r, int d) {
  double total = 0.0;
  for (int k = 0; k <= r; ++k) total += binomial(n, k) * std::pow(d - 1.0, k);
  return total;
}

Matrix qubit_sigma(std::uint64_t seed) { return random_density(2, 2, seed); }

}  // namespace

TEST(AlmostIID, CompletedBasisIsUnitaryWithThetaFirst) {
  Vector theta = random_pure(4, 3);
  Matrix u = complete_basis(theta);
  EXPECT_LE((u.adjoint() * u - Matrix::Identity(4, 4)).norm(), 1e-12);
  EXPECT_LE((u.col(0) - theta).norm(), 1e-12);
}

TEST(AlmostIID, BasisSizeAndOrthonormality) {
  Vector theta = random_pure(4, 1);
  for (int n : {2, 3}) {
    for (int r = 0; r <= 2; ++r) {
      auto b = almost_iid_basis(theta, n, r);
      EXPECT_EQ(b.size(), static_cast<int>(binomial_sum(n, std::min(r, n), 4)));
      const Matrix g = b.vectors.adjoint() * b.vectors;
      EXPECT_LE((g - Matrix::Identity(b.size(), b.size())).norm(), 1e-12);
      EXPECT_LE(std::log(static_cast<double>(b.size())), log_card_bound(n, r, 4) + 1e-12);
    }
  }
}

TEST(AlmostIID, ZeroDefectsIsTheIidVector) {
  Vector theta = random_pure(4, 2);
  auto b = almost_iid_basis(theta, 3, 0);
  ASSERT_EQ(b.size(), 1);
  EXPECT_NEAR(std::abs(b.vectors.col(0).dot(tensor_power(theta, 3))), 1.0, 1e-12);
}

TEST(AlmostIID, SamplesStayInSpanAndHaveIidMarginalsUpToDefects) {
  Matrix sigma = qubit_sigma(7);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_almost_iid_along(sigma, 3, 1, seed);
    EXPECT_LE(s.span_residual, 1e-9);
    EXPECT_TRUE(is_density(s.rho_ae));
    EXPECT_TRUE(is_density(s.rho_a));
    EXPECT_TRUE(is_permutation_invariant(s.rho_ae, s.ensemble.ae_structure()));
  }
  auto iid = random_almost_iid_along(sigma, 3, 0, 1);
  EXPECT_LE((iid.rho_a - tensor_power(sigma, 3)).norm(), 1e-10);
}

TEST(AlmostIID, CoefficientSymmetrizationMatchesOperatorTwirl) {
  Matrix sigma = qubit_sigma(3);
  auto s = random_almost_iid_along(sigma, 3, 1, 5, false);
  const auto& b = s.ensemble.basis;
  Matrix direct = symmetrize(s.rho_ae, s.ensemble.ae_structure());
  Matrix via = b.vectors * symmetrize_coefficients(b, s.ensemble.beta) * b.vectors.adjoint();
  EXPECT_LE((direct - via).norm(), 1e-12);
}

TEST(AlmostIID, ReplacementByThetaKeepsMembership) {
  Matrix sigma = qubit_sigma(11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3, r = 1 + static_cast<int>(seed % 2);
    auto s = random_almost_iid_along(sigma, n, r, seed, seed % 3 != 0);
    const auto& b = s.ensemble.basis;
    for (int i = 0; i < n; ++i) {
      Matrix rep = replace_site_with_theta(s.rho_ae, b.theta, n, i);
      EXPECT_LE(span_residual(b, rep), 1e-9) << "seed " << seed << " site " << i;
      EXPECT_TRUE(is_density(rep));
    }
  }
}

TEST(AlmostIID, WassersteinBoundOverEnsembles) {
  for (std::uint64_t k = 0; k < 200; ++k) {
    const int n = 3 + static_cast<int>(k % 3), r = static_cast<int>((k / 3) % 3);
    Matrix sigma = qubit_sigma(1000 + k);
    auto s = random_almost_iid_along(sigma, n, r, k);
    SiteStructure sa = s.ensemble.a_structure();
    const double w = w1_distance(s.rho_a, tensor_power(sigma, n), sa).value / n;
    const double bound = 2.0 * std::sqrt(static_cast<double>(r) / n);
    EXPECT_LE(w, bound + 1e-6) << "n " << n << " r " << r << " instance " << k;
    EXPECT_LE(w1_upper_bound_telescope(s.rho_a, sigma, sa) / n, bound + 1e-6) << "n " << n << " r " << r;
  }
}

TEST(AlmostIID, PinchingInequality) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Matrix sigma = qubit_sigma(seed + 400);
    const int n = 2 + static_cast<int>(seed % 3), r = static_cast<int>(seed % 3);
    auto s = random_almost_iid_along(sigma, n, r, seed);
    auto p = pinch_to_blocks(s.ensemble);
    EXPECT_GE(p.min_eig_coeff, -1e-8);
    EXPECT_GE(p.min_eig_a, -1e-8);
    auto d = dmax_pinched_vs_iid(s.ensemble, sigma);
    EXPECT_TRUE(d.pass) << d.per_copy << " > " << d.bound;
  }
}

TEST(AlmostIID, FidelityBoundForSymmetricReference) {
  Matrix sigma = qubit_sigma(21);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = random_almost_iid_along(sigma, 3, 1, seed);
    Matrix omega = tensor_power(random_density(2, 2, seed + 50), 3);
    auto rep = fidelity_almost_iid_check(omega, s.ensemble, sigma);
    EXPECT_TRUE(rep.pass) << rep.lhs << " vs " << rep.rhs;
  }
}

TEST(AlmostIID, SymmetricSubspaceProjectors) {
  const std::vector<std::array<int, 3>> cases = {{2, 2, 0}, {2, 2, 1}, {3, 2, 1}, {2, 4, 2}};
  for (const auto& c : cases) {
    const int l = c[0], d = c[1], r = c[2];
    Vector theta = random_pure(d, static_cast<std::uint64_t>(l * 100 + d * 10 + r));
    Matrix p = sym_subspace_projector(theta, l, r);
    EXPECT_LE(operator_norm(p * p - p), 1e-10);
    const double rank = p.trace().real();
    EXPECT_NEAR(rank, static_cast<double>(types_near(l, d, r).size()), 1e-9);
  }
}

TEST(AlmostIID, TypeStatesAreOrthonormal) {
  auto types = types_near(3, 2, 3);
  ASSERT_EQ(types.size(), 4u);
  for (std::size_t a = 0; a < types.size(); ++a)
    for (std::size_t b = 0; b < types.size(); ++b) {
      const cplx ip = type_state(3, 2, types[a]).dot(type_state(3, 2, types[b]));
      EXPECT_NEAR(std::abs(ip), a == b ? 1.0 : 0.0, 1e-12);
    }
}

TEST(AlmostIID, RotationUnitaries) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    Vector xi = random_pure(d, seed), theta = random_pure(d, seed + 999);
    Matrix u = rotation_unitary(xi, theta);
    EXPECT_LE(operator_norm(u.adjoint() * u - Matrix::Identity(d, d)), 1e-10);
    EXPECT_LE((u * xi - theta).norm(), 1e-9);
  }
}

TEST(AlmostIID, SymmetrizerRejectsTooManySites) {
  SiteStructure s = SiteStructure::uniform(2, kMaxSymmetrizeSites + 1);
  EXPECT_THROW(symmetrize(Matrix::Identity(2, 2), s), std::exception);
}
