#include <gtest/gtest.h>

#include "qstein/qstein.hpp"

using namespace qstein;

namespace {

// Mixture of k random product states across each site's A:B cut; PPT by construction.
Matrix random_separable(const SiteStructure& s, int k, std::uint64_t seed) {
  const auto d = s.total_dim();
  Matrix out = Matrix::Zero(d, d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double total = 0.0;
  for (int j = 0; j < k; ++j) {
    std::vector<Matrix> parts;
    for (int i = 0; i < s.num_sites(); ++i) {
      auto [da, db] = (*s.bipartition)[static_cast<std::size_t>(i)];
      const std::uint64_t base = seed * 1000 + static_cast<std::uint64_t>(j * 10 + i) * 2;
      parts.push_back(kron(random_density(da, 1 + static_cast<int>(base % da), base), random_density(db, db, base + 1)));
    }
    const double w = u(rng);
    out += w * tensor(std::span<const Matrix>(parts));
    total += w;
  }
  return out / total;
}

Matrix bell() { return projector(max_entangled(2)); }

}  // namespace

TEST(Resource, PptMembership) {
  auto set = ResourceSet::ppt(SiteStructure({4}, {{2, 2}}));
  EXPECT_TRUE(is_member(set, maximally_mixed(4)));
  EXPECT_FALSE(is_member(set, bell()));
}

TEST(Resource, PptConvexityAndReplacerClosure) {
  SiteStructure s = two_copy_bipartite(2, 2);
  auto set = ResourceSet::ppt(s);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Matrix a = random_separable(s, 3, seed), b = random_separable(s, 2, seed + 500);
    ASSERT_TRUE(is_member(set, a));
    const double p = u(rng);
    EXPECT_TRUE(is_member(set, p * a + (1.0 - p) * b)) << seed;
    const int i = static_cast<int>(seed % 2);
    EXPECT_TRUE(is_member(set, replacer_channel(set.omega, i, s, a))) << seed;
  }
}

TEST(Resource, GradientMatchesFiniteDifference) {
  Matrix rho = random_density(4, 4, 1), sigma = random_density(4, 4, 2);
  Matrix dir = random_hermitian(4, 3);
  dir -= dir.trace() / 4.0 * Matrix::Identity(4, 4);
  const double h = 1e-6;
  const double fd = (rel_entropy(rho, sigma + h * dir) - rel_entropy(rho, sigma - h * dir)) / (2.0 * h);
  const double an = (ree_gradient(rho, sigma) * dir).trace().real();
  EXPECT_NEAR(fd, an, 1e-6);
}

TEST(Resource, BellStateHasLogTwo) {
  auto set = ResourceSet::ppt(SiteStructure({4}, {{2, 2}}));
  auto r = ree_frank_wolfe(bell(), set);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.gap, 1e-4);
  EXPECT_NEAR(r.value, std::log(2.0), 1e-3);
  EXPECT_TRUE(is_member(set, r.optimizer));
}

TEST(Resource, WernerStateMatchesClosedForm) {
  // Werner-type p |Phi+><Phi+| + (1-p) 1/4 with F = (1+3p)/4 > 1/2: REE = log 2 - h(F).
  const double p = 0.8, f = (1.0 + 3.0 * p) / 4.0;
  Matrix rho = p * bell() + (1.0 - p) * maximally_mixed(4);
  auto r = ree_frank_wolfe(rho, ResourceSet::ppt(SiteStructure({4}, {{2, 2}})));
  EXPECT_NEAR(r.value, std::log(2.0) - binary_entropy(f), 1e-3);
}

TEST(Resource, PptMembersHaveZeroRee) {
  SiteStructure s({4}, {{2, 2}});
  auto set = ResourceSet::ppt(s);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto r = ree_frank_wolfe(random_separable(s, 2, seed), set);
    EXPECT_LE(r.value, 1e-4) << seed;
  }
  auto r = ree_frank_wolfe(maximally_mixed(4), set);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Resource, FrankWolfeObjectiveIsMonotone) {
  auto set = ResourceSet::ppt(SiteStructure({4}, {{2, 2}}));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Matrix rho = random_density(4, 1 + static_cast<int>(seed % 3), seed);
    auto r = ree_frank_wolfe(rho, set);
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      EXPECT_LE(r.objective_trace[k], r.objective_trace[k - 1] + 1e-12) << "seed " << seed << " step " << k;
    if (r.converged) {
      EXPECT_LE(r.gap, 1e-4);
    }
    EXPECT_TRUE(is_member(set, r.optimizer));
  }
}

TEST(Resource, ReeContractsUnderSymmetrizer) {
  SiteStructure s = two_copy_bipartite(2, 2);
  auto set = ResourceSet::ppt(s);
  FrankWolfeOptions fw;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Matrix rho = random_density(16, 2, seed);
    const double before = ree_frank_wolfe(rho, set, fw).value;
    const double after = ree_frank_wolfe(symmetrize(rho, s), set, fw).value;
    EXPECT_LE(after, before + 2.0 * fw.tol) << seed;
  }
}

TEST(Resource, ContinuityBoundIsNondecreasing) {
  double prev = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double v = continuity_bound(0.005 * k, 4, 0.25);
    EXPECT_GE(v, prev - 1e-15);
    prev = v;
  }
  EXPECT_THROW(continuity_bound(0.6, 4, 0.25), std::invalid_argument);
  EXPECT_THROW(almostiid_continuity_bound(15, 1, 2, 0.5), std::invalid_argument);
}

TEST(Resource, ContinuityHoldsForNearbyStates) {
  auto set = ResourceSet::ppt(SiteStructure({4}, {{2, 2}}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix rho = random_density(4, 1, seed);
    Matrix rho_p = 0.8 * rho + 0.2 * random_density(4, 4, seed + 10);
    auto rep = continuity_check(rho, rho_p, set);
    EXPECT_FALSE(rep.skipped);
    EXPECT_TRUE(rep.pass) << rep.delta << " > " << rep.bound;
  }
}

TEST(Resource, SmoothingChannelLimits) {
  SiteStructure s = two_copy_bipartite(2, 2);
  Matrix omega = maximally_mixed(4);
  Matrix x = random_density(16, 3, 4);
  EXPECT_LE((smoothing_channel_Et(0.0, omega, s, x) - x).norm(), 1e-14);
  Matrix full = replacer_channel(omega, 1, s, replacer_channel(omega, 0, s, x));
  EXPECT_LE((smoothing_channel_Et(50.0, omega, s, x) - full).norm(), 1e-12);
  EXPECT_LE((full - tensor_power(omega, 2)).norm(), 1e-12);
  auto set = ResourceSet::ppt(s);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Matrix m = random_separable(s, 2, seed);
    EXPECT_TRUE(is_member(set, smoothing_channel_Et(0.3 + 0.1 * static_cast<double>(seed), omega, s, m)));
  }
}

TEST(Resource, RegularizedSequenceRunningInfimum) {
  Matrix rho = random_density(2, 2, 5), sigma = random_density(2, 2, 6);
  auto rows = regularized_sequence(rho, [&](int n) { return ResourceSet::single_iid(sigma, n); }, 4);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_NEAR(rows[k].per_copy, rel_entropy(rho, sigma), 1e-9);
    if (k > 0) {
      EXPECT_LE(rows[k].running_infimum, rows[k - 1].running_infimum);
    }
  }
}

TEST(Resource, PerCopyReeIsCappedByReplacerReference) {
  auto set = ResourceSet::ppt(SiteStructure({4}, {{2, 2}}));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto rep = rer_upper_bound_check(random_density(4, 1, seed), set);
    EXPECT_TRUE(rep.pass) << rep.per_copy;
  }
  auto iid = ResourceSet::single_iid(random_density(2, 2, 1), 2);
  auto rep = rer_upper_bound_check(tensor_power(random_density(2, 2, 2), 2), iid);
  EXPECT_LE(rep.per_copy, rep.bound);
}

TEST(Resource, SingleIidSetRejectsRankDeficientReference) {
  EXPECT_THROW(ResourceSet::single_iid(projector(basis_vector(2, 0)), 2), std::invalid_argument);
  EXPECT_THROW(ResourceSet::ppt(SiteStructure({4})), std::invalid_argument);
}
