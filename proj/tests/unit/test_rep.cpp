#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <virann/rep.hpp>

using namespace virann;

TEST(Rep, StandardElementIsPowerOfL0) {
  const ModuleData m = build_module({2.0, 0.5, 10});
  const auto lv = m.coordinate_levels();
  for (cplx q : {cplx(0.5), std::polar(0.5, 0.1)}) {
    const CMatrix U = represent(standard_element(q), m).U;
    for (int k = 0; k < m.total_dim(); ++k) EXPECT_LT(std::abs(U(k, k) - std::pow(q, 0.5 + lv[k])), 1e-9);
    EXPECT_LT((U - CMatrix(U.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Rep, ZeroPathIsIdentityTimesZ) {
  const ModuleData m = build_module({2.0, 0.5, 6});
  AnnulusElement E = identity_element();
  E.z = cplx(0.0, 3.0);
  const CMatrix U = represent(E, m).U;
  EXPECT_LT((U - cplx(0.0, 3.0) * CMatrix::Identity(U.rows(), U.cols())).norm(), 1e-14);
}

TEST(Rep, Preconditions) {
  const ModuleData m = build_module({2.0, 0.5, 4});
  AnnulusElement out;
  out.path = FieldPath::constant(VectorField::mode(0, 0.3));
  try {
    represent(out, m);
    FAIL();
  } catch (const NotInwardError& e) {
    EXPECT_NEAR(e.margin(), 0.3, 1e-12);
  }
  AnnulusElement big;
  big.path = FieldPath::constant(VectorField::from_modes({{0, -1.0}, {5, 0.01}}));
  EXPECT_THROW(represent(big, m), DomainError);
}

TEST(Rep, ProtectedLevel) {
  const ModuleData m = build_module({2.0, 0.5, 12});
  EXPECT_EQ(protected_level(m, 2), 8);
  EXPECT_EQ(protected_level(m, 7), -1);
  EXPECT_EQ(protected_columns(m, 2).cols(), 4);
}

TEST(Rep, SemigroupAndDaggerOnDiagonalElements) {
  const ModuleData m = build_module({2.0, 0.5, 8});
  EXPECT_LT(semigroup_residual(standard_element(0.5), standard_element(0.6), m), 1e-8);
  EXPECT_LT(dagger_residual(standard_element(0.5), m), 1e-9);
  std::mt19937_64 rng(1);
  AnnulusElement E;
  E.path = random_inward_path(2, rng, 2);
  EXPECT_LT(semigroup_residual(E, identity_element(), m), 1e-8);
  EXPECT_LT(dagger_residual(E, m), 1e-8);
}

TEST(Rep, TransportEigenMode) {
  // X = (ln r) l_0, f0 = l_n: f(t) = r^{-n t} l_n.
  const double r = 0.5;
  const FieldPath X = FieldPath::constant(VectorField::mode(0, std::log(r)));
  for (int n : {-2, 1, 3}) {
    const auto res = transport_field(VectorField::mode(n), X);
    const VectorField f1 = res.f.at(1.0);
    EXPECT_LT(f1.distance(VectorField::mode(n, std::pow(r, -n))), 1e-9) << n;
  }
}

TEST(Rep, TransportRotationAndFixedPoint) {
  const double alpha = 0.8;
  const FieldPath rot = FieldPath::constant(VectorField::mode(0, cplx(0.0, alpha)));
  const VectorField f0 = VectorField::from_modes({{2, cplx(0.3, 0.1)}, {-1, 0.5}});
  const VectorField f1 = transport_field(f0, rot).f.at(1.0);
  for (int n : {2, -1}) EXPECT_LT(std::abs(f1[n] - f0[n] * std::polar(1.0, -n * alpha)), 1e-9);
  const VectorField X = VectorField::from_modes({{0, -1.0}, {1, 0.2}, {-1, 0.1}});
  EXPECT_LT(transport_field(X, FieldPath::constant(X)).f.at(1.0).distance(X), 1e-9);
}

TEST(Rep, SegalDiagonalCase) {
  const ModuleData m = build_module({2.0, 0.5, 10});
  for (int n = -2; n <= 2; ++n) {
    const auto s = segal_residual(standard_element(0.5), VectorField::mode(n), m);
    EXPECT_LT(s.residual, 1e-8) << n;
    EXPECT_LT(std::abs(s.omega_integral), 1e-14);
  }
}

TEST(Rep, SegalBatchMatchesSingle) {
  const ModuleData m = build_module({2.0, 0.5, 8});
  std::mt19937_64 rng(2);
  AnnulusElement E;
  E.path = random_inward_path(2, rng, 1, 0.05, 0.7);
  const std::vector<VectorField> fs{VectorField::mode(-1), VectorField::mode(1)};
  const auto batch = segal_residuals(E, fs, m);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto one = segal_residual(E, fs[i], m);
    EXPECT_NEAR(batch[i].residual, one.residual, 1e-12);
    EXPECT_EQ(batch[i].omega_integral, one.omega_integral);
  }
}

TEST(Rep, HolomorphyDetectsConjugation) {
  const ModuleData m = build_module({2.0, 0.5, 6});
  const double hol = holomorphy_residual([](cplx q) { return standard_element(q); }, 0.5, 0.02, m);
  const double anti = holomorphy_residual([](cplx q) { return standard_element(std::conj(q)); }, 0.5, 0.02, m);
  EXPECT_LT(hol, 1e-2);
  EXPECT_GT(anti, 0.5);
}

TEST(Rep, MobiusPartialSums) {
  EXPECT_NEAR(mobius_partial_sum(2.0, 0.5, 0.5, 20), 4.0 / 3.0, 1e-10);
  EXPECT_NEAR(mobius_term_norm(0.5, 3), 6.0 * 1.0 * 2.0 * 3.0, 1e-12);
}
