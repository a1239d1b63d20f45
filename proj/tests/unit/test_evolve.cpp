#include <gtest/gtest.h>

#include <memory>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include <virann/evolve.hpp>

using namespace virann;

namespace {

CMatrix random_matrix(int n, std::mt19937_64& rng, double s) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = s * cplx(g(rng), g(rng));
  return a;
}

}  // namespace

TEST(Evolve, ConstantGeneratorIsMatrixExponential) {
  std::mt19937_64 rng(1);
  const CMatrix A = random_matrix(5, rng, 0.5);
  const MatrixPath p = MatrixPath::constant(A);
  const CMatrix expect = A.exp();
  EXPECT_LT(op_norm(ode_exp(p, 0, 1, 1e-12).U - expect), 1e-10);
  EXPECT_LT(op_norm(piecewise_exp(p, 0, 1, 3).U - expect), 1e-12);
}

TEST(Evolve, CommutingDiagonalPath) {
  // A(t) = diag(t, -2t): U(1,0) = diag(e^{1/2}, e^{-1}).
  CMatrix A0 = CMatrix::Zero(2, 2), A1 = A0;
  A1(0, 0) = 1.0;
  A1(1, 1) = -2.0;
  const MatrixPath p({0.0, 1.0}, {A0, A1});
  const CMatrix U = ode_exp(p, 0, 1, 1e-12).U;
  EXPECT_NEAR(std::abs(U(0, 0) - std::exp(0.5)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(U(1, 1) - std::exp(-1.0)), 0.0, 1e-10);
}

TEST(Evolve, PiecewiseConstantJumpsAreExact) {
  std::mt19937_64 rng(2);
  const CMatrix A = random_matrix(4, rng, 0.6), B = random_matrix(4, rng, 0.6);
  const MatrixPath p({0.0, 0.25, 1.0}, {A, B, B}, Interp::Constant);
  const CMatrix expect = (0.75 * B).exp() * (0.25 * A).exp();
  EXPECT_LT(op_norm(ode_exp(p, 0, 1, 1e-12).U - expect), 1e-10);
  EXPECT_LT(op_norm(piecewise_exp(p, 0, 1, 4096).U - expect), 1e-10);
}

TEST(Evolve, FlowAndAdjoint) {
  std::mt19937_64 rng(3);
  const MatrixPath p({0.0, 0.5, 1.0}, {random_matrix(5, rng, 0.5), random_matrix(5, rng, 0.5), random_matrix(5, rng, 0.5)});
  EXPECT_LT(flow_residual(p, 0.1, 0.45, 0.9, 1e-12), 1e-9);
  EXPECT_LT(adjoint_evolution_check(p, 1e-11), 1e-9);
}

TEST(Evolve, PropagateMatchesFullSolution) {
  std::mt19937_64 rng(4);
  const MatrixPath p({0.0, 1.0}, {random_matrix(6, rng, 0.4), random_matrix(6, rng, 0.4)});
  const CMatrix Y = random_matrix(6, rng, 1.0).leftCols(2);
  const CMatrix U = ode_exp(p, 0.2, 0.8, 1e-12).U;
  OdeOptions o;
  o.tol = 1e-12;
  EXPECT_LT(op_norm(propagate(p, 0.2, 0.8, Y, o).U - U * Y), 1e-9);
}

TEST(Evolve, FieldGeneratorMatchesDenseMatrix) {
  const ModuleData m = build_module({2.0, 0.5, 6});
  std::mt19937_64 rng(5);
  const FieldPath path = random_inward_path(2, rng, 2);
  const FieldGenerator gen(path, m);
  const CMatrix in = CMatrix::Random(m.total_dim(), 3);
  CMatrix out = CMatrix::Zero(in.rows(), in.cols());
  gen.apply(0.3, gen.segment_of(0.3), in, out);
  EXPECT_LT(op_norm(out - pi_field(path.at(0.3), m) * in), 1e-12);
}

TEST(Evolve, GrowthBoundForDissipativeGenerator) {
  // A = -I + skew part: ||U v|| <= e^{-(t-s)} ||v||.
  std::mt19937_64 rng(6);
  const CMatrix K = random_matrix(4, rng, 1.0);
  const CMatrix A = -CMatrix::Identity(4, 4) + (K - K.adjoint()) / 2.0;
  const auto rep = growth_bound_check(MatrixPath::constant(A), -1.0, {{0.0, 1.0}, {0.3, 0.6}}, random_matrix(4, rng, 1.0));
  EXPECT_LT(rep.max_margin, 1e-9);
  EXPECT_EQ(rep.samples, 8);
}

TEST(Evolve, ParameterDerivativeSecondOrder) {
  std::mt19937_64 rng(7);
  const CMatrix A = random_matrix(4, rng, 0.5), B = random_matrix(4, rng, 0.5);
  const PathFamily fam = [=](double p) {
    return std::make_unique<MatrixPath>(std::vector<double>{0.0, 1.0}, std::vector<CMatrix>{A, A + p * B + p * p * A});
  };
  const double d1 = parameter_derivative(fam, 0.2, 0.1).difference;
  const double d2 = parameter_derivative(fam, 0.2, 0.05).difference;
  EXPECT_NEAR(std::log2(d1 / d2), 2.0, 0.15);
}

TEST(Evolve, RejectsBadArguments) {
  const MatrixPath p = MatrixPath::constant(CMatrix::Identity(2, 2));
  EXPECT_THROW(piecewise_exp(p, 0.5, 0.2, 10), DomainError);
  EXPECT_THROW(piecewise_exp(p, 0.0, 1.0, 0), DomainError);
}
