#include <gtest/gtest.h>

#include "spinit/selftest.hpp"
#include "spinit/sparse_pca.hpp"

using namespace spinit;

namespace {

SpectralOperator diag_op(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v[i++] = x;
  return SpectralOperator::from_dense(v.asDiagonal().toDenseMatrix());
}

double sign_distance(const Vector& a, const Vector& b) { return std::min((a - b).norm(), (a + b).norm()); }

Vector sparse_unit(Index n, std::initializer_list<std::pair<Index, double>> entries) {
  Vector v = Vector::Zero(n);
  for (const auto& [j, x] : entries) v[j] = x;
  return v.normalized();
}

SpcaConfig config(Index s, SpcaSolver solver) {
  SpcaConfig c;
  c.s = s;
  c.solver = solver;
  return c;
}

}  // namespace

TEST(SpcaConfig, Validation) {
  SpcaConfig c;
  EXPECT_NO_THROW(c.validate());
  c.s = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SpcaConfig{};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SpcaConfig{};
  c.deflation = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(TopIndices, TiesGoToLowestIndex) {
  Vector v(5);
  v << 1.0, -3.0, 3.0, 2.0, -2.0;
  EXPECT_EQ(top_indices(v, 3), (std::vector<Index>{1, 2, 3}));
  Vector t = truncate_top(v, 2);
  EXPECT_EQ(t, (Vector(5) << 0.0, -3.0, 3.0, 0.0, 0.0).finished());
}

TEST(StartVector, LargestDiagonalColumn) {
  const StartVector sv = start_vector(diag_op({1.0, 3.0, 2.0}));
  EXPECT_FALSE(sv.degenerate);
  EXPECT_EQ(sv.vector, (Vector(3) << 0.0, 1.0, 0.0).finished());
}

TEST(StartVector, RankOneGivesDirection) {
  Vector a(4);
  a << 1.0, -2.0, 0.5, 3.0;
  const StartVector sv = start_vector(SpectralOperator::from_dense(2.5 * a * a.transpose()));
  EXPECT_LE(sign_distance(sv.vector, a.normalized()), 1e-14);
}

TEST(StartVector, TieAndZeroOperator) {
  Matrix M = Matrix::Identity(3, 3);
  M(1, 2) = M(2, 1) = 0.5;
  EXPECT_EQ(start_vector(SpectralOperator::from_dense(M)).vector, (Vector(3) << 1.0, 0.0, 0.0).finished());
  const StartVector z = start_vector(SpectralOperator::from_dense(Matrix::Zero(3, 3)));
  EXPECT_TRUE(z.degenerate);
  EXPECT_EQ(z.vector, (Vector(3) << 1.0, 0.0, 0.0).finished());
}

TEST(TPower, DiagonalConvergesQuickly) {
  const SpectralOperator op = diag_op({3.0, 2.0, 1.0, 0.0, 0.0});
  const Vector start = (Vector(5) << 1.0, 1.0, 1.0, 0.0, 0.0).finished() / std::sqrt(3.0);
  const SpcaResult r = tpower(op, config(1, SpcaSolver::tpower), start);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iters_used, 3);
  EXPECT_LE(sign_distance(r.direction, (Vector(5) << 1, 0, 0, 0, 0).finished()), 1e-12);
  EXPECT_DOUBLE_EQ(r.objective, 3.0);
}

TEST(TPower, RankOneSparseExactAfterOneStep) {
  const Vector v = sparse_unit(8, {{1, 2.0}, {4, -1.0}, {6, 0.5}});
  const SpectralOperator op = SpectralOperator::from_dense(v * v.transpose());
  SpcaConfig c = config(3, SpcaSolver::tpower);
  c.max_iters = 1;
  const SpcaResult r = tpower(op, c, Vector::Ones(8).normalized());
  EXPECT_LE(sign_distance(r.direction, v), 1e-14);
}

TEST(TPower, DegenerateWhenImageVanishes) {
  const SpectralOperator op = diag_op({1.0, 0.0, 0.0});
  const Vector start = (Vector(3) << 0.0, 1.0, 0.0).finished();
  const SpcaResult r = tpower(op, config(1, SpcaSolver::tpower), start);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.direction, start);
}

TEST(TPower, ScalingEquivariance) {
  Rng rng(4);
  std::normal_distribution<double> normal;
  Matrix B(10, 10);
  for (Index i = 0; i < 10; ++i)
    for (Index j = 0; j < 10; ++j) B(i, j) = normal(rng);
  const SpectralOperator op = SpectralOperator::from_dense(B * B.transpose());
  for (SpcaSolver solver : {SpcaSolver::tpower, SpcaSolver::grqi}) {
    const SpcaResult a = solve_spca(op, config(4, solver), start_vector(op).vector);
    const SpcaResult b = solve_spca(op.scaled(8.0), config(4, solver), start_vector(op.scaled(8.0)).vector);
    EXPECT_EQ(a.direction, b.direction);
    EXPECT_DOUBLE_EQ(b.objective, 8.0 * a.objective);
  }
}

TEST(TPower, MonotoneAndFeasibleOnRandomPsd) {
  Rng rng(12);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Matrix B(15, 15);
    for (Index i = 0; i < 15; ++i)
      for (Index j = 0; j < 15; ++j) B(i, j) = normal(rng);
    const SpectralOperator op = SpectralOperator::from_dense(B * B.transpose());
    const SpcaResult r = tpower(op, config(4, SpcaSolver::tpower), start_vector(op).vector);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
      EXPECT_GE(r.objective_trace[i], r.objective_trace[i - 1] - 1e-10 * r.objective_trace[i - 1]);
    EXPECT_NEAR(r.direction.norm(), 1.0, 1e-10);
    EXPECT_LE((r.direction.array() != 0.0).count(), 4);
  }
}

TEST(Grqi, DiagonalPicksLargestEntry) {
  const SpectralOperator op = diag_op({3.0, 2.0, 1.0});
  const Vector start = (Vector(3) << 0.9, 0.3, 0.3).finished().normalized();
  const SpcaResult r = grqi(op, config(1, SpcaSolver::grqi), start);
  EXPECT_LE(sign_distance(r.direction, (Vector(3) << 1, 0, 0).finished()), 1e-12);
  EXPECT_DOUBLE_EQ(r.objective, 3.0);
}

TEST(Grqi, RankOneSparse) {
  const Vector v = sparse_unit(9, {{0, 1.0}, {3, 1.5}, {8, -0.7}});
  const SpectralOperator op = SpectralOperator::from_dense(v * v.transpose());
  const SpcaResult r = grqi(op, config(3, SpcaSolver::grqi), start_vector(op).vector);
  EXPECT_LE(sign_distance(r.direction, v), 1e-10);
  EXPECT_NEAR(r.direction.norm(), 1.0, 1e-10);
}

TEST(Grqi, SingularShiftFallsBackToPowerStep) {
  // The start is an exact eigenvector of its support block, so the shifted
  // system is singular on the first iteration.
  const SpectralOperator op = diag_op({2.0, 5.0, 1.0});
  const Vector start = (Vector(3) << 1.0, 0.0, 0.0).finished();
  const SpcaResult r = grqi(op, config(1, SpcaSolver::grqi), start);
  EXPECT_GE(r.fallback_steps, 1);
  EXPECT_NEAR(r.direction.norm(), 1.0, 1e-10);
}

TEST(ExhaustiveOracle, MatchesKnownSupport) {
  const Vector v = sparse_unit(6, {{1, 1.0}, {2, 1.0}, {5, 1.0}});
  const Matrix V = 4.0 * v * v.transpose() + 0.1 * Matrix::Identity(6, 6);
  EXPECT_NEAR(exhaustive_sparse_pca(V, 3), 4.1, 1e-12);
  EXPECT_NEAR(exhaustive_sparse_pca(V, 1), 4.0 / 3.0 + 0.1, 1e-12);
  const SpectralOperator op = SpectralOperator::from_dense(V);
  for (SpcaSolver solver : {SpcaSolver::tpower, SpcaSolver::grqi})
    EXPECT_NEAR(solve_spca(op, config(3, solver), start_vector(op).vector).objective, 4.1, 1e-9);
}

TEST(PowerMethod, DiagonalAndIdentity) {
  const Vector start = (Vector(2) << 0.3, 0.7).finished();
  const PowerResult r = power_method((Matrix(2, 2) << 2, 0, 0, 1).finished(), 100, start);
  EXPECT_LE(sign_distance(r.vector, (Vector(2) << 1, 0).finished()), 1e-6);
  const PowerResult id = power_method(Matrix::Identity(2, 2).eval(), 100, start);
  EXPECT_LE((id.vector - start.normalized()).norm(), 1e-15);
  EXPECT_TRUE(power_method(Matrix::Zero(2, 2).eval(), 5, start).degenerate);
  EXPECT_THROW(power_method(Matrix::Identity(2, 2).eval(), 5, Vector::Zero(2)), std::invalid_argument);
}

TEST(PowerMethod, AgreesWithDenseEigensolver) {
  Rng rng(77);
  std::normal_distribution<double> normal;
  int checked = 0;
  while (checked < 10) {
    Matrix B(50, 50);
    for (Index i = 0; i < 50; ++i)
      for (Index j = 0; j < 50; ++j) B(i, j) = normal(rng);
    Matrix M = B * B.transpose() / 50.0;
    Vector u = Vector::Zero(50);
    for (Index j = 0; j < 50; ++j) u[j] = normal(rng);
    u.normalize();
    M += 3.0 * u * u.transpose();  // pushes the top gap well above 0.1
    const Eigen::SelfAdjointEigenSolver<Matrix> es(M);
    if (es.eigenvalues()[49] - es.eigenvalues()[48] < 0.1) continue;
    const PowerResult r = power_method(SpectralOperator::from_dense(M), 100, Vector::Ones(50));
    const double cosine = std::min(1.0, std::abs(r.vector.dot(es.eigenvectors().col(49))));
    EXPECT_LE(std::acos(cosine), 1e-4);
    ++checked;
  }
}
