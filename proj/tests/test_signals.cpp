#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "spinit/signals.hpp"

using namespace spinit;

TEST(Rng, DeriveSeedDependsOnEveryTag) {
  EXPECT_EQ(derive_seed(5, {1, 2}), derive_seed(5, {1, 2}));
  EXPECT_NE(derive_seed(5, {1, 2}), derive_seed(5, {2, 1}));
  EXPECT_NE(derive_seed(5, {1}), derive_seed(6, {1}));
  EXPECT_NE(stream_seed(9, Stream::signal), stream_seed(9, Stream::matrix));
}

TEST(Rng, SplitMix64ReferenceSequence) {
  SplitMix64 g(1234567);
  EXPECT_EQ(g(), 6457827717110365317ULL);
  EXPECT_EQ(g(), 3203168211198807973ULL);
  EXPECT_EQ(g(), 9817491932198370423ULL);
}

TEST(SparseSignal, RejectsInvalidConstruction) {
  Vector v = Vector::Zero(4);
  v[1] = 1.0;
  EXPECT_NO_THROW(SparseSignal(v, {1}));
  EXPECT_THROW(SparseSignal(v, {}), std::invalid_argument);
  EXPECT_THROW(SparseSignal(v, {2}), std::invalid_argument);     // nonzero outside support
  EXPECT_THROW(SparseSignal(v, {1, 1}), std::invalid_argument);  // duplicate
  EXPECT_THROW(SparseSignal(v, {1, 7}), std::invalid_argument);  // out of range
  EXPECT_THROW(SparseSignal(Vector::Zero(4), {0}), std::invalid_argument);
  v[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(SparseSignal(v, {1}), std::invalid_argument);
}

TEST(GenSparseSignal, FullSupportWhenSEqualsN) {
  Rng rng(3);
  const SparseSignal x = gen_sparse_signal(5, 5, rng);
  EXPECT_EQ(x.support(), (std::vector<Index>{0, 1, 2, 3, 4}));
  for (Index j = 0; j < 5; ++j) EXPECT_NE(x.values()[j], 0.0);
}

TEST(GenSparseSignal, DeterministicUnderSeed) {
  Rng a(7);
  Rng b(7);
  const SparseSignal x = gen_sparse_signal(1000, 10, a);
  const SparseSignal y = gen_sparse_signal(1000, 10, b);
  EXPECT_EQ(x.values(), y.values());
  EXPECT_EQ(x.support(), y.support());
  EXPECT_EQ(x.s(), 10);
}

TEST(GenSparseSignal, RejectsBadSparsity) {
  Rng rng(1);
  EXPECT_THROW(gen_sparse_signal(5, 0, rng), std::invalid_argument);
  EXPECT_THROW(gen_sparse_signal(5, 6, rng), std::invalid_argument);
}

TEST(GenSparseSignal, SupportIsUniform) {
  Rng rng(11);
  std::vector<int> hits(10, 0);
  constexpr int kDraws = 100000;
  for (int t = 0; t < kDraws; ++t) ++hits[static_cast<std::size_t>(gen_sparse_signal(10, 1, rng).support()[0])];
  for (int h : hits) {
    EXPECT_GE(h / double(kDraws), 0.09);
    EXPECT_LE(h / double(kDraws), 0.11);
  }
}

TEST(GenSensingMatrix, MomentsMatchStandardNormal) {
  const MatrixHandle A = gen_sensing_matrix(2000, 1000, 99);
  const auto& e = A->entries();
  const double mean = e.mean();
  const double var = (e.array() - mean).square().sum() / static_cast<double>(e.size() - 1);
  EXPECT_LE(std::abs(mean), 0.005);
  EXPECT_LE(std::abs(var - 1.0), 0.01);
}

TEST(GenSensingMatrix, DeterministicAndNested) {
  const MatrixHandle a = gen_sensing_matrix(40, 30, 5);
  const MatrixHandle b = gen_sensing_matrix(40, 30, 5);
  const MatrixHandle prefix = gen_sensing_matrix(25, 30, 5);
  EXPECT_EQ(a->entries(), b->entries());
  EXPECT_EQ(a->entries().topRows(25), prefix->entries());
  SensingRowGenerator rows(30, 5);
  EXPECT_EQ(Vector(a->entries().row(17).transpose()), rows.row(17));
}

TEST(GenSensingMatrix, TinyAndEmpty) {
  const MatrixHandle A = gen_sensing_matrix(1, 1, 1);
  EXPECT_EQ(A->rows(), 1);
  EXPECT_TRUE(std::isfinite(A->entries()(0, 0)));
  EXPECT_THROW(gen_sensing_matrix(0, 3, 1), std::invalid_argument);
  EXPECT_THROW(gen_sensing_matrix(3, 0, 1), std::invalid_argument);
}

TEST(Measure, UnitVectorGivesAbsoluteColumn) {
  const MatrixHandle A = gen_sensing_matrix(50, 4, 2);
  Vector e1 = Vector::Zero(4);
  e1[0] = 1.0;
  Rng rng(1);
  const MeasurementSet ms = measure(A, e1, NoiseSpec(0.0), rng);
  EXPECT_EQ(ms.y(), A->entries().col(0).cwiseAbs());
  EXPECT_EQ(ms.m(), 50);
}

TEST(Measure, SignInvariantWithoutNoise) {
  Rng srng(4);
  const SparseSignal x = gen_sparse_signal(30, 4, srng);
  const MatrixHandle A = gen_sensing_matrix(60, 30, 8);
  Rng r1(2);
  Rng r2(2);
  EXPECT_EQ(measure(A, x, NoiseSpec(0.0), r1).y(), measure(A, x.negated(), NoiseSpec(0.0), r2).y());
}

TEST(Measure, NoiseVarianceScalesWithSignalNorm) {
  const Index m = 100000;
  const MatrixHandle A = gen_sensing_matrix(m, 2, 13);
  Vector x(2);
  x << 2.0, 0.0;
  Rng rng(21);
  const MeasurementSet ms = measure(A, x, NoiseSpec(0.1), rng);
  const double mean = ms.eta().mean();
  const double var = (ms.eta().array() - mean).square().sum() / static_cast<double>(m - 1);
  EXPECT_NEAR(var, 0.04, 0.05 * 0.04);
  EXPECT_LT(ms.y().minCoeff(), 0.0);  // negative amplitudes pass through
}

TEST(Measure, ErrorsAndIdentityCheck) {
  const MatrixHandle A = gen_sensing_matrix(5, 3, 1);
  Rng rng(1);
  EXPECT_THROW(measure(A, Vector::Ones(4), NoiseSpec(0.0), rng), std::invalid_argument);
  EXPECT_THROW(NoiseSpec(-0.1), std::invalid_argument);
  EXPECT_THROW(MeasurementSet(A, Vector::Ones(3), Vector::Zero(4)), std::invalid_argument);
}

TEST(Fixture, RoundTrip) {
  const MatrixHandle A = gen_sensing_matrix(7, 5, 77);
  Rng srng(1);
  const SparseSignal x = gen_sparse_signal(5, 2, srng);
  Rng nrng(2);
  const MeasurementSet ms = measure(A, x, NoiseSpec(0.2), nrng);
  const auto path = std::filesystem::temp_directory_path() / "spinit_fixture_test.bin";
  save_fixture(path, x.values(), ms);
  const Fixture f = load_fixture(path);
  std::filesystem::remove(path);
  EXPECT_EQ(f.x, x.values());
  EXPECT_EQ(f.A, A->entries());
  EXPECT_EQ(f.y, ms.y());
  EXPECT_EQ(f.eta, ms.eta());
  EXPECT_EQ(f.seed, 77u);
}

TEST(Fixture, RejectsBadMagic) {
  const auto path = std::filesystem::temp_directory_path() / "spinit_fixture_bad.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTAFIXTUREFILE";
  }
  EXPECT_THROW(load_fixture(path), std::runtime_error);
  std::filesystem::remove(path);
}
