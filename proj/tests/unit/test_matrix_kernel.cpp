#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qgeo/exponential.hpp"
#include "qgeo/random.hpp"

namespace qgeo {
namespace {

TEST(Eigensystem, IdentityHasUnitEigenvalues) {
  const Eigensystem es = hermitian_eigensystem(ComplexMatrix::Identity(3, 3));
  for (Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(es.values(i), 1.0);
  EXPECT_LT((es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Eigensystem, DiagonalIsReorderedDescending) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 0.3;
  m(1, 1) = 0.7;
  const Eigensystem es = hermitian_eigensystem(m);
  EXPECT_DOUBLE_EQ(es.values(0), 0.7);
  EXPECT_DOUBLE_EQ(es.values(1), 0.3);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(0, 1)), 1.0, 1e-15);
}

TEST(Eigensystem, TiesKeepDiagonalOrder) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 0.25;
  m(1, 1) = 0.5;
  m(2, 2) = 0.25;
  const Eigensystem es = hermitian_eigensystem(m);
  EXPECT_EQ(std::abs(es.vectors(0, 1)), 1.0);
  EXPECT_EQ(std::abs(es.vectors(2, 2)), 1.0);
}

TEST(Eigensystem, ZeroMatrixPasses) {
  const Eigensystem es = hermitian_eigensystem(ComplexMatrix::Zero(4, 4));
  EXPECT_EQ(es.values.norm(), 0.0);
}

TEST(Eigensystem, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    hermitian_eigensystem(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
}

TEST(Eigensystem, SweepCapRaisesNoConvergence) {
  RngState rng(3);
  Tolerances tol;
  tol.max_sweeps = 0;
  try {
    hermitian_eigensystem(random_hermitian(6, rng), tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
  }
}

// Round trip on random input, with Eigen's own solver as a second opinion on
// the eigenvalues.
TEST(Eigensystem, RoundTripAgainstReferenceSolver) {
  RngState rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = rng.uniform_int(1, 8);
    const ComplexMatrix m = random_hermitian(n, rng);
    const Eigensystem es = hermitian_eigensystem(m);
    const double scale = std::max(1.0, m.norm());
    ASSERT_LT((es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - m).norm(), 1e-9 * scale);
    ASSERT_LT((es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(n, n)).norm(), 1e-10 * scale);
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(m);
    const RealVector ref_desc = ref.eigenvalues().reverse();
    ASSERT_LT((es.values - ref_desc).norm(), 1e-10 * scale);
  }
}

TEST(Exponential, ZeroGivesIdentity) {
  EXPECT_LT((unitary_exponential(ComplexMatrix::Zero(3, 3), 1.0) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Exponential, ScalarPhase) {
  ComplexMatrix x(1, 1);
  x(0, 0) = kI;
  const ComplexMatrix u = unitary_exponential(x, std::numbers::pi);
  EXPECT_NEAR(u(0, 0).real(), -1.0, 1e-15);
  EXPECT_NEAR(u(0, 0).imag(), 0.0, 1e-15);
}

TEST(Exponential, RealRotationClosedForm) {
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, -1.0, 0.0;
  for (double t : {std::numbers::pi / 2, 0.3, -1.7}) {
    ComplexMatrix want(2, 2);
    want << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    const ComplexMatrix u = unitary_exponential(x, t);
    EXPECT_LT((u - want).norm(), 1e-12) << t;
    EXPECT_LT((u.adjoint() * u - ComplexMatrix::Identity(2, 2)).norm(), 1e-12);
  }
}

TEST(Exponential, GroupLaw) {
  RngState rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = rng.uniform_int(1, 6);
    ComplexMatrix x = kI * random_hermitian(n, rng);
    x /= std::max(1.0, x.norm());
    const double s = rng.uniform(-1, 1), t = rng.uniform(-1, 1);
    EXPECT_LT((unitary_exponential(x, s + t) - unitary_exponential(x, s) * unitary_exponential(x, t)).norm(), 1e-9);
  }
}

TEST(Exponential, RejectsHermitianGenerator) {
  try {
    unitary_exponential(ComplexMatrix::Identity(2, 2), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAntiHermitian);
  }
}

TEST(Sampler, IsometryContract) {
  RngState rng(7);
  const ComplexMatrix v = sample_random(SampleKind::isometry, 4, 2, rng);
  EXPECT_EQ(v.rows(), 4);
  EXPECT_EQ(v.cols(), 2);
  EXPECT_LE((v.adjoint() * v - ComplexMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Sampler, HaarUnitaryHasUnitDeterminant) {
  RngState rng(8);
  const ComplexMatrix u = sample_random(SampleKind::haar_unitary, 3, 3, rng);
  EXPECT_NEAR(std::abs(u.determinant()), 1.0, 1e-12);
}

TEST(Sampler, HermitianIsSelfAdjoint) {
  RngState rng(9);
  const ComplexMatrix m = sample_random(SampleKind::hermitian, 5, 5, rng);
  EXPECT_LE((m - m.adjoint()).norm(), 1e-14);
}

TEST(Sampler, SameSeedSameStream) {
  for (SampleKind kind : {SampleKind::hermitian, SampleKind::haar_unitary, SampleKind::isometry}) {
    RngState a(1234), b(1234);
    EXPECT_TRUE(sample_random(kind, 5, 3, a) == sample_random(kind, 5, 3, b));
    EXPECT_EQ(a.counter(), b.counter());
  }
  RngState c(1), d(2);
  EXPECT_FALSE(random_hermitian(3, c) == random_hermitian(3, d));
}

TEST(Sampler, HaarPhasesAreSpread) {
  // With the R-diagonal phase correction the (0,0) entry has uniform phase;
  // without it the phase would collapse near zero. Check the mean vanishes.
  RngState rng(21);
  Complex mean = 0.0;
  const int draws = 4000;
  for (int i = 0; i < draws; ++i) {
    const Complex z = random_unitary(2, rng)(0, 0);
    mean += z / std::abs(z);
  }
  EXPECT_LT(std::abs(mean / static_cast<double>(draws)), 0.05);
}

TEST(Sampler, BadDims) {
  RngState rng(1);
  EXPECT_THROW(sample_random(SampleKind::isometry, 2, 3, rng), Error);
  EXPECT_THROW(sample_random(SampleKind::hermitian, 0, 0, rng), Error);
}

TEST(HermitianMatrixType, Validates) {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, -1), 2.0;
  EXPECT_NO_THROW(HermitianMatrix{m});
  m(0, 1) = Complex(0, 2);
  EXPECT_THROW(HermitianMatrix{m}, Error);
  EXPECT_THROW(HermitianMatrix(ComplexMatrix::Zero(2, 3)), Error);
}

}  // namespace
}  // namespace qgeo
