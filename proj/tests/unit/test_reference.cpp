#include <gtest/gtest.h>

#include <cmath>

#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"
#include "opnorm/reference.hpp"

using namespace opnorm;

TEST(DenseSpectrum, DiagonalAndPermuted) {
  const auto s = dense_spectrum(DenseMatrix::from_rows({{0, 3, 0}, {1, 0, 0}, {0, 0, 2}}));
  ASSERT_EQ(s.singular_values.size(), 3u);
  EXPECT_NEAR(s.singular_values[0], 3, 1e-14);
  EXPECT_NEAR(s.singular_values[1], 2, 1e-14);
  EXPECT_NEAR(s.singular_values[2], 1, 1e-14);
  EXPECT_NEAR(std::abs(s.right_vectors(0, 1)), 1.0, 1e-14);
}

TEST(DenseSpectrum, ShearClosedForm) {
  for (double e : {1e-2, 1e-4, 1.0}) {
    const double sigma = std::sqrt(1.0 + (e * e + e * std::sqrt(e * e + 4.0)) / 2.0);
    const auto s = dense_spectrum(DenseMatrix::from_rows({{1, e}, {0, 1}}));
    EXPECT_NEAR(s.singular_values[0], sigma, 1e-14);
    EXPECT_NEAR(s.singular_values[0] * s.singular_values[1], 1.0, 1e-12);  // |det| = 1
  }
}

TEST(DenseSpectrum, RectangularRankDeficient) {
  // 2 x 3 with rank 1: one nonzero singular value equal to the Frobenius norm
  const auto s = dense_spectrum(DenseMatrix::from_rows({{1, 2, 2}, {2, 4, 4}}));
  EXPECT_NEAR(s.singular_values[0], std::sqrt(45.0), 1e-12);
  EXPECT_NEAR(s.singular_values[1], 0.0, 1e-7);
  EXPECT_NEAR(s.singular_values[2], 0.0, 1e-7);
}

TEST(DenseSpectrum, RandomMatrixEigenpairs) {
  RngStream rng(17);
  DenseMatrix a(30, 20);
  rng.fill_normal(a.data());
  const auto s = dense_spectrum(a);
  double fro_sq = 0.0;
  for (double x : a.data()) fro_sq += x * x;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    sum_sq += s.singular_values[i] * s.singular_values[i];
    if (i > 0) EXPECT_LE(s.singular_values[i], s.singular_values[i - 1]);
    const auto v = s.right_vectors.row(i);
    EXPECT_NEAR(kernels::squared_norm(v), 1.0, 1e-12);
    EXPECT_LT(eigen_residual(a, v), 1e-10 * s.singular_values[0] * s.singular_values[0]);
  }
  EXPECT_NEAR(sum_sq, fro_sq, 1e-10 * fro_sq);
}

TEST(Materialize, ColumnsAreImagesOfBasisVectors) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(materialize(*make_dense(a)), a);
  EXPECT_THROW(materialize(*make_identity(10), 5), InvalidInput);
}

TEST(RandomOrthogonal, IsOrthogonal) {
  RngStream rng(2);
  const auto q = random_orthogonal(rng, 15);
  const auto g = q.transposed() * q;
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t j = 0; j < 15; ++j) EXPECT_NEAR(g(i, j), i == j ? 1.0 : 0.0, 1e-13);
}

TEST(PowerIteration, ConvergesWithExactAdjoint) {
  const auto pair = make_dense_pair(DenseMatrix::from_rows({{3, 0}, {0, 1}}));
  RngStream rng(1);
  const auto rep = power_iteration(pair, {}, rng);
  EXPECT_TRUE(rep.converged);
  EXPECT_NEAR(rep.estimate_via_av, 3.0, 1e-10);
  EXPECT_NEAR(rep.estimate_via_gram, 3.0, 1e-10);
  EXPECT_FALSE(rep.estimators_disagree);
  EXPECT_EQ(rep.trace_via_av.size(), rep.iterations + 1);
}

TEST(PowerIteration, StopsAtTarget) {
  const auto pair = make_dense_pair(DenseMatrix::from_rows({{3, 0}, {0, 2.9}}));
  RngStream rng(1);
  PowerIterationOptions opts;
  opts.tol = 0.0;
  opts.max_iters = 100000;
  opts.target = 3.0;
  opts.target_rel_tol = 1e-5;
  const auto rep = power_iteration(pair, opts, rng);
  EXPECT_LE(std::abs(rep.estimate_via_av - 3.0), 3e-5);
  EXPECT_GT(std::abs(rep.trace_via_av[rep.iterations > 0 ? rep.iterations - 1 : 0] - 3.0),
            rep.iterations > 0 ? 3e-5 : -1.0);
}

TEST(PowerIteration, MismatchedAdjointIsFlagged) {
  const auto a = DenseMatrix::from_rows({{2, 0}, {0, 1}});
  const auto b = DenseMatrix::from_rows({{1, 0}, {0, 1}});  // not A^T
  RngStream rng(3);
  const auto rep = power_iteration(make_mismatched_pair(a, b), {}, rng);
  EXPECT_NEAR(rep.estimate_via_av, 2.0, 1e-8);
  EXPECT_NEAR(rep.estimate_via_gram, std::sqrt(2.0), 1e-8);
  EXPECT_TRUE(rep.estimators_disagree);
}

TEST(AdjointnessGap, ExactAndMismatched) {
  RngStream rng(4);
  DenseMatrix a(5, 3);
  rng.fill_normal(a.data());
  EXPECT_LT(adjointness_gap(make_dense_pair(a), 10, rng), 1e-15);
  auto b = a.transposed();
  b(0, 0) += 1.0;
  EXPECT_GT(adjointness_gap(make_mismatched_pair(a, b), 10, rng), 1e-3);
  EXPECT_THROW(adjointness_gap(make_dense_pair(a), 0, rng), InvalidInput);
}
