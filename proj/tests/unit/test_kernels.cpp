#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "opnorm/kernels.hpp"

namespace k = opnorm::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

std::vector<k::Backend> simd_backends() {
  std::vector<k::Backend> out;
  for (auto b : {k::Backend::Avx2, k::Backend::Neon})
    if (k::backend_available(b)) out.push_back(b);
  return out;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 63, 64, 65, 100, 1023, 4097};

// Naive left-to-right sum of |a_i b_i|, which bounds the rounding error of
// any summation order.
double abs_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return s;
}

}  // namespace

TEST(Kernels, ScalarTableAlwaysPresent) {
  ASSERT_NE(k::table_for(k::Backend::Scalar), nullptr);
  EXPECT_TRUE(k::backend_available(k::Backend::Scalar));
}

TEST(Kernels, ScalarDotMatchesLongDouble) {
  std::mt19937_64 gen(1);
  const auto* t = k::table_for(k::Backend::Scalar);
  for (std::size_t n : kLengths) {
    const auto a = random_vector(gen, n);
    const auto b = random_vector(gen, n);
    long double ref = 0.0L;
    for (std::size_t i = 0; i < n; ++i) ref += static_cast<long double>(a[i]) * b[i];
    EXPECT_NEAR(t->dot(a.data(), b.data(), n), static_cast<double>(ref), 1e-14 * (1.0 + abs_dot(a, b))) << n;
  }
}

TEST(Kernels, SimdDotMatchesScalar) {
  const auto backends = simd_backends();
  if (backends.empty()) GTEST_SKIP() << "no SIMD backend on this machine";
  std::mt19937_64 gen(2);
  const auto* ref = k::table_for(k::Backend::Scalar);
  for (auto b : backends) {
    const auto* t = k::table_for(b);
    ASSERT_NE(t, nullptr);
    for (std::size_t n : kLengths) {
      const auto x = random_vector(gen, n);
      const auto y = random_vector(gen, n);
      EXPECT_NEAR(t->dot(x.data(), y.data(), n), ref->dot(x.data(), y.data(), n), 1e-14 * (1.0 + abs_dot(x, y)))
          << k::backend_name(b) << " n=" << n;
    }
  }
}

TEST(Kernels, SimdElementwiseMatchesScalar) {
  const auto backends = simd_backends();
  if (backends.empty()) GTEST_SKIP() << "no SIMD backend on this machine";
  std::mt19937_64 gen(3);
  const auto* ref = k::table_for(k::Backend::Scalar);
  for (auto b : backends) {
    const auto* t = k::table_for(b);
    for (std::size_t n : kLengths) {
      const auto x = random_vector(gen, n);
      const auto y0 = random_vector(gen, n);
      const auto z0 = random_vector(gen, n);

      auto y1 = y0, y2 = y0;
      ref->axpy(0.37, x.data(), y1.data(), n);
      t->axpy(0.37, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1 + std::abs(y1[i])));

      y1 = y0, y2 = y0;
      ref->axpby(-1.5, x.data(), 0.25, y1.data(), n);
      t->axpby(-1.5, x.data(), 0.25, y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1 + std::abs(y1[i])));

      y1 = y0, y2 = y0;
      ref->scale(3.0, y1.data(), n);
      t->scale(3.0, y2.data(), n);
      EXPECT_EQ(y1, y2);

      auto p1 = y0, p2 = y0, q1 = z0, q2 = z0;
      ref->rotate(p1.data(), q1.data(), 0.6, 0.8, n);
      t->rotate(p2.data(), q2.data(), 0.6, 0.8, n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(p1[i], p2[i], 1e-15 * (1 + std::abs(p1[i])));
        EXPECT_NEAR(q1[i], q2[i], 1e-15 * (1 + std::abs(q1[i])));
      }
    }
  }
}

TEST(Kernels, AxpbySemantics) {
  std::vector<double> x{1, 2, 3};
  std::vector<double> y{10, 20, 30};
  k::axpby(2.0, x, -1.0, y);  // y = 2 y - x
  EXPECT_EQ(y, (std::vector<double>{19, 38, 57}));
}

TEST(Kernels, RotateIsGivens) {
  std::vector<double> p{1.0, 0.0};
  std::vector<double> q{0.0, 1.0};
  k::rotate(p, q, 0.0, 1.0);  // p' = -q, q' = p
  EXPECT_EQ(p, (std::vector<double>{0.0, -1.0}));
  EXPECT_EQ(q, (std::vector<double>{1.0, 0.0}));
}

TEST(Kernels, GemvAndTransposeAgreeWithLoops) {
  std::mt19937_64 gen(4);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 7}, {17, 5}, {64, 33}}) {
    const auto m = random_vector(gen, rows * cols);
    const auto x = random_vector(gen, cols);
    const auto w = random_vector(gen, rows);
    std::vector<double> y(rows), yt(cols);
    k::gemv(m, rows, cols, x, y);
    k::gemv_t(m, rows, cols, w, yt);
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols; ++j) s += m[i * cols + j] * x[j];
      EXPECT_NEAR(y[i], s, 1e-12);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += m[i * cols + j] * w[i];
      EXPECT_NEAR(yt[j], s, 1e-12);
    }
  }
}

TEST(Kernels, SetBackendRoundTrip) {
  const auto before = k::active_backend();
  EXPECT_TRUE(k::set_backend(k::Backend::Scalar));
  EXPECT_EQ(k::active_backend(), k::Backend::Scalar);
  std::vector<double> a{1, 2, 3, 4, 5};
  EXPECT_EQ(k::dot(a, a), 55.0);
  if (!k::backend_available(k::Backend::Neon)) EXPECT_FALSE(k::set_backend(k::Backend::Neon));
  EXPECT_TRUE(k::set_backend(before));
  EXPECT_EQ(k::active_backend(), before);
}
