#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "opnorm/errors.hpp"
#include "opnorm/projector.hpp"
#include "opnorm/reference.hpp"
#include "opnorm/solver.hpp"

using namespace opnorm;

TEST(Projector, Dimensions) {
  const auto op = make_projector({16, 24});
  EXPECT_EQ(op->input_dim(), 256u);
  EXPECT_EQ(op->output_dim(), 24u * 16u);
  EXPECT_THROW(make_projector({3, 24}), InvalidInput);
  EXPECT_THROW(make_projector({16, 0}), InvalidInput);
}

TEST(Projector, ZeroImageGivesZeroSinogram) {
  const auto op = make_projector({16, 24});
  const auto s = op->apply(std::vector<double>(256, 0.0));
  for (double x : s) EXPECT_EQ(x, 0.0);
}

TEST(Projector, ZeroAngleSumsColumns) {
  for (std::size_t n : {8u, 9u, 16u}) {
    const auto op = make_projector({n, 6});
    std::vector<double> img(n * n);
    std::iota(img.begin(), img.end(), 0.5);
    const auto s = op->apply(img);
    for (std::size_t c = 0; c < n; ++c) {
      double col = 0.0;
      for (std::size_t r = 0; r < n; ++r) col += img[r * n + c];
      EXPECT_NEAR(s[c], col, 1e-10 * col) << "n=" << n << " bin " << c;
    }
  }
}

TEST(Projector, CentredPointSeenByTheCentralRay) {
  // The central ray passes through the centre pixel and, one unit either
  // side, samples its bilinear tent at offset (sin, cos):
  // 1 + 2 (1 - |sin|)(1 - |cos|).
  const std::size_t n = 9;  // odd: the centre is a pixel
  const std::size_t angles = 12;
  const auto op = make_projector({n, angles});
  std::vector<double> img(n * n, 0.0);
  img[(n / 2) * n + n / 2] = 1.0;
  const auto s = op->apply(img);
  for (std::size_t a = 0; a < angles; ++a) {
    const double th = M_PI * static_cast<double>(a) / angles;
    const double expect = 1.0 + 2.0 * (1.0 - std::abs(std::sin(th))) * (1.0 - std::abs(std::cos(th)));
    EXPECT_NEAR(s[a * n + n / 2], expect, 1e-12) << a;
  }
}

TEST(Projector, ExactPairPassesDotTestMismatchedFails) {
  RngStream rng(3);
  const ProjectorSpec ps{16, 24};
  EXPECT_LT(adjointness_gap(make_projector_exact_pair(ps), 10, rng), 1e-14);
  const auto mis = make_projector_mismatched_pair(ps);
  EXPECT_EQ(mis.exactness, Exactness::Mismatched);
  EXPECT_GT(adjointness_gap(mis, 10, rng), 1e-2);
}

TEST(Projector, SolverMatchesOracle) {
  const auto op = make_projector({16, 24});
  const double oracle = oracle_sigma_max(*op);
  RunConfig cfg;
  cfg.init = Init::Ones;
  cfg.eps = 1e-6;
  cfg.max_iters = 100 * op->input_dim();
  cfg.seed = 1;
  const auto rep = run(*op, cfg);
  EXPECT_NEAR(rep.norm_estimate, oracle, 1e-6 * oracle);
}
