#pragma once

// Seeded randomness and the tangent-direction sampler.
//
// Generator: std::mt19937_64 seeded through std::seed_seq. Normal draws come
// from std::normal_distribution<double> (Marsaglia polar method in
// libstdc++). Sequences are reproducible for a given seed within one build.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace opnorm {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent stream for sub-task `label` (e.g. a run index).
  RngStream derive(std::uint64_t label) const;

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  void fill_normal(std::span<double> out);

 private:
  RngStream(std::uint64_t seed, std::seed_seq& seq);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Projections below this fraction of the raw draw's norm are redrawn.
inline constexpr double kUnderflowRatio = 1e-12;
inline constexpr int kDefaultRetries = 100;

struct DirectionSample {
  std::vector<double> x;  // unit, orthogonal to the anchor
  std::vector<double> y;  // raw Gaussian draw that produced x
};

std::vector<double> gaussian_vector(RngStream& rng, std::size_t d);

/// Uniform on the unit sphere S^{d-1}. d >= 1.
std::vector<double> uniform_unit_vector(RngStream& rng, std::size_t d);
void uniform_unit_vector(RngStream& rng, std::span<double> out, int max_retries = kDefaultRetries);

/// Uniform on the unit sphere of {v}^perp. Requires |v| = 1 +- 1e-9, d >= 2.
DirectionSample tangent_direction(RngStream& rng, std::span<const double> v);

/// In-place form used by the solver: writes a unit vector orthogonal to
/// `v` and to every vector in `basis` (assumed orthonormal) into `out`.
/// Classical Gram-Schmidt applied twice. Throws InternalError after
/// `max_retries` near-zero projections.
void sample_orthogonal(RngStream& rng, std::span<const double> v, std::span<const std::vector<double>> basis,
                       std::span<double> out, int max_retries = kDefaultRetries);

/// Projects `out` onto the orthogonal complement of `basis` (twice).
void project_out(std::span<const std::vector<double>> basis, std::span<double> out);

}  // namespace opnorm
