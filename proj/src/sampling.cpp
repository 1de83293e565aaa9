#include "opnorm/sampling.hpp"

#include <cmath>

#include "opnorm/errors.hpp"
#include "opnorm/kernels.hpp"

namespace opnorm {
namespace {

std::seed_seq make_seq(std::uint64_t seed, std::uint64_t label, bool derived) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(label), static_cast<std::uint32_t>(label >> 32),
                       derived ? 1u : 0u};
}

void check_unit(std::span<const double> v) {
  const double nrm = std::sqrt(kernels::squared_norm(v));
  if (!(std::abs(nrm - 1.0) <= 1e-9)) throw InvalidInput("anchor vector is not unit length");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::seed_seq& seq) : seed_(seed), engine_(seq) {}

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  auto seq = make_seq(seed, 0, false);
  engine_.seed(seq);
}

RngStream RngStream::derive(std::uint64_t label) const {
  auto seq = make_seq(seed_, label, true);
  return RngStream(seed_ ^ (label * 0x9E3779B97F4A7C15ull), seq);
}

void RngStream::fill_normal(std::span<double> out) {
  for (double& x : out) x = normal_(engine_);
}

std::vector<double> gaussian_vector(RngStream& rng, std::size_t d) {
  std::vector<double> y(d);
  rng.fill_normal(y);
  return y;
}

void uniform_unit_vector(RngStream& rng, std::span<double> out, int max_retries) {
  if (out.empty()) throw InvalidInput("uniform_unit_vector needs d >= 1");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    rng.fill_normal(out);
    const double nrm = std::sqrt(kernels::squared_norm(out));
    if (nrm > 0.0 && std::isfinite(nrm)) {
      kernels::scale(1.0 / nrm, out);
      return;
    }
  }
  throw InternalError("uniform_unit_vector: retry budget exhausted");
}

std::vector<double> uniform_unit_vector(RngStream& rng, std::size_t d) {
  std::vector<double> v(d);
  uniform_unit_vector(rng, v);
  return v;
}

void project_out(std::span<const std::vector<double>> basis, std::span<double> out) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) kernels::axpy(-kernels::dot(b, out), b, out);
  }
}

void sample_orthogonal(RngStream& rng, std::span<const double> v, std::span<const std::vector<double>> basis,
                       std::span<double> out, int max_retries) {
  if (out.size() != v.size()) throw InvalidInput("sample_orthogonal: length mismatch");
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    rng.fill_normal(out);
    const double raw = std::sqrt(kernels::squared_norm(out));
    for (int pass = 0; pass < 2; ++pass) {
      kernels::axpy(-kernels::dot(v, out), v, out);
      for (const auto& b : basis) kernels::axpy(-kernels::dot(b, out), b, out);
    }
    const double nrm = std::sqrt(kernels::squared_norm(out));
    if (nrm > kUnderflowRatio * raw && nrm > 0.0) {
      kernels::scale(1.0 / nrm, out);
      return;
    }
  }
  throw InternalError("tangent direction: retry budget exhausted");
}

DirectionSample tangent_direction(RngStream& rng, std::span<const double> v) {
  if (v.size() < 2) throw InvalidInput("tangent_direction needs d >= 2");
  check_unit(v);
  DirectionSample s{std::vector<double>(v.size()), std::vector<double>(v.size())};
  for (int attempt = 0; attempt < kDefaultRetries; ++attempt) {
    rng.fill_normal(s.y);
    std::copy(s.y.begin(), s.y.end(), s.x.begin());
    const double raw = std::sqrt(kernels::squared_norm(s.y));
    kernels::axpy(-kernels::dot(s.y, v), v, s.x);
    kernels::axpy(-kernels::dot(s.x, v), v, s.x);
    const double nrm = std::sqrt(kernels::squared_norm(s.x));
    if (nrm > kUnderflowRatio * raw && nrm > 0.0) {
      kernels::scale(1.0 / nrm, s.x);
      return s;
    }
  }
  throw InternalError("tangent direction: retry budget exhausted");
}

}  // namespace opnorm
