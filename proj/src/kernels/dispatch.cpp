#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace opnorm::kernels {
namespace {

bool cpu_supports(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(OPNORM_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(OPNORM_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend pick_default() noexcept {
  if (const char* env = std::getenv("OPNORM_KERNELS"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::Scalar;
  }
  if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
  if (cpu_supports(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

struct Dispatch {
  Backend backend;
  const Table* table;
};

Dispatch& current() noexcept {
  static Dispatch d = [] {
    const Backend b = pick_default();
    return Dispatch{b, table_for(b)};
  }();
  return d;
}

inline const Table& t() noexcept { return *current().table; }

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

const Table* table_for(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return &scalar::table();
    case Backend::Avx2:
#if defined(OPNORM_HAVE_AVX2)
      return &avx2::table();
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(OPNORM_HAVE_NEON)
      return &neon::table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Backend active_backend() noexcept { return current().backend; }

bool backend_available(Backend b) noexcept { return table_for(b) != nullptr && cpu_supports(b); }

bool set_backend(Backend b) noexcept {
  if (!backend_available(b)) return false;
  current() = Dispatch{b, table_for(b)};
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  assert(a.size() == b.size());
  return t().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) noexcept { return t().dot(a.data(), a.data(), a.size()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  assert(x.size() == y.size());
  t().axpy(alpha, x.data(), y.data(), y.size());
}

void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y) noexcept {
  assert(x.size() == y.size());
  t().axpby(alpha, x.data(), beta, y.data(), y.size());
}

void scale(double alpha, std::span<double> y) noexcept { t().scale(alpha, y.data(), y.size()); }

void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) noexcept {
  assert(m.size() == rows * cols && x.size() == cols && y.size() == rows);
  const Table& k = t();
  for (std::size_t i = 0; i < rows; ++i) y[i] = k.dot(m.data() + i * cols, x.data(), cols);
}

void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> w, std::span<double> y) noexcept {
  assert(m.size() == rows * cols && w.size() == rows && y.size() == cols);
  const Table& k = t();
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (w[i] != 0.0) k.axpy(w[i], m.data() + i * cols, y.data(), cols);
  }
}

void rotate(std::span<double> p, std::span<double> q, double c, double s) noexcept {
  assert(p.size() == q.size());
  t().rotate(p.data(), q.data(), c, s, p.size());
}

}  // namespace opnorm::kernels
