#pragma once

// Vector kernels used on every hot path of the library: inner products,
// in-place linear combinations and dense matrix-vector products.
//
// Each kernel has a portable scalar reference implementation and, where the
// target supports it, a SIMD variant (AVX2+FMA on x86-64, NEON on AArch64).
// The variant is chosen once at runtime from the CPU feature flags; the
// environment variable OPNORM_KERNELS=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace opnorm::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend b) noexcept;

/// Backend currently used by the dispatching entry points below.
Backend active_backend() noexcept;

/// True if `b` was compiled in and the running CPU supports it.
bool backend_available(Backend b) noexcept;

/// Switch the dispatch table. Returns false (and changes nothing) if the
/// backend is unavailable. Not thread-safe with concurrent kernel calls.
bool set_backend(Backend b) noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_norm(std::span<const double> a) noexcept;

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept;

// y = alpha * y + beta * x
void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y) noexcept;

void scale(double alpha, std::span<double> y) noexcept;

// y = M x for a row-major rows x cols matrix.
void gemv(std::span<const double> m, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) noexcept;

// y = M^T w for a row-major rows x cols matrix.
void gemv_t(std::span<const double> m, std::size_t rows, std::size_t cols,
            std::span<const double> w, std::span<double> y) noexcept;

// p' = c p - s q, q' = s p + c q (Givens rotation of two rows)
void rotate(std::span<double> p, std::span<double> q, double c, double s) noexcept;

/// Function table for one backend; the per-backend namespaces fill these in.
struct Table {
  double (*dot)(const double*, const double*, std::size_t) noexcept;
  void (*axpy)(double, const double*, double*, std::size_t) noexcept;
  void (*axpby)(double, const double*, double, double*, std::size_t) noexcept;
  void (*scale)(double, double*, std::size_t) noexcept;
  void (*rotate)(double*, double*, double, double, std::size_t) noexcept;
};

/// Direct access to a backend's table, bypassing dispatch. Returns nullptr
/// if the backend was not compiled in. Used by the equivalence tests.
const Table* table_for(Backend b) noexcept;

}  // namespace opnorm::kernels
