#include "kernels_internal.hpp"

namespace opnorm::kernels::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * y[i] + beta * x[i];
}

void scale(double alpha, double* y, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

void rotate(double* p, double* q, double c, double s, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = p[i];
    const double qi = q[i];
    p[i] = c * pi - s * qi;
    q[i] = s * pi + c * qi;
  }
}

constexpr Table kTable{&dot, &axpy, &axpby, &scale, &rotate};

}  // namespace

const Table& table() noexcept { return kTable; }

}  // namespace opnorm::kernels::scalar
