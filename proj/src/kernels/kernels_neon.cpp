#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace opnorm::kernels::neon {
namespace {

double dot(const double* a, const double* b, std::size_t n) noexcept {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void axpby(double alpha, const double* x, double beta, double* y, std::size_t n) noexcept {
  const float64x2_t va = vdupq_n_f64(alpha);
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t t = vmulq_f64(vb, vld1q_f64(x + i));
    vst1q_f64(y + i, vfmaq_f64(t, va, vld1q_f64(y + i)));
  }
  for (; i < n; ++i) y[i] = alpha * y[i] + beta * x[i];
}

void scale(double alpha, double* y, std::size_t n) noexcept {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] *= alpha;
}

void rotate(double* p, double* q, double c, double s, std::size_t n) noexcept {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t pi = vld1q_f64(p + i);
    const float64x2_t qi = vld1q_f64(q + i);
    vst1q_f64(p + i, vfmsq_f64(vmulq_f64(vc, pi), vs, qi));
    vst1q_f64(q + i, vfmaq_f64(vmulq_f64(vc, qi), vs, pi));
  }
  for (; i < n; ++i) {
    const double pi = p[i];
    const double qi = q[i];
    p[i] = c * pi - s * qi;
    q[i] = s * pi + c * qi;
  }
}

constexpr Table kTable{&dot, &axpy, &axpby, &scale, &rotate};

}  // namespace

const Table& table() noexcept { return kTable; }

}  // namespace opnorm::kernels::neon
