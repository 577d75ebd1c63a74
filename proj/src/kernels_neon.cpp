#include "kernels_internal.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

#include <algorithm>

namespace isrs::kernels {
namespace {

void shifted_difference(const double* a, int n, int shift, double* out) {
  const int lo_end = std::min(shift, n);
  const int hi_begin = std::max(lo_end, n - shift);
  for (int k = 0; k < lo_end; ++k) out[k] = a[k] * (padded(a, n, k + shift) - padded(a, n, k - shift));
  int k = lo_end;
  for (; k + 2 <= hi_begin; k += 2) {
    const float64x2_t v = vld1q_f64(a + k);
    const float64x2_t d = vsubq_f64(vld1q_f64(a + k + shift), vld1q_f64(a + k - shift));
    vst1q_f64(out + k, vmulq_f64(v, d));
  }
  for (; k < n; ++k) out[k] = a[k] * (padded(a, n, k + shift) - padded(a, n, k - shift));
}

void shifted_sum(const double* a, int n, int shift, double* out) {
  const int lo_end = std::min(shift, n);
  const int hi_begin = std::max(lo_end, n - shift);
  auto one = [&](int k) {
    out[k] = a[k] * (((2.0 * a[k]) + padded(a, n, k + shift)) + padded(a, n, k - shift));
  };
  for (int k = 0; k < lo_end; ++k) one(k);
  const float64x2_t two = vdupq_n_f64(2.0);
  int k = lo_end;
  for (; k + 2 <= hi_begin; k += 2) {
    const float64x2_t v = vld1q_f64(a + k);
    const float64x2_t acc =
        vaddq_f64(vaddq_f64(vmulq_f64(two, v), vld1q_f64(a + k + shift)), vld1q_f64(a + k - shift));
    vst1q_f64(out + k, vmulq_f64(v, acc));
  }
  for (; k < n; ++k) one(k);
}

void axpy(double c, const double* x, int n, double* y) {
  const float64x2_t cv = vdupq_n_f64(c);
  int k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(y + k, vaddq_f64(vld1q_f64(y + k), vmulq_f64(cv, vld1q_f64(x + k))));
  for (; k < n; ++k) y[k] = y[k] + c * x[k];
}

void dft_accumulate(double c, double s, const double* x, int n, double* re, double* im) {
  const float64x2_t cv = vdupq_n_f64(c);
  const float64x2_t sv = vdupq_n_f64(s);
  int k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t xv = vld1q_f64(x + k);
    vst1q_f64(re + k, vaddq_f64(vld1q_f64(re + k), vmulq_f64(cv, xv)));
    vst1q_f64(im + k, vsubq_f64(vld1q_f64(im + k), vmulq_f64(sv, xv)));
  }
  for (; k < n; ++k) {
    re[k] = re[k] + c * x[k];
    im[k] = im[k] - s * x[k];
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable t{shifted_difference, shifted_sum, axpy, dft_accumulate};
  return &t;
}

}  // namespace isrs::kernels

#else

namespace isrs::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace isrs::kernels

#endif
