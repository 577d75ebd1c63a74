// Compiled with -mavx2 on x86-64 only; entered solely through the runtime
// dispatcher after a CPU feature check.
#include "kernels_internal.hpp"

#include <algorithm>

#if defined(__AVX2__)
#include <immintrin.h>

namespace isrs::kernels {
namespace {

void shifted_difference(const double* a, int n, int shift, double* out) {
  // Interior [shift, n - shift) has both neighbours in range.
  const int lo_end = std::min(shift, n);
  const int hi_begin = std::max(lo_end, n - shift);
  for (int k = 0; k < lo_end; ++k) out[k] = a[k] * (padded(a, n, k + shift) - padded(a, n, k - shift));
  int k = lo_end;
  for (; k + 4 <= hi_begin; k += 4) {
    const __m256d v = _mm256_loadu_pd(a + k);
    const __m256d hi = _mm256_loadu_pd(a + k + shift);
    const __m256d lo = _mm256_loadu_pd(a + k - shift);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(v, _mm256_sub_pd(hi, lo)));
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
  const __m256d two = _mm256_set1_pd(2.0);
  int k = lo_end;
  for (; k + 4 <= hi_begin; k += 4) {
    const __m256d v = _mm256_loadu_pd(a + k);
    const __m256d hi = _mm256_loadu_pd(a + k + shift);
    const __m256d lo = _mm256_loadu_pd(a + k - shift);
    const __m256d acc = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(two, v), hi), lo);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(v, acc));
  }
  for (; k < n; ++k) one(k);
}

void axpy(double c, const double* x, int n, double* y) {
  const __m256d cv = _mm256_set1_pd(c);
  int k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d yv = _mm256_loadu_pd(y + k);
    _mm256_storeu_pd(y + k, _mm256_add_pd(yv, _mm256_mul_pd(cv, _mm256_loadu_pd(x + k))));
  }
  for (; k < n; ++k) y[k] = y[k] + c * x[k];
}

void dft_accumulate(double c, double s, const double* x, int n, double* re, double* im) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  int k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xv = _mm256_loadu_pd(x + k);
    _mm256_storeu_pd(re + k, _mm256_add_pd(_mm256_loadu_pd(re + k), _mm256_mul_pd(cv, xv)));
    _mm256_storeu_pd(im + k, _mm256_sub_pd(_mm256_loadu_pd(im + k), _mm256_mul_pd(sv, xv)));
  }
  for (; k < n; ++k) {
    re[k] = re[k] + c * x[k];
    im[k] = im[k] - s * x[k];
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{shifted_difference, shifted_sum, axpy, dft_accumulate};
  return &t;
}

}  // namespace isrs::kernels

#else

namespace isrs::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace isrs::kernels

#endif
