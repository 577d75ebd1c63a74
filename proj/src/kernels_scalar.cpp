#include "kernels_internal.hpp"

namespace isrs::kernels {
namespace {

void shifted_difference(const double* a, int n, int shift, double* out) {
  for (int k = 0; k < n; ++k) {
    const double hi = padded(a, n, k + shift);
    const double lo = padded(a, n, k - shift);
    out[k] = a[k] * (hi - lo);
  }
}

void shifted_sum(const double* a, int n, int shift, double* out) {
  for (int k = 0; k < n; ++k) {
    const double hi = padded(a, n, k + shift);
    const double lo = padded(a, n, k - shift);
    out[k] = a[k] * (((2.0 * a[k]) + hi) + lo);
  }
}

void axpy(double c, const double* x, int n, double* y) {
  for (int k = 0; k < n; ++k) y[k] = y[k] + c * x[k];
}

void dft_accumulate(double c, double s, const double* x, int n, double* re, double* im) {
  for (int k = 0; k < n; ++k) {
    re[k] = re[k] + c * x[k];
    im[k] = im[k] - s * x[k];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{shifted_difference, shifted_sum, axpy, dft_accumulate};
  return t;
}

}  // namespace isrs::kernels
