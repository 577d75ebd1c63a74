#pragma once

// Data-parallel inner loops shared by the analytic engine and the delay
// Fourier analysis. Every kernel has a scalar reference and SIMD variants;
// variants are element-wise (no reassociated reductions) and the build
// disables FMA contraction, so all variants agree bit-for-bit.

#include <span>
#include <string_view>

namespace isrs::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  /// out[k] = a[k] * (a[k+s] - a[k-s]); entries outside [0, n) read as 0.
  void (*shifted_difference)(const double* a, int n, int shift, double* out);
  /// out[k] = a[k] * (2 a[k] + a[k+s] + a[k-s]); same padding.
  void (*shifted_sum)(const double* a, int n, int shift, double* out);
  /// y[k] += c * x[k]
  void (*axpy)(double c, const double* x, int n, double* y);
  /// re[k] += c * x[k]; im[k] -= s * x[k]  (one delay step of a DFT)
  void (*dft_accumulate)(double c, double s, const double* x, int n, double* re, double* im);
};

bool available(Isa isa);
/// Widest ISA supported by the running CPU.
Isa best_available();
/// ISA used by the span wrappers below. Defaults to best_available().
Isa active();
/// Overrides the dispatch choice; throws std::invalid_argument if the ISA is
/// not available on this CPU.
void set_active(Isa isa);

const KernelTable& table(Isa isa);

void shifted_difference(std::span<const double> a, int shift, std::span<double> out);
void shifted_sum(std::span<const double> a, int shift, std::span<double> out);
void axpy(double c, std::span<const double> x, std::span<double> y);
void dft_accumulate(double c, double s, std::span<const double> x, std::span<double> re,
                    std::span<double> im);

}  // namespace isrs::kernels
