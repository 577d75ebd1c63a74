#pragma once

#include "isrs/kernels.hpp"

namespace isrs::kernels {

const KernelTable& scalar_table();
// Null when the variant is not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Out-of-range neighbours read as zero.
inline double padded(const double* a, int n, int k) { return (k >= 0 && k < n) ? a[k] : 0.0; }

}  // namespace isrs::kernels
