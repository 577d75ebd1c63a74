#include <atomic>
#include <stdexcept>
#include <string>

#include "isrs/errors.hpp"
#include "kernels_internal.hpp"

namespace isrs::kernels {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return avx2_table() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon: return neon_table() != nullptr;
  }
  return false;
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{best_available()};
  return slot;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("kernel operands differ in length");
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool available(Isa isa) { return cpu_has(isa); }

Isa best_available() {
  if (cpu_has(Isa::avx2)) return Isa::avx2;
  if (cpu_has(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active() { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("ISA " + std::string(to_string(isa)) + " not available");
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("ISA " + std::string(to_string(isa)) + " not available");
  switch (isa) {
    case Isa::avx2: return *avx2_table();
    case Isa::neon: return *neon_table();
    case Isa::scalar: break;
  }
  return scalar_table();
}

void shifted_difference(std::span<const double> a, int shift, std::span<double> out) {
  check_sizes(a.size(), out.size());
  table(active()).shifted_difference(a.data(), static_cast<int>(a.size()), shift, out.data());
}

void shifted_sum(std::span<const double> a, int shift, std::span<double> out) {
  check_sizes(a.size(), out.size());
  table(active()).shifted_sum(a.data(), static_cast<int>(a.size()), shift, out.data());
}

void axpy(double c, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  table(active()).axpy(c, x.data(), static_cast<int>(x.size()), y.data());
}

void dft_accumulate(double c, double s, std::span<const double> x, std::span<double> re,
                    std::span<double> im) {
  check_sizes(x.size(), re.size());
  check_sizes(x.size(), im.size());
  table(active()).dft_accumulate(c, s, x.data(), static_cast<int>(x.size()), re.data(), im.data());
}

}  // namespace isrs::kernels
