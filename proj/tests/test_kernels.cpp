#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "isrs/kernels.hpp"

using namespace isrs::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = dist(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

double at(const std::vector<double>& a, int k) {
  return k < 0 || k >= static_cast<int>(a.size()) ? 0.0 : a[static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  std::mt19937_64 rng(7);
  const auto& t = table(Isa::scalar);
  for (int n : {1, 2, 5, 17, 64}) {
    for (int shift : {0, 1, 3, 40}) {
      const auto a = random_vector(rng, n);
      std::vector<double> diff(a.size()), sum(a.size());
      t.shifted_difference(a.data(), n, shift, diff.data());
      t.shifted_sum(a.data(), n, shift, sum.data());
      for (int k = 0; k < n; ++k) {
        CHECK(diff[static_cast<std::size_t>(k)] == doctest::Approx(a[static_cast<std::size_t>(k)] * (at(a, k + shift) - at(a, k - shift))));
        CHECK(sum[static_cast<std::size_t>(k)] ==
              doctest::Approx(a[static_cast<std::size_t>(k)] * (2 * a[static_cast<std::size_t>(k)] + at(a, k + shift) + at(a, k - shift))));
      }
    }
  }
}

TEST_CASE("every available ISA agrees bit for bit with the scalar reference") {
  std::mt19937_64 rng(11);
  const auto& ref = table(Isa::scalar);
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (!available(isa)) continue;
    INFO("isa " << to_string(isa));
    const auto& t = table(isa);
    for (int n : {1, 3, 4, 7, 8, 31, 401}) {
      for (int shift : {0, 1, 2, 5, 27, 500}) {
        const auto a = random_vector(rng, n);
        std::vector<double> r1(a.size()), r2(a.size());
        ref.shifted_difference(a.data(), n, shift, r1.data());
        t.shifted_difference(a.data(), n, shift, r2.data());
        CHECK(same_bits(r1, r2));
        ref.shifted_sum(a.data(), n, shift, r1.data());
        t.shifted_sum(a.data(), n, shift, r2.data());
        CHECK(same_bits(r1, r2));
      }
      const auto x = random_vector(rng, n);
      auto y1 = random_vector(rng, n);
      auto y2 = y1;
      ref.axpy(0.37, x.data(), n, y1.data());
      t.axpy(0.37, x.data(), n, y2.data());
      CHECK(same_bits(y1, y2));
      auto re1 = random_vector(rng, n), im1 = random_vector(rng, n);
      auto re2 = re1, im2 = im1;
      ref.dft_accumulate(0.6, -0.8, x.data(), n, re1.data(), im1.data());
      t.dft_accumulate(0.6, -0.8, x.data(), n, re2.data(), im2.data());
      CHECK(same_bits(re1, re2));
      CHECK(same_bits(im1, im2));
    }
  }
}

TEST_CASE("dispatch selection") {
  CHECK(available(Isa::scalar));
  CHECK(available(best_available()));
  const Isa before = active();
  set_active(Isa::scalar);
  CHECK(active() == Isa::scalar);
  set_active(before);
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (!available(isa)) CHECK_THROWS_AS(set_active(isa), std::invalid_argument);
}

TEST_CASE("span wrappers check sizes") {
  std::vector<double> a(4, 1.0), out(3);
  CHECK_THROWS(shifted_difference(a, 1, out));
  std::vector<double> y(4, 0.0);
  axpy(2.0, a, y);
  CHECK(y[3] == 2.0);
}
