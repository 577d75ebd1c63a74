#include <cmath>
#include <complex>

#include "doctest.h"
#include "isrs/expm.hpp"

using namespace isrs::linalg;
using Eigen::MatrixXcd;
using cd = std::complex<double>;

namespace {

MatrixXcd random_hermitian(int n, double scale, unsigned seed) {
  std::srand(seed);
  MatrixXcd a = MatrixXcd::Random(n, n);
  MatrixXcd h = 0.5 * (a + a.adjoint());
  return h * (scale / h.cwiseAbs().colwise().sum().maxCoeff());
}

}  // namespace

TEST_CASE("diagonal matrices exponentiate elementwise") {
  MatrixXcd d = MatrixXcd::Zero(3, 3);
  d(0, 0) = cd(0.5, 0.0);
  d(1, 1) = cd(-2.0, 1.0);
  d(2, 2) = cd(7.0, -3.0);
  const MatrixXcd e = expm_pade(d);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(e(i, i) - std::exp(d(i, i))) < 1e-13 * std::abs(std::exp(d(i, i))));
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("nilpotent matrix gives a truncated series") {
  MatrixXcd n = MatrixXcd::Zero(3, 3);
  n(0, 1) = 2.0;
  n(1, 2) = 3.0;
  const MatrixXcd e = expm_pade(n);
  MatrixXcd expect = MatrixXcd::Identity(3, 3) + n + 0.5 * n * n;
  CHECK((e - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("2x2 rotation generator closed form") {
  // exp(-i t sigma_x) = cos t - i sin t sigma_x
  for (double t : {1e-6, 0.3, 2.0, 40.0}) {
    MatrixXcd sx(2, 2);
    sx << 0, 1, 1, 0;
    const MatrixXcd u = unitary_propagator_pade(sx, t);
    CHECK(std::abs(u(0, 0) - cd(std::cos(t), 0)) < 1e-12);
    CHECK(std::abs(u(0, 1) - cd(0, -std::sin(t))) < 1e-12);
    const MatrixXcd v = unitary_propagator_eig(sx, t);
    CHECK((u - v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pade and eigen routes agree across norms") {
  for (double norm : {1e-3, 0.1, 1.0, 5.0, 60.0}) {
    const MatrixXcd h = random_hermitian(12, norm, 3);
    const MatrixXcd u1 = unitary_propagator_pade(h, 1.0);
    const MatrixXcd u2 = unitary_propagator_eig(h, 1.0);
    INFO("norm " << norm);
    CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(unitarity_error(u1) < 1e-12);
  }
}

TEST_CASE("group property") {
  const MatrixXcd h = random_hermitian(8, 3.0, 5);
  const MatrixXcd full = unitary_propagator_pade(h, 1.0);
  const MatrixXcd half = unitary_propagator_pade(h, 0.5);
  CHECK((half * half - full).cwiseAbs().maxCoeff() < 1e-12);
  const MatrixXcd back = unitary_propagator_eig(h, -1.0);
  CHECK((back * full - MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermiticity error") {
  MatrixXcd a(2, 2);
  a << 1, cd(0, 1), cd(0, -1), 2;
  CHECK(hermiticity_error(a) == 0.0);
  a(0, 1) = cd(0.5, 1.0);
  CHECK(hermiticity_error(a) == doctest::Approx(0.5));
}
