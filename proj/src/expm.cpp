#include "isrs/expm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "isrs/errors.hpp"

namespace isrs::linalg {
namespace {

using Matrix = Eigen::MatrixXcd;

// Higham (2005) backward-error bounds for degrees 3, 5, 7, 9, 13.
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                          2.097847961257068e0, 5.371920351148152e0};

constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                           2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0, 129060195264000.0,
    10559470521600.0,    670442572800.0,      33522128640.0,      1323241920.0,       40840800.0,
    960960.0,            16380.0,             182.0,              1.0};

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Builds U (odd part) and V (even part) so that exp(A) ~ (V - U)^{-1} (V + U).
template <std::size_t N>
void pade_low(const Matrix& a, const std::array<double, N>& b, Matrix& u, Matrix& v) {
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  Matrix power = ident;
  Matrix odd = Matrix::Zero(n, n);
  Matrix even = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    even += b[k] * power;
    odd += b[k + 1] * power;
    if (k + 2 < N) power = power * a2;
  }
  u = a * odd;
  v = even;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix odd_hi = b[13] * a6 + b[11] * a4 + b[9] * a2;
  u = a * (a6 * odd_hi + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Matrix even_hi = b[12] * a6 + b[10] * a4 + b[8] * a2;
  v = a6 * even_hi + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
}

}  // namespace

Matrix expm_pade(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm requires a square matrix");
  if (!a.allFinite()) throw ParameterError("expm input has non-finite entries");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  const double norm = one_norm(a);
  Matrix u;
  Matrix v;
  int squarings = 0;
  if (norm <= kTheta[0]) {
    pade_low(a, kPade3, u, v);
  } else if (norm <= kTheta[1]) {
    pade_low(a, kPade5, u, v);
  } else if (norm <= kTheta[2]) {
    pade_low(a, kPade7, u, v);
  } else if (norm <= kTheta[3]) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta[4]))));
    pade13(a / std::ldexp(1.0, squarings), u, v);
  }
  Matrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

Matrix unitary_propagator_pade(const Matrix& h, double tau) {
  return expm_pade(std::complex<double>(0.0, -tau) * h);
}

Matrix unitary_propagator_eig(const Matrix& h, double tau) {
  if (h.rows() != h.cols()) throw DimensionError("propagator requires a square matrix");
  if (!h.allFinite()) throw ParameterError("Hamiltonian has non-finite entries");
  if (h.rows() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw ParameterError("eigendecomposition failed");
  const auto& vals = solver.eigenvalues();
  Eigen::VectorXcd phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases[k] = std::polar(1.0, -tau * vals[k]);
  const auto& vecs = solver.eigenvectors();
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

double hermiticity_error(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const Matrix& u) {
  if (u.size() == 0) return 0.0;
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace isrs::linalg
