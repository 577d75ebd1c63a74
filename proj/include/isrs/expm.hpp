#pragma once

#include <Eigen/Dense>

namespace isrs::linalg {

/// exp(A) by scaling and squaring with a diagonal Pade approximant of
/// degree 3, 5, 7, 9 or 13 chosen from the 1-norm of A.
Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a);

/// exp(-i tau H) for hermitian H through its eigendecomposition.
Eigen::MatrixXcd unitary_propagator_eig(const Eigen::MatrixXcd& h, double tau);

/// exp(-i tau H) by scaling and squaring.
Eigen::MatrixXcd unitary_propagator_pade(const Eigen::MatrixXcd& h, double tau);

/// max |A - A^dag|
double hermiticity_error(const Eigen::MatrixXcd& a);

/// max |U U^dag - 1|
double unitarity_error(const Eigen::MatrixXcd& u);

}  // namespace isrs::linalg
