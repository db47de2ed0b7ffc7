#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mbqs {

using cplx = std::complex<double>;

/// Pfaffian of an even-dimensional antisymmetric complex matrix, computed by
/// skew-symmetric tridiagonalization with full column pivoting (Parlett-Reid).
/// Pf of the empty matrix is 1. Throws ArgumentError on odd dimension or when
/// the input fails the antisymmetry check, NumericError on NaN/Inf input.
cplx pfaffian(const Eigen::MatrixXcd& A, double asym_tol = 1e-10);

/// Same algorithm without the antisymmetry pre-check (for internal callers
/// that construct the matrix antisymmetric by design).
cplx pfaffian_unchecked(Eigen::MatrixXcd A);

} // namespace mbqs
