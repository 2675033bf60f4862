#pragma once

// Dense complex linear algebra helpers on top of Eigen.

#include <Eigen/Dense>

#include <complex>

namespace opcalc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Spectral (2-)norm.
double op_norm(const Mat& a);

/// (A + A*) / 2
Mat hermitian_part(const Mat& a);
bool is_hermitian(const Mat& a, double rel_tol = 1e-12);

double min_eigenvalue(const Mat& h);
double max_eigenvalue(const Mat& h);

struct HermitianRoot {
  Mat root;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Square root of a Hermitian matrix that is PSD up to `floor`: eigenvalues in
/// [-floor, 0) are clamped to zero, anything below -floor is an error.
HermitianRoot psd_sqrt(const Mat& h, double floor);

/// Inverse of a Hermitian positive definite matrix through its eigenbasis.
Mat hpd_inverse(const Mat& h);

/// Orthonormal basis of the null space, singular values below rel_tol * s_max
/// (or below abs_floor) counted as zero.
Mat null_space(const Mat& a, double rel_tol = 1e-10, double abs_floor = 0.0);

/// Orthonormal basis of the column span.
Mat orthonormal_columns(const Mat& a, double rel_tol = 1e-10);

/// Numerical rank from singular values.
int numerical_rank(const Mat& a, double threshold);

/// Condition number sigma_max / sigma_min.
double condition_number(const Mat& a);

}  // namespace opcalc
