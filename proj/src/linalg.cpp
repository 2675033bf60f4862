#include "opcalc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

double op_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

Mat hermitian_part(const Mat& a) { return (a + a.adjoint()) / 2.0; }

bool is_hermitian(const Mat& a, double rel_tol) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double min_eigenvalue(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

HermitianRoot psd_sqrt(const Mat& h, double floor) {
  HermitianRoot out;
  if (h.size() == 0) {
    out.root = h;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  Eigen::VectorXd ev = es.eigenvalues();
  out.min_eigenvalue = ev(0);
  out.max_eigenvalue = ev(ev.size() - 1);
  if (ev(0) < -floor) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite: eigenvalue " << ev(0) << " below -" << floor;
    fail(ErrorKind::precondition, os.str());
  }
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(0.0, ev(i)));
  out.root = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  out.root = hermitian_part(out.root);
  return out;
}

Mat hpd_inverse(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  const Eigen::VectorXd ev = es.eigenvalues();
  if (!(ev(0) > 0.0)) fail(ErrorKind::numerical, "matrix is not positive definite");
  return hermitian_part(es.eigenvectors() * ev.cwiseInverse().cast<cplx>().asDiagonal() *
                        es.eigenvectors().adjoint());
}

Mat null_space(const Mat& a, double rel_tol, double abs_floor) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = std::max(abs_floor, rel_tol * (s.size() ? s(0) : 0.0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat orthonormal_columns(const Mat& a, double rel_tol) {
  if (a.cols() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Mat& a, double threshold) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++r;
  return r;
}

double condition_number(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

}  // namespace opcalc
