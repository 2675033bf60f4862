#include "opcalc/renorm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

namespace {

constexpr int kStableSteps = 8;
constexpr double kMaxEigCond = 1e10;
constexpr std::size_t kDefectWindow = 64;

struct EigenData {
  Vec lambda;
  Mat V;
  Mat V_inv;
};

bool diagonalize(const OperatorMatrix& T, EigenData& out) {
  Eigen::ComplexEigenSolver<Mat> es(T.mat());
  if (es.info() != Eigen::Success) return false;
  const Mat V = es.eigenvectors();
  const double cond = condition_number(V);
  if (!std::isfinite(cond) || cond > kMaxEigCond) return false;
  out.lambda = es.eigenvalues();
  out.V = V;
  out.V_inv = V.inverse();
  return true;
}

// sum_n T*^n X T^n in eigen coordinates; unimodular pairs are dropped
bool sum_closed_form(const EigenData& e, const Mat& X, Mat& out, double unit_tol) {
  const Mat K = e.V.adjoint() * X * e.V;
  Mat Y = Mat::Zero(K.rows(), K.cols());
  for (Eigen::Index k = 0; k < K.rows(); ++k)
    for (Eigen::Index l = 0; l < K.cols(); ++l) {
      const cplx z = std::conj(e.lambda(k)) * e.lambda(l);
      if (std::abs(z) >= 1.0 - unit_tol) continue;
      Y(k, l) = K(k, l) / (1.0 - z);
    }
  out = hermitian_part(e.V_inv.adjoint() * Y * e.V_inv);
  return out.allFinite();
}

double hermitian_floor(const Mat& h, double tol) { return tol * std::max(1.0, op_norm(h)); }

}  // namespace

const char* to_string(LimitMethod m) noexcept {
  return m == LimitMethod::iteration ? "iteration" : "closed_form";
}

Mat defect_operator(const OperatorMatrix& T, const AdmissibilityReport& adm, double tol) {
  const MembershipCertificate c = class_membership(T, adm, tol);
  if (c.verdict != MembershipVerdict::member)
    fail(ErrorKind::precondition, "operator is not a member of C_alpha: " + c.failed_condition);
  const Mat A = hereditary_apply(alpha_from_tilde(adm.alpha_tilde), T, tol * 1e-3).value;
  return psd_sqrt(hermitian_part(A), c.threshold).root;
}

Mat defect_operator(const OperatorMatrix& T, const TruncatedSeries& alpha, double tol) {
  return defect_operator(T, check_admissible(alpha, false), tol);
}

bool limit_closed_form(const OperatorMatrix& T, const Mat& X, Mat& out, double unit_tol) {
  EigenData e;
  if (!diagonalize(T, e)) return false;
  const Mat K = e.V.adjoint() * X * e.V;
  Mat Y = Mat::Zero(K.rows(), K.cols());
  for (Eigen::Index k = 0; k < K.rows(); ++k)
    for (Eigen::Index l = 0; l < K.cols(); ++l) {
      const cplx z = std::conj(e.lambda(k)) * e.lambda(l);
      if (std::abs(z - 1.0) <= unit_tol) Y(k, l) = K(k, l);
    }
  out = hermitian_part(e.V_inv.adjoint() * Y * e.V_inv);
  return out.allFinite();
}

RenormModel build_renorm(const OperatorMatrix& T, const TruncatedSeries& alpha, double tol,
                         std::size_t horizon) {
  RenormModel m = build_renorm(T, check_admissible(alpha, true), tol, horizon);
  m.alpha = alpha;
  return m;
}

RenormModel build_renorm(const OperatorMatrix& T, const AdmissibilityReport& adm, double tol,
                         std::size_t horizon) {
  if (!adm.admissible) fail(ErrorKind::input, "alpha is not admissible: " + adm.reason);
  RenormModel m;
  m.admissibility = adm;
  m.alpha = alpha_from_tilde(adm.alpha_tilde);
  m.D = defect_operator(T, adm, tol);

  const FactorizationCertificate cert = wiener_factorize(adm.alpha_tilde, tol * 1e-2);
  if (!cert.ok())
    fail(ErrorKind::construction, "factorization of alpha_tilde failed at " + cert.failed_stage +
                                      ": " + cert.message);
  const double s = cert.fg.sum();
  if (!(s > 0.0)) fail(ErrorKind::numerical, "beta_tilde alpha_tilde sums to zero");
  m.f = cert.fg.scaled(1.0 / s);
  m.beta_tilde = cert.g.scaled(1.0 / s);

  const HereditaryResult b2 = hereditary_apply(m.f, T, tol * 1e-3);
  const Mat B2 = hermitian_part(b2.value);
  m.B = psd_sqrt(B2, hermitian_floor(B2, tol) + b2.remainder).root;

  const Mat D2 = m.D * m.D;
  const Mat& A = T.mat();
  const Mat As = A.adjoint();
  const double scale = std::max({1.0, op_norm(D2), op_norm(B2)});
  const double step_tol = tol * 1e-2 * scale;

  Mat S = Mat::Zero(A.rows(), A.cols());
  Mat P = D2;
  Mat X = B2;
  int stable_sum = 0, stable_lim = 0;
  std::size_t n = 0;
  for (; n < horizon && (stable_sum < kStableSteps || stable_lim < kStableSteps); ++n) {
    if (stable_sum < kStableSteps) {
      S += P;
      P = As * P * A;
      stable_sum = op_norm(P) <= step_tol ? stable_sum + 1 : 0;
    }
    if (stable_lim < kStableSteps) {
      Mat next = As * X * A;
      stable_lim = op_norm(next - X) <= step_tol ? stable_lim + 1 : 0;
      X = std::move(next);
    }
    if (!S.allFinite() || !X.allFinite())
      fail(ErrorKind::summability, "renorm sums overflowed");
  }
  m.iterations = n;

  EigenData eig;
  const bool diag = diagonalize(T, eig);
  const double unit_tol = 1e-9;
  if (stable_sum < kStableSteps) {
    if (!diag || !sum_closed_form(eig, D2, S, unit_tol))
      fail(ErrorKind::summability, "sum of T*^n D^2 T^n did not settle within the horizon");
  }
  Mat L = hermitian_part(X);
  Mat closed;
  const bool have_closed = diag && limit_closed_form(T, B2, closed, unit_tol);
  if (stable_lim >= kStableSteps) {
    m.limit_method = LimitMethod::iteration;
    if (have_closed) m.limit_crosscheck = op_norm(closed - L);
  } else if (have_closed) {
    m.limit_method = LimitMethod::closed_form;
    L = closed;
  } else {
    fail(ErrorKind::numerical, "lim T*^n B^2 T^n did not stabilize and T is not diagonalizable");
  }

  m.sum_term = hermitian_part(S);
  m.limit_term = L;
  m.gram = hermitian_part(m.sum_term + m.limit_term);

  Eigen::SelfAdjointEigenSolver<Mat> es(m.gram);
  m.gram_min_eigenvalue = es.eigenvalues().minCoeff();
  if (!(m.gram_min_eigenvalue > tol * std::max(1.0, es.eigenvalues().maxCoeff())))
    fail(ErrorKind::numerical, "Gram matrix of the new norm is not positive definite");
  const Eigen::VectorXd r = es.eigenvalues().cwiseSqrt();
  const Mat& U = es.eigenvectors();
  m.W = U * r.cast<cplx>().asDiagonal() * U.adjoint();
  m.W_inv = U * r.cwiseInverse().cast<cplx>().asDiagonal() * U.adjoint();

  m.defect_residual =
      op_norm(m.gram - As * m.gram * A - D2) / std::max(1.0, op_norm(m.gram));
  m.contraction_norm = op_norm(m.W * A * m.W_inv);
  return m;
}

SimilarityCheck verify_similarity(const RenormModel& model, const OperatorMatrix& T) {
  SimilarityCheck s;
  const Mat& A = T.mat();
  s.contraction_norm = op_norm(model.W * A * model.W_inv);
  s.min_eig_gram_defect = min_eigenvalue(hermitian_part(model.gram - A.adjoint() * model.gram * A));
  return s;
}

DefectConstants abstract_defect_check(const OperatorMatrix& T, const Mat& D, std::size_t horizon) {
  const double bound = T.power_bound(horizon);
  if (!std::isfinite(bound) || bound > 1e8)
    fail(ErrorKind::precondition, "T is not power bounded on the horizon");
  const Mat& A = T.mat();
  const Mat As = A.adjoint();
  const Mat D2 = D.adjoint() * D;
  horizon = std::max(horizon, kDefectWindow + 1);

  Mat S = Mat::Zero(A.rows(), A.cols());
  Mat P = D2;
  double last_term = 0.0;
  for (std::size_t n = 0; n < horizon; ++n) {
    S += P;
    P = As * P * A;
    last_term = op_norm(P);
  }
  S = hermitian_part(S);

  DefectConstants out;
  out.stabilized = last_term <= 1e-10 * std::max(1.0, op_norm(S));
  out.c = -std::numeric_limits<double>::infinity();
  out.C = -std::numeric_limits<double>::infinity();
  // T*^m T^m for m in the last window
  Mat Tm = Mat::Identity(A.rows(), A.cols());
  const std::size_t start = horizon - kDefectWindow;
  Mat step = A;
  for (std::size_t e = start; e > 0; e >>= 1) {
    if (e & 1U) Tm = Tm * step;
    step = step * step;
  }
  for (std::size_t k = 0; k < kDefectWindow; ++k) {
    const Mat Q = hermitian_part(S + Tm.adjoint() * Tm);
    Eigen::SelfAdjointEigenSolver<Mat> es(Q, Eigen::EigenvaluesOnly);
    out.c = std::max(out.c, es.eigenvalues().minCoeff());
    out.C = std::max(out.C, es.eigenvalues().maxCoeff());
    Tm = Tm * A;
  }
  out.c = std::max(out.c, 0.0);
  return out;
}

DecompositionResult canonical_decomposition(const RenormModel& model, const OperatorMatrix& T,
                                            double tol) {
  if (!model.admissibility.strongly_admissible)
    fail(ErrorKind::precondition, "canonical decomposition needs a strongly admissible alpha");
  const Eigen::Index d = T.dim();
  const Mat Tt = model.W * T.mat() * model.W_inv;
  const Mat I = Mat::Identity(d, d);
  const double fl = 1e-8;
  const Mat Dt = psd_sqrt(hermitian_part(I - Tt.adjoint() * Tt), fl + tol).root;
  const Mat Dts = psd_sqrt(hermitian_part(I - Tt * Tt.adjoint()), fl + tol).root;

  Mat stack(2 * d * (d + 1), d);
  Mat Pk = I, Pks = I;
  for (Eigen::Index k = 0; k <= d; ++k) {
    stack.middleRows(2 * k * d, d) = Dt * Pk;
    stack.middleRows(2 * k * d + d, d) = Dts * Pks;
    Pk = Tt * Pk;
    Pks = Tt.adjoint() * Pks;
  }
  const double sc = std::max(1.0, op_norm(stack));
  const Mat Q0 = null_space(stack, 0.0, tol * sc);
  Mat Q1;
  if (Q0.cols() == 0) {
    Q1 = I;
  } else if (Q0.cols() == d) {
    Q1 = Mat(d, 0);
  } else {
    Q1 = null_space(Q0.adjoint(), 1e-10);
  }

  DecompositionResult r;
  r.H0_basis = Q0.cols() > 0 ? orthonormal_columns(model.W_inv * Q0) : Mat(d, 0);
  r.H1_basis = Q1.cols() > 0 ? orthonormal_columns(model.W_inv * Q1) : Mat(d, 0);
  if (Q0.cols() > 0) {
    const Mat R = Q0.adjoint() * Tt * Q0;
    r.unitary_residual = op_norm(R.adjoint() * R - Mat::Identity(R.rows(), R.cols()));
    r.invariance_residual = op_norm(Tt * Q0 - Q0 * R);
  }
  if (Q1.cols() > 0) {
    const Mat leak = Tt * Q1 - Q1 * (Q1.adjoint() * Tt * Q1);
    r.invariance_residual = std::max(r.invariance_residual, op_norm(leak));
  }
  return r;
}

}  // namespace opcalc
