#include "opcalc/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "opcalc/error.hpp"
#include "opcalc/kernels.hpp"

namespace opcalc {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kSquaredRankTol = 1e-9;
constexpr double kResolventRcond = 1e-12;

// orthonormal eigenvectors of a PSD matrix with eigenvalue above thr
Mat range_basis(const Mat& h, double thr) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > thr) keep.push_back(i);
  Mat q(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  return q;
}

Mat resolvent_apply(const Mat& A, cplx z, const Mat& rhs) {
  const Mat M = Mat::Identity(A.rows(), A.cols()) - z * A;
  Eigen::PartialPivLU<Mat> lu(M);
  if (!(lu.rcond() > kResolventRcond))
    fail(ErrorKind::numerical, "resolvent I - zT is numerically singular");
  return lu.solve(rhs);
}

}  // namespace

CharFnContext::CharFnContext(const RenormModel& model, const OperatorMatrix& T) {
  const Eigen::Index d = T.dim();
  const Mat I = Mat::Identity(d, d);
  Tt_ = model.W * T.mat() * model.W_inv;
  const double floor = 1e-8;
  const Mat dt2 = hermitian_part(I - Tt_.adjoint() * Tt_);
  const Mat dts2 = hermitian_part(I - Tt_ * Tt_.adjoint());
  Dt_ = psd_sqrt(dt2, floor).root;
  Dts_ = psd_sqrt(dts2, floor).root;

  // ranks are read off the squared defects, where roundoff sits near 1e-16
  Qs_ = range_basis(dts2, kSquaredRankTol);
  const Mat d2 = model.D.adjoint() * model.D;
  Qd_ = range_basis(d2, kSquaredRankTol * std::max(1.0, op_norm(d2)));

  // V X = D with X = D_T̃ W; V = D X^+ is a partial isometry since X*X = D^2
  const Mat X = Dt_ * model.W;
  Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = kRankTol * std::max(1.0, s.size() ? s(0) : 0.0);
  Mat Xp = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) Xp += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  const Mat V = model.D * Xp;
  v_residual_ = op_norm(V * X - model.D);
  Vm_ = Qd_.adjoint() * V;
}

CharFnSample CharFnContext::eval(cplx z) const {
  const double az = std::abs(z);
  if (!(az <= 1.0 + 1e-14)) fail(ErrorKind::input, "characteristic function needs |z| <= 1");
  CharFnSample out;
  out.z = z;
  if (empty()) {
    out.empty = true;
    return out;
  }
  // (-T̃* + z D_T̃ (I - zT̃)^{-1} D_T̃*) on range(D_T̃*)
  const Mat rhs = Dts_ * Qs_;
  const Mat inner = -Tt_.adjoint() * Qs_ + z * Dt_ * resolvent_apply(Tt_, z, rhs);
  out.theta = Vm_ * inner;
  out.theta_norm = op_norm(out.theta);
  if (square()) out.det_abs = std::abs(out.theta.determinant());
  if (std::abs(az - 1.0) <= 1e-14) {
    const Mat I = Mat::Identity(out.theta.cols(), out.theta.cols());
    out.delta = psd_sqrt(hermitian_part(I - out.theta.adjoint() * out.theta), 1e-8).root;
  }
  return out;
}

CharFnSample char_fn_eval(const RenormModel& model, const OperatorMatrix& T, cplx z) {
  return CharFnContext(model, T).eval(z);
}

std::vector<Vec> analytic_embedding_coeffs(const RenormModel& model, const OperatorMatrix& T,
                                           const Vec& h, std::size_t N) {
  std::vector<Vec> out;
  out.reserve(N + 1);
  Vec x = h;
  for (std::size_t n = 0; n <= N; ++n) {
    out.push_back(model.D * x);
    x = T.mat() * x;
  }
  return out;
}

NormIdentity embedding_norm_identity(const RenormModel& model, const OperatorMatrix& T, const Vec& h,
                                     std::size_t N) {
  NormIdentity r;
  r.gram_side = (h.adjoint() * model.gram * h)(0, 0).real();
  Vec x = h;
  double s = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    s += (model.D * x).squaredNorm();
    x = T.mat() * x;
  }
  // x = T^N h
  double lim = 0.0;
  for (std::size_t k = 0; k < model.f.size(); ++k) {
    lim += model.f[k] * x.squaredNorm();
    x = T.mat() * x;
  }
  r.series_side = s + lim;
  r.residual = std::abs(r.gram_side - r.series_side) / std::max(1.0, r.gram_side);
  return r;
}

Vec embedding_eval(const RenormModel& model, const OperatorMatrix& T, const Vec& h, cplx z) {
  return model.D * resolvent_apply(T.mat(), z, h);
}

double intertwining_residual(const RenormModel& model, const OperatorMatrix& T, const Vec& h,
                             const std::vector<cplx>& z_samples) {
  const Vec Th = T.mat() * h;
  const Vec at0 = model.D * h;
  double worst = 0.0;
  for (const cplx z : z_samples) {
    const Vec lhs = embedding_eval(model, T, Th, z);
    Vec rhs;
    if (std::abs(z) < 1e-12) {
      rhs = model.D * Th;
    } else {
      rhs = (embedding_eval(model, T, h, z) - at0) / z;
    }
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

namespace {

template <bool Parallel>
DetScan scan(const RenormModel& model, const OperatorMatrix& T, std::size_t grid, double radius,
             bool keep_rows) {
  if (grid < 2) fail(ErrorKind::input, "grid must be at least 2");
  const CharFnContext ctx(model, T);
  if (ctx.empty()) fail(ErrorKind::unsupported, "defect spaces are zero-dimensional");
  if (!ctx.square()) fail(ErrorKind::unsupported, "defect spaces have different dimensions");
  if (radius < 0.0) radius = 1.0 - 1.0 / static_cast<double>(grid);
  const std::size_t count = grid * grid;
  std::vector<CharFnSample> rows(count);
  auto point = [&](std::size_t i) {
    const double r = radius * static_cast<double>(i / grid) / static_cast<double>(grid - 1);
    const double th = 2.0 * std::numbers::pi * static_cast<double>(i % grid) / static_cast<double>(grid);
    return std::polar(r, th);
  };
  // no exception may leave the parallel region
  std::vector<char> bad(count, 0);
  auto body = [&](std::size_t i) {
    try {
      rows[i] = ctx.eval(point(i));
    } catch (const std::exception&) {
      bad[i] = 1;
      return 0.0;
    }
    return rows[i].theta_norm;
  };
  std::vector<double> norms;
  if constexpr (Parallel) {
    norms = kernels::grid_map_parallel(count, body);
  } else {
    norms = kernels::grid_map_serial(count, body);
  }
  for (std::size_t i = 0; i < count; ++i)
    if (bad[i]) fail(ErrorKind::numerical, "resolvent I - zT is numerically singular on the grid");
  DetScan out;
  out.samples = count;
  for (std::size_t i = 0; i < count; ++i) {
    out.max_theta_norm = std::max(out.max_theta_norm, norms[i]);
    out.max_det = std::max(out.max_det, rows[i].det_abs.value_or(0.0));
  }
  if (keep_rows) out.rows = std::move(rows);
  return out;
}

}  // namespace

DetScan det_bound_scan(const RenormModel& model, const OperatorMatrix& T, std::size_t grid,
                       double radius, bool keep_rows) {
  return scan<true>(model, T, grid, radius, keep_rows);
}

DetScan det_bound_scan_serial(const RenormModel& model, const OperatorMatrix& T, std::size_t grid,
                              double radius) {
  return scan<false>(model, T, grid, radius, false);
}

double defect_identity_residual(const OperatorMatrix& T, const AdmissibilityReport& adm) {
  const Mat lhs = hereditary_apply(alpha_from_tilde(adm.alpha_tilde), T, 0.0).value;
  const Mat I = Mat::Identity(T.dim(), T.dim());
  const Mat rhs = hereditary_apply(adm.alpha_tilde, T, I - T.adjoint() * T.mat(), 0.0).value;
  return op_norm(lhs - rhs);
}

}  // namespace opcalc
