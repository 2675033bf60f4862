#pragma once

// Functional-model diagnostics for the renormed contraction T̃ = W T W^{-1}:
// the characteristic function Θ*, the embedding Φ_1 h(z) = D(I - zT)^{-1} h
// and the bound on det Θ*.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "opcalc/renorm.hpp"

namespace opcalc {

struct CharFnSample {
  cplx z;
  Mat theta;                  // range(D_T̃*) -> range(D), in orthonormal bases
  std::optional<Mat> delta;   // (I - Θ*Θ)^{1/2} when |z| = 1
  double theta_norm = 0.0;
  std::optional<double> det_abs;
  bool empty = false;         // zero-dimensional defect spaces
};

/// Data shared by every sample of one (model, T) pair.
class CharFnContext {
 public:
  CharFnContext(const RenormModel& model, const OperatorMatrix& T);

  CharFnSample eval(cplx z) const;
  bool empty() const noexcept { return Qs_.cols() == 0 || Qd_.cols() == 0; }
  bool square() const noexcept { return Qs_.cols() == Qd_.cols(); }
  Eigen::Index defect_dim() const noexcept { return Qd_.cols(); }
  Eigen::Index defect_star_dim() const noexcept { return Qs_.cols(); }
  const Mat& contraction() const noexcept { return Tt_; }
  /// ||V X - D|| with X = D_T̃ W; zero when V is the W-corrected identification
  double identification_residual() const noexcept { return v_residual_; }

 private:
  Mat Tt_;
  Mat Dt_;   // D_T̃
  Mat Dts_;  // D_T̃*
  Mat Qs_;   // orthonormal basis of range(D_T̃*)
  Mat Qd_;   // orthonormal basis of range(D)
  Mat Vm_;   // V composed with the coordinate map of range(D)
  double v_residual_ = 0.0;
};

/// |z| < 1, or |z| = 1 with I - zT̃ invertible; a numerically singular
/// resolvent is a numerical error.
CharFnSample char_fn_eval(const RenormModel& model, const OperatorMatrix& T, cplx z);

/// D T^n h for n = 0..N, the Taylor coefficients of Φ_1 h.
std::vector<Vec> analytic_embedding_coeffs(const RenormModel& model, const OperatorMatrix& T,
                                           const Vec& h, std::size_t N);

struct NormIdentity {
  double gram_side = 0.0;    // <G h, h>
  double series_side = 0.0;  // sum_{n<N} ||D T^n h||^2 + lim* ||T^n h||^2
  double residual = 0.0;     // |difference| / max(1, gram_side)
};
/// Both sides of |||h|||^2 = sum ||D T^n h||^2 + lim* ||T^n h||^2, the lim*
/// side evaluated as sum_k f_k ||T^{N+k} h||^2 at n = N.
NormIdentity embedding_norm_identity(const RenormModel& model, const OperatorMatrix& T, const Vec& h,
                                     std::size_t N = kDefaultHorizon);

/// D (I - zT)^{-1} h
Vec embedding_eval(const RenormModel& model, const OperatorMatrix& T, const Vec& h, cplx z);

/// max_z ||Φ_1(Th)(z) - (Φ_1 h(z) - Φ_1 h(0)) / z|| (z = 0 uses the derivative).
double intertwining_residual(const RenormModel& model, const OperatorMatrix& T, const Vec& h,
                             const std::vector<cplx>& z_samples);

struct DetScan {
  double max_det = 0.0;
  double max_theta_norm = 0.0;
  std::size_t samples = 0;
  std::vector<CharFnSample> rows;  // filled when keep_rows
};

/// grid x grid polar mesh of |z| <= radius (default 1 - 1/grid), radii
/// radius * i / (grid - 1). Zero-dimensional or unequal defect spaces are
/// unsupported.
DetScan det_bound_scan(const RenormModel& model, const OperatorMatrix& T, std::size_t grid,
                       double radius = -1.0, bool keep_rows = false);
/// Serial reference of the same scan.
DetScan det_bound_scan_serial(const RenormModel& model, const OperatorMatrix& T, std::size_t grid,
                              double radius = -1.0);

/// ||α[T*,T] - α̃[T*,T](I - T*T)||
double defect_identity_residual(const OperatorMatrix& T, const AdmissibilityReport& adm);

}  // namespace opcalc
