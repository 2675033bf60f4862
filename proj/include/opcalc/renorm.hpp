#pragma once

// Equivalent Hilbert norm |||h|||^2 = sum ||D T^n h||^2 + lim ||B T^n h||^2 in
// which a member of C_α is a contraction, and the unitary / completely
// nonunitary splitting built on top of it.

#include <cstddef>
#include <string>

#include "opcalc/factorization.hpp"
#include "opcalc/hereditary.hpp"
#include "opcalc/operator_matrix.hpp"

namespace opcalc {

/// (α[T*,T])^{1/2}; eigenvalues down to -tol * scale are clamped to zero,
/// anything more negative is a precondition error (T is not a member).
Mat defect_operator(const OperatorMatrix& T, const AdmissibilityReport& adm, double tol = 1e-9);
Mat defect_operator(const OperatorMatrix& T, const TruncatedSeries& alpha, double tol = 1e-9);

enum class LimitMethod { iteration, closed_form };
const char* to_string(LimitMethod m) noexcept;

struct RenormModel {
  AdmissibilityReport admissibility;
  TruncatedSeries alpha;
  TruncatedSeries beta_tilde;  // β̃ ≻ 0, scaled with f
  TruncatedSeries f;           // β̃ α̃ ≻ 0 with sum f_k = 1
  Mat D;
  Mat B;
  Mat sum_term;    // sum_n T*^n D^2 T^n
  Mat limit_term;  // lim_n T*^n B^2 T^n
  Mat gram;        // G = sum_term + limit_term
  Mat W;           // G^{1/2}
  Mat W_inv;
  double gram_min_eigenvalue = 0.0;
  double contraction_norm = 0.0;  // ||W T W^{-1}||
  double defect_residual = 0.0;   // ||G - T*GT - D^2|| / max(1, ||G||)
  LimitMethod limit_method = LimitMethod::iteration;
  std::size_t iterations = 0;
  double limit_crosscheck = -1.0;  // ||iteration - closed form|| when both exist
};

/// Builds the model; membership and the factorization of α̃ must succeed.
/// Sums and the limit are iterated up to `horizon` and declared converged
/// after 8 consecutive steps below tol * scale; a diagonalizable T whose
/// limit term does not settle is handled by the closed form that keeps only
/// the eigen-pairs with conj(λ_k) λ_l = 1.
RenormModel build_renorm(const OperatorMatrix& T, const TruncatedSeries& alpha, double tol = 1e-9,
                         std::size_t horizon = kDefaultHorizon);
RenormModel build_renorm(const OperatorMatrix& T, const AdmissibilityReport& adm, double tol = 1e-9,
                         std::size_t horizon = kDefaultHorizon);

struct SimilarityCheck {
  double contraction_norm = 0.0;        // ||W T W^{-1}||
  double min_eig_gram_defect = 0.0;     // λ_min(G - T*GT), >= 0 when T is a G-contraction
};
SimilarityCheck verify_similarity(const RenormModel& model, const OperatorMatrix& T);

struct DefectConstants {
  double c = 0.0;
  double C = 0.0;
  bool stabilized = false;  // the defect sum settled before the horizon
};
/// Windowed estimates of the best c, C with
/// c||h||^2 <= sum ||D T^n h||^2 + limsup ||T^n h||^2 <= C||h||^2:
/// c = max_m λ_min(S + T*^m T^m), C = max_m λ_max(S + T*^m T^m) over the
/// last 64 indices before the horizon.
DefectConstants abstract_defect_check(const OperatorMatrix& T, const Mat& D,
                                      std::size_t horizon = kDefaultHorizon);

struct DecompositionResult {
  Mat H0_basis;  // columns spanning H_0 (orthonormal in the original inner product)
  Mat H1_basis;  // columns spanning H_1, G-orthogonal to H_0
  double unitary_residual = 0.0;     // ||R*R - I|| for R = T̃ restricted to H̃_0
  double invariance_residual = 0.0;  // max of the leak of T̃ out of H̃_0 and H̃_1
};

/// H̃_0 = ∩_{k<=dim} ker(D_T̃ T̃^k) ∩ ker(D_T̃* T̃*^k) in the renormed
/// coordinates, mapped back through W^{-1}. Needs α strongly admissible.
DecompositionResult canonical_decomposition(const RenormModel& model, const OperatorMatrix& T,
                                            double tol = 1e-6);

/// Lim-term oracle for diagonalizable T: V^{-*}(K ∘ M)V^{-1} with K = V* X V
/// and M_kl = [conj(λ_k) λ_l = 1]; entries with |λ| < 1 vanish in the limit.
/// Returns false when the eigenvector matrix is too ill-conditioned.
bool limit_closed_form(const OperatorMatrix& T, const Mat& X, Mat& out, double unit_tol = 1e-9);

}  // namespace opcalc
