#pragma once

// Hereditary calculus f[T*,T](B) = sum f_n T*^n B T^n, admissibility of
// functions and membership in the classes C_α.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opcalc/operator_matrix.hpp"
#include "opcalc/series.hpp"

namespace opcalc {

struct HereditaryResult {
  Mat value;
  double remainder = 0.0;  // operator-norm bound for the omitted terms
  std::size_t terms = 0;
};

/// Sums the stored coefficients of f against T up to the first index M whose
/// remainder bound sum_{n>=M} |f_n| ||T^n||^2 ||B|| (plus the tail of f
/// against sup ||T^n||^2 / w_n on the horizon) is <= tol; all stored terms
/// are used if no such M exists and the bound is reported. Non-finite bounds
/// raise a summability error. The result is symmetrized when B is Hermitian.
HereditaryResult hereditary_apply(const TruncatedSeries& f, const OperatorMatrix& T, const Mat& B,
                                  double tol = 1e-12);
/// f[T*,T] = f[T*,T](I)
HereditaryResult hereditary_apply(const TruncatedSeries& f, const OperatorMatrix& T,
                                  double tol = 1e-12);

struct AdmissibilityReport {
  bool admissible = false;
  bool strongly_admissible = false;
  TruncatedSeries alpha_tilde;
  double alpha_at_one = 0.0;
  double min_on_unit_interval = 0.0;  // certified lower bound for min α̃ on [0,1]
  double circle_root_margin = 0.0;    // sampled min |α̃| on the unit circle
  std::string reason;                 // first failed condition, empty if admissible
};

/// α = (1 - t) α̃ with α̃ > 0 on [0,1]. α must be a polynomial (tail 0); α̃
/// is formed from partial sums and α(1) must vanish up to tol * sum |α_n|.
AdmissibilityReport check_admissible(const TruncatedSeries& alpha, bool strong, double tol = 1e-12);
/// Same starting from α̃ itself (any tail).
AdmissibilityReport check_admissible_tilde(const TruncatedSeries& alpha_tilde, bool strong);

/// (1 - t) α̃, with tail bound (1 + w_1) tail(α̃).
TruncatedSeries alpha_from_tilde(const TruncatedSeries& alpha_tilde);

enum class MembershipVerdict { member, refuted, inconclusive };
const char* to_string(MembershipVerdict v) noexcept;

struct MembershipCertificate {
  MembershipVerdict verdict = MembershipVerdict::inconclusive;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // min_eigenvalue >= -threshold counts as PSD
  std::size_t truncation_N = 0;
  double series_tail = 0.0;
  bool spectral_ok = false;
  bool summability_ok = false;
  bool strict = false;  // min_eigenvalue > threshold
  double spectral_radius = 0.0;
  std::string failed_condition;
};

/// σ(T) in the closed disc, summability of α̃ against ||T^n||^2 and
/// α[T*,T] >= 0. Non-admissible α is an input error.
MembershipCertificate class_membership(const OperatorMatrix& T, const TruncatedSeries& alpha,
                                       double tol = 1e-9);
MembershipCertificate class_membership(const OperatorMatrix& T, const AdmissibilityReport& adm,
                                       double tol = 1e-9);

/// ||(fg)[T*,T](B) - g[T*,T](f[T*,T](B))||
double composition_identity_residual(const TruncatedSeries& f, const TruncatedSeries& g,
                                     const OperatorMatrix& T, const Mat& B);

/// Smallest n >= 1 with ||T^n|| <= 1; needs spectral radius < 1.
std::size_t min_power_index(const OperatorMatrix& T);

/// p = (1 - t) prod_{k<l} (1 - 2 Re(λ_k conj λ_l) t + t^2) over the distinct
/// eigenvalues (clustered at `merge_tol`); p(λ_k conj λ_l) = 0 for all k, l.
TruncatedSeries annihilating_polynomial(const Vec& eigenvalues, double merge_tol = 1e-8);

struct JoinResult {
  TruncatedSeries gamma;
  TruncatedSeries quotient_alpha;  // γ/α
  TruncatedSeries quotient_beta;   // γ/β
  char used_case = 'a';            // 'a': polynomial data, 'b': invertible α̃ or β̃
  bool psi_trivial = false;        // φ was already ≻ 0
  double consistency = 0.0;        // ||α q_α - β q_β||
};

/// Admissible γ with C_α ∪ C_β ⊆ C_γ for polynomial α, β (root splitting
/// γ = α w). Both quotients are verified ≻ 0 before returning; a failed check
/// is a construction error.
JoinResult join_classes(const TruncatedSeries& alpha, const TruncatedSeries& beta, double tol = 1e-9);
/// Series data given through α̃ and β̃, one of which must be invertible by
/// the Neumann series: φ = α̃/β̃, ψ from wiener_factorize(φ), γ = αψ.
JoinResult join_classes_tilde(const TruncatedSeries& alpha_tilde, const TruncatedSeries& beta_tilde,
                              double tol = 1e-9);

}  // namespace opcalc
