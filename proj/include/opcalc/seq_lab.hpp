#pragma once

// One-sided sequences: the backward shift ∇, the forward shift ∇₋, f(∇),
// the limit functional lim*, weighted shifts and class inclusion.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcalc/hereditary.hpp"
#include "opcalc/polynomial.hpp"
#include "opcalc/series.hpp"

namespace opcalc {

/// a_n = prefix[n] for n < prefix.size(), a_n = eventual afterwards. Kept in
/// canonical form: trailing prefix entries equal to `eventual` are dropped.
class EventualSeq {
 public:
  EventualSeq() = default;
  EventualSeq(std::vector<Rational> prefix, Rational eventual);
  static EventualSeq from_doubles(std::span<const double> prefix, double eventual);
  static EventualSeq unit(std::size_t k);  // e_k

  const std::vector<Rational>& prefix() const noexcept { return prefix_; }
  const Rational& eventual() const noexcept { return eventual_; }
  /// Index from which the sequence is constant.
  std::size_t settle_index() const noexcept { return prefix_.size(); }
  Rational operator[](std::size_t n) const { return n < prefix_.size() ? prefix_[n] : eventual_; }

  std::vector<double> to_doubles(std::size_t count) const;
  Rational min_value() const;
  Rational sup_abs() const;
  std::string to_string() const;

  friend EventualSeq operator+(const EventualSeq& a, const EventualSeq& b);
  friend EventualSeq operator-(const EventualSeq& a, const EventualSeq& b);
  friend EventualSeq operator*(const Rational& c, const EventualSeq& a);
  friend bool operator==(const EventualSeq& a, const EventualSeq& b) {
    return a.prefix_ == b.prefix_ && a.eventual_ == b.eventual_;
  }

 private:
  void canonicalize();
  std::vector<Rational> prefix_;
  Rational eventual_ = 0;
};

/// (∇a)_n = a_{n+1}
EventualSeq nabla(const EventualSeq& a);
/// (∇₋a)_0 = 0, (∇₋a)_n = a_{n-1}
EventualSeq nabla_minus(const EventualSeq& a);

enum class ShiftDirection { backward, forward };

struct ShiftResult {
  EventualSeq seq;
  double error_bound = 0.0;  // 0 means exact
};

/// backward: (f(∇)a)_n = sum_j f_j a_{n+j}; forward: coefficients of f(z) a(z).
/// The stored coefficients are used exactly; a tail of f contributes
/// tail * sup|a| to the error bound. Forward application with a tail is only
/// exact when a is eventually zero.
ShiftResult shift_apply(const TruncatedSeries& f, const EventualSeq& a, ShiftDirection dir);
/// Exact backward application of a rational f whose coefficients are summable
/// (denominator roots outside the closed disc), using f(1) for the constant part.
EventualSeq shift_apply_exact(const RationalSeries& f, const EventualSeq& a);
EventualSeq shift_apply_exact(const RealPolynomial& f, const EventualSeq& a);

/// lim* of an eventually constant sequence: eventual * f(1), exact for
/// polynomial f. `f` must satisfy ||f|| = 1 within 1e-9 (input error otherwise).
Rational lim_star(const TruncatedSeries& f, const EventualSeq& x);

struct LimStarSample {
  bool exists = false;
  double value = 0.0;
  double oscillation = 0.0;  // spread of sum_k f_k x_{n+k} over the last window
};
/// Windowed lim* on a finite sample: y_n = sum_k f_k x_{n+k} on the last
/// quarter of the available range; exists when its spread is <= tol.
LimStarSample lim_star(const TruncatedSeries& f, std::span<const double> x, double tol = 1e-12);

/// y_n = sum_{j < f.size()} f_j x_{n+j} for every n with n + f.size() <= x.size().
std::vector<double> apply_backward(std::span<const double> f, std::span<const double> x);

/// Weighted shift T e_n = λ_{n+1} e_{n+1} described by Λ_n = ||T^n e_0||^2.
struct ShiftSpec {
  EventualSeq Lambda;

  /// λ_n = sqrt(Λ_n / Λ_{n-1}), n >= 1
  double weight(std::size_t n) const;
  /// ||T^n e_j||^2 = Λ_{n+j} / Λ_j
  Rational orbit_norm_sq(std::size_t n, std::size_t j) const;
  /// Compression to span(e_0..e_{dim-1}); the last column is zero.
  Mat truncated_matrix(std::size_t dim) const;
};

/// Input checks: Λ_n > 0 for all n.
ShiftSpec make_shift(EventualSeq Lambda);

struct ShiftMembership {
  MembershipCertificate certificate;
  EventualSeq values;                   // α(∇)Λ
  std::optional<std::size_t> witness;   // first negative index
};

/// α(∇)Λ computed exactly as α̃(∇)(1 - ∇)Λ; member iff every entry is >= 0.
/// `certificate.strict` reports whether every entry is > 0.
ShiftMembership shift_membership(const ShiftSpec& s, const RationalSeries& alpha_tilde);
ShiftMembership shift_membership(const ShiftSpec& s, const TruncatedSeries& alpha);

/// Exact α̃ = α / (1 - t) for a polynomial α with α(1) = 0 (input error otherwise).
RationalSeries tilde_of(const TruncatedSeries& alpha);

/// Finitely supported Ψ with q(∇)Ψ = b for finitely supported b (q(0) != 0),
/// by back substitution from the end of the support.
std::vector<Rational> nabla_solve(const RealPolynomial& q, std::span<const Rational> b);

/// Λ_n = Λ∞ + sum_{j >= n} Ψ_j, with Λ∞ >= 1 chosen so that min Λ >= 1.
EventualSeq lambda_from_increments(std::span<const Rational> psi);

enum class InclusionStatus { included, refuted, inconclusive };
const char* to_string(InclusionStatus s) noexcept;

struct InclusionVerdict {
  InclusionStatus status = InclusionStatus::inconclusive;
  std::vector<Rational> gamma_prefix;  // γ = τ̃ / α̃
  std::optional<std::size_t> first_negative_index;
  std::optional<ShiftSpec> counterexample;
  bool gamma_polynomial = false;
  bool bounded_on_unit_interval = false;  // heuristic flag for the inconclusive case
  std::string reason;
};

/// C_α ⊆ C_τ iff γ = τ̃/α̃ ≻ 0. Included needs a certificate for all
/// coefficients (γ polynomial, or reduced numerator with nonnegative
/// coefficients over a denominator d_0 - (nonnegative)); a negative
/// coefficient refutes and carries a verified counterexample.
InclusionVerdict inclusion_check(const RationalSeries& alpha_tilde, const RationalSeries& tau_tilde,
                                 std::size_t N = kDefaultOrder);
InclusionVerdict inclusion_check(const TruncatedSeries& alpha, const TruncatedSeries& tau,
                                 std::size_t N = kDefaultOrder);

/// Γ = (γ_ℓ, ..., γ_0), Ψ = τ̃^{-1}(∇)Γ, Λ from Ψ; verifies α(∇)Λ = e_ℓ and
/// [τ(∇)Λ]_0 = γ_ℓ < 0 (construction error otherwise).
ShiftSpec counterexample_shift(const RationalSeries& alpha_tilde, const RationalSeries& tau_tilde,
                               std::size_t ell);

enum class LimitVerdict { exists, oscillates, inconclusive };
const char* to_string(LimitVerdict v) noexcept;

struct LimitProbe {
  LimitVerdict verdict = LimitVerdict::inconclusive;
  double value = 0.0;        // last window mean
  double oscillation = 0.0;  // spread over the last window
  bool alarm = false;        // no limit although α is strongly admissible
  std::vector<double> trace; // a_n = ||T^n h||^2, n <= horizon
};

/// Tracks a_n = ||T^n h||^2 over 16 windows at the end of the horizon.
/// exists: every window spread <= tol * max(1, |a|); oscillates: the spread
/// does not decay between the first and last window. Membership is a
/// precondition.
LimitProbe limit_exists_probe(const OperatorMatrix& T, const TruncatedSeries& alpha, const Vec& h,
                              std::size_t horizon = kDefaultHorizon, double tol = 1e-8);
LimitProbe limit_exists_probe(const ShiftSpec& s, const TruncatedSeries& alpha,
                              std::span<const double> h, std::size_t horizon = kDefaultHorizon,
                              double tol = 1e-8);

/// a_0..a_{count-1} with q(∇)a = b, by the forward recurrence
/// a_{n+d} = (b_n - sum_{j<d} q_j a_{n+j}) / q_d from a_0..a_{d-1} = init;
/// b_n = b_eventual beyond b.
std::vector<double> recurrence_solve(std::span<const double> q, std::span<const double> b,
                                     double b_eventual, std::span<const double> init,
                                     std::size_t count);

}  // namespace opcalc
