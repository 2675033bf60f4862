#pragma once

// Constructive cofactors: given q, find p with p ≻ 0 and pq ≻ 0, first for a
// single conjugate pair, then for polynomials without real roots, then for
// polynomials positive on [0,1], and finally for series positive on [0,1].

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcalc/polynomial.hpp"
#include "opcalc/series.hpp"

namespace opcalc {

/// Complex number with exact rational coordinates.
struct GaussianRational {
  Rational re;
  Rational im;
};

struct QuadraticFactor {
  RealPolynomial p;   // prod_{j<m} (t^{2^j} + λ^{2^j})(t^{2^j} + conj(λ)^{2^j})
  RealPolynomial pq;  // t^{2^{m+1}} - 2 Re(λ^{2^m}) t^{2^m} + |λ^{2^m}|^2
  int m = 0;
};

/// Largest exponent m accepted before giving up (deg p = 2^{m+1} - 2).
inline constexpr int kMaxSquarings = 14;

/// Exact construction for λ with rational coordinates.
QuadraticFactor quadratic_factor(const GaussianRational& lambda);
/// Same from a floating-point root; every coefficient of p is formed in
/// double and converted exactly, so p ≻ 0 still holds exactly.
QuadraticFactor quadratic_factor(std::complex<double> lambda);

/// p with p ≻ 0 and pq ≻ 0 for q without real roots and q(0) > 0.
/// Roots are located numerically; pq ≻ 0 is then checked with tolerance
/// tol * max|pq_k|.
RealPolynomial positive_factor_nonreal(const RealPolynomial& q, double tol = 1e-9);
/// Same from exactly known upper-half-plane roots (one entry per pair,
/// repeated by multiplicity); the result is then verified exactly against
/// prod (t - λ)(t - conj λ).
RealPolynomial positive_factor_nonreal(std::span<const GaussianRational> upper_roots);

struct UnitIntervalFactor {
  TruncatedSeries u;          // p / q_plus, truncated with a certified tail
  RealPolynomial p;           // cofactor of the nonreal part
  std::vector<double> positive_roots;  // roots of q_plus, all > 1
  std::vector<double> negative_roots;
  double constant = 1.0;      // C with q = C q_nr q_plus q_minus, q_nr monic-at-0
};

/// u ≻ 0 with uq ≻ 0 for q > 0 on [0,1]. The order of u starts at `order`
/// and doubles until the tail is at most `tail_target`.
UnitIntervalFactor positive_factor_unit_interval(const RealPolynomial& q,
                                                 std::size_t order = kDefaultOrder,
                                                 double tail_target = 1e-12,
                                                 WeightRef weight = GoodWeight::unit());

enum class CertificateStatus { certified, failed, inconclusive };
const char* to_string(CertificateStatus s) noexcept;

struct FactorizationCertificate {
  TruncatedSeries f;
  TruncatedSeries g;
  TruncatedSeries fg;
  DominanceVerdict verdict_g;
  DominanceVerdict verdict_fg;
  double epsilon = 0.0;
  std::size_t N_split = 0;
  CertificateStatus status = CertificateStatus::failed;
  std::string failed_stage;  // empty when certified
  std::string message;

  bool ok() const noexcept { return status == CertificateStatus::certified; }
};

/// g ≻ 0 with fg ≻ 0 for f positive on [0,1], following the splitting
/// f_N = sum_{n<=N} f_n t^n - ε/2, h = ε/2 + sum_{n>N, f_n<0} f_n t^n,
/// g = u / h. Throws a precondition error when positivity on [0,1] cannot
/// be certified.
FactorizationCertificate wiener_factorize(const TruncatedSeries& f, double tol = 1e-10);

}  // namespace opcalc
