#pragma once

// Exact rational polynomials and rational functions, plus the numerical root
// finder used to split them into positive, negative and nonreal factors.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <optional>
#include <vector>

namespace opcalc {

using Rational = mpq_class;

/// Dense polynomial with rational coefficients, constant term first.
/// Trailing zeros are stripped, so the leading coefficient is nonzero unless
/// the polynomial is zero (degree -1).
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<Rational> coeffs);
  RealPolynomial(std::initializer_list<Rational> coeffs);

  /// Exact conversion: every finite double is a dyadic rational.
  static RealPolynomial from_doubles(std::span<const double> coeffs);
  static RealPolynomial constant(const Rational& c);
  static RealPolynomial monomial(std::size_t k, const Rational& c = 1);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  Rational coeff(std::size_t k) const;
  const Rational& leading() const;

  Rational eval(const Rational& t) const;
  double eval(double t) const;
  std::complex<double> eval(std::complex<double> z) const;
  std::complex<long double> eval(std::complex<long double> z) const;

  RealPolynomial derivative() const;
  /// q(t) -> q(c t)
  RealPolynomial rescaled(const Rational& c) const;
  std::vector<double> to_doubles() const;
  std::string to_string() const;

  RealPolynomial& operator+=(const RealPolynomial& rhs);
  RealPolynomial& operator-=(const RealPolynomial& rhs);
  RealPolynomial& operator*=(const Rational& c);

  friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) { return a += b; }
  friend RealPolynomial operator-(RealPolynomial a, const RealPolynomial& b) { return a -= b; }
  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);
  friend RealPolynomial operator*(RealPolynomial a, const Rational& c) { return a *= c; }
  friend RealPolynomial operator*(const Rational& c, RealPolynomial a) { return a *= c; }
  friend bool operator==(const RealPolynomial& a, const RealPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

/// Euclidean division: a = q*b + r with deg r < deg b.
std::pair<RealPolynomial, RealPolynomial> divmod(const RealPolynomial& a,
                                                 const RealPolynomial& b);
/// Monic greatest common divisor (zero if both are zero).
RealPolynomial gcd(const RealPolynomial& a, const RealPolynomial& b);

/// Yun's square-free decomposition: q = c * prod f_k^k with each f_k
/// square-free and pairwise coprime. Constant factor is dropped.
std::vector<std::pair<RealPolynomial, int>> squarefree_decomposition(
    const RealPolynomial& q);

/// True when q is certified square-free (modular test, exact fallback).
bool is_squarefree(const RealPolynomial& q);

/// Coefficientwise ordering on exact polynomials: all coefficients >= 0.
bool nonnegative_coeffs(const RealPolynomial& p);
/// p ≻ 0: all coefficients >= 0 and the constant term > 0.
bool strictly_dominates_zero(const RealPolynomial& p);

/// Exact test of p > 0 on [0,1] by Descartes' rule of signs with bisection:
/// true when certified, false when a point with p <= 0 was found, nullopt
/// when `max_depth` bisections did not separate the roots from the interval.
std::optional<bool> positive_on_unit_interval(const RealPolynomial& p, int max_depth = 48);

/// Quotient of two exact polynomials, analytic at the origin (den(0) != 0).
class RationalSeries {
 public:
  RationalSeries(RealPolynomial num, RealPolynomial den);
  static RationalSeries polynomial(RealPolynomial p);

  const RealPolynomial& num() const noexcept { return num_; }
  const RealPolynomial& den() const noexcept { return den_; }
  bool is_polynomial() const;

  /// Exact Taylor coefficients c_0..c_{count-1}.
  std::vector<Rational> taylor(std::size_t count) const;
  /// Value at t = 1 (den(1) must be nonzero).
  Rational at_one() const;
  double eval(double t) const;

  /// Cancels the exact gcd of numerator and denominator and normalizes
  /// den(0) = 1.
  RationalSeries reduced() const;

  friend RationalSeries operator*(const RationalSeries& a, const RationalSeries& b);

 private:
  RealPolynomial num_;
  RealPolynomial den_;
};

enum class RootClass { positive_real, negative_real, zero, nonreal_pair };
const char* to_string(RootClass c) noexcept;

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
  RootClass cls = RootClass::nonreal_pair;
};

/// Roots with multiplicity. Nonreal roots are listed as conjugate pairs
/// (both members present, equal multiplicity, upper member first).
struct ComplexRootSet {
  std::vector<Root> roots;
  double residual = 0.0;  // max |q(z)| / sum |q_k||z|^k

  int total_multiplicity() const;
  std::vector<Root> of_class(RootClass c) const;
  /// Nonreal roots with positive imaginary part.
  std::vector<Root> upper_half() const;
};

/// Threshold below which |Im z| is treated as zero.
inline double real_axis_threshold(std::complex<double> z) {
  return 1e-9 * (1.0 + std::abs(z));
}

/// All complex roots of a nonzero polynomial. Exact square-free splitting is
/// done first so each numerical solve only sees simple roots; these are
/// located with companion-matrix eigenvalues and polished by Newton steps in
/// extended precision.
ComplexRootSet poly_roots(const RealPolynomial& q, double tol = 1e-9);

}  // namespace opcalc
