#pragma once

// Truncated power series in a weighted Wiener algebra A_w: a finite
// coefficient prefix plus a certified bound on the weighted l1 norm of
// everything that was dropped.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opcalc/polynomial.hpp"

namespace opcalc {

inline constexpr std::size_t kDefaultOrder = 256;

/// Geometric envelope w_n <= scale * growth^n, valid for every n.
struct WeightEnvelope {
  double scale = 1.0;
  double growth = 1.0;
};

class GoodWeight {
 public:
  enum class Kind { unit, explicit_prefix, operator_induced };

  static std::shared_ptr<const GoodWeight> unit();
  /// w_n = prefix[n] for n < prefix.size(), w_n = eventual afterwards.
  static std::shared_ptr<const GoodWeight> explicit_weights(std::vector<double> prefix,
                                                            double eventual);
  /// w_n = 1 + ||T^n||^2 from cached power norms; beyond the cache the
  /// submultiplicative envelope w_{qL+r} <= w_L^q w_r is used.
  static std::shared_ptr<const GoodWeight> operator_induced(std::span<const double> power_norms);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& prefix() const noexcept { return prefix_; }
  double eventual() const noexcept { return eventual_; }

  double operator()(std::size_t n) const;
  WeightEnvelope envelope() const;

  bool check_gw1(std::size_t range) const;
  bool check_gw2(std::size_t range) const;
  /// w_n^{1/n} <= 1 + delta on the last quarter of [1, range].
  bool check_gw3(std::size_t range, double delta) const;

  bool same_as(const GoodWeight& other) const;
  std::string describe() const;

 private:
  GoodWeight(Kind kind, std::vector<double> prefix, double eventual);
  Kind kind_;
  std::vector<double> prefix_;
  double eventual_;
};

using WeightRef = std::shared_ptr<const GoodWeight>;

class TruncatedSeries {
 public:
  TruncatedSeries();
  explicit TruncatedSeries(std::vector<double> coeffs, double tail_bound = 0.0,
                           WeightRef weight = GoodWeight::unit());

  static TruncatedSeries constant(double c, WeightRef weight = GoodWeight::unit());
  static TruncatedSeries from_polynomial(const RealPolynomial& p,
                                         WeightRef weight = GoodWeight::unit());

  std::size_t size() const noexcept { return coeffs_.size(); }
  /// Index of the last stored coefficient.
  std::size_t order() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : 0.0; }
  double tail_bound() const noexcept { return tail_; }
  const GoodWeight& weight() const noexcept { return *weight_; }
  const WeightRef& weight_ref() const noexcept { return weight_; }
  bool is_polynomial() const noexcept { return tail_ == 0.0; }

  /// Evaluation of the stored prefix (the tail adds at most tail_bound on the
  /// closed disc).
  double eval(double t) const;
  std::complex<double> eval(std::complex<double> z) const;
  /// Stored prefix summed at t = 1.
  double sum() const;

  TruncatedSeries scaled(double c) const;
  /// Keeps coefficients 0..order, moving the rest into the tail bound.
  TruncatedSeries truncated(std::size_t order) const;
  /// Exact rational polynomial of the stored prefix; tail must be zero.
  RealPolynomial to_polynomial() const;

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);

 private:
  std::vector<double> coeffs_;
  double tail_ = 0.0;
  WeightRef weight_;
};

/// Cauchy product of the stored prefixes. Coefficients are exact on indices
/// below the shorter tailed operand; the tail bound covers the cross terms
/// through submultiplicativity of the weighted norm. `max_order` caps the
/// stored length (the dropped mass goes to the tail).
TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g,
                           std::optional<std::size_t> max_order = std::nullopt);

/// sum_{n<=N} |f_n| w_n + tail_bound, an upper bound for ||f||_{A_w}.
double wiener_norm(const TruncatedSeries& f);

enum class Dominance { strict, weak, refuted, inconclusive };
const char* to_string(Dominance d) noexcept;

struct DominanceVerdict {
  Dominance relation = Dominance::inconclusive;
  std::optional<std::size_t> witness_index;
  double margin = 0.0;  // min_n (f_n - g_n) over stored indices
  bool exact = false;   // decided in rational arithmetic
};

/// Coefficientwise comparison f ≽ g / f ≻ g. With zero tails the
/// differences are formed exactly in rationals and compared against ±tol, so
/// tol = 0 gives the exact ordering.
DominanceVerdict dominance_check(const TruncatedSeries& f, const TruncatedSeries& g, double tol);

/// v with ||h v - 1|| <= tol via the geometric series of h = c(1 - a),
/// ||a|| < 1. Stored length defaults to max(h.order(), kDefaultOrder).
TruncatedSeries series_invert_neumann(const TruncatedSeries& h, double tol,
                                      std::optional<std::size_t> order = std::nullopt);

/// Certified upper bound for ||h v - 1||_{A_w} computed through series_mul.
double inverse_residual(const TruncatedSeries& h, const TruncatedSeries& v);

/// Lower bound for min_{t in [0,1]} f(t) from a uniform grid, a derivative
/// slack and the tail.
struct IntervalBound {
  double sampled_min = 0.0;
  double argmin = 0.0;
  double slack = 0.0;
  double lower = 0.0;
  std::size_t grid = 0;
};
IntervalBound min_on_unit_interval(const TruncatedSeries& f, std::size_t grid = 1024);

/// Lower bound for min_{|z|=1} |f(z)| from a boundary grid.
IntervalBound min_modulus_on_circle(const TruncatedSeries& f, std::size_t grid = 4096);

/// Taylor expansion of num(t) / (d0 * prod_j (1 - t/r_j)) with |r_j| > 1,
/// truncated at `order` with a tail bound from the coefficientwise majorant
/// prod_j 1/(1 - t/|r_j|).
TruncatedSeries expand_rational(std::span<const double> num, double d0,
                                std::span<const std::complex<double>> den_roots, std::size_t order,
                                WeightRef weight = GoodWeight::unit());

/// Same, with the denominator given as exact polynomial; its roots are located
/// numerically for the tail certificate.
TruncatedSeries expand_rational(const RationalSeries& r, std::size_t order,
                                WeightRef weight = GoodWeight::unit());

}  // namespace opcalc
