#include "opcalc/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

// ---- GoodWeight ----------------------------------------------------------

GoodWeight::GoodWeight(Kind kind, std::vector<double> prefix, double eventual)
    : kind_(kind), prefix_(std::move(prefix)), eventual_(eventual) {}

std::shared_ptr<const GoodWeight> GoodWeight::unit() {
  static const auto w = std::shared_ptr<const GoodWeight>(new GoodWeight(Kind::unit, {}, 1.0));
  return w;
}

std::shared_ptr<const GoodWeight> GoodWeight::explicit_weights(std::vector<double> prefix,
                                                               double eventual) {
  for (double w : prefix)
    if (!(w >= 1.0) || !std::isfinite(w)) fail(ErrorKind::input, "weights must be finite and >= 1");
  if (!(eventual >= 1.0) || !std::isfinite(eventual))
    fail(ErrorKind::input, "eventual weight must be finite and >= 1");
  return std::shared_ptr<const GoodWeight>(
      new GoodWeight(Kind::explicit_prefix, std::move(prefix), eventual));
}

std::shared_ptr<const GoodWeight> GoodWeight::operator_induced(std::span<const double> power_norms) {
  if (power_norms.size() < 2) fail(ErrorKind::input, "need at least ||T^0|| and ||T^1||");
  std::vector<double> w;
  w.reserve(power_norms.size());
  for (double n : power_norms) w.push_back(1.0 + n * n);
  return std::shared_ptr<const GoodWeight>(new GoodWeight(Kind::operator_induced, std::move(w), 0.0));
}

double GoodWeight::operator()(std::size_t n) const {
  switch (kind_) {
    case Kind::unit:
      return 1.0;
    case Kind::explicit_prefix:
      return n < prefix_.size() ? prefix_[n] : eventual_;
    case Kind::operator_induced: {
      if (n < prefix_.size()) return prefix_[n];
      const std::size_t L = prefix_.size() - 1;
      const std::size_t q = n / L;
      const std::size_t r = n % L;
      return std::pow(prefix_[L], static_cast<double>(q)) * (r == 0 ? 1.0 : prefix_[r]);
    }
  }
  return 1.0;
}

WeightEnvelope GoodWeight::envelope() const {
  switch (kind_) {
    case Kind::unit:
      return {1.0, 1.0};
    case Kind::explicit_prefix: {
      double c = eventual_;
      for (double w : prefix_) c = std::max(c, w);
      return {c, 1.0};
    }
    case Kind::operator_induced: {
      const std::size_t L = prefix_.size() - 1;
      const double g = std::pow(prefix_[L], 1.0 / static_cast<double>(L));
      double c = 1.0;
      for (std::size_t r = 0; r <= L; ++r)
        c = std::max(c, prefix_[r] / std::pow(g, static_cast<double>(r)));
      return {c, g};
    }
  }
  return {1.0, 1.0};
}

bool GoodWeight::check_gw1(std::size_t range) const {
  for (std::size_t n = 0; n <= range; ++n)
    if (!((*this)(n) >= 1.0)) return false;
  return true;
}

bool GoodWeight::check_gw2(std::size_t range) const {
  for (std::size_t n = 0; n <= range; ++n)
    for (std::size_t m = 0; n + m <= range; ++m)
      if ((*this)(n) * (*this)(m) < (*this)(n + m) * (1.0 - 1e-12)) return false;
  return true;
}

bool GoodWeight::check_gw3(std::size_t range, double delta) const {
  const std::size_t start = std::max<std::size_t>(1, range - range / 4);
  for (std::size_t n = start; n <= range; ++n)
    if (std::log((*this)(n)) > static_cast<double>(n) * std::log1p(delta)) return false;
  return true;
}

bool GoodWeight::same_as(const GoodWeight& other) const {
  if (this == &other) return true;
  return kind_ == other.kind_ && prefix_ == other.prefix_ && eventual_ == other.eventual_;
}

std::string GoodWeight::describe() const {
  switch (kind_) {
    case Kind::unit: return "unit";
    case Kind::explicit_prefix: return "explicit";
    case Kind::operator_induced: return "operator-induced";
  }
  return "unknown";
}

// ---- TruncatedSeries -----------------------------------------------------

TruncatedSeries::TruncatedSeries() : coeffs_{0.0}, weight_(GoodWeight::unit()) {}

TruncatedSeries::TruncatedSeries(std::vector<double> coeffs, double tail_bound, WeightRef weight)
    : coeffs_(std::move(coeffs)), tail_(tail_bound), weight_(std::move(weight)) {
  if (!weight_) weight_ = GoodWeight::unit();
  if (tail_ == 0.0)
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  for (double c : coeffs_)
    if (!std::isfinite(c)) fail(ErrorKind::input, "series coefficient is not finite");
  if (!(tail_ >= 0.0) || !std::isfinite(tail_))
    fail(ErrorKind::input, "tail bound must be finite and nonnegative");
}

TruncatedSeries TruncatedSeries::constant(double c, WeightRef weight) {
  return TruncatedSeries({c}, 0.0, std::move(weight));
}

TruncatedSeries TruncatedSeries::from_polynomial(const RealPolynomial& p, WeightRef weight) {
  auto c = p.to_doubles();
  if (c.empty()) c.push_back(0.0);
  return TruncatedSeries(std::move(c), 0.0, std::move(weight));
}

double TruncatedSeries::eval(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::complex<double> TruncatedSeries::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double TruncatedSeries::sum() const {
  long double s = 0.0L;
  for (double c : coeffs_) s += c;
  return static_cast<double>(s);
}

TruncatedSeries TruncatedSeries::scaled(double c) const {
  std::vector<double> out(coeffs_);
  for (double& x : out) x *= c;
  return TruncatedSeries(std::move(out), tail_ * std::abs(c), weight_);
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
  if (order + 1 >= coeffs_.size()) return *this;
  std::vector<double> out(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order + 1));
  double extra = 0.0;
  for (std::size_t n = order + 1; n < coeffs_.size(); ++n) extra += std::abs(coeffs_[n]) * (*weight_)(n);
  return TruncatedSeries(std::move(out), tail_ + extra, weight_);
}

RealPolynomial TruncatedSeries::to_polynomial() const {
  if (tail_ != 0.0) fail(ErrorKind::input, "series with a tail is not a polynomial");
  return RealPolynomial::from_doubles(coeffs_);
}

namespace {

void require_same_weight(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!a.weight().same_as(b.weight()))
    fail(ErrorKind::input, "series live in different weighted algebras (" + a.weight().describe() +
                               " vs " + b.weight().describe() + ")");
}

TruncatedSeries add_scaled(const TruncatedSeries& a, const TruncatedSeries& b, double sb) {
  require_same_weight(a, b);
  const std::size_t len = std::max(a.size(), b.size());
  std::vector<double> out(len);
  for (std::size_t n = 0; n < len; ++n) out[n] = a[n] + sb * b[n];
  return TruncatedSeries(std::move(out), a.tail_bound() + std::abs(sb) * b.tail_bound(),
                         a.weight_ref());
}

}  // namespace

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
  return add_scaled(a, b, 1.0);
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
  return add_scaled(a, b, -1.0);
}

// ---- products and norms --------------------------------------------------

double wiener_norm(const TruncatedSeries& f) {
  const auto& w = f.weight();
  long double s = 0.0L;
  const auto c = f.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) s += std::abs(c[n]) * w(n);
  return static_cast<double>(s) + f.tail_bound();
}

TruncatedSeries series_mul(const TruncatedSeries& f, const TruncatedSeries& g,
                           std::optional<std::size_t> max_order) {
  require_same_weight(f, g);
  // Indices past the shorter tailed operand also receive contributions from
  // the tails; those are covered by the cross terms of the tail bound, so the
  // whole prefix product is kept unless a cap is requested.
  const std::size_t full = f.size() + g.size() - 1;
  const std::size_t len = max_order ? std::min(full, *max_order + 1) : full;

  const auto fc = f.coeffs();
  const auto gc = g.coeffs();
  const auto& w = f.weight();
  std::vector<double> out(len);
  double dropped = 0.0;
  for (std::size_t n = 0; n < full; ++n) {
    const std::size_t lo = n >= gc.size() ? n - gc.size() + 1 : 0;
    const std::size_t hi = std::min(n, fc.size() - 1);
    long double s = 0.0L;
    for (std::size_t k = lo; k <= hi; ++k) s += static_cast<long double>(fc[k]) * gc[n - k];
    if (n < len)
      out[n] = static_cast<double>(s);
    else
      dropped += std::abs(static_cast<double>(s)) * w(n);
  }

  double nf = 0.0, ng = 0.0;
  for (std::size_t n = 0; n < fc.size(); ++n) nf += std::abs(fc[n]) * w(n);
  for (std::size_t n = 0; n < gc.size(); ++n) ng += std::abs(gc[n]) * w(n);
  const double tail = dropped + nf * g.tail_bound() + f.tail_bound() * ng +
                      f.tail_bound() * g.tail_bound();
  return TruncatedSeries(std::move(out), tail, f.weight_ref());
}

const char* to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::strict: return "strict";
    case Dominance::weak: return "weak";
    case Dominance::refuted: return "refuted";
    case Dominance::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DominanceVerdict dominance_check(const TruncatedSeries& f, const TruncatedSeries& g, double tol) {
  require_same_weight(f, g);
  DominanceVerdict v;
  const std::size_t len = std::max(f.size(), g.size());
  v.margin = std::numeric_limits<double>::infinity();

  if (f.is_polynomial() && g.is_polynomial()) {
    // differences formed exactly; tol = 0 gives the exact ordering
    v.exact = true;
    const Rational lo(-tol), hi(tol);
    Rational d0;
    for (std::size_t n = 0; n < len; ++n) {
      const Rational d = Rational(f[n]) - Rational(g[n]);
      v.margin = std::min(v.margin, d.get_d());
      if (n == 0) d0 = d;
      if (d < lo && !v.witness_index) v.witness_index = n;
    }
    if (v.witness_index)
      v.relation = Dominance::refuted;
    else
      v.relation = d0 > hi ? Dominance::strict : Dominance::weak;
    return v;
  }

  // A stored difference d_n pins the true one to within tail / w_n.
  const double tail = f.tail_bound() + g.tail_bound();
  const auto& w = f.weight();
  bool doubtful = false;
  for (std::size_t n = 0; n < len; ++n) {
    const double d = f[n] - g[n];
    v.margin = std::min(v.margin, d);
    if (d < -tol - tail / w(n) && !v.witness_index) v.witness_index = n;
    if (d < -tol) doubtful = true;
  }
  if (v.witness_index) {
    v.relation = Dominance::refuted;
  } else if (tail > tol || doubtful) {
    v.relation = Dominance::inconclusive;
  } else {
    v.relation = (f[0] - g[0] > tol) ? Dominance::strict : Dominance::weak;
  }
  return v;
}

// ---- inversion -----------------------------------------------------------

namespace {

// Taylor coefficients of 1/h on 0..order from the stored prefix of h.
std::vector<double> reciprocal_prefix(const TruncatedSeries& h, std::size_t order) {
  const auto hc = h.coeffs();
  std::vector<long double> v(order + 1, 0.0L);
  const long double c = hc[0];
  v[0] = 1.0L / c;
  for (std::size_t n = 1; n <= order; ++n) {
    long double s = 0.0L;
    const std::size_t kmax = std::min(n, hc.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) s += static_cast<long double>(hc[k]) * v[n - k];
    v[n] = -s / c;
  }
  return {v.begin(), v.end()};
}

}  // namespace

double inverse_residual(const TruncatedSeries& h, const TruncatedSeries& v) {
  TruncatedSeries hv = series_mul(h, v);
  return wiener_norm(hv - TruncatedSeries::constant(1.0, h.weight_ref()));
}

TruncatedSeries series_invert_neumann(const TruncatedSeries& h, double tol,
                                      std::optional<std::size_t> order) {
  const double c = h[0];
  if (c == 0.0) fail(ErrorKind::precondition, "not invertible by the Neumann series: h(0) = 0");
  const auto& w = h.weight();
  double a_norm = h.tail_bound() / std::abs(c);
  for (std::size_t n = 1; n < h.size(); ++n) a_norm += std::abs(h[n] / c) * w(n);
  if (!(a_norm < 1.0)) {
    std::ostringstream os;
    os << "not invertible by the Neumann series: ||1 - h/h(0)|| = " << a_norm << " >= 1";
    fail(ErrorKind::precondition, os.str());
  }

  // 1/h = (1/c) sum a^k, so ||1/h|| <= 1/(|c|(1 - ||a||)); the distance from
  // a prefix v to 1/h is then at most ||hv - 1|| * ||1/h||.
  const double inv_norm = 1.0 / (std::abs(c) * (1.0 - a_norm));
  const double target = tol * std::min(1.0, 1.0 / inv_norm);
  std::size_t n = order.value_or(std::max<std::size_t>(h.order(), kDefaultOrder));
  const std::size_t cap = order ? n : std::size_t{1} << 16;
  double prev = std::numeric_limits<double>::infinity();

  for (;;) {
    TruncatedSeries v(reciprocal_prefix(h, n), 0.0, h.weight_ref());
    const double e = inverse_residual(h, v);
    const bool done = e <= target || n >= cap || e > 0.5 * prev;
    if (done) {
      if (e > tol)
        fail(ErrorKind::numerical, "Neumann inverse residual " + std::to_string(e) +
                                       " above tolerance at order " + std::to_string(n));
      return TruncatedSeries(std::vector<double>(v.coeffs().begin(), v.coeffs().end()),
                             e * inv_norm, h.weight_ref());
    }
    prev = e;
    n = std::min(cap, 2 * n);
  }
}

// ---- bounds on [0,1] and on the circle -----------------------------------

namespace {

double derivative_l1(const TruncatedSeries& f) {
  long double s = 0.0L;
  for (std::size_t n = 1; n < f.size(); ++n) s += static_cast<long double>(n) * std::abs(f[n]);
  return static_cast<double>(s);
}

double second_derivative_l1(const TruncatedSeries& f) {
  long double s = 0.0L;
  for (std::size_t n = 2; n < f.size(); ++n)
    s += static_cast<long double>(n) * static_cast<long double>(n - 1) * std::abs(f[n]);
  return static_cast<double>(s);
}

}  // namespace

IntervalBound min_on_unit_interval(const TruncatedSeries& f, std::size_t grid) {
  const double lip = derivative_l1(f);
  const double curv = second_derivative_l1(f);
  double mass = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) mass += std::abs(f[n]);
  IntervalBound b;
  for (std::size_t m = std::max<std::size_t>(grid, 1);; m *= 2) {
    b.grid = m;
    b.sampled_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= m; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(m);
      const double y = f.eval(t);
      if (y < b.sampled_min) {
        b.sampled_min = y;
        b.argmin = t;
      }
    }
    // nearest node, or the chord between neighbouring nodes
    const double h = 1.0 / static_cast<double>(m);
    b.slack = std::min(lip * h / 2.0, curv * h * h / 8.0) + 4.0 * std::numeric_limits<double>::epsilon() * mass *
                                                                static_cast<double>(f.size());
    b.lower = b.sampled_min - b.slack - f.tail_bound();
    if (b.lower > 0.0 || b.sampled_min <= 0.0 || m >= (std::size_t{1} << 16)) return b;
  }
}

IntervalBound min_modulus_on_circle(const TruncatedSeries& f, std::size_t grid) {
  const double lip = derivative_l1(f);
  IntervalBound b;
  for (std::size_t m = std::max<std::size_t>(grid, 4);; m *= 2) {
    b.grid = m;
    b.sampled_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
      const double y = std::abs(f.eval(std::polar(1.0, th)));
      if (y < b.sampled_min) {
        b.sampled_min = y;
        b.argmin = th;
      }
    }
    b.slack = lip * std::numbers::pi / static_cast<double>(m);
    b.lower = b.sampled_min - b.slack - f.tail_bound();
    if (b.lower > 0.0 || b.sampled_min <= 1e-12 || m >= (std::size_t{1} << 16)) return b;
  }
}

// ---- rational expansions -------------------------------------------------

namespace {

// sum_{m >= m0} binom(m + J - 1, J - 1) x^m for 0 <= x < 1.
double negative_binomial_tail(std::size_t m0, std::size_t J, double x) {
  if (J == 0) return m0 == 0 ? 1.0 : 0.0;
  if (x == 0.0) return m0 == 0 ? 1.0 : 0.0;
  // term(m) in log space to avoid overflow of the binomial
  auto log_term = [&](std::size_t m) {
    return std::lgamma(static_cast<double>(m + J)) - std::lgamma(static_cast<double>(m + 1)) -
           std::lgamma(static_cast<double>(J)) + static_cast<double>(m) * std::log(x);
  };
  double sum = 0.0;
  for (std::size_t m = m0;; ++m) {
    const double term = std::exp(log_term(m));
    const double ratio = x * static_cast<double>(m + J) / static_cast<double>(m + 1);
    // once the term ratio is below 1 it only decreases, so the rest is
    // dominated by a geometric series
    if (ratio < 1.0 && (ratio - x <= 0.25 * (1.0 - x) || term == 0.0))
      return sum + term / (1.0 - ratio);
    sum += term;
  }
}

}  // namespace

TruncatedSeries expand_rational(std::span<const double> num, double d0,
                                std::span<const std::complex<double>> den_roots, std::size_t order,
                                WeightRef weight) {
  if (!weight) weight = GoodWeight::unit();
  if (d0 == 0.0) fail(ErrorKind::input, "denominator vanishes at the origin");
  double rho = std::numeric_limits<double>::infinity();
  for (auto r : den_roots) rho = std::min(rho, std::abs(r));
  const auto env = weight->envelope();
  if (!den_roots.empty() && !(env.growth < rho))
    fail(ErrorKind::numerical, "denominator root too close to the disc for a tail certificate");

  // Denominator polynomial d0 * prod (1 - t/r), expanded in complex arithmetic.
  std::vector<std::complex<long double>> den{static_cast<long double>(d0)};
  for (auto r : den_roots) {
    const std::complex<long double> inv = 1.0L / std::complex<long double>(r.real(), r.imag());
    std::vector<std::complex<long double>> next(den.size() + 1, 0.0L);
    for (std::size_t k = 0; k < den.size(); ++k) {
      next[k] += den[k];
      next[k + 1] -= den[k] * inv;
    }
    den = std::move(next);
  }
  std::vector<long double> c(order + 1, 0.0L);
  for (std::size_t n = 0; n <= order; ++n) {
    long double s = n < num.size() ? num[n] : 0.0L;
    for (std::size_t k = 1; k <= std::min(n, den.size() - 1); ++k) s -= den[k].real() * c[n - k];
    c[n] = s / den[0].real();
  }

  double tail = 0.0;
  if (!den_roots.empty()) {
    const double x = env.growth / rho;
    for (std::size_t k = 0; k < num.size(); ++k) {
      if (num[k] == 0.0) continue;
      const std::size_t m0 = k > order ? 0 : order + 1 - k;
      tail += std::abs(num[k]) * env.scale * std::pow(env.growth, static_cast<double>(k)) *
              negative_binomial_tail(m0, den_roots.size(), x);
    }
    tail /= std::abs(d0);
  } else {
    for (std::size_t k = order + 1; k < num.size(); ++k) tail += std::abs(num[k] / d0) * (*weight)(k);
  }
  return TruncatedSeries(std::vector<double>(c.begin(), c.end()), tail, weight);
}

TruncatedSeries expand_rational(const RationalSeries& r, std::size_t order, WeightRef weight) {
  if (!weight) weight = GoodWeight::unit();
  const RationalSeries red = r.reduced();
  std::vector<std::complex<double>> roots;
  if (red.den().degree() > 0) {
    for (const auto& root : poly_roots(red.den()).roots)
      for (int m = 0; m < root.multiplicity; ++m) roots.push_back(root.value);
  }
  // coefficients exactly, tail from the majorant
  const auto exact = red.taylor(order + 1);
  std::vector<double> coeffs;
  coeffs.reserve(exact.size());
  for (const auto& q : exact) coeffs.push_back(q.get_d());
  const auto num = red.num().to_doubles();
  const double d0 = red.den().coeff(0).get_d();
  // Leading coefficients: den = den(0) prod (1 - t/r_j).
  TruncatedSeries bound = expand_rational(num, d0, roots, order, weight);
  return TruncatedSeries(std::move(coeffs), bound.tail_bound(), weight);
}

}  // namespace opcalc
