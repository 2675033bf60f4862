#include "opcalc/seq_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

// ---- EventualSeq ---------------------------------------------------------

EventualSeq::EventualSeq(std::vector<Rational> prefix, Rational eventual)
    : prefix_(std::move(prefix)), eventual_(std::move(eventual)) {
  canonicalize();
}

EventualSeq EventualSeq::from_doubles(std::span<const double> prefix, double eventual) {
  std::vector<Rational> p;
  p.reserve(prefix.size());
  for (const double v : prefix) {
    if (!std::isfinite(v)) fail(ErrorKind::input, "sequence entries must be finite");
    p.emplace_back(v);
  }
  if (!std::isfinite(eventual)) fail(ErrorKind::input, "sequence entries must be finite");
  return EventualSeq(std::move(p), Rational(eventual));
}

EventualSeq EventualSeq::unit(std::size_t k) {
  std::vector<Rational> p(k + 1, Rational(0));
  p[k] = 1;
  return EventualSeq(std::move(p), 0);
}

void EventualSeq::canonicalize() {
  for (auto& x : prefix_) x.canonicalize();
  eventual_.canonicalize();
  while (!prefix_.empty() && prefix_.back() == eventual_) prefix_.pop_back();
}

std::vector<double> EventualSeq::to_doubles(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = (*this)[n].get_d();
  return out;
}

Rational EventualSeq::min_value() const {
  Rational m = eventual_;
  for (const auto& v : prefix_) m = std::min(m, v);
  return m;
}

Rational EventualSeq::sup_abs() const {
  Rational m = abs(eventual_);
  for (const auto& v : prefix_) m = std::max(m, Rational(abs(v)));
  return m;
}

std::string EventualSeq::to_string() const {
  std::ostringstream os;
  os << "(";
  for (const auto& v : prefix_) os << v.get_str() << ", ";
  os << eventual_.get_str() << ", ...)";
  return os.str();
}

EventualSeq operator+(const EventualSeq& a, const EventualSeq& b) {
  const std::size_t n = std::max(a.prefix_.size(), b.prefix_.size());
  std::vector<Rational> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = a[i] + b[i];
  return EventualSeq(std::move(p), a.eventual_ + b.eventual_);
}

EventualSeq operator-(const EventualSeq& a, const EventualSeq& b) {
  return a + Rational(-1) * b;
}

EventualSeq operator*(const Rational& c, const EventualSeq& a) {
  std::vector<Rational> p(a.prefix_);
  for (auto& v : p) v *= c;
  return EventualSeq(std::move(p), c * a.eventual_);
}

EventualSeq nabla(const EventualSeq& a) {
  const auto& p = a.prefix();
  if (p.empty()) return a;
  return EventualSeq(std::vector<Rational>(p.begin() + 1, p.end()), a.eventual());
}

EventualSeq nabla_minus(const EventualSeq& a) {
  std::vector<Rational> p;
  p.reserve(a.prefix().size() + 1);
  p.emplace_back(0);
  p.insert(p.end(), a.prefix().begin(), a.prefix().end());
  return EventualSeq(std::move(p), a.eventual());
}

// ---- f(∇) ----------------------------------------------------------------

ShiftResult shift_apply(const TruncatedSeries& f, const EventualSeq& a, ShiftDirection dir) {
  std::vector<Rational> fc;
  fc.reserve(f.size());
  Rational fsum = 0;
  for (const double v : f.coeffs()) {
    fc.emplace_back(v);
    fsum += fc.back();
  }
  const std::size_t F = fc.size();
  const std::size_t P = a.settle_index();
  ShiftResult r;
  r.error_bound = f.tail_bound() * a.sup_abs().get_d();
  if (dir == ShiftDirection::backward) {
    std::vector<Rational> out(P);
    for (std::size_t n = 0; n < P; ++n) {
      Rational s = 0;
      for (std::size_t j = 0; j < F; ++j) s += fc[j] * a[n + j];
      out[n] = s;
    }
    r.seq = EventualSeq(std::move(out), a.eventual() * fsum);
  } else {
    const std::size_t len = F == 0 ? P : P + F - 1;
    std::vector<Rational> out(len);
    for (std::size_t n = 0; n < len; ++n) {
      Rational s = 0;
      for (std::size_t j = 0; j < F && j <= n; ++j) s += fc[j] * a[n - j];
      out[n] = s;
    }
    r.seq = EventualSeq(std::move(out), a.eventual() * fsum);
  }
  return r;
}

EventualSeq shift_apply_exact(const RealPolynomial& f, const EventualSeq& a) {
  return shift_apply_exact(RationalSeries::polynomial(f), a);
}

EventualSeq shift_apply_exact(const RationalSeries& f_in, const EventualSeq& a) {
  const RationalSeries f = f_in.reduced();
  const std::size_t P = a.settle_index();
  const Rational& c = a.eventual();
  Rational f1 = 0;
  if (c != 0) {
    if (!f.is_polynomial()) {
      const ComplexRootSet rs = poly_roots(f.den());
      for (const auto& r : rs.roots)
        if (std::abs(r.value) <= 1.0 + 1e-12)
          fail(ErrorKind::summability, "f(∇) on a nonzero constant needs summable coefficients");
    }
    f1 = f.at_one();
  }
  const std::size_t need =
      f.is_polynomial() ? std::max<std::size_t>(P, f.num().coeffs().size()) : P;
  const std::vector<Rational> fc = f.taylor(std::max<std::size_t>(need, 1));
  std::vector<Rational> out(P);
  for (std::size_t n = 0; n < P; ++n) {
    Rational s = 0, partial = 0;
    for (std::size_t j = 0; j < P - n; ++j) {
      s += fc[j] * a[n + j];
      partial += fc[j];
    }
    if (c != 0) s += c * (f1 - partial);
    out[n] = s;
  }
  return EventualSeq(std::move(out), c * f1);
}

std::vector<double> apply_backward(std::span<const double> f, std::span<const double> x) {
  if (f.empty() || x.size() < f.size()) return {};
  std::vector<double> y(x.size() - f.size() + 1);
  for (std::size_t n = 0; n < y.size(); ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * x[n + j];
    y[n] = s;
  }
  return y;
}

namespace {

void require_normalized(const TruncatedSeries& f) {
  if (std::abs(wiener_norm(f) - 1.0) > 1e-9)
    fail(ErrorKind::input, "lim* needs f normalized to norm 1");
}

}  // namespace

Rational lim_star(const TruncatedSeries& f, const EventualSeq& x) {
  require_normalized(f);
  Rational s = 0;
  for (const double v : f.coeffs()) s += Rational(v);
  return x.eventual() * s;
}

LimStarSample lim_star(const TruncatedSeries& f, std::span<const double> x, double tol) {
  require_normalized(f);
  const std::vector<double> y = apply_backward(f.coeffs(), x);
  LimStarSample r;
  if (y.empty()) return r;
  const std::size_t w = std::max<std::size_t>(1, y.size() / 4);
  const auto [lo, hi] = std::minmax_element(y.end() - static_cast<std::ptrdiff_t>(w), y.end());
  r.oscillation = *hi - *lo;
  r.value = y.back();
  r.exists = r.oscillation <= tol * std::max(1.0, std::abs(r.value));
  return r;
}

// ---- weighted shifts -----------------------------------------------------

double ShiftSpec::weight(std::size_t n) const {
  if (n == 0) fail(ErrorKind::input, "weights start at n = 1");
  return std::sqrt(Rational(Lambda[n] / Lambda[n - 1]).get_d());
}

Rational ShiftSpec::orbit_norm_sq(std::size_t n, std::size_t j) const {
  return Lambda[n + j] / Lambda[j];
}

Mat ShiftSpec::truncated_matrix(std::size_t dim) const {
  const auto d = static_cast<Eigen::Index>(dim);
  Mat m = Mat::Zero(d, d);
  for (Eigen::Index n = 0; n + 1 < d; ++n) m(n + 1, n) = weight(static_cast<std::size_t>(n) + 1);
  return m;
}

ShiftSpec make_shift(EventualSeq Lambda) {
  if (!(Lambda.min_value() > 0)) fail(ErrorKind::input, "Lambda must be positive");
  return ShiftSpec{std::move(Lambda)};
}

RationalSeries tilde_of(const TruncatedSeries& alpha) {
  if (!alpha.is_polynomial()) fail(ErrorKind::input, "alpha must be a polynomial here");
  const RealPolynomial p = alpha.to_polynomial();
  const auto [q, r] = divmod(p, RealPolynomial{1, -1});
  if (!r.is_zero()) fail(ErrorKind::input, "alpha(1) is not zero");
  return RationalSeries::polynomial(q);
}

ShiftMembership shift_membership(const ShiftSpec& s, const RationalSeries& alpha_tilde) {
  const EventualSeq psi = s.Lambda - nabla(s.Lambda);
  ShiftMembership out;
  out.values = shift_apply_exact(alpha_tilde, psi);
  MembershipCertificate& c = out.certificate;
  c.spectral_ok = true;
  c.summability_ok = true;
  c.truncation_N = out.values.settle_index();
  c.spectral_radius = 1.0;
  c.min_eigenvalue = out.values.min_value().get_d();
  bool strict = out.values.eventual() > 0;
  for (std::size_t n = 0; n < out.values.prefix().size(); ++n) {
    const Rational& v = out.values.prefix()[n];
    if (v <= 0) strict = false;
    if (v < 0 && !out.witness) out.witness = n;
  }
  if (!out.witness && out.values.eventual() < 0) out.witness = out.values.settle_index();
  c.strict = strict;
  if (out.witness) {
    c.verdict = MembershipVerdict::refuted;
    c.failed_condition = "alpha(nabla)Lambda < 0 at index " + std::to_string(*out.witness);
  } else {
    c.verdict = MembershipVerdict::member;
  }
  return out;
}

ShiftMembership shift_membership(const ShiftSpec& s, const TruncatedSeries& alpha) {
  if (!check_admissible(alpha, false).admissible) fail(ErrorKind::input, "alpha is not admissible");
  return shift_membership(s, tilde_of(alpha));
}

std::vector<Rational> nabla_solve(const RealPolynomial& q, std::span<const Rational> b) {
  if (q.coeff(0) == 0) fail(ErrorKind::input, "q(0) must be nonzero");
  const auto& qc = q.coeffs();
  std::vector<Rational> psi(b.size(), Rational(0));
  for (std::size_t n = b.size(); n-- > 0;) {
    Rational s = b[n];
    for (std::size_t j = 1; j < qc.size() && n + j < psi.size(); ++j) s -= qc[j] * psi[n + j];
    psi[n] = s / qc[0];
  }
  return psi;
}

EventualSeq lambda_from_increments(std::span<const Rational> psi) {
  std::vector<Rational> suffix(psi.size());
  Rational s = 0, lowest = 0;
  for (std::size_t n = psi.size(); n-- > 0;) {
    s += psi[n];
    suffix[n] = s;
    lowest = std::min(lowest, s);
  }
  const Rational inf = std::max(Rational(1), Rational(1 - lowest));
  for (auto& v : suffix) v += inf;
  return EventualSeq(std::move(suffix), inf);
}

// ---- inclusion -----------------------------------------------------------

const char* to_string(InclusionStatus s) noexcept {
  switch (s) {
    case InclusionStatus::included: return "included";
    case InclusionStatus::refuted: return "refuted";
    case InclusionStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

RationalSeries gamma_of(const RationalSeries& at, const RationalSeries& tt) {
  if (at.num().coeff(0) == 0) fail(ErrorKind::input, "alpha_tilde(0) = 0");
  return RationalSeries(tt.num() * at.den(), tt.den() * at.num()).reduced();
}

bool denominator_inverse_nonnegative(const RealPolynomial& d) {
  if (!(d.coeff(0) > 0)) return false;
  for (std::size_t k = 1; k < d.coeffs().size(); ++k)
    if (d.coeffs()[k] > 0) return false;
  return true;
}

}  // namespace

ShiftSpec counterexample_shift(const RationalSeries& alpha_tilde, const RationalSeries& tau_tilde,
                               std::size_t ell) {
  const RationalSeries gamma = gamma_of(alpha_tilde, tau_tilde);
  const std::vector<Rational> g = gamma.taylor(ell + 1);
  if (!(g[ell] < 0)) fail(ErrorKind::input, "gamma_ell is not negative");
  std::vector<Rational> Gamma(ell + 1);
  for (std::size_t n = 0; n <= ell; ++n) Gamma[n] = g[ell - n];

  // Ψ = τ̃^{-1}(∇)Γ = den(∇)[num^{-1}(∇)Γ], all finitely supported
  const std::vector<Rational> x = nabla_solve(tau_tilde.num(), Gamma);
  const EventualSeq psi_seq =
      shift_apply_exact(tau_tilde.den(), EventualSeq(x, 0));
  std::vector<Rational> psi = psi_seq.prefix();
  const ShiftSpec s = make_shift(lambda_from_increments(psi));

  const ShiftMembership in_alpha = shift_membership(s, alpha_tilde);
  const ShiftMembership in_tau = shift_membership(s, tau_tilde);
  if (!(in_alpha.values == EventualSeq::unit(ell)) || !(in_tau.values[0] == g[ell])) {
    fail(ErrorKind::construction, "counterexample verification failed: alpha(nabla)Lambda = " +
                                      in_alpha.values.to_string() + ", tau(nabla)Lambda = " +
                                      in_tau.values.to_string());
  }
  return s;
}

InclusionVerdict inclusion_check(const RationalSeries& alpha_tilde, const RationalSeries& tau_tilde,
                                 std::size_t N) {
  InclusionVerdict v;
  const RationalSeries gamma = gamma_of(alpha_tilde, tau_tilde);
  v.gamma_prefix = gamma.taylor(std::max<std::size_t>(N, 1));
  v.gamma_polynomial = gamma.is_polynomial();
  for (std::size_t n = 0; n < v.gamma_prefix.size(); ++n)
    if (v.gamma_prefix[n] < 0) {
      v.first_negative_index = n;
      break;
    }
  if (v.first_negative_index) {
    v.status = InclusionStatus::refuted;
    v.counterexample = counterexample_shift(alpha_tilde, tau_tilde, *v.first_negative_index);
    v.reason = "gamma has a negative coefficient";
    return v;
  }
  if (!(v.gamma_prefix[0] > 0)) {
    v.reason = "gamma(0) is not positive";
    return v;
  }
  const bool num_ok = nonnegative_coeffs(gamma.num());
  if (v.gamma_polynomial && static_cast<std::size_t>(gamma.num().degree()) < v.gamma_prefix.size()) {
    v.status = InclusionStatus::included;
    v.reason = "gamma is a polynomial with nonnegative coefficients";
    return v;
  }
  if (num_ok && denominator_inverse_nonnegative(gamma.den())) {
    v.status = InclusionStatus::included;
    v.reason = "gamma = num / (d0 - nonnegative) with num nonnegative";
    return v;
  }
  bool root_in_interval = false;
  for (const auto& r : poly_roots(gamma.den()).roots)
    if (r.cls != RootClass::nonreal_pair && r.value.real() >= 0.0 && r.value.real() <= 1.0)
      root_in_interval = true;
  v.bounded_on_unit_interval = !root_in_interval;
  v.reason = "finite prefix nonnegative, no certificate for the tail";
  return v;
}

InclusionVerdict inclusion_check(const TruncatedSeries& alpha, const TruncatedSeries& tau,
                                 std::size_t N) {
  if (!check_admissible(alpha, false).admissible) fail(ErrorKind::input, "alpha is not admissible");
  if (!check_admissible(tau, false).admissible) fail(ErrorKind::input, "tau is not admissible");
  return inclusion_check(tilde_of(alpha), tilde_of(tau), N);
}

// ---- limits --------------------------------------------------------------

const char* to_string(LimitVerdict v) noexcept {
  switch (v) {
    case LimitVerdict::exists: return "exists";
    case LimitVerdict::oscillates: return "oscillates";
    case LimitVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr std::size_t kWindows = 16;

LimitProbe classify(std::vector<double> trace, bool strong, double tol) {
  LimitProbe p;
  const std::size_t len = trace.size();
  const std::size_t w = std::max<std::size_t>(2, len / 64);
  if (len < kWindows * w) fail(ErrorKind::input, "horizon too short for the window scan");
  const std::size_t start = len - kWindows * w;
  std::vector<double> spread(kWindows);
  for (std::size_t k = 0; k < kWindows; ++k) {
    const auto b = trace.begin() + static_cast<std::ptrdiff_t>(start + k * w);
    const auto [lo, hi] = std::minmax_element(b, b + static_cast<std::ptrdiff_t>(w));
    spread[k] = *hi - *lo;
  }
  double mean = 0.0;
  for (std::size_t i = len - w; i < len; ++i) mean += trace[i];
  mean /= static_cast<double>(w);
  p.value = mean;
  p.oscillation = *std::max_element(spread.begin(), spread.end());
  const double thr = tol * std::max(1.0, std::abs(mean));
  if (p.oscillation <= thr) {
    p.verdict = LimitVerdict::exists;
  } else if (spread.back() >= 0.5 * spread.front()) {
    p.verdict = LimitVerdict::oscillates;
    p.alarm = strong;
  }
  p.trace = std::move(trace);
  return p;
}

}  // namespace

LimitProbe limit_exists_probe(const OperatorMatrix& T, const TruncatedSeries& alpha, const Vec& h,
                              std::size_t horizon, double tol) {
  const AdmissibilityReport adm = check_admissible(alpha, false);
  const MembershipCertificate c = class_membership(T, adm);
  if (c.verdict != MembershipVerdict::member)
    fail(ErrorKind::precondition, "operator is not a member of C_alpha");
  std::vector<double> trace(horizon + 1);
  Vec x = h;
  for (std::size_t n = 0; n <= horizon; ++n) {
    trace[n] = x.squaredNorm();
    x = T.mat() * x;
  }
  return classify(std::move(trace), adm.strongly_admissible, tol);
}

LimitProbe limit_exists_probe(const ShiftSpec& s, const TruncatedSeries& alpha,
                              std::span<const double> h, std::size_t horizon, double tol) {
  const AdmissibilityReport adm = check_admissible(alpha, false);
  if (shift_membership(s, tilde_of(alpha)).certificate.verdict != MembershipVerdict::member)
    fail(ErrorKind::precondition, "shift is not a member of C_alpha");
  // the orbits of different basis vectors are orthogonal
  std::vector<double> trace(horizon + 1, 0.0);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] == 0.0) continue;
    const Rational lj = s.Lambda[j];
    for (std::size_t n = 0; n <= horizon; ++n)
      trace[n] += h[j] * h[j] * Rational(s.Lambda[n + j] / lj).get_d();
  }
  return classify(std::move(trace), adm.strongly_admissible, tol);
}

std::vector<double> recurrence_solve(std::span<const double> q, std::span<const double> b,
                                     double b_eventual, std::span<const double> init,
                                     std::size_t count) {
  if (q.empty() || q.back() == 0.0) fail(ErrorKind::input, "leading coefficient of q is zero");
  const std::size_t d = q.size() - 1;
  if (init.size() != d) fail(ErrorKind::input, "recurrence needs deg q initial values");
  std::vector<double> a(std::max(count, d));
  std::copy(init.begin(), init.end(), a.begin());
  for (std::size_t n = 0; n + d < a.size(); ++n) {
    double s = n < b.size() ? b[n] : b_eventual;
    for (std::size_t j = 0; j < d; ++j) s -= q[j] * a[n + j];
    a[n + d] = s / q[d];
  }
  a.resize(count);
  return a;
}

}  // namespace opcalc
