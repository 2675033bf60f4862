#include "opcalc/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opcalc/error.hpp"

namespace opcalc {

const char* to_string(CertificateStatus s) noexcept {
  switch (s) {
    case CertificateStatus::certified: return "certified";
    case CertificateStatus::failed: return "failed";
    case CertificateStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

// t^{2k} + b t^k + c
RealPolynomial sparse_quadratic(std::size_t k, const Rational& b, const Rational& c) {
  std::vector<Rational> co(2 * k + 1, Rational(0));
  co[0] = c;
  co[k] += b;
  co[2 * k] += 1;
  return RealPolynomial(std::move(co));
}

RealPolynomial conjugate_pair(const Rational& re, const Rational& abs2) {
  return sparse_quadratic(1, -2 * re, abs2);
}

}  // namespace

QuadraticFactor quadratic_factor(const GaussianRational& lambda) {
  if (lambda.im == 0) fail(ErrorKind::input, "quadratic_factor needs a nonreal root");
  QuadraticFactor out;
  out.p = RealPolynomial::constant(1);
  Rational re = lambda.re, im = lambda.im;
  std::size_t k = 1;
  while (re > 0) {
    if (out.m >= kMaxSquarings) fail(ErrorKind::construction, "too many squarings for a root this close to the positive axis");
    // (t^k + μ)(t^k + conj μ) with μ = λ^{2^j}
    out.p = out.p * sparse_quadratic(k, 2 * re, re * re + im * im);
    const Rational nre = re * re - im * im;
    const Rational nim = 2 * re * im;
    re = nre;
    im = nim;
    k *= 2;
    ++out.m;
  }
  out.pq = out.p * conjugate_pair(lambda.re, lambda.re * lambda.re + lambda.im * lambda.im);
  // the product must telescope to t^{2k} - 2 Re(μ) t^k + |μ|^2
  if (!(out.pq == sparse_quadratic(k, -2 * re, re * re + im * im)))
    fail(ErrorKind::construction, "quadratic factor product did not telescope");
  return out;
}

QuadraticFactor quadratic_factor(std::complex<double> lambda) {
  if (lambda.imag() == 0.0) fail(ErrorKind::input, "quadratic_factor needs a nonreal root");
  QuadraticFactor out;
  out.p = RealPolynomial::constant(1);
  std::complex<double> mu = lambda;
  std::size_t k = 1;
  while (mu.real() > 0) {
    if (out.m >= kMaxSquarings) fail(ErrorKind::construction, "too many squarings for a root this close to the positive axis");
    out.p = out.p * sparse_quadratic(k, Rational(2 * mu.real()), Rational(std::norm(mu)));
    mu = mu * mu;
    k *= 2;
    ++out.m;
  }
  out.pq = out.p * conjugate_pair(Rational(lambda.real()), Rational(std::norm(lambda)));
  return out;
}

namespace {

void check_pq(const RealPolynomial& p, const RealPolynomial& q, double tol) {
  const RealPolynomial pq = p * q;
  double scale = 0.0;
  for (const auto& c : pq.coeffs()) scale = std::max(scale, std::abs(c.get_d()));
  for (std::size_t k = 0; k < pq.coeffs().size(); ++k) {
    const double c = pq.coeffs()[k].get_d();
    if (c < -tol * scale || (k == 0 && !(c > 0))) {
      std::ostringstream os;
      os << "cofactor check failed: coefficient " << k << " of pq is " << c;
      fail(ErrorKind::construction, os.str());
    }
  }
}

}  // namespace

RealPolynomial positive_factor_nonreal(const RealPolynomial& q, double tol) {
  if (q.is_zero() || !(q.coeff(0) > 0)) fail(ErrorKind::precondition, "q(0) must be positive");
  RealPolynomial p = RealPolynomial::constant(1);
  if (q.degree() == 0) return p;
  for (const auto& r : poly_roots(q).roots) {
    if (r.cls != RootClass::nonreal_pair) {
      std::ostringstream os;
      os << "q has a real root near " << r.value.real();
      fail(ErrorKind::precondition, os.str());
    }
    if (r.value.imag() < 0) continue;
    const RealPolynomial pj = quadratic_factor(r.value).p;
    for (int i = 0; i < r.multiplicity; ++i) p = p * pj;
  }
  check_pq(p, q, tol);
  return p;
}

RealPolynomial positive_factor_nonreal(std::span<const GaussianRational> upper_roots) {
  RealPolynomial p = RealPolynomial::constant(1);
  RealPolynomial q = RealPolynomial::constant(1);
  for (const auto& l : upper_roots) {
    p = p * quadratic_factor(l).p;
    q = q * conjugate_pair(l.re, l.re * l.re + l.im * l.im);
  }
  if (!strictly_dominates_zero(p) || !strictly_dominates_zero(p * q))
    fail(ErrorKind::construction, "exact cofactor check failed");
  return p;
}

UnitIntervalFactor positive_factor_unit_interval(const RealPolynomial& q, std::size_t order,
                                                 double tail_target, WeightRef weight) {
  if (!weight) weight = GoodWeight::unit();
  if (q.is_zero() || !(q.coeff(0) > 0))
    fail(ErrorKind::precondition, "q must be positive at t = 0");
  UnitIntervalFactor out;
  out.constant = q.coeff(0).get_d();
  out.p = RealPolynomial::constant(1);
  if (q.degree() > 0) {
    for (const auto& r : poly_roots(q).roots) {
      const double x = r.value.real();
      switch (r.cls) {
        case RootClass::zero:
          fail(ErrorKind::precondition, "q vanishes at t = 0");
        case RootClass::positive_real:
          if (x <= 1.0 + 1e-12) {
            std::ostringstream os;
            os << "q has a root in [0,1] near " << x;
            fail(ErrorKind::precondition, os.str());
          }
          out.positive_roots.insert(out.positive_roots.end(), r.multiplicity, x);
          break;
        case RootClass::negative_real:
          out.negative_roots.insert(out.negative_roots.end(), r.multiplicity, x);
          break;
        case RootClass::nonreal_pair:
          if (r.value.imag() > 0) {
            const RealPolynomial pj = quadratic_factor(r.value).p;
            for (int i = 0; i < r.multiplicity; ++i) out.p = out.p * pj;
          }
          break;
      }
    }
  }

  const std::vector<double> num = out.p.to_doubles();
  std::vector<std::complex<double>> den;
  for (double x : out.positive_roots) den.emplace_back(x, 0.0);
  std::size_t n = std::max<std::size_t>(order, out.p.degree());
  for (;;) {
    out.u = expand_rational(num, 1.0, den, n, weight);
    if (out.u.tail_bound() <= tail_target) break;
    if (n >= 16384) {
      std::ostringstream os;
      os << "expansion of p/q_plus needs more than " << n << " terms (tail " << out.u.tail_bound()
         << ")";
      fail(ErrorKind::numerical, os.str());
    }
    n *= 2;
  }

  const TruncatedSeries zero = TruncatedSeries::constant(0.0, weight);
  const TruncatedSeries uq = series_mul(out.u, TruncatedSeries::from_polynomial(q, weight));
  const double vtol = 1e-9 * std::max(1.0, wiener_norm(uq));
  for (const TruncatedSeries* s : {static_cast<const TruncatedSeries*>(&out.u), &uq}) {
    if (dominance_check(*s, zero, vtol).relation == Dominance::refuted)
      fail(ErrorKind::construction, "u or uq has a negative coefficient");
  }
  return out;
}

FactorizationCertificate wiener_factorize(const TruncatedSeries& f, double tol) {
  FactorizationCertificate cert;
  cert.f = f;
  const auto& w = f.weight();
  const WeightRef wref = f.weight_ref();

  const IntervalBound b = min_on_unit_interval(f);
  if (!(b.lower > 0.0)) {
    std::ostringstream os;
    if (b.sampled_min <= 0.0)
      os << "f is not positive on [0,1]: f(" << b.argmin << ") = " << b.sampled_min;
    else
      os << "positivity of f on [0,1] not certified: lower bound " << b.lower;
    fail(ErrorKind::precondition, os.str());
  }
  // f >= b.lower = 2ε on [0,1]
  const double eps = b.lower / 2.0;
  cert.epsilon = eps;

  auto give_up = [&](CertificateStatus s, const char* stage, const std::string& msg) {
    cert.status = s;
    cert.failed_stage = stage;
    cert.message = msg;
    return cert;
  };

  // N: smallest index whose remainder (stored part plus tail) is below ε/2
  std::vector<double> rem(f.size() + 1, f.tail_bound());
  for (std::size_t n = f.size(); n-- > 0;) rem[n] = rem[n + 1] + std::abs(f[n]) * w(n);
  std::optional<std::size_t> split;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (rem[n + 1] < eps / 2.0) {
      split = n;
      break;
    }
  }
  if (!split) return give_up(CertificateStatus::inconclusive, "split", "tail bound of f exceeds ε/2");
  const std::size_t N = *split;
  cert.N_split = N;

  std::vector<double> fn(f.coeffs().begin(), f.coeffs().begin() + static_cast<std::ptrdiff_t>(N + 1));
  fn[0] -= eps / 2.0;
  std::vector<double> hc(std::max(f.size(), std::size_t{1}), 0.0);
  hc[0] = eps / 2.0;
  double a_norm = 0.0;
  for (std::size_t n = N + 1; n < f.size(); ++n) {
    if (f[n] < 0) {
      hc[n] = f[n];
      a_norm += std::abs(f[n]) * w(n);
    }
  }
  while (hc.size() > 1 && hc.back() == 0.0) hc.pop_back();
  const TruncatedSeries h(hc, 0.0, wref);
  a_norm /= eps / 2.0;
  const double v_norm = 1.0 / ((eps / 2.0) * (1.0 - a_norm));
  const double f_norm = std::max(1.0, wiener_norm(f));

  try {
    // tails budgeted so that ||f||(tail(u)||v|| + ||u|| tail(v)) stays well below tol
    UnitIntervalFactor uf = positive_factor_unit_interval(
        RealPolynomial::from_doubles(fn), kDefaultOrder, tol / (8.0 * f_norm * v_norm), wref);
    const double u_norm = wiener_norm(uf.u);
    TruncatedSeries v;
    try {
      v = series_invert_neumann(h, tol / (8.0 * f_norm * std::max(1.0, u_norm)));
    } catch (const Error& e) {
      return give_up(CertificateStatus::failed, "invert", e.what());
    }
    cert.g = series_mul(uf.u, v);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::precondition) throw;
    return give_up(CertificateStatus::failed, "positive_factor", e.what());
  }

  cert.fg = series_mul(f, cert.g);
  const TruncatedSeries zero = TruncatedSeries::constant(0.0, wref);
  cert.verdict_g = dominance_check(cert.g, zero, tol);
  cert.verdict_fg = dominance_check(cert.fg, zero, tol);
  if (cert.verdict_g.relation == Dominance::strict && cert.verdict_fg.relation == Dominance::strict) {
    cert.status = CertificateStatus::certified;
    return cert;
  }
  const bool refuted = cert.verdict_g.relation == Dominance::refuted ||
                       cert.verdict_fg.relation == Dominance::refuted;
  return give_up(refuted ? CertificateStatus::failed : CertificateStatus::inconclusive, "verify",
                 std::string("g: ") + to_string(cert.verdict_g.relation) +
                     ", fg: " + to_string(cert.verdict_fg.relation));
}

}  // namespace opcalc
