#include "opcalc/hereditary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opcalc/error.hpp"
#include "opcalc/factorization.hpp"
#include "opcalc/kernels.hpp"

namespace opcalc {

namespace {

// sup_{first <= n <= horizon} ||T^n||^2 / w_n
double tail_ratio(const OperatorMatrix& T, const GoodWeight& w, std::size_t first) {
  const std::size_t horizon = std::max(first, kDefaultHorizon);
  const auto norms = T.power_norms(horizon);
  double r = 0.0;
  for (std::size_t n = first; n <= horizon; ++n) r = std::max(r, norms[n] * norms[n] / w(n));
  return r;
}

}  // namespace

HereditaryResult hereditary_apply(const TruncatedSeries& f, const OperatorMatrix& T, const Mat& B,
                                  double tol) {
  if (B.rows() != T.dim() || B.cols() != T.dim())
    fail(ErrorKind::input, "hereditary_apply: B and T have different sizes");
  const std::size_t N = f.size();
  const auto norms = T.power_norms(N);
  const double b_norm = op_norm(B);

  std::vector<double> rem(N + 1, 0.0);
  if (f.tail_bound() > 0.0) rem[N] = f.tail_bound() * tail_ratio(T, f.weight(), N) * b_norm;
  for (std::size_t n = N; n-- > 0;) {
    const double term = f[n] == 0.0 ? 0.0 : std::abs(f[n]) * norms[n] * norms[n] * b_norm;
    rem[n] = rem[n + 1] + term;
  }
  if (!std::isfinite(rem[0]))
    fail(ErrorKind::summability, "sum |f_n| ||T^n||^2 is not finite on the stored range");

  std::size_t M = N;
  for (std::size_t m = 0; m <= N; ++m) {
    if (rem[m] <= tol) {
      M = m;
      break;
    }
  }
  HereditaryResult out;
  out.terms = M;
  out.remainder = rem[M];
  out.value = kernels::hereditary_sum_parallel(f.coeffs().first(M), T.mat(), B);
  if (is_hermitian(B)) out.value = hermitian_part(out.value);
  return out;
}

HereditaryResult hereditary_apply(const TruncatedSeries& f, const OperatorMatrix& T, double tol) {
  return hereditary_apply(f, T, Mat::Identity(T.dim(), T.dim()), tol);
}

// ---- admissibility -------------------------------------------------------

AdmissibilityReport check_admissible_tilde(const TruncatedSeries& at, bool strong) {
  AdmissibilityReport r;
  r.alpha_tilde = at;
  const IntervalBound b = min_on_unit_interval(at);
  r.min_on_unit_interval = b.lower;
  bool positive = b.lower > 0.0;
  if (!positive && b.sampled_min > 0.0 && at.is_polynomial()) {
    // grid bound too coarse, decide exactly
    if (positive_on_unit_interval(at.to_polynomial()).value_or(false)) {
      positive = true;
      r.min_on_unit_interval = std::max(b.lower, 0.0);
    }
  }
  const IntervalBound c = min_modulus_on_circle(at);
  r.circle_root_margin = c.sampled_min;
  if (!(at[0] > 0.0)) {
    r.reason = "alpha_tilde(0) is not positive";
  } else if (!positive) {
    std::ostringstream os;
    os << "alpha_tilde not certified positive on [0,1] (sampled min " << b.sampled_min << " at t = "
       << b.argmin << ")";
    r.reason = os.str();
  } else {
    r.admissible = true;
  }
  r.strongly_admissible = r.admissible && c.lower > 0.0;
  if (strong && r.admissible && !r.strongly_admissible) {
    std::ostringstream os;
    os << "alpha_tilde has a zero on the unit circle near angle " << c.argmin;
    r.reason = os.str();
  }
  return r;
}

AdmissibilityReport check_admissible(const TruncatedSeries& alpha, bool strong, double tol) {
  if (!alpha.is_polynomial())
    fail(ErrorKind::input, "alpha has a tail; pass alpha_tilde so the quotient by (1 - t) is defined");
  Rational s = 0;
  double scale = 0.0;
  std::vector<double> tilde;
  tilde.reserve(alpha.size());
  for (std::size_t n = 0; n < alpha.size(); ++n) {
    s += Rational(alpha[n]);
    scale += std::abs(alpha[n]);
    tilde.push_back(s.get_d());
  }
  // the last partial sum is α(1)
  tilde.pop_back();
  const double at_one = s.get_d();
  AdmissibilityReport r = check_admissible_tilde(TruncatedSeries(tilde, 0.0, alpha.weight_ref()), strong);
  r.alpha_at_one = at_one;
  if (std::abs(at_one) > tol * std::max(1.0, scale)) {
    r.admissible = false;
    r.strongly_admissible = false;
    std::ostringstream os;
    os << "alpha(1) = " << at_one << " is not zero";
    r.reason = os.str();
  }
  return r;
}

TruncatedSeries alpha_from_tilde(const TruncatedSeries& at) {
  std::vector<double> c(at.size() + 1, 0.0);
  for (std::size_t n = 0; n < at.size(); ++n) {
    c[n] += at[n];
    c[n + 1] -= at[n];
  }
  const double w1 = at.weight()(1);
  return TruncatedSeries(std::move(c), (1.0 + w1) * at.tail_bound(), at.weight_ref());
}

// ---- membership ----------------------------------------------------------

const char* to_string(MembershipVerdict v) noexcept {
  switch (v) {
    case MembershipVerdict::member: return "member";
    case MembershipVerdict::refuted: return "refuted";
    case MembershipVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

MembershipCertificate class_membership(const OperatorMatrix& T, const TruncatedSeries& alpha,
                                       double tol) {
  return class_membership(T, check_admissible(alpha, false), tol);
}

MembershipCertificate class_membership(const OperatorMatrix& T, const AdmissibilityReport& adm,
                                       double tol) {
  if (!adm.admissible) fail(ErrorKind::input, "alpha is not admissible: " + adm.reason);
  MembershipCertificate c;
  const TruncatedSeries& at = adm.alpha_tilde;
  const TruncatedSeries alpha = alpha_from_tilde(at);

  const SpectralRadius sr = T.spectral_radius();
  c.spectral_radius = sr.estimate;
  c.spectral_ok = sr.estimate <= 1.0 + 1e-7;

  const auto norms = T.power_norms(alpha.size());
  double summ = 0.0, scale = 0.0;
  for (std::size_t n = 0; n < at.size(); ++n) summ += std::abs(at[n]) * (1.0 + norms[n] * norms[n]);
  for (std::size_t n = 0; n < alpha.size(); ++n)
    if (alpha[n] != 0.0) scale += std::abs(alpha[n]) * norms[n] * norms[n];
  if (at.tail_bound() > 0.0) summ += at.tail_bound() * tail_ratio(T, at.weight(), at.size());
  c.summability_ok = std::isfinite(summ) && std::isfinite(scale);

  if (!c.spectral_ok) {
    c.verdict = MembershipVerdict::refuted;
    c.failed_condition = "spectrum outside the closed disc";
    return c;
  }
  if (!c.summability_ok) {
    c.failed_condition = "summability";
    return c;
  }
  HereditaryResult h;
  try {
    h = hereditary_apply(alpha, T, tol * 1e-3);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::summability) throw;
    c.summability_ok = false;
    c.failed_condition = "summability";
    return c;
  }
  c.truncation_N = h.terms;
  c.series_tail = h.remainder;
  c.min_eigenvalue = min_eigenvalue(h.value);
  c.threshold = tol * std::max(1.0, scale) + h.remainder;
  c.strict = c.min_eigenvalue > c.threshold;
  if (c.min_eigenvalue >= -c.threshold) {
    c.verdict = MembershipVerdict::member;
  } else {
    c.verdict = MembershipVerdict::refuted;
    c.failed_condition = "alpha[T*,T] is not positive semidefinite";
  }
  return c;
}

double composition_identity_residual(const TruncatedSeries& f, const TruncatedSeries& g,
                                     const OperatorMatrix& T, const Mat& B) {
  const TruncatedSeries fg = series_mul(f, g);
  const Mat lhs = hereditary_apply(fg, T, B, 0.0).value;
  const Mat inner = hereditary_apply(f, T, B, 0.0).value;
  const Mat rhs = hereditary_apply(g, T, inner, 0.0).value;
  return op_norm(lhs - rhs);
}

std::size_t min_power_index(const OperatorMatrix& T) {
  const SpectralRadius sr = T.spectral_radius(16);
  if (!(sr.estimate < 1.0)) {
    std::ostringstream os;
    os << "spectral radius " << sr.estimate << " is not below 1";
    fail(ErrorKind::precondition, os.str());
  }
  const double one = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t n = 1; n <= (std::size_t{1} << 22); ++n)
    if (T.power_norm(n) <= one) return n;
  fail(ErrorKind::numerical, "no power with norm <= 1 found");
}

TruncatedSeries annihilating_polynomial(const Vec& eigenvalues, double merge_tol) {
  std::vector<cplx> distinct;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const cplx z = eigenvalues(i);
    bool seen = false;
    for (const auto& d : distinct) seen = seen || std::abs(d - z) <= merge_tol;
    if (!seen) distinct.push_back(z);
  }
  std::vector<double> p{1.0, -1.0};
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    for (std::size_t l = k + 1; l < distinct.size(); ++l) {
      const double c = -2.0 * (distinct[k] * std::conj(distinct[l])).real();
      std::vector<double> next(p.size() + 2, 0.0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        next[i] += p[i];
        next[i + 1] += c * p[i];
        next[i + 2] += p[i];
      }
      p = std::move(next);
    }
  }
  return TruncatedSeries(std::move(p));
}

// ---- union of classes ----------------------------------------------------

namespace {

struct RootSplit {
  std::vector<double> rest;           // a_- a_nr normalized to 1 at t = 0
  std::vector<std::complex<double>> positive;  // roots of a_+
  std::vector<double> cofactor{1.0};  // p with p ≻ 0 and p a_nr ≻ 0
};

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

RootSplit split_roots(const RealPolynomial& a) {
  RootSplit s;
  s.rest = {1.0};
  if (a.degree() <= 0) return s;
  for (const auto& r : poly_roots(a).roots) {
    for (int k = 0; k < r.multiplicity; ++k) {
      switch (r.cls) {
        case RootClass::positive_real:
          if (r.value.real() <= 1.0) fail(ErrorKind::precondition, "alpha_tilde has a root in (0,1]");
          s.positive.push_back(r.value);
          break;
        case RootClass::negative_real:
          s.rest = poly_mul(s.rest, {1.0, -1.0 / r.value.real()});
          break;
        case RootClass::nonreal_pair:
          if (r.value.imag() > 0) {
            const cplx inv = 1.0 / r.value;
            s.rest = poly_mul(s.rest, {1.0, -2.0 * inv.real(), std::norm(inv)});
            s.cofactor = poly_mul(s.cofactor, quadratic_factor(r.value).p.to_doubles());
          }
          break;
        case RootClass::zero:
          fail(ErrorKind::precondition, "alpha_tilde vanishes at 0");
      }
    }
  }
  return s;
}

TruncatedSeries expand_to_tol(const std::vector<double>& num, std::span<const std::complex<double>> roots,
                              double tol) {
  for (std::size_t n = kDefaultOrder;; n *= 2) {
    TruncatedSeries s = expand_rational(num, 1.0, roots, n);
    if (s.tail_bound() <= tol || n >= 16384) return s;
  }
}

void verify_quotients(JoinResult& j, double tol) {
  const TruncatedSeries zero = TruncatedSeries::constant(0.0, j.quotient_alpha.weight_ref());
  const auto va = dominance_check(j.quotient_alpha, zero, tol);
  const auto vb = dominance_check(j.quotient_beta, zero, tol);
  if (va.relation != Dominance::strict || vb.relation != Dominance::strict) {
    std::ostringstream os;
    os << "union construction failed verification: gamma/alpha is " << to_string(va.relation)
       << ", gamma/beta is " << to_string(vb.relation);
    fail(ErrorKind::construction, os.str());
  }
}

}  // namespace

JoinResult join_classes(const TruncatedSeries& alpha, const TruncatedSeries& beta, double tol) {
  const AdmissibilityReport ra = check_admissible(alpha, false);
  const AdmissibilityReport rb = check_admissible(beta, false);
  if (!ra.admissible) fail(ErrorKind::input, "alpha is not admissible: " + ra.reason);
  if (!rb.admissible) fail(ErrorKind::input, "beta is not admissible: " + rb.reason);

  const RealPolynomial A = ra.alpha_tilde.to_polynomial();
  const RealPolynomial B = rb.alpha_tilde.to_polynomial();
  const RealPolynomial g = gcd(A, B);
  const RealPolynomial a = divmod(A, g).first;
  const RealPolynomial b = divmod(B, g).first;
  const double kappa = Rational(a.coeff(0) / b.coeff(0)).get_d();  // > 0 since α̃(0), β̃(0) > 0

  const RootSplit sa = split_roots(a);
  const RootSplit sb = split_roots(b);
  const std::vector<double> p = poly_mul(sa.cofactor, sb.cofactor);

  JoinResult j;
  j.used_case = 'a';
  j.psi_trivial = true;
  // w = b_- b_nr p / a_+ and v = a_- a_nr p / b_+, so that a/b = κ v/w
  j.quotient_alpha = expand_to_tol(poly_mul(sb.rest, p), sa.positive, tol);
  j.quotient_beta = expand_to_tol(poly_mul(sa.rest, p), sb.positive, tol).scaled(kappa);
  j.gamma = series_mul(alpha, j.quotient_alpha);
  const TruncatedSeries lhs = series_mul(ra.alpha_tilde, j.quotient_alpha);
  const TruncatedSeries rhs = series_mul(rb.alpha_tilde, j.quotient_beta);
  j.consistency = wiener_norm(lhs - rhs);
  verify_quotients(j, tol);
  if (j.consistency > 1e-8 * std::max(1.0, wiener_norm(lhs)))
    fail(ErrorKind::construction, "union construction: alpha q_alpha and beta q_beta disagree");
  return j;
}

JoinResult join_classes_tilde(const TruncatedSeries& at, const TruncatedSeries& bt, double tol) {
  const AdmissibilityReport ra = check_admissible_tilde(at, false);
  const AdmissibilityReport rb = check_admissible_tilde(bt, false);
  if (!ra.admissible) fail(ErrorKind::input, "alpha is not admissible: " + ra.reason);
  if (!rb.admissible) fail(ErrorKind::input, "beta is not admissible: " + rb.reason);

  // φ = num/den with den inverted through the Neumann series
  auto attempt = [&](const TruncatedSeries& num, const TruncatedSeries& den, bool swapped)
      -> std::optional<JoinResult> {
    TruncatedSeries inv;
    try {
      inv = series_invert_neumann(den, tol * 1e-2);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
      return std::nullopt;
    }
    const TruncatedSeries phi = series_mul(num, inv);
    const TruncatedSeries zero = TruncatedSeries::constant(0.0, phi.weight_ref());
    JoinResult j;
    j.used_case = 'b';
    TruncatedSeries psi = TruncatedSeries::constant(1.0, phi.weight_ref());
    if (dominance_check(phi, zero, tol).relation == Dominance::strict) {
      j.psi_trivial = true;
    } else {
      const FactorizationCertificate cert = wiener_factorize(phi, tol);
      if (!cert.ok())
        fail(ErrorKind::construction, "factorization of alpha_tilde/beta_tilde failed at " +
                                          cert.failed_stage + ": " + cert.message);
      psi = cert.g;
    }
    const TruncatedSeries phipsi = series_mul(phi, psi);
    // γ̃ = num ψ, so γ/num-side = ψ and γ/den-side = φψ
    const TruncatedSeries gt = series_mul(num, psi);
    j.gamma = alpha_from_tilde(gt);
    j.quotient_alpha = swapped ? phipsi : psi;
    j.quotient_beta = swapped ? psi : phipsi;
    j.consistency = wiener_norm(series_mul(at, j.quotient_alpha) - series_mul(bt, j.quotient_beta));
    verify_quotients(j, tol);
    return j;
  };
  if (auto j = attempt(at, bt, false)) return *j;
  if (auto j = attempt(bt, at, true)) return *j;
  fail(ErrorKind::unsupported, "neither alpha_tilde nor beta_tilde is invertible by the Neumann series");
}

}  // namespace opcalc
