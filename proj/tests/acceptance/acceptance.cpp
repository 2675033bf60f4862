// One line per acceptance criterion; nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "opcalc/error.hpp"
#include "opcalc/factorization.hpp"
#include "opcalc/hereditary.hpp"
#include "opcalc/model.hpp"
#include "opcalc/renorm.hpp"
#include "opcalc/seq_lab.hpp"
#include "support/generators.hpp"

using namespace opcalc;
namespace tg = opcalc::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// tolerances
constexpr double kNilTol = 1e-12;
constexpr double kSimilarityTol = 1e-9;
constexpr double kAnnihilateTol = 1e-8;
constexpr double kTailTol = 1e-10;
constexpr double kLimitTol = 1e-8;
constexpr double kAmplitude = 1e-2;
constexpr double kLimStarTol = 1e-12;
constexpr double kModelTol = 1e-10;
constexpr double kIntertwineTol = 1e-9;
constexpr double kNablaTol = 1e-9;

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

OperatorMatrix nilpotent_witness() {
  Mat t = Mat::Zero(2, 2);
  t(0, 1) = 2.0;
  return OperatorMatrix(t);
}

OperatorMatrix skew_diagonal() {
  Mat V(2, 2);
  V << 1.0, 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  return OperatorMatrix(Mat(V * d * V.inverse()));
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome c1_quadratic_factor() {
  const auto t0 = Clock::now();
  tg::Rng rng(101);
  int done = 0, bad = 0;
  while (done < 500) {
    Rational re = tg::random_rational(rng, 60, 20);
    Rational im = tg::random_rational(rng, 60, 20);
    if (im == 0) continue;
    const double mod = std::hypot(re.get_d(), im.get_d());
    if (mod < 0.1 || mod > 3.0) continue;
    const QuadraticFactor q = quadratic_factor(GaussianRational{re, im});
    const RealPolynomial quad{re * re + im * im, -2 * re, 1};
    if (!strictly_dominates_zero(q.p) || !strictly_dominates_zero(q.pq) || !(q.p * quad == q.pq)) ++bad;
    ++done;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && secs < 30.0, std::to_string(done) + " lambdas, " + std::to_string(bad) + " failures, " +
                                       fmt("%.2f s", secs)};
}

Outcome c2_wiener_factorize() {
  tg::Rng rng(102);
  int bad = 0;
  double worst_tail = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int deg = tg::uniform_int(rng, 1, 6);
    std::vector<double> c(static_cast<std::size_t>(deg) + 1);
    for (auto& x : c) x = tg::uniform(rng, -1.0, 1.0);
    // lift so that min on [0,1] is about 0.05..0.5
    double m = 1e300;
    for (int k = 0; k <= 2000; ++k) m = std::min(m, TruncatedSeries(c).eval(k / 2000.0));
    c[0] += tg::uniform(rng, 0.05, 0.5) - m;
    // small perturbing tail, stored as geometric noise past the polynomial degree
    const double delta = tg::uniform(rng, 0.0, 1e-3);
    for (int k = 1; k <= 40; ++k) c.push_back(delta * tg::uniform(rng, -1.0, 1.0) * std::pow(0.5, k));
    const TruncatedSeries f(c);
    try {
      const FactorizationCertificate cert = wiener_factorize(f);
      if (!cert.ok()) std::fprintf(stderr, "  C2 case %d: %s: %s\n", i, cert.failed_stage.c_str(), cert.message.c_str());
      const bool ok = cert.ok() && cert.verdict_g.relation == Dominance::strict &&
                      cert.verdict_fg.relation == Dominance::strict && cert.g.tail_bound() <= kTailTol &&
                      cert.fg.tail_bound() <= kTailTol;
      if (!ok) ++bad;
      worst_tail = std::max({worst_tail, cert.g.tail_bound(), cert.fg.tail_bound()});
    } catch (const Error& e) {
      std::fprintf(stderr, "  C2 case %d: %s\n", i, e.what());
      ++bad;
    }
  }
  const FactorizationCertificate w = wiener_factorize(TruncatedSeries({1.0, -1.0, 1.0}));
  const bool worked = w.ok() && w.verdict_g.relation == Dominance::strict && w.verdict_fg.relation == Dominance::strict;
  const bool oracle = RealPolynomial{1, -1, 1} * RealPolynomial{1, 1, 1} == RealPolynomial{1, 0, 1, 0, 1} &&
                      strictly_dominates_zero(RealPolynomial{1, 1, 1}) &&
                      strictly_dominates_zero(RealPolynomial{1, 0, 1, 0, 1});
  return {bad == 0 && worked && oracle, std::to_string(100 - bad) + "/100 certified, worst tail " +
                                            fmt("%.1e", worst_tail) + (worked ? ", 1-t+t^2 ok" : ", 1-t+t^2 FAILED") +
                                            (oracle ? ", oracle pair ok" : ", oracle pair FAILED")};
}

Outcome c3_nilpotent() {
  const OperatorMatrix T = nilpotent_witness();
  const RenormModel m = build_renorm(T, TruncatedSeries({1.0, 0.0, -1.0}));
  Mat want = Mat::Zero(2, 2);
  want(0, 0) = 1.0;
  want(1, 1) = 5.0;
  const double g_err = (m.gram - want).norm();
  const double c_err = std::abs(m.contraction_norm - 2.0 / std::sqrt(5.0));
  const double d_err = (m.gram - T.adjoint() * m.gram * T.mat() - m.D * m.D).norm();
  const bool pass = g_err <= kNilTol && c_err <= kNilTol && d_err <= kNilTol;
  return {pass, "|G-diag(1,5)| " + fmt("%.1e", g_err) + ", |norm-2/sqrt5| " + fmt("%.1e", c_err) +
                    ", defect identity " + fmt("%.1e", d_err)};
}

Outcome c4_similarity() {
  tg::Rng rng(104);
  double worst = 0.0;
  int errors = 0;
  for (int i = 0; i < 200; ++i) {
    const tg::Member mem = tg::random_member(rng, 12);
    const OperatorMatrix T(mem.T);
    try {
      const RenormModel m = build_renorm(T, mem.alpha);
      worst = std::max(worst, verify_similarity(m, T).contraction_norm);
    } catch (const Error&) {
      ++errors;
    }
  }
  return {errors == 0 && worst <= 1.0 + kSimilarityTol,
          "200 members, max ||WTW^-1|| = " + fmt("%.12f", worst) + ", errors " + std::to_string(errors)};
}

Outcome c5_annihilating() {
  tg::Rng rng(105);
  double worst = 0.0;
  int not_member = 0;
  for (int i = 0; i < 100; ++i) {
    Vec eigs;
    const OperatorMatrix T(tg::random_unimodular_diagonalizable(tg::uniform_int(rng, 1, 6), rng, &eigs));
    const TruncatedSeries p = annihilating_polynomial(eigs);
    double scale = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) scale += std::abs(p[n]) * std::pow(T.power_norm(n), 2);
    worst = std::max(worst, op_norm(hereditary_apply(p, T).value) / scale);
    try {
      if (class_membership(T, p).verdict != MembershipVerdict::member) ++not_member;
    } catch (const Error&) {
      ++not_member;
    }
  }
  return {worst <= kAnnihilateTol && not_member == 0,
          "max ||p[T*,T]||/scale = " + fmt("%.1e", worst) + ", non-members " + std::to_string(not_member)};
}

Outcome c6_quoted_coefficients() {
  bool coeff_ok = true;
  const RealPolynomial sq{1, Rational(-4, 3), Rational(4, 9)};  // (4/9)(t - 3/2)^2
  for (std::size_t n = 2; n <= 12; ++n) {
    const RealPolynomial prod = sq * RealPolynomial(std::vector<Rational>(n, Rational(1)));
    if (prod.coeff(1) != Rational(-1, 3)) coeff_ok = false;
  }
  const InclusionVerdict v =
      inclusion_check(TruncatedSeries({1.0, -1.0}), TruncatedSeries({0.25, -0.25, 1.0, -1.0}), 64);
  bool gamma_ok = v.status == InclusionStatus::included && v.gamma_prefix.size() >= 3 &&
                  v.gamma_prefix[0] == Rational(1, 4) && v.gamma_prefix[1] == 0 && v.gamma_prefix[2] == 1;
  for (std::size_t k = 3; k < v.gamma_prefix.size(); ++k) gamma_ok = gamma_ok && v.gamma_prefix[k] == 0;
  return {coeff_ok && gamma_ok, std::string("t-coefficient -1/3 for n=2..12: ") + (coeff_ok ? "yes" : "NO") +
                                    ", inclusion " + to_string(v.status) + " with gamma = t^2+1/4"};
}

Outcome c7_counterexample() {
  const RationalSeries at = RationalSeries::polynomial(RealPolynomial{1});
  const RationalSeries tt = RationalSeries::polynomial(RealPolynomial{1, Rational(-1, 2)});
  const ShiftSpec s = counterexample_shift(at, tt, 1);
  const bool lambda_ok = s.Lambda == EventualSeq({2, 2}, 1);
  const ShiftMembership ma = shift_membership(s, at);
  const ShiftMembership mt = shift_membership(s, tt);
  const bool a_ok = ma.values == EventualSeq::unit(1) && ma.certificate.verdict == MembershipVerdict::member;
  const bool t_ok = mt.values[0] == Rational(-1, 2) && mt.certificate.verdict == MembershipVerdict::refuted;
  return {lambda_ok && a_ok && t_ok, "Lambda = " + s.Lambda.to_string() + ", alpha(nabla)Lambda = " +
                                         ma.values.to_string() + ", [tau(nabla)Lambda]_0 = " + mt.values[0].get_str()};
}

Outcome c8_limit_dichotomy() {
  const TruncatedSeries alpha({1.0, -1.25, 0.25});
  tg::Rng rng(108);
  int exists = 0, members = 0;
  double worst_osc = 0.0;
  for (int i = 0; i < 20; ++i) {
    // Λ decreasing to a positive limit: (1 - ∇)Λ >= 0 with small increments
    std::vector<Rational> prefix(static_cast<std::size_t>(tg::uniform_int(rng, 1, 8)));
    Rational acc = 1;
    for (std::size_t k = prefix.size(); k-- > 0;) {
      acc += Rational(tg::uniform_int(rng, 0, 20), tg::uniform_int(rng, 20, 40)) * acc / 4;
      prefix[k] = acc;
    }
    const ShiftSpec s = make_shift(EventualSeq(prefix, 1));
    if (shift_membership(s, alpha).certificate.verdict != MembershipVerdict::member) continue;
    ++members;
    std::vector<double> h(12);
    for (auto& x : h) x = tg::uniform(rng, -1.0, 1.0);
    const LimitProbe p = limit_exists_probe(s, alpha, h, 4096, kLimitTol);
    if (p.verdict == LimitVerdict::exists && p.oscillation < kLimitTol) ++exists;
    worst_osc = std::max(worst_osc, p.oscillation);
  }
  Vec g(2);
  g << 0.0, 1.0;
  const LimitProbe o = limit_exists_probe(skew_diagonal(), TruncatedSeries({1.0, 1.0, -1.0, -1.0}), g, 4096);
  const double amp = std::abs(o.trace[4096] - o.trace[4095]);
  const bool pass = members >= 10 && exists == members && o.verdict == LimitVerdict::oscillates && amp >= kAmplitude;
  return {pass, std::to_string(exists) + "/" + std::to_string(members) + " member shifts converge (max osc " +
                    fmt("%.1e", worst_osc) + "), skew diag " + to_string(o.verdict) + " with amplitude " +
                    fmt("%.3f", amp)};
}

Outcome c9_lim_star() {
  tg::Rng rng(109);
  const TruncatedSeries f({0.25, 0.5, 0.25});
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<Rational> p(static_cast<std::size_t>(tg::uniform_int(rng, 0, 10)));
    for (auto& x : p) x = tg::random_rational(rng, 50, 9);
    const EventualSeq x(p, tg::random_rational(rng, 50, 9));
    if (lim_star(f, x) != x.eventual()) ++bad;
    // shift invariance and positivity
    if (lim_star(f, nabla(x)) != lim_star(f, x)) ++bad;
    if (x.min_value() >= 0 && lim_star(f, x) < 0) ++bad;
    const EventualSeq y(p, abs(x.eventual()));
    if (lim_star(f, y) < 0) ++bad;
  }
  std::vector<double> alt(1000);
  for (std::size_t n = 0; n < alt.size(); ++n) alt[n] = n % 2 == 0 ? 1.0 : -1.0;
  const LimStarSample s = lim_star(TruncatedSeries({0.5, 0.5}), alt, kLimStarTol);
  const bool alt_ok = s.exists && std::abs(s.value) <= kLimStarTol;
  return {bad == 0 && alt_ok, std::to_string(bad) + " exact mismatches, lim* of (-1)^n = " + fmt("%.1e", s.value)};
}

Outcome c10_model() {
  tg::Rng rng(110);
  double worst_theta = 0.0, worst_det = 0.0, worst_int = 0.0, worst_id = 0.0;
  int scanned = 0;
  const std::vector<cplx> zs{cplx(0.0), cplx(0.5, 0.0), cplx(-0.3, 0.6), cplx(0.1, -0.9), cplx(0.7, 0.6)};
  for (int i = 0; i < 30; ++i) {
    const tg::Member mem = tg::random_member(rng, 8);
    const OperatorMatrix T(mem.T);
    const RenormModel m = build_renorm(T, mem.alpha);
    const AdmissibilityReport adm = check_admissible(mem.alpha, false);
    const double scale = std::max(1.0, std::pow(T.power_bound(16), 2));
    worst_id = std::max(worst_id, defect_identity_residual(T, adm) / scale);
    const Vec h = tg::gaussian(T.dim(), 1, rng).col(0);
    worst_int = std::max(worst_int, intertwining_residual(m, T, h, zs) / std::max(1.0, h.norm() * op_norm(m.D)));
    const CharFnContext ctx(m, T);
    if (ctx.empty() || !ctx.square()) continue;
    const DetScan d = det_bound_scan(m, T, 64, 0.95);
    worst_theta = std::max(worst_theta, d.max_theta_norm);
    worst_det = std::max(worst_det, d.max_det);
    ++scanned;
  }
  const bool pass = scanned > 0 && worst_theta <= 1 + kModelTol && worst_det <= 1 + kModelTol &&
                    worst_int <= kIntertwineTol && worst_id <= kModelTol;
  return {pass, std::to_string(scanned) + " scans, max |Theta| " + fmt("%.6f", worst_theta) + ", max |det| " +
                    fmt("%.6f", worst_det) + ", intertwining " + fmt("%.1e", worst_int) + ", defect identity " +
                    fmt("%.1e", worst_id)};
}

Outcome c11_nabla() {
  const auto t0 = Clock::now();
  tg::Rng rng(111);
  int bad = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<Rational> p(static_cast<std::size_t>(tg::uniform_int(rng, 0, 8)));
    for (auto& x : p) x = tg::random_rational(rng, 20, 7);
    const EventualSeq a(p, tg::random_rational(rng, 20, 7));
    if (!(nabla(nabla_minus(a)) == a)) ++bad;
    std::vector<double> fc(static_cast<std::size_t>(tg::uniform_int(rng, 1, 4))), gc(fc.size());
    for (auto& x : fc) x = tg::uniform_int(rng, -8, 8) / 8.0;
    for (auto& x : gc) x = tg::uniform_int(rng, -8, 8) / 8.0;
    const TruncatedSeries f(fc), g(gc);
    const EventualSeq lhs =
        shift_apply(f, shift_apply(g, a, ShiftDirection::backward).seq, ShiftDirection::backward).seq;
    if (!(lhs == shift_apply(series_mul(f, g), a, ShiftDirection::backward).seq)) ++bad;
  }
  // q(∇)a = b with roots of q in the disc: a_n -> b∞ / q(1)
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double r = tg::uniform(rng, -0.8, 0.8);
    const std::vector<double> q{-r, 1.0};
    const double binf = tg::uniform(rng, -2.0, 2.0);
    std::vector<double> b(40), c(40);
    double tail = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = tg::uniform(rng, 0.0, 1.0) * std::pow(0.7, static_cast<double>(n));
    for (std::size_t n = b.size(); n-- > 0;) {
      tail += c[n];
      b[n] = binf + tail;
    }
    const std::vector<double> init{tg::uniform(rng, -1.0, 1.0)};
    const std::vector<double> a = recurrence_solve(q, b, binf, init, 2000);
    worst = std::max(worst, std::abs(a.back() - binf / (1.0 - r)));
    // (1 - t) q(t) applied to a is c >= 0, and a has a limit
    const std::vector<double> Q{-r, 1.0 + r, -1.0};
    for (const double v : apply_backward(Q, a))
      if (v < -kNablaTol) ++bad;
    if (!lim_star(TruncatedSeries({1.0}), a, kNablaTol).exists) ++bad;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && worst <= kNablaTol && secs < 60.0,
          std::to_string(bad) + " failures, reconstruction error " + fmt("%.1e", worst) + ", " + fmt("%.2f s", secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 quadratic factor exactness", c1_quadratic_factor},
      {"C2 Wiener factorization certificates", c2_wiener_factorize},
      {"C3 renorm of the nilpotent witness", c3_nilpotent},
      {"C4 similarity on random members", c4_similarity},
      {"C5 annihilating polynomial", c5_annihilating},
      {"C6 quoted coefficients and inclusion", c6_quoted_coefficients},
      {"C7 counterexample shift", c7_counterexample},
      {"C8 limit dichotomy", c8_limit_dichotomy},
      {"C9 lim* axioms", c9_lim_star},
      {"C10 model diagnostics", c10_model},
      {"C11 nabla calculus", c11_nabla},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  %-40s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
