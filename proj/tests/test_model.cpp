#include <doctest.h>

#include <cmath>

#include "opcalc/error.hpp"
#include "opcalc/model.hpp"
#include "support/generators.hpp"

using namespace opcalc;
namespace tg = opcalc::testing;

namespace {
OperatorMatrix nilpotent_witness() {
  Mat t = Mat::Zero(2, 2);
  t(0, 1) = 2.0;
  return OperatorMatrix(t);
}
}  // namespace

TEST_CASE("scalar contraction has the Moebius characteristic function") {
  const OperatorMatrix T(Mat::Constant(1, 1, 0.5));
  const RenormModel m = build_renorm(T, TruncatedSeries({1.0, -1.0}));
  CHECK(std::abs(m.W(0, 0) - 1.0) <= 1e-9);
  const CharFnContext ctx(m, T);
  REQUIRE(ctx.square());
  for (const cplx z : {cplx(0.0), cplx(0.3, 0.1), cplx(-0.7, 0.2), cplx(0.0, 0.95)}) {
    const CharFnSample s = ctx.eval(z);
    const cplx want = (z - 0.5) / (1.0 - z / 2.0);
    CHECK(std::abs(s.theta(0, 0)) == doctest::Approx(std::abs(want)).epsilon(1e-10));
    REQUIRE(s.det_abs.has_value());
    CHECK(*s.det_abs == doctest::Approx(std::abs(want)).epsilon(1e-10));
  }
  // |Θ| = 1 on the circle
  const CharFnSample b = ctx.eval(std::polar(1.0, 0.7));
  CHECK(b.theta_norm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("nilpotent witness") {
  const OperatorMatrix T = nilpotent_witness();
  const RenormModel m = build_renorm(T, TruncatedSeries({1.0, 0.0, -1.0}));
  const CharFnContext ctx(m, T);
  CHECK(ctx.defect_dim() == 2);
  CHECK(ctx.defect_star_dim() == 2);
  CHECK(ctx.identification_residual() <= 1e-10);
  CHECK(ctx.eval(cplx(0.0)).theta_norm == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-10));

  Vec h = Vec::Zero(2);
  h(1) = 1.0;
  const std::vector<Vec> c = analytic_embedding_coeffs(m, T, h, 4);
  REQUIRE(c.size() == 5);
  CHECK((c[0] - h).norm() <= 1e-12);
  Vec e1 = Vec::Zero(2);
  e1(0) = 2.0;
  CHECK((c[1] - e1).norm() <= 1e-12);
  for (std::size_t n = 2; n < c.size(); ++n) CHECK(c[n].norm() <= 1e-12);

  const NormIdentity id = embedding_norm_identity(m, T, h, 64);
  CHECK(id.gram_side == doctest::Approx(5.0));
  CHECK(id.series_side == doctest::Approx(5.0));
}

TEST_CASE("embedding identities on random members") {
  tg::Rng rng(31);
  const std::vector<cplx> zs{cplx(0.0), cplx(0.4, -0.2), cplx(-0.5, 0.5), cplx(0.1, 0.8)};
  for (int i = 0; i < 15; ++i) {
    const tg::Member mem = tg::random_member(rng, 6);
    const OperatorMatrix T(mem.T);
    const RenormModel m = build_renorm(T, mem.alpha);
    const Mat hm = tg::gaussian(T.dim(), 1, rng);
    const Vec h = hm.col(0);
    CHECK(intertwining_residual(m, T, h, zs) <= 1e-9 * std::max(1.0, h.norm() * op_norm(m.D)));
    const NormIdentity id = embedding_norm_identity(m, T, h, 2048);
    CHECK(id.residual <= 1e-7);
    // Taylor coefficients reproduce the resolvent
    const std::vector<Vec> c = analytic_embedding_coeffs(m, T, h, 200);
    const cplx z(0.2, 0.1);
    Vec acc = Vec::Zero(T.dim());
    cplx p(1.0);
    for (const Vec& v : c) {
      acc += p * v;
      p *= z;
    }
    CHECK((acc - embedding_eval(m, T, h, z)).norm() <= 1e-8 * std::max(1.0, acc.norm()));
  }
}

TEST_CASE("defect identity alpha = alpha tilde times (1 - t)") {
  tg::Rng rng(32);
  for (int i = 0; i < 20; ++i) {
    const tg::Member mem = tg::random_member(rng, 8);
    const OperatorMatrix T(mem.T);
    const AdmissibilityReport adm = check_admissible(mem.alpha, false);
    CHECK(defect_identity_residual(T, adm) <= 1e-10 * std::max(1.0, std::pow(T.power_bound(16), 2)));
  }
}

TEST_CASE("determinant bound scan") {
  tg::Rng rng(33);
  for (int i = 0; i < 8; ++i) {
    const OperatorMatrix T(tg::random_strict_contraction(tg::uniform_int(rng, 1, 4), rng, 0.8));
    const RenormModel m = build_renorm(T, TruncatedSeries({1.0, -1.0}));
    const DetScan p = det_bound_scan(m, T, 16);
    const DetScan s = det_bound_scan_serial(m, T, 16);
    CHECK(p.samples == 256);
    CHECK(p.max_det <= 1.0 + 1e-9);
    CHECK(p.max_theta_norm <= 1.0 + 1e-9);
    CHECK(p.max_det == doctest::Approx(s.max_det).epsilon(1e-12));
    CHECK(p.max_theta_norm == doctest::Approx(s.max_theta_norm).epsilon(1e-12));
  }
  // a unitary has no defect
  const OperatorMatrix U(tg::random_unitary(3, rng));
  const RenormModel mu = build_renorm(U, TruncatedSeries({1.0, -1.0}));
  CHECK_THROWS_AS(det_bound_scan(mu, U, 8), Error);
}
