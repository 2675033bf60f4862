#include <doctest.h>

#include <cmath>

#include "opcalc/error.hpp"
#include "opcalc/renorm.hpp"
#include "support/generators.hpp"

using namespace opcalc;
namespace tg = opcalc::testing;

namespace {
OperatorMatrix nilpotent_witness() {
  Mat t = Mat::Zero(2, 2);
  t(0, 1) = 2.0;
  return OperatorMatrix(t);
}

double basis_leak(const Mat& basis, const Mat& target) {
  // distance of span(basis) from span(target)
  if (basis.cols() == 0) return 0.0;
  const Mat q = orthonormal_columns(target);
  return (basis - q * (q.adjoint() * basis)).norm();
}
}  // namespace

TEST_CASE("nilpotent witness: G = diag(1, 5)") {
  const RenormModel m = build_renorm(nilpotent_witness(), TruncatedSeries({1.0, 0.0, -1.0}));
  Mat want = Mat::Zero(2, 2);
  want(0, 0) = 1.0;
  want(1, 1) = 5.0;
  CHECK((m.gram - want).norm() <= 1e-9);
  CHECK(m.limit_term.norm() <= 1e-12);
  CHECK(m.contraction_norm == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(m.defect_residual <= 1e-12);
  const SimilarityCheck s = verify_similarity(m, nilpotent_witness());
  CHECK(s.contraction_norm <= 1.0);
  CHECK(s.min_eig_gram_defect >= -1e-12);
}

TEST_CASE("non-member is rejected") {
  CHECK_THROWS_AS(build_renorm(nilpotent_witness(), TruncatedSeries({1.0, -1.0})), Error);
}

TEST_CASE("skew diagonal example is renormed to a unitary") {
  Mat V(2, 2);
  V << 1.0, 1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0);
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  const OperatorMatrix T(Mat(V * d * V.inverse()));
  const TruncatedSeries alpha({1.0, 1.0, -1.0, -1.0});  // (1 - t)(1 + t)^2
  const RenormModel m = build_renorm(T, alpha);
  CHECK(m.D.norm() <= 1e-6);
  const Mat tt = m.W * T.mat() * m.W_inv;
  CHECK((tt.adjoint() * tt - Mat::Identity(2, 2)).norm() <= 1e-8);
  CHECK(m.contraction_norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("telescoping identity and contraction on random members") {
  tg::Rng rng(21);
  for (int i = 0; i < 25; ++i) {
    const tg::Member mem = tg::random_member(rng, 8);
    const OperatorMatrix T(mem.T);
    const RenormModel m = build_renorm(T, mem.alpha);
    const double scale = std::max(1.0, op_norm(m.gram));
    const Mat lhs = m.gram - T.adjoint() * m.gram * T.mat();
    CHECK((lhs - m.D * m.D).norm() <= 1e-8 * scale);
    CHECK(m.contraction_norm <= 1.0 + 1e-8);
    CHECK(m.gram_min_eigenvalue > 0.0);
    CHECK(std::abs(m.f.sum() - 1.0) <= 1e-9);
  }
}

TEST_CASE("equivalence constants of the new norm") {
  tg::Rng rng(22);
  for (int i = 0; i < 10; ++i) {
    const tg::Member mem = tg::random_member(rng, 6);
    const OperatorMatrix T(mem.T);
    const RenormModel m = build_renorm(T, mem.alpha);
    const double lo = min_eigenvalue(m.gram);
    const double hi = max_eigenvalue(m.gram);
    CHECK(lo > 0.0);
    for (int k = 0; k < 5; ++k) {
      const Mat h = tg::gaussian(T.dim(), 1, rng);
      const double q = (h.adjoint() * m.gram * h)(0, 0).real();
      const double n2 = h.squaredNorm();
      CHECK(q >= lo * n2 * (1 - 1e-12));
      CHECK(q <= hi * n2 * (1 + 1e-12));
    }
  }
}

TEST_CASE("abstract defect constants") {
  const OperatorMatrix T = nilpotent_witness();
  const Mat D = defect_operator(T, TruncatedSeries({1.0, 0.0, -1.0}));
  const DefectConstants k = abstract_defect_check(T, D, 256);
  CHECK(k.stabilized);
  CHECK(k.c == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k.C == doctest::Approx(5.0).epsilon(1e-9));

  tg::Rng rng(23);
  const OperatorMatrix C(tg::random_strict_contraction(4, rng, 0.6));
  const Mat D2 = defect_operator(C, TruncatedSeries({1.0, -1.0}));
  const DefectConstants k2 = abstract_defect_check(C, D2, 512);
  CHECK(k2.c > 0.0);
  CHECK(k2.C >= k2.c);
  // 1 - T*T telescopes: sum = I - lim T*^n T^n = I
  CHECK(k2.c == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k2.C == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("canonical decomposition of unitary plus strict contraction") {
  tg::Rng rng(24);
  for (int i = 0; i < 10; ++i) {
    const auto du = tg::uniform_int(rng, 1, 3);
    const auto dc = tg::uniform_int(rng, 1, 3);
    const Mat U = tg::random_unitary(du, rng);
    const Mat C = tg::random_strict_contraction(dc, rng, 0.7);
    const OperatorMatrix T(tg::direct_sum({U, C}));
    const RenormModel m = build_renorm(T, TruncatedSeries({1.0, -1.0}));
    const DecompositionResult d = canonical_decomposition(m, T);
    REQUIRE(d.H0_basis.cols() == du);
    CHECK(d.H1_basis.cols() == dc);
    Mat e = Mat::Zero(du + dc, du);
    e.topRows(du) = Mat::Identity(du, du);
    CHECK(basis_leak(d.H0_basis, e) <= 1e-6);
    CHECK(d.unitary_residual <= 1e-6);
    CHECK(d.invariance_residual <= 1e-6);
  }
}

TEST_CASE("decomposition of a unitary is everything") {
  tg::Rng rng(25);
  const OperatorMatrix U(tg::random_unitary(4, rng));
  const RenormModel m = build_renorm(U, TruncatedSeries({1.0, -1.0}));
  const DecompositionResult d = canonical_decomposition(m, U);
  CHECK(d.H0_basis.cols() == 4);
  CHECK(d.H1_basis.cols() == 0);
}

TEST_CASE("decomposition needs strong admissibility") {
  const OperatorMatrix T = nilpotent_witness();
  const RenormModel m = build_renorm(T, TruncatedSeries({1.0, 0.0, -1.0}));
  CHECK_THROWS_AS(canonical_decomposition(m, T), Error);
}

TEST_CASE("closed form limit agrees with iteration") {
  tg::Rng rng(26);
  for (int i = 0; i < 10; ++i) {
    Vec eigs;
    const Mat A = tg::random_unimodular_diagonalizable(3, rng, &eigs);
    const Mat X = tg::gaussian(3, 3, rng);
    const Mat H = X.adjoint() * X;
    Mat out;
    REQUIRE(limit_closed_form(OperatorMatrix(A), H, out));
    // unimodular spectrum: T*^n H T^n does not converge, but the Cesaro mean does
    Mat p = Mat::Identity(3, 3);
    Mat acc = Mat::Zero(3, 3);
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
      acc += p.adjoint() * H * p;
      p = p * A;
    }
    acc /= n;
    CHECK((acc - out).norm() <= 2e-2 * std::max(1.0, out.norm()));
  }
}
