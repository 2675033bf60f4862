#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "opcalc/error.hpp"
#include "opcalc/polynomial.hpp"

namespace opcalc {

const char* to_string(RootClass c) noexcept {
  switch (c) {
    case RootClass::positive_real: return "positive-real";
    case RootClass::negative_real: return "negative-real";
    case RootClass::zero: return "zero";
    case RootClass::nonreal_pair: return "nonreal-pair";
  }
  return "unknown";
}

int ComplexRootSet::total_multiplicity() const {
  int m = 0;
  for (const auto& r : roots) m += r.multiplicity;
  return m;
}

std::vector<Root> ComplexRootSet::of_class(RootClass c) const {
  std::vector<Root> out;
  for (const auto& r : roots)
    if (r.cls == c) out.push_back(r);
  return out;
}

std::vector<Root> ComplexRootSet::upper_half() const {
  std::vector<Root> out;
  for (const auto& r : roots)
    if (r.cls == RootClass::nonreal_pair && r.value.imag() > 0) out.push_back(r);
  return out;
}

namespace {

using cld = std::complex<long double>;

double relative_residual(const RealPolynomial& q, std::complex<double> z) {
  long double scale = 0.0L;
  long double pw = 1.0L;
  const long double az = std::abs(cld(z));
  for (const auto& c : q.coeffs()) {
    scale += std::abs(static_cast<long double>(c.get_d())) * pw;
    pw *= az;
  }
  if (scale == 0.0L) return 0.0;
  return static_cast<double>(std::abs(q.eval(cld(z))) / scale);
}

// Roots of a square-free polynomial of degree >= 1.
std::vector<std::complex<double>> simple_roots(const RealPolynomial& q) {
  const int n = q.degree();
  std::vector<double> c = q.to_doubles();
  const double lead = c.back();
  if (n == 1) return {std::complex<double>(-c[0] / lead, 0.0)};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "companion eigensolve failed");

  const RealPolynomial dq = q.derivative();
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) {
    cld z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    // Newton polish in extended precision.
    for (int it = 0; it < 8; ++it) {
      const cld fz = q.eval(z);
      const cld dz = dq.eval(z);
      if (dz == cld(0.0L)) break;
      const cld step = fz / dz;
      z -= step;
      if (std::abs(step) <= 1e-19L * (1.0L + std::abs(z))) break;
    }
    out[i] = std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

}  // namespace

ComplexRootSet poly_roots(const RealPolynomial& q, double tol) {
  if (q.is_zero()) fail(ErrorKind::input, "roots of the zero polynomial");
  ComplexRootSet set;

  for (const auto& [factor, mult] : squarefree_decomposition(q)) {
    const std::size_t first = set.roots.size();
    std::vector<std::complex<double>> reals, uppers;
    int lowers = 0;
    for (auto z : simple_roots(factor)) {
      if (std::abs(z.imag()) < real_axis_threshold(z)) {
        reals.emplace_back(z.real(), 0.0);
      } else if (z.imag() > 0) {
        uppers.push_back(z);
      } else {
        ++lowers;
      }
    }
    if (lowers != static_cast<int>(uppers.size())) {
      std::ostringstream os;
      os << "conjugate pairing failed: " << uppers.size() << " upper vs " << lowers
         << " lower roots of " << factor.to_string();
      fail(ErrorKind::numerical, os.str());
    }
    for (auto z : reals) {
      RootClass cls = z.real() > 0 ? RootClass::positive_real
                                   : (z.real() < 0 ? RootClass::negative_real : RootClass::zero);
      set.roots.push_back({z, mult, cls});
    }
    for (auto z : uppers) {
      set.roots.push_back({z, mult, RootClass::nonreal_pair});
      set.roots.push_back({std::conj(z), mult, RootClass::nonreal_pair});
    }
    for (std::size_t i = first; i < set.roots.size(); ++i)
      set.residual = std::max(set.residual, relative_residual(factor, set.roots[i].value));
  }
  if (set.total_multiplicity() != q.degree())
    fail(ErrorKind::numerical, "root multiplicities do not add up to the degree");
  if (!(set.residual <= tol)) {
    std::ostringstream os;
    os << "root residual " << set.residual << " exceeds tolerance " << tol;
    fail(ErrorKind::numerical, os.str());
  }
  return set;
}

}  // namespace opcalc
