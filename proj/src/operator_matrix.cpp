#include "opcalc/operator_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opcalc/error.hpp"

namespace opcalc {

namespace {

// Largest singular value through the Hermitian eigenproblem of P*P, which is
// much cheaper than an SVD for the small matrices used here.
double fast_norm(const Mat& p) {
  if (p.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(p.adjoint() * p, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

}  // namespace

OperatorMatrix::OperatorMatrix() : OperatorMatrix(Mat(0, 0)) {}

OperatorMatrix::OperatorMatrix(Mat entries)
    : m_(std::move(entries)), cache_(std::make_shared<Cache>()) {
  if (m_.rows() != m_.cols()) fail(ErrorKind::input, "operator matrix must be square");
  if (!m_.allFinite()) fail(ErrorKind::input, "operator matrix has non-finite entries");
}

OperatorMatrix OperatorMatrix::identity(Eigen::Index d) { return OperatorMatrix(Mat::Identity(d, d)); }

OperatorMatrix OperatorMatrix::zero(Eigen::Index d) { return OperatorMatrix(Mat::Zero(d, d)); }

void OperatorMatrix::extend(Cache& c, std::size_t n) const {
  if (c.norms.empty()) {
    c.norms.push_back(dim() > 0 ? 1.0 : 0.0);
    c.direction = Mat::Identity(dim(), dim());
  }
  while (c.norms.size() <= n) {
    if (c.overflow) {
      c.norms.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    Mat p = m_ * c.direction;
    const double s = fast_norm(p);
    if (s == 0.0) {
      c.direction = Mat::Zero(dim(), dim());
      c.norms.push_back(0.0);
      continue;
    }
    c.direction = p / s;
    c.log_scale += std::log(s);
    if (c.log_scale > 700.0) {
      c.overflow = true;
      c.norms.push_back(std::numeric_limits<double>::infinity());
    } else {
      c.norms.push_back(std::exp(c.log_scale));
    }
  }
}

double OperatorMatrix::power_norm(std::size_t n) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  extend(*cache_, n);
  return cache_->norms[n];
}

std::vector<double> OperatorMatrix::power_norms(std::size_t horizon) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  extend(*cache_, horizon);
  return {cache_->norms.begin(), cache_->norms.begin() + static_cast<std::ptrdiff_t>(horizon + 1)};
}

double OperatorMatrix::power_bound(std::size_t horizon) const {
  const auto n = power_norms(horizon);
  return *std::max_element(n.begin(), n.end());
}

Vec OperatorMatrix::eigenvalues() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->has_eigs) {
    if (dim() == 0) {
      cache_->eigs = Vec(0);
    } else {
      Eigen::ComplexEigenSolver<Mat> es(m_, false);
      if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigenvalue solve failed");
      cache_->eigs = es.eigenvalues();
    }
    cache_->has_eigs = true;
  }
  return cache_->eigs;
}

SpectralRadius OperatorMatrix::spectral_radius(std::size_t horizon) const {
  SpectralRadius r;
  const Vec ev = eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) r.estimate = std::max(r.estimate, std::abs(ev(i)));
  const auto norms = power_norms(std::max<std::size_t>(horizon, 1));
  r.upper_bound = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < norms.size(); ++n)
    r.upper_bound = std::min(r.upper_bound, std::pow(norms[n], 1.0 / static_cast<double>(n)));
  return r;
}

}  // namespace opcalc
