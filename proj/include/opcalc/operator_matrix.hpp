#pragma once

// Dense complex d x d operator with lazily cached power norms.

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "opcalc/linalg.hpp"

namespace opcalc {

inline constexpr std::size_t kDefaultHorizon = 4096;

struct SpectralRadius {
  double estimate = 0.0;     // max |eigenvalue|
  double upper_bound = 0.0;  // min_n ||T^n||^{1/n} over the cached range
};

class OperatorMatrix {
 public:
  OperatorMatrix();
  explicit OperatorMatrix(Mat entries);

  static OperatorMatrix identity(Eigen::Index d);
  static OperatorMatrix zero(Eigen::Index d);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Mat& mat() const noexcept { return m_; }
  Mat adjoint() const { return m_.adjoint(); }

  /// ||T^n||, +inf once the norm overflows double range.
  double power_norm(std::size_t n) const;
  /// ||T^0||, ..., ||T^horizon||.
  std::vector<double> power_norms(std::size_t horizon) const;
  /// sup_{n <= horizon} ||T^n||
  double power_bound(std::size_t horizon) const;

  Vec eigenvalues() const;
  SpectralRadius spectral_radius(std::size_t horizon = 256) const;

 private:
  struct Cache {
    std::mutex mu;
    std::vector<double> norms;  // norms[n] = ||T^n||
    Mat direction;              // T^n / ||T^n|| for the last cached n
    double log_scale = 0.0;     // log ||T^n|| for the last cached n
    bool overflow = false;
    bool has_eigs = false;
    Vec eigs;
  };
  void extend(Cache& c, std::size_t n) const;

  Mat m_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace opcalc
