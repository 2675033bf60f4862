#include "opcalc/kernels.hpp"

namespace opcalc::kernels {

Mat hereditary_sum_serial(std::span<const double> f, const Mat& T, const Mat& B) {
  Mat x = Mat::Zero(B.rows(), B.cols());
  const Mat Ts = T.adjoint();
  for (std::size_t n = f.size(); n-- > 0;) x = f[n] * B + Ts * x * T;
  return x;
}

Mat hereditary_sum_parallel(std::span<const double> f, const Mat& T, const Mat& B) {
  const std::size_t chunks = (f.size() + kChunk - 1) / kChunk;
  if (chunks <= 1) return hereditary_sum_serial(f, T, B);

  // T^{k * kChunk} for every chunk start
  std::vector<Mat> starts(chunks);
  starts[0] = Mat::Identity(T.rows(), T.cols());
  Mat step = Mat::Identity(T.rows(), T.cols());
  for (std::size_t i = 0; i < kChunk; ++i) step = step * T;
  for (std::size_t k = 1; k < chunks; ++k) starts[k] = starts[k - 1] * step;

  std::vector<Mat> partial(chunks);
  const long long nc = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < nc; ++k) {
    const std::size_t lo = static_cast<std::size_t>(k) * kChunk;
    const std::size_t len = std::min(kChunk, f.size() - lo);
    const Mat inner = hereditary_sum_serial(f.subspan(lo, len), T, B);
    const Mat& P = starts[static_cast<std::size_t>(k)];
    partial[static_cast<std::size_t>(k)] = P.adjoint() * inner * P;
  }
  Mat x = Mat::Zero(B.rows(), B.cols());
  for (const auto& p : partial) x += p;
  return x;
}

}  // namespace opcalc::kernels
