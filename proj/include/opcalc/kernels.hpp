#pragma once

// Hot loops with an OpenMP version and the plain serial version it is
// tested and benchmarked against. Both produce the same value up to
// floating-point reassociation; the parallel ones combine partial results in
// a fixed order so repeated runs are bit-identical.

#include <cstddef>
#include <span>
#include <vector>

#include "opcalc/linalg.hpp"

namespace opcalc::kernels {

/// Terms handled by one task in hereditary_sum_parallel.
inline constexpr std::size_t kChunk = 32;

/// sum_{n < f.size()} f_n T*^n B T^n by Horner's rule X <- f_n B + T* X T.
Mat hereditary_sum_serial(std::span<const double> f, const Mat& T, const Mat& B);

/// Same sum split into chunks of kChunk terms: each chunk is a Horner sum
/// conjugated by T^{start}, and the chunks are added in index order.
Mat hereditary_sum_parallel(std::span<const double> f, const Mat& T, const Mat& B);

/// out[i] = fn(i) for i < count.
template <class Fn>
std::vector<double> grid_map_serial(std::size_t count, Fn&& fn) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

template <class Fn>
std::vector<double> grid_map_parallel(std::size_t count, Fn&& fn) {
  std::vector<double> out(count);
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

}  // namespace opcalc::kernels
