// Serial vs OpenMP timings for the hereditary sum and the characteristic
// function grid scan.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "opcalc/kernels.hpp"
#include "opcalc/model.hpp"

using namespace opcalc;

namespace {

template <class Fn>
double best_ms(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

Mat random_contraction(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  return a * (0.95 / op_norm(a));
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240611);
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("hereditary sum  f_n = 2^-n/n!-ish, B = I\n");
  std::printf("%6s %8s %12s %12s %9s %12s\n", "dim", "terms", "serial ms", "parallel ms", "speedup", "max diff");
  for (const Eigen::Index d : {4, 12, 32, 64}) {
    for (const std::size_t terms : {256UL, 2048UL}) {
      const Mat T = random_contraction(d, rng);
      std::vector<double> f(terms);
      for (std::size_t n = 0; n < terms; ++n) f[n] = 1.0 / (1.0 + static_cast<double>(n * n));
      const Mat B = Mat::Identity(d, d);
      Mat s, p;
      const double ts = best_ms(3, [&] { s = kernels::hereditary_sum_serial(f, T, B); });
      const double tp = best_ms(3, [&] { p = kernels::hereditary_sum_parallel(f, T, B); });
      std::printf("%6ld %8zu %12.3f %12.3f %9.2f %12.2e\n", static_cast<long>(d), terms, ts, tp, ts / tp,
                  (s - p).cwiseAbs().maxCoeff());
    }
  }

  std::printf("\ncharacteristic function scan, nilpotent-plus-contraction members\n");
  std::printf("%6s %6s %12s %12s %9s\n", "dim", "grid", "serial ms", "parallel ms", "speedup");
  for (const Eigen::Index d : {4, 8, 12}) {
    const OperatorMatrix T(random_contraction(d, rng));
    const RenormModel m = build_renorm(T, TruncatedSeries({1.0, -1.0}));
    for (const std::size_t grid : {32UL, 64UL}) {
      const double ts = best_ms(2, [&] { (void)det_bound_scan_serial(m, T, grid, 0.95); });
      const double tp = best_ms(2, [&] { (void)det_bound_scan(m, T, grid, 0.95); });
      std::printf("%6ld %6zu %12.3f %12.3f %9.2f\n", static_cast<long>(d), grid, ts, tp, ts / tp);
    }
  }
  return 0;
}
