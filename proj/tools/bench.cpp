// Timing comparison between the serial and the OpenMP lattice-point counting
// kernels on random positive definite Gram matrices.  The parallel kernel
// splits on the top-level coordinate, so its counts must match the serial
// walker bit for bit; this binary doubles as a quick sanity run.

#include <chrono>
#include <cstdio>
#include <random>

#include <Eigen/Dense>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "hnpoly/enumeration.hpp"

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
#endif
}

Eigen::MatrixXd random_gram(int r, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd a(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) a(i, j) = gauss(rng);
  return a.transpose() * a + 0.05 * Eigen::MatrixXd::Identity(r, r);
}

}  // namespace

int main() {
  std::mt19937_64 rng(0xb0a710adULL);
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns use the serial walker\n");
#endif
  std::printf("%4s %10s %14s %12s %12s %8s\n", "rank", "bound", "count", "serial[s]",
              "parallel[s]", "speedup");

  hnpoly::EnumBudget budget;
  budget.max_nodes = 400'000'000;
  for (int r : {6, 8, 10}) {
    Eigen::MatrixXd g = random_gram(r, rng);
    // Scale the bound so the ball holds roughly 10^5..10^7 points.
    double bound = 2.4 * r * std::pow(g.determinant(), 1.0 / r);
    double t0 = now();
    hnpoly::CountResult serial = hnpoly::count_short_vectors_serial(g, bound, budget);
    double t1 = now();
    hnpoly::CountResult parallel = hnpoly::count_short_vectors_parallel(g, bound, budget);
    double t2 = now();
    if (serial.count != parallel.count) {
      std::printf("MISMATCH at rank %d: serial %llu vs parallel %llu\n", r,
                  static_cast<unsigned long long>(serial.count),
                  static_cast<unsigned long long>(parallel.count));
      return 1;
    }
    std::printf("%4d %10.2f %14llu %12.4f %12.4f %8.2f\n", r, bound,
                static_cast<unsigned long long>(serial.count), t1 - t0, t2 - t1,
                (t2 - t1) > 0 ? (t1 - t0) / (t2 - t1) : 0.0);
  }
  return 0;
}
