#pragma once

#include <cstdint>
#include <vector>

namespace hnpoly {

/// Tuning knobs for the diagonal counting kernel.
struct DiagonalCountOptions {
  /// Switch to certified bounds when the box estimate exceeds this many points.
  std::uint64_t exact_budget = 2'000'000;
  /// Recursion nodes allowed for exact enumeration.
  std::uint64_t node_budget = 50'000'000;
  /// Cap on the enumerated box of "wide" coordinates in the split lower bound.
  std::uint64_t split_budget = 1'000'000;
  /// Target total Gram mass of the non-enumerated coordinates.
  double rest_mass = 1e-3;
};

/// Certified bracket for log #(lattice points).  When `exact` is set the
/// count was enumerated and lo == hi.
struct LogCount {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = true;
  double value() const { return exact ? lo : 0.5 * (lo + hi); }
  double gap() const { return hi - lo; }
};

/// log #{v in Z^r : sum_i exp(-2*slopes[i]) v_i^2 <= 1} for the orthogonal
/// lattice with the given slopes.  Exact when feasible, otherwise a certified
/// sandwich: a rounding/volume lower bound after splitting off the wide
/// coordinates, and a theta-series upper bound, all carried in log scale so
/// slopes of order +-10^3 are fine.
LogCount h0_diagonal(const std::vector<double>& slopes,
                     const DiagonalCountOptions& opts = {});

}  // namespace hnpoly
