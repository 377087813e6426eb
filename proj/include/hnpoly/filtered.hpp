#pragma once

#include <vector>

#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

namespace hnpoly {

/// One jump of a decreasing exhaustive filtration: at parameter `jump` the
/// dimension drops by `drop`.
struct FiltrationStep {
  double jump{0.0};
  int drop{0};

  friend bool operator==(const FiltrationStep&, const FiltrationStep&) = default;
};

/// Finite-dimensional space with a decreasing real filtration, recorded as
/// pure jump data.  Jumps are strictly increasing and the drops sum to the
/// dimension.  dim == 0 is allowed and carries no steps.
class FilteredSpace {
 public:
  FilteredSpace() = default;  // zero space
  FilteredSpace(int dim, std::vector<FiltrationStep> steps);

  int dim() const { return dim_; }
  const std::vector<FiltrationStep>& steps() const { return steps_; }

  friend bool operator==(const FilteredSpace&, const FilteredSpace&) = default;

 private:
  int dim_{0};
  std::vector<FiltrationStep> steps_;
};

/// Jump measure: sum of (drop/dim) * delta_{jump}.  The zero space gives the
/// zero measure.
AtomicMeasure measure_of(const FilteredSpace& v);

struct LambdaInvariants {
  double lambda_min{0.0};   // smallest jump
  double lambda_max{0.0};   // largest jump
  double lambda_plus{0.0};  // max over [0,1] of the jump-measure polygon
};

/// Requires dim >= 1.
LambdaInvariants lambda_invariants(const FilteredSpace& v);

/// Checks the exact mixture identity for a short exact sequence
/// 0 -> sub -> v -> quot -> 0 of strictly compatible filtered spaces:
/// dim matches and measure_of(v) equals the rank-weighted mixture of the
/// sub/quotient measures, with exact rational masses.
bool exact_sequence_split(const FilteredSpace& v, const FilteredSpace& sub,
                          const FilteredSpace& quot);

}  // namespace hnpoly
