#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnpoly {

/// Thrown when a computation would exceed its resource budget.  Budgets trip
/// before any wrong answer can be produced; callers either enlarge the
/// budget or accept the partial result carried by the specific error type.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct EnumBudget {
  std::uint64_t max_nodes = 50'000'000;  // visited search-tree nodes
  int max_rank = 12;                     // refuse enumeration beyond this rank
};

struct CountResult {
  std::uint64_t count{0};  // lattice points with Q(v) <= bound, zero included
  double min_nonzero = std::numeric_limits<double>::infinity();  // min Q over counted v != 0
  std::uint64_t nodes{0};
  std::uint64_t boundary{0};  // points certified exactly at the boundary slack
};

/// Counts integer vectors v with v^T G v <= bound for a symmetric positive
/// definite G.  Boundary cases within 1e-9 * max(1,bound) of the threshold
/// are re-decided in exact rational arithmetic over the binary values of G,
/// so the returned count is exact for the matrix as stored.
CountResult count_short_vectors_serial(const Eigen::MatrixXd& gram, double bound,
                                       const EnumBudget& budget = {});

/// Same contract as the serial kernel, parallelized with OpenMP over the
/// top-level coordinate of the search tree.  The count is an integer sum
/// and min-reduction, so the result is independent of the schedule.
CountResult count_short_vectors_parallel(const Eigen::MatrixXd& gram, double bound,
                                         const EnumBudget& budget = {});

/// Dispatches to the parallel kernel when OpenMP is available.
CountResult count_short_vectors(const Eigen::MatrixXd& gram, double bound,
                                const EnumBudget& budget = {});

/// Lists all nonzero integer vectors with v^T G v <= bound, one
/// representative per {v,-v} pair (the highest-index nonzero coordinate is
/// positive).  Deterministic lexicographic order; intentionally serial so
/// downstream flag construction is reproducible.
std::vector<std::vector<long long>> enumerate_short_vectors(const Eigen::MatrixXd& gram,
                                                            double bound,
                                                            const EnumBudget& budget = {});

}  // namespace hnpoly
