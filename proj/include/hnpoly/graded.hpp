#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hnpoly/filtered.hpp"
#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

namespace hnpoly {

/// Sub-linear penalty allowed in the quasi-filtration inequality.
struct Penalty {
  enum class Kind { zero, log, sqrt };
  Kind kind = Kind::zero;
  double c = 0.0;

  double operator()(long long n) const;
};

/// Polynomial algebra on q generators, the i-th carrying filtration weight
/// weights[i]; the degree-n piece has the monomial basis and
/// lambda(x^a) = <a, weights>.
struct MonomialModel {
  std::vector<double> weights;
  Penalty f;
};

/// Degree-n piece has basis indexed by i in {0..n} with
/// lambda(e_{n,i}) = n * phi(i/n); multiplication adds indices.
struct ToricModel {
  ConcaveProfile phi;
};

using GradedModel = std::variant<MonomialModel, ToricModel>;

/// Filtered degree-n piece (unscaled jumps).  Monomial dimensions are
/// C(n+q-1, q-1), computed by grid-binned convolution rather than monomial
/// enumeration; throws BudgetError once the dimension exceeds dim_budget.
FilteredSpace graded_piece(const GradedModel& model, long long n,
                           std::uint64_t dim_budget = 1'000'000);

/// The scaled measure: jump measure of the degree-n piece with positions
/// divided by n.  Probability measure for every n >= 1.
AtomicMeasure graded_measure(const GradedModel& model, long long n,
                             std::uint64_t dim_budget = 1'000'000);

/// Exact limit of the scaled measures, discretized to `resolution` atoms:
/// pushforward of the uniform simplex measure under a -> <a, weights>
/// (monomial; weights must be pairwise distinct unless all equal) or of
/// Unif[0,1] under phi (toric).
AtomicMeasure limit_measure(const GradedModel& model, int resolution = 512);

struct LambdaRow {
  long long n;
  double lambda_max_over_n;
  double lambda_plus_over_n;
};

/// Rows for n = 1..n_max.
std::vector<LambdaRow> lambda_sequences(const GradedModel& model, long long n_max,
                                        std::uint64_t dim_budget = 1'000'000);

enum class Trend { positive, nonpositive, undetermined };

struct BignessReport {
  Trend lambda_max_positive = Trend::undetermined;
  Trend lambda_plus_positive = Trend::undetermined;
  double lambda_max_estimate = 0.0;
  double lambda_plus_estimate = 0.0;
  double lambda_max_error = 0.0;
  double lambda_plus_error = 0.0;
  /// False only if both trends are determined and disagree.
  bool consistent = true;
};

/// Tail test of both scaled sequences against `threshold`: estimate is the
/// value at n_max, the error bar the change from n_max/2.
BignessReport bigness_check(const GradedModel& model, long long n_max,
                            double threshold = 0.0,
                            std::uint64_t dim_budget = 1'000'000);

struct CountingBound {
  long long u_n;
  long long v_n;
  double ratio;
  double limit;
};

/// u_n = C(n - floor(beta*n/(alpha+beta)) + q - 1, q - 1), v_n = C(n+q-1, q-1),
/// limit = (alpha/(alpha+beta))^(q-1).  Requires q >= 2, alpha, beta > 0.
CountingBound counting_bound(int q, double alpha, double beta, long long n);

struct AuditReport {
  std::uint64_t pairs_checked = 0;
  std::uint64_t violations = 0;
  /// Smallest margin lambda(xy) - lambda(x) - lambda(y) + f(deg x) + f(deg y)
  /// seen; negative beyond tolerance counts as a violation.
  double worst_margin = 0.0;
  bool exhaustive = false;
};

/// Checks the superadditivity inequality on products of basis elements with
/// both factors of degree <= n_max: exhaustively when the pair count is at
/// most `samples`, otherwise on `samples` seeded random pairs.
AuditReport quasi_filtration_audit(const GradedModel& model, long long n_max,
                                   std::uint64_t samples = 200'000,
                                   std::uint64_t seed = 0);

}  // namespace hnpoly
