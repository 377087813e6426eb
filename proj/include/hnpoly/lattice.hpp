#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "hnpoly/enumeration.hpp"
#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

namespace hnpoly {

/// Free Z-module of finite rank with a Euclidean metric on its real fiber,
/// presented by the Gram matrix of a basis.  `log_index` is the logarithm of
/// the index of the presented sublattice inside the actual module; 0 means
/// the basis generates the module itself.
class HermitianLattice {
 public:
  HermitianLattice(Eigen::MatrixXd gram, double log_index = 0.0);

  /// Rank-1 module with the metric scaled so its degree is exactly `a`.
  static HermitianLattice twist_line(double a);

  int rank() const { return static_cast<int>(gram_.rows()); }
  const Eigen::MatrixXd& gram() const { return gram_; }
  double log_index() const { return log_index_; }

  /// log_index - (1/2) log det(gram).
  double degree() const { return log_index_ - 0.5 * log_det_gram_; }
  double slope() const { return degree() / rank(); }
  double log_det_gram() const { return log_det_gram_; }

  /// Tensor with the rank-1 twist of degree a: multiplies every squared
  /// norm by exp(-2a), hence adds a * rank to the degree.
  HermitianLattice twisted(double a) const;

 private:
  Eigen::MatrixXd gram_;
  double log_index_{0.0};
  double log_det_gram_{0.0};
};

/// log of the number of module elements of squared norm <= 1 (the zero
/// element counts, so the value is >= 0).  Exact integer enumeration;
/// requires a basis presentation (log_index == 0) and rank within the
/// enumeration limit of the budget.
double h0(const HermitianLattice& e, const EnumBudget& budget = {});

struct HnVertex {
  int rank{0};
  double degree{0.0};

  friend bool operator==(const HnVertex&, const HnVertex&) = default;
};

struct SearchOptions {
  /// Squared-norm radius for the generating-vector search; if unset the
  /// default bound rank * det(gram)^(1/rank) * 2^rank is used, which is the
  /// radius the implementation certifies for rank <= 4.
  std::optional<double> search_bound;
  EnumBudget enum_budget{};
  std::uint64_t max_subspaces = 200'000;
};

/// Upper concave hull of (rank F, degree F) over the saturated submodules
/// spanned by short vectors, together with the canonical flag read off the
/// hull vertices.
struct HnPolygonResult {
  std::vector<HnVertex> vertices;  // hull breakpoints, (0,0) first, (rank, degree) last
  std::vector<HnVertex> flag;      // vertices without the origin, increasing rank
  bool certified{false};
  std::uint64_t subspaces_explored{0};
  double search_bound{0.0};

  double mu_max() const;           // slope of the leftmost hull segment
  double positive_degree() const;  // max degree over the hull, >= 0
  /// Slope measure: atom at each successive hull slope with mass
  /// (rank step)/rank; exact rational masses.
  AtomicMeasure slope_measure() const;
  /// polygon_of(slope_measure()), the hull rescaled to [0,1] x (1/rank).
  Polygon normalized_polygon() const;
};

/// Carries the partial hull when a search budget trips.
class HnBudgetError : public BudgetError {
 public:
  HnBudgetError(const std::string& what, HnPolygonResult partial)
      : BudgetError(what), partial_(std::move(partial)) {}
  const HnPolygonResult& partial() const { return partial_; }

 private:
  HnPolygonResult partial_;
};

double default_search_bound(const HermitianLattice& e);

HnPolygonResult hn_polygon(const HermitianLattice& e, const SearchOptions& opts = {});

/// Max of the destabilizing hull over [0, rank]; equals the degree of the
/// largest flag member with nonnegative successive slopes.
double positive_degree(const HermitianLattice& e, const SearchOptions& opts = {});

struct H0DegPlusReport {
  double h0{0.0};
  double deg_plus{0.0};
  double gap{0.0};  // |h0 - deg_plus|
};

H0DegPlusReport h0_vs_degplus(const HermitianLattice& e, const SearchOptions& opts = {});

/// Smallest squared norm of a nonzero element (exact enumeration below the
/// smallest diagonal Gram entry).
double first_minimum(const HermitianLattice& e, const EnumBudget& budget = {});

/// Integer-matrix map between two metrized modules; `matrix` has
/// target.rank() rows and source.rank() columns.
struct LatticeMap {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> matrix;
  HermitianLattice source;
  HermitianLattice target;
};

/// Height of a nonzero map: sum over all places of the log operator norm.
/// The finite part is -log gcd(entries); the archimedean part is the log of
/// the largest singular value in the two metrics.
double map_height(const LatticeMap& phi);

}  // namespace hnpoly
