#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hnpoly/rational.hpp"

namespace hnpoly {

/// One atom of a finitely supported measure: a real position carrying an
/// exact rational mass.  Positions are doubles on purpose (they come from
/// logarithms of norms); masses stay exact because they are ratios of ranks.
struct Atom {
  double position{0.0};
  Rational mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported measure on the real line with total mass <= 1.
/// Atoms are kept sorted by position, merged exactly on position equality,
/// and zero-mass atoms are dropped, so equality of measures is equality of
/// the atom vectors.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;  // the zero measure

  static AtomicMeasure dirac(double position);
  /// Sorts, merges equal positions, drops zero masses, and validates
  /// (masses > 0 before merging may cancel is impossible: masses are >= 0;
  /// negative masses and total mass > 1 are rejected).
  static AtomicMeasure from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rational& total_mass() const { return total_; }
  bool is_zero() const { return atoms_.empty(); }
  bool is_probability() const { return total_ == Rational(1); }
  std::size_t size() const { return atoms_.size(); }

  double min_position() const;
  double max_position() const;
  /// First moment, i.e. the integral of x.
  double mean() const;
  /// Mass of the open right tail ]x, +inf[ (exact).
  Rational tail_mass(double x) const;

  friend bool operator==(const AtomicMeasure&, const AtomicMeasure&) = default;

 private:
  std::vector<Atom> atoms_;
  Rational total_;
};

/// Pushforward along x -> x + a (shifts every atom to the right by a).
AtomicMeasure translate(const AtomicMeasure& nu, double a);

/// Pushforward along x -> eps * x for eps > 0.
AtomicMeasure dilate(const AtomicMeasure& nu, double eps);

/// Collapses the mass of ]-inf, alpha[ onto a single atom at alpha; the
/// part on [alpha, +inf[ is untouched.  Requires a probability measure.
AtomicMeasure truncate(const AtomicMeasure& nu, double alpha);

/// Convex-ish combination sum_i w_i * nu_i with exact rational weights
/// w_i >= 0 and total resulting mass <= 1.
AtomicMeasure mix(std::span<const std::pair<Rational, AtomicMeasure>> parts);

/// Stochastic order: nu1 dominates nu2 iff nu1(]x,inf[) >= nu2(]x,inf[) for
/// every real x.  Both measures must be probabilities.  Decided exactly by
/// comparing rational tail masses at all atom positions and at midpoints
/// between consecutive positions of the union support.
bool dominates(const AtomicMeasure& nu1, const AtomicMeasure& nu2);

/// L1 distance between the two distribution functions; this metrizes the
/// vague convergence used throughout for compactly supported measures.
/// Both measures must be probabilities.
double w1_distance(const AtomicMeasure& nu1, const AtomicMeasure& nu2);

/// Integral of (x - a)_+ against nu.  Requires a probability measure.
double positive_part_integral(const AtomicMeasure& nu, double a);

}  // namespace hnpoly
