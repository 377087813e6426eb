#pragma once

#include <utility>
#include <vector>

#include "hnpoly/measure.hpp"
#include "hnpoly/rational.hpp"

namespace hnpoly {

struct PolygonPoint {
  Rational t;
  double value{0.0};

  friend bool operator==(const PolygonPoint&, const PolygonPoint&) = default;
};

/// Concave piecewise-linear function on [0,1] anchored at (0,0), stored by
/// its breakpoints with exact rational abscissae.  Slopes are strictly
/// decreasing from left to right (collinear points are merged on input).
class Polygon {
 public:
  /// Concave transform of a probability measure: segments of length m_i and
  /// slope x_i laid out in decreasing slope order, i.e. the integral of the
  /// decreasing rearrangement of the support.  The value at t = 1 is the
  /// left limit (the mean of the measure).
  static Polygon from_measure(const AtomicMeasure& nu);

  /// Validates and canonicalizes an explicit breakpoint list: first point
  /// (0,0), strictly increasing t reaching 1, concave (slopes may not
  /// increase beyond a 1e-9 relative slack, collinear pieces are merged).
  static Polygon from_points(std::vector<PolygonPoint> pts);

  const std::vector<PolygonPoint>& points() const { return pts_; }

  double value_at(const Rational& t) const;
  double value_at(double t) const;

  /// Maximum over [0,1] together with the smallest maximizing t.
  std::pair<Rational, double> max_value() const;

  /// Pointwise scaling by c > 0 (concavity is preserved).
  Polygon scaled(double c) const;

  /// Slopes of the segments, left to right (strictly decreasing).
  std::vector<double> slopes() const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<PolygonPoint> pts_;
};

/// Supremum distance over [0,1]; exact for piecewise-linear inputs because
/// the difference is affine between merged breakpoints.
double sup_distance(const Polygon& p, const Polygon& q);

/// The concave conjugate a -> max_t (P(t) - a t) of a polygon, as evaluable
/// descriptor.  Convex, decreasing, piecewise linear in a with knots at the
/// segment slopes of P; identically the integral of (x-a)_+ against any
/// measure whose polygon is P.
class LegendreDual {
 public:
  explicit LegendreDual(const Polygon& p);

  double at(double a) const;
  /// Knots (a_j, value) of the dual at the slope set of the polygon; between
  /// consecutive knots the dual is affine, above the largest slope it is 0,
  /// and below the smallest slope it has slope -1.
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

 private:
  std::vector<PolygonPoint> pts_;
  std::vector<std::pair<double, double>> knots_;
};

inline LegendreDual legendre_dual(const Polygon& p) { return LegendreDual(p); }

/// Concave piecewise-linear profile on [0,1] with free endpoints (no (0,0)
/// anchor); the weight profiles of the graded and family models.
class ConcaveProfile {
 public:
  static ConcaveProfile from_points(std::vector<std::pair<double, double>> pts);
  static ConcaveProfile constant(double c);
  /// Skips the concavity check (domain and ordering are still validated);
  /// for negative-control experiments that need a deliberately convex shape.
  static ConcaveProfile unchecked(std::vector<std::pair<double, double>> pts);

  double operator()(double t) const;
  double max_value() const;
  const std::vector<std::pair<double, double>>& points() const { return pts_; }

  friend bool operator==(const ConcaveProfile&, const ConcaveProfile&) = default;

 private:
  std::vector<std::pair<double, double>> pts_;
};

}  // namespace hnpoly
