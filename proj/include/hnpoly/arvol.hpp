#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hnpoly/diagonal_count.hpp"
#include "hnpoly/measure.hpp"
#include "hnpoly/polygon.hpp"

namespace hnpoly {

/// Family of orthogonal lattices n -> diag(e^{-2 s_i(n)}) modelling the
/// pushforwards of the powers of a metrized line bundle on an arithmetic
/// surface (d = 2, rank n+1).  Slopes are kept in log scale throughout; the
/// Gram matrices are never materialized.
struct SectionFamily {
  enum class Kind { diagonal_toric, constant_twist, custom };

  Kind kind = Kind::constant_twist;
  ConcaveProfile phi = ConcaveProfile::constant(0.0);  // diagonal_toric profile
  double twist = 0.0;  // adds n*a to every slope at level n
  int power = 1;       // p-th power family: level n uses the base level p*n
  /// kind == custom: slopes_by_level[m-1] holds the base slopes at level m.
  std::vector<std::vector<double>> slopes_by_level;

  static SectionFamily diagonal_toric(ConcaveProfile profile, double twist = 0.0);
  static SectionFamily constant_twist(double a);
  static SectionFamily custom(std::vector<std::vector<double>> slopes_by_level,
                              double twist = 0.0);

  long long rank_at(long long n) const;
  /// Slopes s_i with gram(n) = diag(e^{-2 s_i}); includes twist and power.
  std::vector<double> slopes_at(long long n) const;
  SectionFamily twisted(double a) const;  // tensor by the line of degree a
  SectionFamily powered(int p) const;     // replace F by F^p
};

/// Rank-preserving diagonal perturbation: adds n*(b + psi(i/(r-1))) to the
/// i-th slope of the rank-r lattice at level n.
struct Perturbation {
  double b = 0.0;
  std::optional<ConcaveProfile> psi;

  bool trivial() const { return b == 0.0 && !psi.has_value(); }
  std::vector<double> apply(std::vector<double> slopes, long long n) const;
};

struct VolumeRow {
  long long n = 0;
  double h0 = 0.0;      // certified midpoint of log #(unit ball points)
  double h0_lo = 0.0;   // bracket (equal when exact)
  double h0_hi = 0.0;
  bool h0_exact = true;
  double deg_plus = 0.0;         // sum of positive slopes (exact for diagonals)
  double col_h0 = 0.0;           // h0 * 2 / n^2
  double col_deg_plus = 0.0;     // deg_plus * 2 / n^2
  double mu_plus_scaled = 0.0;   // (deg_plus / r_n) * 2 / n
  double mu_max_over_n = 0.0;    // max slope / n
};

struct LimitEstimate {
  double value = 0.0;
  double error = 0.0;  // |value(n_max) - value(n_max/2)|
};

struct VolumeReport {
  std::vector<VolumeRow> rows;  // halving grid n_max, n_max/2, ... ascending
  LimitEstimate volume;         // limit of col_h0
  LimitEstimate deg_plus_limit; // limit of col_deg_plus
  LimitEstimate mu_max_limit;   // limit of mu_max_over_n
  double vol_generic = 1.0;     // r_n * (d-1)! / n^{d-1} at n_max
  double max_bracket_gap = 0.0; // largest h0 hi-lo across rows
};

VolumeReport volume_experiment(const SectionFamily& f, long long n_max,
                               const DiagonalCountOptions& opts = {});

struct PolygonEstimate {
  Polygon polygon;        // polygon of the truncated scaled slope measure
  double error = 0.0;     // sup distance to the n_max/2 polygon
  AtomicMeasure measure;  // the scaled slope measure at n_max (untruncated)
};

/// Truncated asymptotic polygon at level n_max, truncation at alpha.
PolygonEstimate asymptotic_polygon(const SectionFamily& f, long long n_max,
                                   double alpha = 0.0);

struct ViaVolumesResult {
  Polygon polygon;
  /// (a, twisted volume / (d * vol_generic)) samples backing the envelope.
  std::vector<std::pair<double, double>> dual_samples;
};

/// Recovers the polygon from twisted volumes: each grid point a yields the
/// dual value G(a), and the polygon is the lower envelope of the lines
/// G(a) + a*t, re-anchored at the origin.
ViaVolumesResult polygon_via_volumes(const SectionFamily& f,
                                     const std::vector<double>& a_grid,
                                     long long n_max,
                                     const DiagonalCountOptions& opts = {});

enum class Verdict { yes, no, undetermined };

struct BignessCriterion {
  Verdict is_big = Verdict::undetermined;
  LimitEstimate volume;         // limit of col_h0
  LimitEstimate mu_max_over_n;  // limit of max slope / n
  /// volume/(d*vol_generic) <= mu_max limit + tolerance.
  bool lower_bound_check = false;
  /// Some level in the sampled grid has a nonzero vector of norm < 1.
  bool has_effective_section = false;
  long long first_effective_n = -1;
};

BignessCriterion bigness_criterion(const SectionFamily& f, long long n_max,
                                   double tolerance = 1e-6,
                                   const DiagonalCountOptions& opts = {});

struct ContinuityRow {
  int p = 0;
  double distance = 0.0;  // sup | (1/p) P^{(p alpha)}(F^p + pert) - P^{(alpha)}(F) |
};

std::vector<ContinuityRow> continuity_experiment(const SectionFamily& f,
                                                 const Perturbation& pert,
                                                 double alpha,
                                                 const std::vector<int>& p_list,
                                                 long long n_max);

}  // namespace hnpoly
