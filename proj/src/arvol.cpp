#include "hnpoly/arvol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hnpoly {

SectionFamily SectionFamily::diagonal_toric(ConcaveProfile profile, double twist) {
  SectionFamily f;
  f.kind = Kind::diagonal_toric;
  f.phi = std::move(profile);
  f.twist = twist;
  return f;
}

SectionFamily SectionFamily::constant_twist(double a) {
  SectionFamily f;
  f.kind = Kind::constant_twist;
  f.twist = a;
  return f;
}

SectionFamily SectionFamily::custom(std::vector<std::vector<double>> slopes_by_level,
                                    double twist) {
  if (slopes_by_level.empty())
    throw std::invalid_argument("SectionFamily: custom family needs at least one level");
  for (const auto& s : slopes_by_level)
    if (s.empty()) throw std::invalid_argument("SectionFamily: custom levels must be nonempty");
  SectionFamily f;
  f.kind = Kind::custom;
  f.slopes_by_level = std::move(slopes_by_level);
  f.twist = twist;
  return f;
}

long long SectionFamily::rank_at(long long n) const {
  if (n < 1) throw std::invalid_argument("SectionFamily: level must be >= 1");
  long long m = static_cast<long long>(power) * n;
  if (kind == Kind::custom) {
    if (m > static_cast<long long>(slopes_by_level.size()))
      throw std::invalid_argument("SectionFamily: custom family has no level " + std::to_string(m));
    return static_cast<long long>(slopes_by_level[m - 1].size());
  }
  return m + 1;
}

std::vector<double> SectionFamily::slopes_at(long long n) const {
  if (n < 1) throw std::invalid_argument("SectionFamily: level must be >= 1");
  long long m = static_cast<long long>(power) * n;
  std::vector<double> s;
  switch (kind) {
    case Kind::constant_twist:
      s.assign(static_cast<std::size_t>(m + 1), 0.0);
      break;
    case Kind::diagonal_toric:
      s.resize(static_cast<std::size_t>(m + 1));
      for (long long i = 0; i <= m; ++i)
        s[i] = static_cast<double>(m) * phi(static_cast<double>(i) / static_cast<double>(m));
      break;
    case Kind::custom:
      if (m > static_cast<long long>(slopes_by_level.size()))
        throw std::invalid_argument("SectionFamily: custom family has no level " +
                                    std::to_string(m));
      s = slopes_by_level[m - 1];
      break;
  }
  if (twist != 0.0)
    for (double& v : s) v += static_cast<double>(m) * twist;
  return s;
}

SectionFamily SectionFamily::twisted(double a) const {
  SectionFamily f = *this;
  f.twist += a;
  return f;
}

SectionFamily SectionFamily::powered(int p) const {
  if (p < 1) throw std::invalid_argument("SectionFamily: power must be >= 1");
  SectionFamily f = *this;
  f.power *= p;
  return f;
}

std::vector<double> Perturbation::apply(std::vector<double> slopes, long long n) const {
  const std::size_t r = slopes.size();
  for (std::size_t i = 0; i < r; ++i) {
    double shift = b;
    if (psi) shift += (*psi)(r > 1 ? static_cast<double>(i) / static_cast<double>(r - 1) : 0.0);
    slopes[i] += static_cast<double>(n) * shift;
  }
  return slopes;
}

namespace {

AtomicMeasure scaled_slope_measure(const std::vector<double>& slopes, long long n) {
  const long long r = static_cast<long long>(slopes.size());
  std::vector<Atom> atoms;
  atoms.reserve(slopes.size());
  for (double s : slopes) atoms.push_back(Atom{s / static_cast<double>(n), Rational(1, r)});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

std::vector<long long> halving_grid(long long n_max) {
  if (n_max < 1) throw std::invalid_argument("arvol: n_max must be >= 1");
  std::set<long long> grid;
  for (long long n = n_max; n >= 1; n /= 2) grid.insert(n);
  return {grid.begin(), grid.end()};
}

VolumeRow make_row(const SectionFamily& f, long long n, const DiagonalCountOptions& opts) {
  std::vector<double> s = f.slopes_at(n);
  VolumeRow row;
  row.n = n;
  LogCount lc = h0_diagonal(s, opts);
  row.h0 = lc.value();
  row.h0_lo = lc.lo;
  row.h0_hi = lc.hi;
  row.h0_exact = lc.exact;
  double deg_plus = 0.0, mu_max = s.front();
  for (double v : s) {
    deg_plus += std::max(v, 0.0);
    mu_max = std::max(mu_max, v);
  }
  row.deg_plus = deg_plus;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  row.col_h0 = 2.0 * row.h0 / n2;
  row.col_deg_plus = 2.0 * deg_plus / n2;
  row.mu_plus_scaled = (deg_plus / static_cast<double>(s.size())) * 2.0 / static_cast<double>(n);
  row.mu_max_over_n = mu_max / static_cast<double>(n);
  return row;
}

LimitEstimate tail_limit(const std::vector<VolumeRow>& rows, long long n_max,
                         double VolumeRow::*col) {
  LimitEstimate est;
  const VolumeRow* last = nullptr;
  const VolumeRow* half = nullptr;
  for (const VolumeRow& r : rows) {
    if (r.n == n_max) last = &r;
    if (r.n == n_max / 2) half = &r;
  }
  est.value = last->*col;
  est.error = half ? std::abs(last->*col - half->*col) : 0.0;
  return est;
}

}  // namespace

VolumeReport volume_experiment(const SectionFamily& f, long long n_max,
                               const DiagonalCountOptions& opts) {
  std::vector<long long> ns = halving_grid(n_max);
  VolumeReport rep;
  rep.rows.resize(ns.size());
  std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(ns.size()); ++i) {
    try {
      rep.rows[i] = make_row(f, ns[i], opts);
    } catch (...) {
#pragma omp critical(hnpoly_arvol_err)
      if (!eptr) eptr = std::current_exception();
    }
  }
  if (eptr) std::rethrow_exception(eptr);

  rep.volume = tail_limit(rep.rows, n_max, &VolumeRow::col_h0);
  rep.deg_plus_limit = tail_limit(rep.rows, n_max, &VolumeRow::col_deg_plus);
  rep.mu_max_limit = tail_limit(rep.rows, n_max, &VolumeRow::mu_max_over_n);
  rep.vol_generic = static_cast<double>(f.rank_at(n_max)) / static_cast<double>(n_max);
  for (const VolumeRow& r : rep.rows)
    rep.max_bracket_gap = std::max(rep.max_bracket_gap, r.h0_hi - r.h0_lo);
  return rep;
}

PolygonEstimate asymptotic_polygon(const SectionFamily& f, long long n_max, double alpha) {
  PolygonEstimate est;
  est.measure = scaled_slope_measure(f.slopes_at(n_max), n_max);
  est.polygon = Polygon::from_measure(truncate(est.measure, alpha));
  long long half = std::max<long long>(1, n_max / 2);
  AtomicMeasure half_measure = scaled_slope_measure(f.slopes_at(half), half);
  Polygon half_polygon = Polygon::from_measure(truncate(half_measure, alpha));
  est.error = sup_distance(est.polygon, half_polygon);
  return est;
}

ViaVolumesResult polygon_via_volumes(const SectionFamily& f, const std::vector<double>& a_grid,
                                     long long n_max, const DiagonalCountOptions& opts) {
  if (a_grid.empty()) throw std::invalid_argument("arvol: a_grid must be nonempty");
  ViaVolumesResult res;
  const double vol_generic = static_cast<double>(f.rank_at(n_max)) / static_cast<double>(n_max);
  const double n2 = static_cast<double>(n_max) * static_cast<double>(n_max);

  std::vector<double> as(a_grid);
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  std::vector<double> g(as.size());
  std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(as.size()); ++i) {
    try {
      LogCount lc = h0_diagonal(f.twisted(-as[i]).slopes_at(n_max), opts);
      g[i] = (2.0 * lc.value() / n2) / (2.0 * vol_generic);
    } catch (...) {
#pragma omp critical(hnpoly_arvol_err2)
      if (!eptr) eptr = std::current_exception();
    }
  }
  if (eptr) std::rethrow_exception(eptr);
  for (std::size_t i = 0; i < as.size(); ++i) res.dual_samples.emplace_back(as[i], g[i]);

  // Lower envelope of the lines t -> g_i + a_i t on [0,1]: evaluate at all
  // pairwise intersections (the envelope is piecewise linear with breakpoints
  // among them), then re-anchor at the origin.
  auto env = [&](double t) {
    double best = g[0] + as[0] * t;
    for (std::size_t i = 1; i < as.size(); ++i) best = std::min(best, g[i] + as[i] * t);
    return best;
  };
  std::set<double> ts{0.0, 1.0};
  for (std::size_t i = 0; i < as.size(); ++i)
    for (std::size_t j = i + 1; j < as.size(); ++j) {
      if (as[i] == as[j]) continue;
      double t = (g[i] - g[j]) / (as[j] - as[i]);
      if (t > 0.0 && t < 1.0) ts.insert(t);
    }
  const double base = env(0.0);
  std::vector<PolygonPoint> pts;
  Rational prev(-1);
  for (double t : ts) {
    Rational rt = (t == 1.0) ? Rational(1) : Rational::dyadic(t, 40);
    if (!(prev < rt)) continue;  // dyadic snapping collapsed two breakpoints
    prev = rt;
    pts.push_back(PolygonPoint{rt, env(t) - base});
  }
  res.polygon = Polygon::from_points(std::move(pts));
  return res;
}

BignessCriterion bigness_criterion(const SectionFamily& f, long long n_max, double tolerance,
                                   const DiagonalCountOptions& opts) {
  VolumeReport rep = volume_experiment(f, n_max, opts);
  BignessCriterion crit;
  crit.volume = rep.volume;
  crit.mu_max_over_n = rep.mu_max_limit;
  const double est = rep.volume.value, err = rep.volume.error;
  if (est - err > 1e-9)
    crit.is_big = Verdict::yes;
  else if (est + err <= 1e-9)
    crit.is_big = Verdict::no;
  else
    crit.is_big = Verdict::undetermined;
  crit.lower_bound_check =
      rep.volume.value / (2.0 * rep.vol_generic) <= rep.mu_max_limit.value + tolerance;
  for (const VolumeRow& r : rep.rows) {
    if (r.mu_max_over_n * static_cast<double>(r.n) > 0.0) {
      crit.has_effective_section = true;
      crit.first_effective_n = r.n;
      break;  // rows are ascending in n
    }
  }
  return crit;
}

std::vector<ContinuityRow> continuity_experiment(const SectionFamily& f, const Perturbation& pert,
                                                 double alpha, const std::vector<int>& p_list,
                                                 long long n_max) {
  if (p_list.empty()) throw std::invalid_argument("arvol: p_list must be nonempty");
  Polygon base = asymptotic_polygon(f, n_max, alpha).polygon;
  std::vector<ContinuityRow> rows;
  rows.reserve(p_list.size());
  for (int p : p_list) {
    if (p < 1) throw std::invalid_argument("arvol: powers must be >= 1");
    std::vector<double> slopes = pert.apply(f.powered(p).slopes_at(n_max), n_max);
    AtomicMeasure meas = scaled_slope_measure(slopes, n_max);
    Polygon poly = Polygon::from_measure(truncate(meas, static_cast<double>(p) * alpha))
                       .scaled(1.0 / static_cast<double>(p));
    rows.push_back(ContinuityRow{p, sup_distance(poly, base)});
  }
  return rows;
}

}  // namespace hnpoly
