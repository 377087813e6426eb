#include "hnpoly/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hnpoly {

namespace {

double segment_slope(const PolygonPoint& a, const PolygonPoint& b) {
  return (b.value - a.value) / (b.t - a.t).to_double();
}

}  // namespace

Polygon Polygon::from_measure(const AtomicMeasure& nu) {
  if (!nu.is_probability())
    throw std::invalid_argument("Polygon::from_measure: probability measure required");
  Polygon p;
  p.pts_.reserve(nu.size() + 1);
  p.pts_.push_back(PolygonPoint{Rational(0), 0.0});
  Rational t;
  double v = 0.0;
  // Decreasing rearrangement: walk atoms from the largest position down.
  const auto& atoms = nu.atoms();
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    t += it->mass;
    v += it->mass.to_double() * it->position;
    p.pts_.push_back(PolygonPoint{t, v});
  }
  return p;
}

Polygon Polygon::from_points(std::vector<PolygonPoint> pts) {
  if (pts.size() < 2) throw std::invalid_argument("Polygon: need at least two breakpoints");
  if (!(pts.front().t == Rational(0)) || pts.front().value != 0.0)
    throw std::invalid_argument("Polygon: first breakpoint must be (0,0)");
  if (!(pts.back().t == Rational(1)))
    throw std::invalid_argument("Polygon: last breakpoint must have t = 1");
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i].t < pts[i + 1].t))
      throw std::invalid_argument("Polygon: breakpoints must be strictly increasing in t");
  // Concavity check with merging of collinear interior points.
  std::vector<PolygonPoint> out;
  out.push_back(pts[0]);
  double scale = 1.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    scale = std::max(scale, std::abs(segment_slope(pts[i], pts[i + 1])));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    while (out.size() >= 2) {
      double s_prev = segment_slope(out[out.size() - 2], out.back());
      double s_new = segment_slope(out.back(), pts[i]);
      if (s_new > s_prev + 1e-9 * scale)
        throw std::invalid_argument("Polygon: breakpoints are not concave");
      if (s_new >= s_prev - 1e-12 * scale)
        out.pop_back();  // collinear within tolerance: drop the middle point
      else
        break;
    }
    out.push_back(pts[i]);
  }
  Polygon p;
  p.pts_ = std::move(out);
  return p;
}

double Polygon::value_at(const Rational& t) const {
  if (t < Rational(0) || t > Rational(1))
    throw std::invalid_argument("Polygon::value_at: t outside [0,1]");
  auto it = std::upper_bound(pts_.begin(), pts_.end(), t,
                             [](const Rational& x, const PolygonPoint& p) { return x < p.t; });
  if (it == pts_.begin()) return pts_.front().value;  // t == 0
  if (it == pts_.end()) return pts_.back().value;     // t == 1
  const PolygonPoint& hi = *it;
  const PolygonPoint& lo = *(it - 1);
  double lam = (t - lo.t).to_double() / (hi.t - lo.t).to_double();
  return lo.value + lam * (hi.value - lo.value);
}

double Polygon::value_at(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("Polygon::value_at: t outside [0,1]");
  auto it = std::upper_bound(
      pts_.begin(), pts_.end(), t,
      [](double x, const PolygonPoint& p) { return x < p.t.to_double(); });
  if (it == pts_.begin()) return pts_.front().value;
  if (it == pts_.end()) return pts_.back().value;
  const PolygonPoint& hi = *it;
  const PolygonPoint& lo = *(it - 1);
  double t0 = lo.t.to_double(), t1 = hi.t.to_double();
  double lam = (t - t0) / (t1 - t0);
  return lo.value + lam * (hi.value - lo.value);
}

std::pair<Rational, double> Polygon::max_value() const {
  // Concavity puts the maximum at a breakpoint; ties resolve to smallest t.
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts_.size(); ++i)
    if (pts_[i].value > pts_[best].value) best = i;
  return {pts_[best].t, pts_[best].value};
}

Polygon Polygon::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("Polygon::scaled: scale must be positive");
  Polygon p(*this);
  for (PolygonPoint& pt : p.pts_) pt.value *= c;
  return p;
}

std::vector<double> Polygon::slopes() const {
  std::vector<double> s;
  s.reserve(pts_.size() - 1);
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
    s.push_back(segment_slope(pts_[i], pts_[i + 1]));
  return s;
}

double sup_distance(const Polygon& p, const Polygon& q) {
  std::vector<Rational> ts;
  ts.reserve(p.points().size() + q.points().size());
  for (const auto& pt : p.points()) ts.push_back(pt.t);
  for (const auto& pt : q.points()) ts.push_back(pt.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  double d = 0.0;
  for (const Rational& t : ts) d = std::max(d, std::abs(p.value_at(t) - q.value_at(t)));
  return d;
}

LegendreDual::LegendreDual(const Polygon& p) : pts_(p.points()) {
  std::vector<double> sl = p.slopes();
  knots_.reserve(sl.size());
  for (double a : sl) knots_.emplace_back(a, at(a));
  std::sort(knots_.begin(), knots_.end());
}

double LegendreDual::at(double a) const {
  double best = 0.0;  // t = 0 contributes P(0) - a*0 = 0
  for (const PolygonPoint& pt : pts_)
    best = std::max(best, pt.value - a * pt.t.to_double());
  return best;
}

ConcaveProfile ConcaveProfile::from_points(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw std::invalid_argument("ConcaveProfile: need at least two points");
  if (pts.front().first != 0.0 || pts.back().first != 1.0)
    throw std::invalid_argument("ConcaveProfile: domain must be [0,1]");
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i].first < pts[i + 1].first))
      throw std::invalid_argument("ConcaveProfile: abscissae must be strictly increasing");
  double scale = 1.0;
  for (const auto& [t, v] : pts) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
    double s1 = (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first);
    double s2 = (pts[i + 2].second - pts[i + 1].second) / (pts[i + 2].first - pts[i + 1].first);
    if (s2 > s1 + 1e-9 * scale)
      throw std::invalid_argument("ConcaveProfile: points are not concave");
  }
  ConcaveProfile c;
  c.pts_ = std::move(pts);
  return c;
}

ConcaveProfile ConcaveProfile::constant(double c) {
  return from_points({{0.0, c}, {1.0, c}});
}

ConcaveProfile ConcaveProfile::unchecked(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2) throw std::invalid_argument("ConcaveProfile: need at least two points");
  if (pts.front().first != 0.0 || pts.back().first != 1.0)
    throw std::invalid_argument("ConcaveProfile: domain must be [0,1]");
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i].first < pts[i + 1].first))
      throw std::invalid_argument("ConcaveProfile: abscissae must be strictly increasing");
  ConcaveProfile c;
  c.pts_ = std::move(pts);
  return c;
}

double ConcaveProfile::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("ConcaveProfile: argument outside [0,1]");
  auto it = std::upper_bound(pts_.begin(), pts_.end(), t,
                             [](double x, const auto& p) { return x < p.first; });
  if (it == pts_.begin()) return pts_.front().second;
  if (it == pts_.end()) return pts_.back().second;
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  return v0 + (t - t0) / (t1 - t0) * (v1 - v0);
}

double ConcaveProfile::max_value() const {
  double m = pts_.front().second;
  for (const auto& [t, v] : pts_) m = std::max(m, v);
  return m;
}

}  // namespace hnpoly
