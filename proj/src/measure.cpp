#include "hnpoly/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hnpoly {

AtomicMeasure AtomicMeasure::dirac(double position) {
  return from_atoms({Atom{position, Rational(1)}});
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.position))
      throw std::invalid_argument("AtomicMeasure: non-finite atom position");
    if (a.mass.is_negative())
      throw std::invalid_argument("AtomicMeasure: negative atom mass");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  AtomicMeasure nu;
  for (const Atom& a : atoms) {
    if (a.mass.is_zero()) continue;
    if (!nu.atoms_.empty() && nu.atoms_.back().position == a.position)
      nu.atoms_.back().mass += a.mass;
    else
      nu.atoms_.push_back(a);
    nu.total_ += a.mass;
  }
  if (nu.total_ > Rational(1))
    throw std::invalid_argument("AtomicMeasure: total mass exceeds 1");
  return nu;
}

double AtomicMeasure::min_position() const {
  if (atoms_.empty()) throw std::invalid_argument("AtomicMeasure: empty measure has no support");
  return atoms_.front().position;
}

double AtomicMeasure::max_position() const {
  if (atoms_.empty()) throw std::invalid_argument("AtomicMeasure: empty measure has no support");
  return atoms_.back().position;
}

double AtomicMeasure::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.mass.to_double() * a.position;
  return m;
}

Rational AtomicMeasure::tail_mass(double x) const {
  Rational t;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->position > x)
      t += it->mass;
    else
      break;
  }
  return t;
}

AtomicMeasure translate(const AtomicMeasure& nu, double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("translate: non-finite shift");
  std::vector<Atom> atoms = nu.atoms();
  for (Atom& at : atoms) at.position += a;
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure dilate(const AtomicMeasure& nu, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("dilate: scale must be positive and finite");
  std::vector<Atom> atoms = nu.atoms();
  for (Atom& at : atoms) at.position *= eps;
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure truncate(const AtomicMeasure& nu, double alpha) {
  if (!nu.is_probability())
    throw std::invalid_argument("truncate: probability measure required");
  if (!std::isfinite(alpha)) throw std::invalid_argument("truncate: non-finite level");
  Rational below;
  std::vector<Atom> atoms;
  atoms.reserve(nu.size() + 1);
  for (const Atom& a : nu.atoms()) {
    if (a.position < alpha)
      below += a.mass;
    else
      atoms.push_back(a);
  }
  if (!below.is_zero()) atoms.push_back(Atom{alpha, below});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

AtomicMeasure mix(std::span<const std::pair<Rational, AtomicMeasure>> parts) {
  std::vector<Atom> atoms;
  for (const auto& [w, nu] : parts) {
    if (w.is_negative()) throw std::invalid_argument("mix: negative weight");
    if (w.is_zero()) continue;
    for (const Atom& a : nu.atoms()) atoms.push_back(Atom{a.position, w * a.mass});
  }
  return AtomicMeasure::from_atoms(std::move(atoms));  // re-validates mass <= 1
}

namespace {

std::vector<double> union_positions(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::vector<double> xs;
  xs.reserve(a.size() + b.size());
  for (const Atom& at : a.atoms()) xs.push_back(at.position);
  for (const Atom& at : b.atoms()) xs.push_back(at.position);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

bool dominates(const AtomicMeasure& nu1, const AtomicMeasure& nu2) {
  if (!nu1.is_probability() || !nu2.is_probability())
    throw std::invalid_argument("dominates: probability measures required");
  std::vector<double> xs = union_positions(nu1, nu2);
  std::vector<double> probes;
  probes.reserve(2 * xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    probes.push_back(xs[i]);
    if (i + 1 < xs.size()) probes.push_back(xs[i] + (xs[i + 1] - xs[i]) / 2.0);
  }
  for (double x : probes)
    if (nu1.tail_mass(x) < nu2.tail_mass(x)) return false;
  return true;
}

double w1_distance(const AtomicMeasure& nu1, const AtomicMeasure& nu2) {
  if (!nu1.is_probability() || !nu2.is_probability())
    throw std::invalid_argument("w1_distance: probability measures required");
  std::vector<double> xs = union_positions(nu1, nu2);
  // Between consecutive support points both distribution functions are
  // constant, so the L1 difference is a finite sum of gap * |F1 - F2|.
  double dist = 0.0;
  std::size_t i1 = 0, i2 = 0;
  Rational f1, f2;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    while (i1 < nu1.size() && nu1.atoms()[i1].position <= xs[k]) f1 += nu1.atoms()[i1++].mass;
    while (i2 < nu2.size() && nu2.atoms()[i2].position <= xs[k]) f2 += nu2.atoms()[i2++].mass;
    dist += std::abs((f1 - f2).to_double()) * (xs[k + 1] - xs[k]);
  }
  return dist;
}

double positive_part_integral(const AtomicMeasure& nu, double a) {
  if (!nu.is_probability())
    throw std::invalid_argument("positive_part_integral: probability measure required");
  double s = 0.0;
  for (const Atom& at : nu.atoms())
    if (at.position > a) s += at.mass.to_double() * (at.position - a);
  return s;
}

}  // namespace hnpoly
