#include "hnpoly/filtered.hpp"

#include <cmath>
#include <stdexcept>

namespace hnpoly {

FilteredSpace::FilteredSpace(int dim, std::vector<FiltrationStep> steps)
    : dim_(dim), steps_(std::move(steps)) {
  if (dim_ < 0) throw std::invalid_argument("FilteredSpace: negative dimension");
  if (dim_ == 0) {
    if (!steps_.empty())
      throw std::invalid_argument("FilteredSpace: zero space cannot have jumps");
    return;
  }
  long long total = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!std::isfinite(steps_[i].jump))
      throw std::invalid_argument("FilteredSpace: non-finite jump");
    if (steps_[i].drop <= 0)
      throw std::invalid_argument("FilteredSpace: jumps must have positive drop");
    if (i > 0 && !(steps_[i - 1].jump < steps_[i].jump))
      throw std::invalid_argument("FilteredSpace: jumps must be strictly increasing");
    total += steps_[i].drop;
  }
  if (total != dim_)
    throw std::invalid_argument("FilteredSpace: drops must sum to the dimension");
}

AtomicMeasure measure_of(const FilteredSpace& v) {
  if (v.dim() == 0) return AtomicMeasure();
  std::vector<Atom> atoms;
  atoms.reserve(v.steps().size());
  for (const FiltrationStep& s : v.steps())
    atoms.push_back(Atom{s.jump, Rational(s.drop, v.dim())});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

LambdaInvariants lambda_invariants(const FilteredSpace& v) {
  if (v.dim() == 0)
    throw std::invalid_argument("lambda_invariants: zero space has no invariants");
  LambdaInvariants inv;
  inv.lambda_min = v.steps().front().jump;
  inv.lambda_max = v.steps().back().jump;
  inv.lambda_plus = Polygon::from_measure(measure_of(v)).max_value().second;
  return inv;
}

bool exact_sequence_split(const FilteredSpace& v, const FilteredSpace& sub,
                          const FilteredSpace& quot) {
  if (sub.dim() + quot.dim() != v.dim())
    throw std::invalid_argument("exact_sequence_split: dimensions do not add up");
  if (v.dim() == 0) return true;
  std::vector<std::pair<Rational, AtomicMeasure>> parts;
  if (sub.dim() > 0) parts.emplace_back(Rational(sub.dim(), v.dim()), measure_of(sub));
  if (quot.dim() > 0) parts.emplace_back(Rational(quot.dim(), v.dim()), measure_of(quot));
  return measure_of(v) == mix(parts);
}

}  // namespace hnpoly
