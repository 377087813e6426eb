#pragma once

#include <random>
#include <utility>
#include <vector>

#include "hnpoly/measure.hpp"

namespace hnpoly::testutil {

/// Random probability measure with 1..max_atoms atoms on the grid Z/16 in
/// [-3, 3] and exact rational masses w_i / W.
inline AtomicMeasure random_probability(std::mt19937_64& rng, int max_atoms = 6) {
  std::uniform_int_distribution<int> natoms(1, max_atoms);
  std::uniform_int_distribution<int> pos(-48, 48);
  std::uniform_int_distribution<long long> weight(1, 7);
  const int k = natoms(rng);
  std::vector<long long> w(k);
  long long total = 0;
  for (auto& x : w) {
    x = weight(rng);
    total += x;
  }
  std::vector<Atom> atoms;
  atoms.reserve(k);
  for (int i = 0; i < k; ++i)
    atoms.push_back({pos(rng) / 16.0, Rational(w[i], total)});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

/// A measure dominated by `nu`: every atom is moved left by a nonnegative
/// grid amount, which can only shrink right tails.
inline AtomicMeasure dominated_partner(const AtomicMeasure& nu, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> shift(0, 10);
  std::vector<Atom> atoms;
  atoms.reserve(nu.size());
  for (const Atom& a : nu.atoms())
    atoms.push_back({a.position - shift(rng) / 8.0, a.mass});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

}  // namespace hnpoly::testutil
