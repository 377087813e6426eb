#include "hnpoly/graded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "hnpoly/enumeration.hpp"  // BudgetError

namespace hnpoly {

namespace {

constexpr double kWeightGrid = 1e-6;  // binning grid for weight combinations

long long checked_binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  __int128 acc = 1;
  for (long long i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;  // exact: product of i consecutive integers is divisible by i!
    if (acc > static_cast<__int128>(4e18))
      throw std::overflow_error("graded: binomial coefficient overflows 64 bits");
  }
  return static_cast<long long>(acc);
}

const MonomialModel* as_monomial(const GradedModel& m) { return std::get_if<MonomialModel>(&m); }
const ToricModel* as_toric(const GradedModel& m) { return std::get_if<ToricModel>(&m); }

void validate_monomial(const MonomialModel& m) {
  if (m.weights.empty()) throw std::invalid_argument("graded: monomial model needs q >= 1 weights");
  for (double w : m.weights)
    if (!std::isfinite(w)) throw std::invalid_argument("graded: weights must be finite");
  if (m.f.c < 0.0) throw std::invalid_argument("graded: penalty coefficient must be >= 0");
}

FilteredSpace monomial_piece(const MonomialModel& model, long long n, std::uint64_t dim_budget) {
  const int q = static_cast<int>(model.weights.size());
  long long dim = checked_binom(n + q - 1, q - 1);
  if (static_cast<std::uint64_t>(dim) > dim_budget)
    throw BudgetError("graded: dimension " + std::to_string(dim) + " exceeds budget");
  double est_ops = static_cast<double>(dim) * static_cast<double>(n ? n : 1) * q;
  if (est_ops > 2e8) throw BudgetError("graded: convolution budget exceeded");

  std::vector<long long> kw(q);
  for (int i = 0; i < q; ++i) kw[i] = std::llround(model.weights[i] / kWeightGrid);

  // Convolution over generators, keyed by (degree, binned weight sum).
  std::vector<std::map<long long, std::uint64_t>> dp(n + 1);
  dp[0][0] = 1;
  for (int i = 0; i < q; ++i) {
    std::vector<std::map<long long, std::uint64_t>> nd(n + 1);
    for (long long d = 0; d <= n; ++d)
      for (const auto& [key, cnt] : dp[d])
        for (long long a = 0; d + a <= n; ++a) nd[d + a][key + a * kw[i]] += cnt;
    dp = std::move(nd);
  }

  std::vector<FiltrationStep> steps;
  steps.reserve(dp[n].size());
  for (const auto& [key, cnt] : dp[n])
    steps.push_back(FiltrationStep{static_cast<double>(key) * kWeightGrid,
                                   static_cast<int>(cnt)});
  return FilteredSpace(static_cast<int>(dim), std::move(steps));
}

FilteredSpace toric_piece(const ToricModel& model, long long n) {
  std::map<double, int> drops;
  for (long long i = 0; i <= n; ++i)
    drops[n * model.phi(static_cast<double>(i) / n)] += 1;
  std::vector<FiltrationStep> steps;
  steps.reserve(drops.size());
  for (const auto& [jump, drop] : drops) steps.push_back(FiltrationStep{jump, drop});
  return FilteredSpace(static_cast<int>(n + 1), std::move(steps));
}

// Survival function of <a, w> under the uniform simplex measure, for
// pairwise distinct weights: sum over w_i > x of (w_i-x)^{q-1}/prod(w_i-w_j).
double simplex_survival(const std::vector<double>& w, double x) {
  const int q = static_cast<int>(w.size());
  double s = 0.0;
  for (int i = 0; i < q; ++i) {
    if (w[i] <= x) continue;
    double term = std::pow(w[i] - x, q - 1);
    for (int j = 0; j < q; ++j)
      if (j != i) term /= (w[i] - w[j]);
    s += term;
  }
  return std::min(std::max(s, 0.0), 1.0);
}

}  // namespace

double Penalty::operator()(long long n) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::log:
      return c * std::log(static_cast<double>(n) + 1.0);
    case Kind::sqrt:
      return c * std::sqrt(static_cast<double>(n));
  }
  return 0.0;
}

FilteredSpace graded_piece(const GradedModel& model, long long n, std::uint64_t dim_budget) {
  if (n < 1) throw std::invalid_argument("graded: degree must be >= 1");
  if (const MonomialModel* m = as_monomial(model)) {
    validate_monomial(*m);
    return monomial_piece(*m, n, dim_budget);
  }
  return toric_piece(*as_toric(model), n);
}

AtomicMeasure graded_measure(const GradedModel& model, long long n, std::uint64_t dim_budget) {
  return dilate(measure_of(graded_piece(model, n, dim_budget)), 1.0 / static_cast<double>(n));
}

AtomicMeasure limit_measure(const GradedModel& model, int resolution) {
  if (resolution < 1) throw std::invalid_argument("graded: resolution must be >= 1");
  const Rational unit(1, resolution);
  if (const MonomialModel* m = as_monomial(model)) {
    validate_monomial(*m);
    std::vector<double> w = m->weights;
    double lo = *std::min_element(w.begin(), w.end());
    double hi = *std::max_element(w.begin(), w.end());
    if (w.size() == 1 || lo == hi) return AtomicMeasure::dirac(hi);
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
      if (sorted[i] == sorted[i + 1])
        throw std::invalid_argument(
            "graded: limit_measure needs pairwise distinct (or all equal) weights");
    std::vector<Atom> atoms;
    for (int k = 0; k < resolution; ++k) {
      double target = (k + 0.5) / resolution;  // F(x) = 1 - survival
      double a = lo, b = hi;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (a + b);
        if (1.0 - simplex_survival(w, mid) < target)
          a = mid;
        else
          b = mid;
      }
      atoms.push_back(Atom{0.5 * (a + b), unit});
    }
    return AtomicMeasure::from_atoms(std::move(atoms));
  }
  const ToricModel& t = *as_toric(model);
  std::vector<Atom> atoms;
  for (int k = 0; k < resolution; ++k)
    atoms.push_back(Atom{t.phi((k + 0.5) / resolution), unit});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

std::vector<LambdaRow> lambda_sequences(const GradedModel& model, long long n_max,
                                        std::uint64_t dim_budget) {
  if (n_max < 1) throw std::invalid_argument("graded: n_max must be >= 1");
  std::vector<LambdaRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (long long n = 1; n <= n_max; ++n) {
    LambdaInvariants inv = lambda_invariants(graded_piece(model, n, dim_budget));
    rows.push_back(LambdaRow{n, inv.lambda_max / static_cast<double>(n),
                             inv.lambda_plus / static_cast<double>(n)});
  }
  return rows;
}

namespace {

Trend classify(double est, double err, double threshold) {
  if (est - err > threshold) return Trend::positive;
  if (est + err <= threshold + 1e-12) return Trend::nonpositive;
  return Trend::undetermined;
}

}  // namespace

BignessReport bigness_check(const GradedModel& model, long long n_max, double threshold,
                            std::uint64_t dim_budget) {
  if (n_max < 2) throw std::invalid_argument("graded: bigness check needs n_max >= 2");
  LambdaInvariants tail = lambda_invariants(graded_piece(model, n_max, dim_budget));
  LambdaInvariants half = lambda_invariants(graded_piece(model, n_max / 2, dim_budget));
  BignessReport rep;
  rep.lambda_max_estimate = tail.lambda_max / static_cast<double>(n_max);
  rep.lambda_plus_estimate = tail.lambda_plus / static_cast<double>(n_max);
  rep.lambda_max_error =
      std::abs(rep.lambda_max_estimate - half.lambda_max / static_cast<double>(n_max / 2));
  rep.lambda_plus_error =
      std::abs(rep.lambda_plus_estimate - half.lambda_plus / static_cast<double>(n_max / 2));
  rep.lambda_max_positive = classify(rep.lambda_max_estimate, rep.lambda_max_error, threshold);
  rep.lambda_plus_positive = classify(rep.lambda_plus_estimate, rep.lambda_plus_error, threshold);
  rep.consistent = rep.lambda_max_positive == Trend::undetermined ||
                   rep.lambda_plus_positive == Trend::undetermined ||
                   rep.lambda_max_positive == rep.lambda_plus_positive;
  return rep;
}

CountingBound counting_bound(int q, double alpha, double beta, long long n) {
  if (q < 2) throw std::invalid_argument("counting_bound: q must be >= 2");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("counting_bound: alpha and beta must be > 0");
  if (n < 1) throw std::invalid_argument("counting_bound: n must be >= 1");
  long long cut = static_cast<long long>(
      std::floor(beta * static_cast<double>(n) / (alpha + beta) + 1e-9));
  cut = std::min(cut, n);
  CountingBound cb;
  cb.u_n = checked_binom(n - cut + q - 1, q - 1);
  cb.v_n = checked_binom(n + q - 1, q - 1);
  cb.ratio = static_cast<double>(cb.u_n) / static_cast<double>(cb.v_n);
  cb.limit = std::pow(alpha / (alpha + beta), q - 1);
  return cb;
}

namespace {

constexpr double kAuditTolerance = 1e-9;

// Uniform random exponent vector of total degree n on q generators, via the
// stars-and-bars bijection with (q-1)-subsets of {1..n+q-1}.
std::vector<long long> random_composition(long long n, int q, std::mt19937_64& rng) {
  std::set<long long> cuts;
  std::uniform_int_distribution<long long> pick(1, n + q - 1);
  while (static_cast<int>(cuts.size()) < q - 1) cuts.insert(pick(rng));
  std::vector<long long> bars(cuts.begin(), cuts.end());
  std::vector<long long> a(q);
  long long prev = 0;
  for (int i = 0; i < q - 1; ++i) {
    a[i] = bars[i] - prev - 1;
    prev = bars[i];
  }
  a[q - 1] = n + q - 1 - prev;
  return a;
}

}  // namespace

AuditReport quasi_filtration_audit(const GradedModel& model, long long n_max,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (n_max < 1) throw std::invalid_argument("graded: n_max must be >= 1");
  AuditReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  auto record = [&](double margin) {
    ++rep.pairs_checked;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -kAuditTolerance) ++rep.violations;
  };

  if (const ToricModel* t = as_toric(model)) {
    // Pair count for factors of degree <= n_max (unordered in the degrees).
    double total = 0.0;
    for (long long n1 = 1; n1 <= n_max; ++n1)
      for (long long n2 = n1; n2 <= n_max; ++n2)
        total += static_cast<double>((n1 + 1) * (n2 + 1));
    rep.exhaustive = total <= static_cast<double>(samples);
    if (rep.exhaustive) {
      for (long long n1 = 1; n1 <= n_max; ++n1)
        for (long long n2 = n1; n2 <= n_max; ++n2)
          for (long long i = 0; i <= n1; ++i)
            for (long long j = 0; j <= n2; ++j) {
              double lhs = static_cast<double>(n1 + n2) *
                           t->phi(static_cast<double>(i + j) / static_cast<double>(n1 + n2));
              double rhs = n1 * t->phi(static_cast<double>(i) / n1) +
                           n2 * t->phi(static_cast<double>(j) / n2);
              record(lhs - rhs);
            }
    } else if (samples > 0) {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<long long> deg(1, n_max);
      for (std::uint64_t s = 0; s < samples; ++s) {
        long long n1 = deg(rng), n2 = deg(rng);
        long long i = std::uniform_int_distribution<long long>(0, n1)(rng);
        long long j = std::uniform_int_distribution<long long>(0, n2)(rng);
        double lhs = static_cast<double>(n1 + n2) *
                     t->phi(static_cast<double>(i + j) / static_cast<double>(n1 + n2));
        double rhs = n1 * t->phi(static_cast<double>(i) / n1) +
                     n2 * t->phi(static_cast<double>(j) / n2);
        record(lhs - rhs);
      }
    }
    if (rep.pairs_checked == 0) rep.worst_margin = 0.0;
    return rep;
  }

  const MonomialModel& m = *as_monomial(model);
  validate_monomial(m);
  const int q = static_cast<int>(m.weights.size());
  auto lambda_of = [&](const std::vector<long long>& a) {
    double s = 0.0;
    for (int i = 0; i < q; ++i) s += static_cast<double>(a[i]) * m.weights[i];
    return s;
  };
  // Monomial bases grow too fast for exhaustive products; sample.
  rep.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long long> deg(1, n_max);
  for (std::uint64_t s = 0; s < samples; ++s) {
    long long n1 = deg(rng), n2 = deg(rng);
    std::vector<long long> a = random_composition(n1, q, rng);
    std::vector<long long> b = random_composition(n2, q, rng);
    std::vector<long long> ab(q);
    for (int i = 0; i < q; ++i) ab[i] = a[i] + b[i];
    double margin = lambda_of(ab) - lambda_of(a) - lambda_of(b) + m.f(n1) + m.f(n2);
    record(margin);
  }
  if (rep.pairs_checked == 0) rep.worst_margin = 0.0;
  return rep;
}

}  // namespace hnpoly
