#include "hnpoly/diagonal_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hnpoly/enumeration.hpp"  // BudgetError

namespace hnpoly {

namespace {

constexpr double kLogPi = 1.1447298858494001741;

double safe_exp(double x) { return std::exp(std::min(x, 690.0)); }

// log theta(x) with x = e^{log_x}, theta(x) = sum_{k in Z} e^{-x k^2}.
// Direct series for x >= 1, Poisson-transformed for small x; only log_x is
// needed, so x far below the double range is handled exactly.
double log_theta(double log_x) {
  if (log_x < 0.0) {
    if (log_x < -30.0) return 0.5 * (kLogPi - log_x);
    double x = std::exp(log_x);
    double dual = M_PI * M_PI / x;
    double corr = 0.0;
    for (int k = 1; k <= 8; ++k) {
      double term = std::exp(-dual * k * k);
      corr += term;
      if (term < 1e-18) break;
    }
    return 0.5 * (kLogPi - log_x) + std::log1p(2.0 * corr);
  }
  if (log_x > 6.55) return 0.0;  // e^{-x} below double precision
  double x = std::exp(log_x);
  double sum = 0.0;
  for (int k = 1; k < 64; ++k) {
    double term = std::exp(-x * k * k);
    sum += term;
    if (term < 1e-18 * (1.0 + sum)) break;
  }
  return std::log1p(2.0 * sum);
}

// Exact point count of {v : sum g_i v_i^2 <= bound}; g sorted descending so
// the tightest coordinates prune first.
std::uint64_t exact_count(const std::vector<double>& g, double bound,
                          std::uint64_t node_budget) {
  std::uint64_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t level, double rem) -> std::uint64_t {
    if (level == g.size()) return 1;
    if (++nodes > node_budget)
      throw BudgetError("diagonal count: node budget exceeded");
    double kmaxf = std::sqrt(std::max(rem, 0.0) / g[level]);
    long long kmax = static_cast<long long>(std::floor(kmaxf + 1e-12));
    std::uint64_t total = 0;
    for (long long k = -kmax; k <= kmax; ++k) {
      double q = g[level] * static_cast<double>(k) * static_cast<double>(k);
      if (q > rem * (1.0 + 1e-12)) continue;
      total += self(self, level + 1, std::max(rem - q, 0.0));
    }
    return total;
  };
  return rec(rec, 0, bound);
}

// log of the ball-volume lower bound for the coordinates in `slopes` at
// squared radius beta: every lattice point's unit cube covers the shrunken
// ellipsoid, so N >= (sqrt(beta) - rho)_+^r * prod e^{s_i} * omega_r with
// rho = sqrt(sum g_i)/2.
double rounding_lower(const std::vector<double>& slopes, double beta) {
  const std::size_t r = slopes.size();
  if (r == 0) return 0.0;
  double sum_g = 0.0, sum_s = 0.0;
  for (double s : slopes) {
    sum_g += safe_exp(-2.0 * s);
    sum_s += s;
  }
  double shrink = std::sqrt(beta) - 0.5 * std::sqrt(sum_g);
  if (shrink <= 0.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(r) * std::log(shrink) + sum_s +
         0.5 * static_cast<double>(r) * kLogPi -
         std::lgamma(0.5 * static_cast<double>(r) + 1.0);
}

}  // namespace

LogCount h0_diagonal(const std::vector<double>& slopes,
                     const DiagonalCountOptions& opts) {
  for (double s : slopes)
    if (!std::isfinite(s))
      throw std::invalid_argument("h0_diagonal: slopes must be finite");
  if (slopes.empty()) return LogCount{0.0, 0.0, true};

  // Box estimate prod (2 e^{s_i} + 1) bounds the exact enumeration size.
  double log_est = 0.0;
  for (double s : slopes)
    log_est += (s > 30.0) ? std::log(2.0) + s : std::log1p(2.0 * std::exp(std::min(s, 30.0)));
  if (log_est <= std::log(static_cast<double>(opts.exact_budget))) {
    std::vector<double> g(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) g[i] = safe_exp(-2.0 * slopes[i]);
    std::sort(g.begin(), g.end(), std::greater<>());
    double ln = std::log(static_cast<double>(exact_count(g, 1.0, opts.node_budget)));
    return LogCount{ln, ln, true};
  }

  // ---- upper bound: min_t [ t + sum_i log theta(t g_i) ], t > 0.
  std::vector<double> log_g(slopes.size());
  for (std::size_t i = 0; i < slopes.size(); ++i) log_g[i] = -2.0 * slopes[i];
  auto phi = [&](double log_t) {
    double acc = std::exp(log_t);
    for (double lg : log_g) acc += log_theta(log_t + lg);
    return acc;
  };
  double a = -40.0, b = 40.0;
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = phi(x2);
    }
  }
  double hi = std::min(f1, f2);

  // Cell-packing refinement: the disjoint lattice cells around counted points
  // all sit inside the ellipsoid inflated by the half cell diagonal rho, so
  // N <= (1 + rho)^r * prod e^{s_i} * omega_r.  Far sharper than the theta
  // bound when every coordinate is narrow (rho << 1).
  {
    double sum_g = 0.0, sum_s = 0.0;
    for (double s : slopes) {
      sum_g += safe_exp(-2.0 * s);
      sum_s += s;
    }
    double rho = 0.5 * std::sqrt(sum_g);
    double nr = static_cast<double>(slopes.size());
    hi = std::min(hi, nr * std::log1p(rho) + sum_s + 0.5 * nr * kLogPi -
                          std::lgamma(0.5 * nr + 1.0));
  }

  // ---- lower bound: enumerate the wide coordinates S exactly at squared
  // radius beta_S, bound the rest by the rounding argument at 1 - beta_S.
  std::vector<double> sorted(slopes);
  std::sort(sorted.begin(), sorted.end());  // ascending slope = widest first
  const std::size_t r = sorted.size();
  std::vector<double> suffix_g(r + 1, 0.0);
  for (std::size_t i = r; i-- > 0;) suffix_g[i] = suffix_g[i + 1] + safe_exp(-2.0 * sorted[i]);
  std::vector<double> log_box(r + 1, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    log_box[i + 1] =
        log_box[i] + ((sorted[i] > 30.0) ? std::log(2.0) + sorted[i]
                                         : std::log1p(2.0 * std::exp(std::min(sorted[i], 30.0))));

  const double budget_log = std::log(static_cast<double>(opts.split_budget));
  std::size_t l_min = 0;
  while (l_min < r && suffix_g[l_min] > opts.rest_mass && log_box[l_min + 1] <= budget_log)
    ++l_min;

  double lo = 0.0;  // the origin always counts
  const double beta_pairs[4] = {0.0, 1.0 / 16.0, 0.25, 0.5};
  for (std::size_t l = l_min; l < std::min(l_min + 4, r + 1); ++l) {
    if (log_box[l] > budget_log) break;
    std::vector<double> head(sorted.begin(), sorted.begin() + l);
    std::vector<double> tail(sorted.begin() + l, sorted.end());
    for (double beta_s : beta_pairs) {
      double log_ns = 0.0;
      if (beta_s > 0.0 && !head.empty()) {
        std::vector<double> g(head.size());
        for (std::size_t i = 0; i < head.size(); ++i) g[i] = safe_exp(-2.0 * head[i]);
        std::sort(g.begin(), g.end(), std::greater<>());
        try {
          log_ns = std::log(static_cast<double>(exact_count(g, beta_s, opts.node_budget)));
        } catch (const BudgetError&) {
          continue;
        }
      }
      double cand = log_ns + rounding_lower(tail, 1.0 - beta_s);
      if (std::isfinite(cand)) lo = std::max(lo, cand);
    }
  }

  lo = std::min(lo, hi);
  return LogCount{lo, hi, false};
}

}  // namespace hnpoly
