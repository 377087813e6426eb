#include "hnpoly/enumeration.hpp"

#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hnpoly {

namespace {

using Rat = boost::multiprecision::cpp_rational;

// Exact evaluation of v^T G v over the binary rational values of G.  Only
// used for the rare candidates that land inside the floating boundary slack.
bool exact_at_most(const Eigen::MatrixXd& gram, const std::vector<long long>& v,
                   double bound) {
  const int r = static_cast<int>(v.size());
  Rat q = 0;
  for (int i = 0; i < r; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < r; ++j) {
      if (v[j] == 0) continue;
      q += Rat(gram(i, j)) * v[i] * v[j];
    }
  }
  return q <= Rat(bound);
}

// Upper-triangular Cholesky factor R with G = R^T R; throws on non-SPD input.
Eigen::MatrixXd cholesky_upper(const Eigen::MatrixXd& gram) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("enumeration: gram matrix is not positive definite");
  return llt.matrixL().transpose();
}

struct Frame {
  const Eigen::MatrixXd& gram;
  const Eigen::MatrixXd& R;
  double bound;
  double slack;  // absolute tolerance around the threshold
  std::uint64_t max_nodes;
};

// Depth-first Fincke-Pohst walk below coordinate `level` with the partial
// profile in `v` and `used` the exact norm contribution of coordinates
// > level.  `t[k]` caches sum_{j>k} R(k,j) v_j for the current prefix.
struct Walker {
  const Frame& f;
  std::vector<long long> v;
  std::vector<double> t;
  CountResult res;

  explicit Walker(const Frame& f_, int rank) : f(f_), v(rank, 0), t(rank, 0.0) {}

  void bump_nodes() {
    if (++res.nodes > f.max_nodes)
      throw BudgetError("enumeration: node budget exceeded (" +
                        std::to_string(f.max_nodes) + " nodes)");
  }

  void tally_leaf(double used) {
    bool zero = true;
    for (long long c : v)
      if (c != 0) {
        zero = false;
        break;
      }
    if (used > f.bound + f.slack) return;
    if (used >= f.bound - f.slack) {
      ++res.boundary;
      if (!exact_at_most(f.gram, v, f.bound)) return;
    }
    ++res.count;
    if (!zero) res.min_nonzero = std::min(res.min_nonzero, used);
  }

  // Prepare t[k] given that coordinates > k of `v` are already set.
  void refresh(int k) {
    double s = 0.0;
    for (int j = k + 1; j < static_cast<int>(v.size()); ++j) s += f.R(k, j) * double(v[j]);
    t[k] = s;
  }

  void descend(int level, double used) {
    bump_nodes();
    if (level < 0) {
      tally_leaf(used);
      return;
    }
    refresh(level);
    const double rkk = f.R(level, level);
    const double rem = f.bound + f.slack - used;
    if (rem < 0.0) return;
    const double half_width = std::sqrt(rem) / rkk;
    const double center = -t[level] / rkk;
    const long long lo = static_cast<long long>(std::ceil(center - half_width - 1e-12));
    const long long hi = static_cast<long long>(std::floor(center + half_width + 1e-12));
    for (long long c = lo; c <= hi; ++c) {
      v[level] = c;
      const double y = rkk * double(c) + t[level];
      const double next = used + y * y;
      if (next > f.bound + f.slack) continue;
      descend(level - 1, next);
    }
    v[level] = 0;
  }
};

double boundary_slack(double bound) { return 1e-9 * std::max(1.0, bound); }

void validate(const Eigen::MatrixXd& gram, double bound, const EnumBudget& budget) {
  if (gram.rows() != gram.cols() || gram.rows() == 0)
    throw std::invalid_argument("enumeration: gram matrix must be square and nonempty");
  if (!(bound >= 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("enumeration: bound must be finite and nonnegative");
  if (gram.rows() > budget.max_rank)
    throw BudgetError("enumeration: rank " + std::to_string(gram.rows()) +
                      " exceeds the enumeration limit " + std::to_string(budget.max_rank));
}

}  // namespace

CountResult count_short_vectors_serial(const Eigen::MatrixXd& gram, double bound,
                                       const EnumBudget& budget) {
  validate(gram, bound, budget);
  const Eigen::MatrixXd R = cholesky_upper(gram);
  Frame f{gram, R, bound, boundary_slack(bound), budget.max_nodes};
  Walker w(f, static_cast<int>(gram.rows()));
  w.descend(static_cast<int>(gram.rows()) - 1, 0.0);
  return w.res;
}

CountResult count_short_vectors_parallel(const Eigen::MatrixXd& gram, double bound,
                                         const EnumBudget& budget) {
  validate(gram, bound, budget);
  const int rank = static_cast<int>(gram.rows());
  const Eigen::MatrixXd R = cholesky_upper(gram);
  const double slack = boundary_slack(bound);
  const int top = rank - 1;
  const double rkk = R(top, top);
  const double width = std::sqrt(bound + slack) / rkk;
  const long long lo = static_cast<long long>(std::ceil(-width - 1e-12));
  const long long hi = static_cast<long long>(std::floor(width + 1e-12));
  const long long n_branches = hi - lo + 1;

  // Each top-level value of v[rank-1] roots an independent subtree.  Nodes
  // are tracked per thread and folded into the shared budget afterwards;
  // the budget may therefore overshoot by at most one subtree per thread,
  // never undershoot.
  std::atomic<std::uint64_t> shared_nodes{0};
  std::atomic<bool> tripped{false};
  CountResult total;
  total.nodes = 1;  // the conceptual root node

#pragma omp parallel
  {
    Frame f{gram, R, bound, slack, budget.max_nodes};
    Walker w(f, rank);
    CountResult local;

#pragma omp for schedule(dynamic) nowait
    for (long long b = 0; b < n_branches; ++b) {
      if (tripped.load(std::memory_order_relaxed)) continue;
      const long long c = lo + b;
      w.res = CountResult{};
      w.v.assign(rank, 0);
      w.v[top] = c;
      const double y = rkk * double(c);
      const double used = y * y;
      if (used > bound + slack) continue;
      try {
        if (rank == 1) {
          w.res.nodes = 1;
          w.tally_leaf(used);
        } else {
          w.descend(top - 1, used);
        }
      } catch (const BudgetError&) {
        tripped.store(true, std::memory_order_relaxed);
        continue;
      }
      local.count += w.res.count;
      local.boundary += w.res.boundary;
      local.nodes += w.res.nodes;
      local.min_nonzero = std::min(local.min_nonzero, w.res.min_nonzero);
      if (shared_nodes.fetch_add(w.res.nodes, std::memory_order_relaxed) + w.res.nodes >
          budget.max_nodes)
        tripped.store(true, std::memory_order_relaxed);
    }

#pragma omp critical(hnpoly_count_merge)
    {
      total.count += local.count;
      total.boundary += local.boundary;
      total.nodes += local.nodes;
      total.min_nonzero = std::min(total.min_nonzero, local.min_nonzero);
    }
  }

  if (tripped.load())
    throw BudgetError("enumeration: node budget exceeded (" +
                      std::to_string(budget.max_nodes) + " nodes)");
  return total;
}

CountResult count_short_vectors(const Eigen::MatrixXd& gram, double bound,
                                const EnumBudget& budget) {
#ifdef _OPENMP
  return count_short_vectors_parallel(gram, bound, budget);
#else
  return count_short_vectors_serial(gram, bound, budget);
#endif
}

std::vector<std::vector<long long>> enumerate_short_vectors(const Eigen::MatrixXd& gram,
                                                            double bound,
                                                            const EnumBudget& budget) {
  validate(gram, bound, budget);
  const int rank = static_cast<int>(gram.rows());
  const Eigen::MatrixXd R = cholesky_upper(gram);
  const double slack = boundary_slack(bound);

  std::vector<std::vector<long long>> out;
  std::vector<long long> v(rank, 0);
  std::uint64_t nodes = 0;

  // Same walk as the counting kernel, restricted to the canonical halves:
  // while every coordinate above the current level is zero the coordinate
  // ranges start at zero, which keeps exactly one of {v,-v}.
  auto descend = [&](auto&& self, int level, double used, bool all_zero_above) -> void {
    if (++nodes > budget.max_nodes)
      throw BudgetError("enumeration: node budget exceeded (" +
                        std::to_string(budget.max_nodes) + " nodes)");
    if (level < 0) {
      if (all_zero_above) return;  // skip the zero vector
      if (used >= bound - slack && !exact_at_most(gram, v, bound)) return;
      out.push_back(v);
      return;
    }
    double t = 0.0;
    for (int j = level + 1; j < rank; ++j) t += R(level, j) * double(v[j]);
    const double rkk = R(level, level);
    const double rem = bound + slack - used;
    if (rem < 0.0) return;
    const double half_width = std::sqrt(rem) / rkk;
    const double center = -t / rkk;
    long long lo = static_cast<long long>(std::ceil(center - half_width - 1e-12));
    const long long hi = static_cast<long long>(std::floor(center + half_width + 1e-12));
    if (all_zero_above && lo < 0) lo = 0;
    for (long long c = lo; c <= hi; ++c) {
      v[level] = c;
      const double y = rkk * double(c) + t;
      const double next = used + y * y;
      if (next > bound + slack) continue;
      self(self, level - 1, next, all_zero_above && c == 0);
    }
    v[level] = 0;
  };
  descend(descend, rank - 1, 0.0, true);
  return out;
}

}  // namespace hnpoly
